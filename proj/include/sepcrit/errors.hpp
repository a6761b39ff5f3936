#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepcrit {

enum class ErrorCode {
  DimensionMismatch,
  NonHermitian,
  NotPSD,
  SingularNegativePower,
  InvalidParameters,
  NotAntisymmetric,
  InvalidState,
  CommutativityViolated,
  SingularOperand,
  ParameterOutOfRange,
  AllProjectionsVanish,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SingularNegativePower: return "SingularNegativePower";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::CommutativityViolated: return "CommutativityViolated";
    case ErrorCode::SingularOperand: return "SingularOperand";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::AllProjectionsVanish: return "AllProjectionsVanish";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sepcrit
