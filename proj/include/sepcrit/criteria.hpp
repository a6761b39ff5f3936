#pragma once

// Separability tests built from positive maps L = L1 - L2.
//
// The scalar (alpha, beta) inequalities compare
//   Tr rho^alpha ([I (x) L1](rho))^beta   against   Tr rho^alpha ([I (x) L2](rho))^beta
// and hold for every separable rho under the per-kind conditions below:
//   I    alpha >= 0, beta > 1, [I (x) L2](rho) commutes with rho     lhs >= rhs
//   II   alpha >= 0, 0 <= beta <= 1                                  lhs >= rhs
//   III  alpha >= 0, -1 <= beta < 0                                  lhs <= rhs
//   IV   alpha, beta >= 0; rhs replaced by sum_i lambda_i^alpha s_i^beta with
//        the eigenvalues of rho descending and the singular values of
//        [I (x) L2](rho) ascending                                     lhs >= rhs
// A violation certifies entanglement.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "sepcrit/linalg.hpp"
#include "sepcrit/maps.hpp"
#include "sepcrit/states.hpp"

namespace sepcrit {

enum class InequalityKind { I, II, III, IV };

enum class CriterionKind { I, II, III, IV, Entropic, Structural, Limit };

constexpr std::string_view to_string(InequalityKind k) noexcept {
  switch (k) {
    case InequalityKind::I: return "I";
    case InequalityKind::II: return "II";
    case InequalityKind::III: return "III";
    case InequalityKind::IV: return "IV";
  }
  return "?";
}

constexpr std::string_view to_string(CriterionKind k) noexcept {
  switch (k) {
    case CriterionKind::I: return "I";
    case CriterionKind::II: return "II";
    case CriterionKind::III: return "III";
    case CriterionKind::IV: return "IV";
    case CriterionKind::Entropic: return "ENTROPIC";
    case CriterionKind::Structural: return "STRUCTURAL";
    case CriterionKind::Limit: return "LIMIT";
  }
  return "?";
}

inline std::optional<InequalityKind> parse_inequality_kind(std::string_view s) {
  if (s == "I" || s == "i" || s == "1") return InequalityKind::I;
  if (s == "II" || s == "ii" || s == "2") return InequalityKind::II;
  if (s == "III" || s == "iii" || s == "3") return InequalityKind::III;
  if (s == "IV" || s == "iv" || s == "4") return InequalityKind::IV;
  return std::nullopt;
}

struct CriterionResult {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Oriented so that margin < 0 means the inequality fails.
  double margin = 0.0;
  bool violated = false;
  CriterionKind kind = CriterionKind::II;
  /// ||[X2, rho]||_F, reported for kind I.
  std::optional<double> commutator_norm;
  double tol = kDefaultTol;
};

namespace detail {

inline CriterionResult finish(double lhs, double rhs, double margin, CriterionKind kind, double tol,
                              std::optional<double> commutator = std::nullopt) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return {lhs, rhs, margin, margin < -tol * scale, kind, commutator, tol};
}

inline bool is_positive_integer(double x) { return x >= 1.0 && x <= 64.0 && x == std::floor(x); }

/// A^t for PSD A; positive integer exponents use repeated multiplication.
inline ComplexMatrix operator_power(const ComplexMatrix& a, double t, double tol) {
  if (is_positive_integer(t)) return integer_power(a, static_cast<unsigned>(t));
  return psd_power(a, t, tol);
}

inline void require_nonsingular(const ComplexMatrix& x, double tol, const char* name) {
  const double lowest = min_eigenvalue(x, tol);
  if (lowest <= tol * x.frobenius_norm()) {
    throw Error(ErrorCode::SingularOperand,
                std::string(name) + " is singular (min eigenvalue " + std::to_string(lowest) + ")");
  }
}

inline void require_range(bool ok, InequalityKind kind, double alpha, double beta) {
  if (!ok) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "kind " + std::string(to_string(kind)) + " with alpha=" + std::to_string(alpha) +
                    " beta=" + std::to_string(beta));
  }
}

}  // namespace detail

/// Evaluates one (alpha, beta) inequality. Kind I with beta == 1 is evaluated
/// as kind II, which covers it without the commutativity hypothesis.
inline CriterionResult alpha_beta_inequality(const DensityMatrix& rho, const CPDecomposition& dec,
                                             double alpha, double beta, InequalityKind kind,
                                             double tol = kDefaultTol) {
  if (kind == InequalityKind::I && beta == 1.0) kind = InequalityKind::II;
  switch (kind) {
    case InequalityKind::I: detail::require_range(alpha >= 0.0 && beta > 1.0, kind, alpha, beta); break;
    case InequalityKind::II:
      detail::require_range(alpha >= 0.0 && beta >= 0.0 && beta <= 1.0, kind, alpha, beta);
      break;
    case InequalityKind::III:
      detail::require_range(alpha >= 0.0 && beta >= -1.0 && beta < 0.0, kind, alpha, beta);
      break;
    case InequalityKind::IV: detail::require_range(alpha >= 0.0 && beta >= 0.0, kind, alpha, beta); break;
  }
  if (dec.d() != rho.dB()) {
    throw Error(ErrorCode::DimensionMismatch, "map acts on dim " + std::to_string(dec.d()) +
                                                  ", subsystem B has dim " +
                                                  std::to_string(rho.dB()));
  }

  const ComplexMatrix& state = rho.matrix();
  const ComplexMatrix x1 = extend_apply(dec.lambda1, state, rho.dA());
  const ComplexMatrix x2 = dec.lambda2_is_identity ? state : extend_apply(dec.lambda2, state, rho.dA());

  std::optional<double> commutator;
  if (kind == InequalityKind::I) {
    if (dec.lambda2_is_identity) {
      commutator = 0.0;
    } else {
      commutator = commutator_norm(x2, state);
      if (*commutator > tol * state.frobenius_norm()) {
        throw Error(ErrorCode::CommutativityViolated,
                    "||[X2, rho]||_F = " + std::to_string(*commutator));
      }
    }
  }
  if (kind == InequalityKind::III) {
    detail::require_nonsingular(x1, tol, "[I (x) L1](rho)");
    detail::require_nonsingular(x2, tol, "[I (x) L2](rho)");
  }

  const ComplexMatrix rho_alpha = detail::operator_power(state, alpha, tol);
  const double lhs = trace_product(rho_alpha, detail::operator_power(x1, beta, tol)).real();

  const auto criterion_kind = static_cast<CriterionKind>(static_cast<int>(kind));
  switch (kind) {
    case InequalityKind::I: {
      const double rhs =
          dec.lambda2_is_identity
              ? detail::operator_power(state, alpha + beta, tol).trace().real()
              : trace_product(rho_alpha, detail::operator_power(x2, beta, tol)).real();
      return detail::finish(lhs, rhs, lhs - rhs, criterion_kind, tol, commutator);
    }
    case InequalityKind::II: {
      const double rhs = trace_product(rho_alpha, detail::operator_power(x2, beta, tol)).real();
      return detail::finish(lhs, rhs, lhs - rhs, criterion_kind, tol);
    }
    case InequalityKind::III: {
      const double rhs = trace_product(rho_alpha, detail::operator_power(x2, beta, tol)).real();
      return detail::finish(lhs, rhs, rhs - lhs, criterion_kind, tol);
    }
    case InequalityKind::IV: {
      auto eigenvalues = hermitian_eig(state, tol).eigenvalues;
      std::reverse(eigenvalues.begin(), eigenvalues.end());
      const auto singular = sorted_singular_values(x2);
      const double rho_band = tol * state.frobenius_norm();
      const double x2_band = tol * x2.frobenius_norm();
      double rhs = 0.0;
      for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        rhs += clamped_power(eigenvalues[i], alpha, rho_band) *
               clamped_power(singular[i], beta, x2_band);
      }
      return detail::finish(lhs, rhs, lhs - rhs, criterion_kind, tol);
    }
  }
  throw Error(ErrorCode::ParameterOutOfRange, "unknown inequality kind");
}

/// Renyi-entropy inequality S_alpha(rho_X) <= S_alpha(rho), in the form
/// Tr rho_X^alpha >= Tr rho^alpha (alpha > 1) or <= (alpha < 1).
inline CriterionResult entropic_inequality(const DensityMatrix& rho, double alpha,
                                           Subsystem subsystem = Subsystem::A,
                                           double tol = kDefaultTol) {
  if (!(alpha >= 0.0) || alpha == 1.0) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "entropic inequality needs alpha >= 0, alpha != 1; got " + std::to_string(alpha));
  }
  const double lhs = detail::operator_power(rho.marginal(subsystem), alpha, tol).trace().real();
  const double rhs = detail::operator_power(rho.matrix(), alpha, tol).trace().real();
  const double margin = alpha > 1.0 ? lhs - rhs : rhs - lhs;
  return detail::finish(lhs, rhs, margin, CriterionKind::Entropic, tol);
}

/// Minimum eigenvalue of [I (x) L](rho); negative means L detects rho.
inline double structural_criterion(const DensityMatrix& rho, const MatrixMap& m) {
  if (m.d() != rho.dB()) {
    throw Error(ErrorCode::DimensionMismatch, "map acts on dim " + std::to_string(m.d()) +
                                                  ", subsystem B has dim " +
                                                  std::to_string(rho.dB()));
  }
  return min_eigenvalue(extend_apply(m, rho.matrix(), rho.dA()));
}

/// Large-alpha limit of the kind II inequality at beta = 1: Tr([I (x) L](rho) P)
/// for the projector P onto the top eigenspace of rho whose value is
/// non-negligible. Eigenvalues within tol * ||rho||_F of the top of their
/// group share a projector. A negative value is a detection.
inline double limit_witness(const DensityMatrix& rho, const MatrixMap& m, double tol = kDefaultTol) {
  if (m.d() != rho.dB()) {
    throw Error(ErrorCode::DimensionMismatch, "map acts on dim " + std::to_string(m.d()) +
                                                  ", subsystem B has dim " +
                                                  std::to_string(rho.dB()));
  }
  const ComplexMatrix x = extend_apply(m, rho.matrix(), rho.dA());
  const auto eig = hermitian_eig(rho.matrix(), tol);
  const double width = tol * rho.matrix().frobenius_norm();
  const std::size_t n = eig.eigenvalues.size();

  std::size_t top = n;  // one past the current group's largest index
  while (top > 0) {
    const double group_max = eig.eigenvalues[top - 1];
    std::size_t bottom = top - 1;
    while (bottom > 0 && group_max - eig.eigenvalues[bottom - 1] <= width) --bottom;
    double value = 0.0;
    for (std::size_t k = bottom; k < top; ++k) {
      // <v|X|v>
      Complex expectation = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Complex xv = 0.0;
        for (std::size_t j = 0; j < n; ++j) xv += x(i, j) * eig.eigenvectors(j, k);
        expectation += std::conj(eig.eigenvectors(i, k)) * xv;
      }
      value += expectation.real();
    }
    if (std::abs(value) > tol) return value;
    top = bottom;
  }
  throw Error(ErrorCode::AllProjectionsVanish, "Tr(XP) vanishes on every eigenspace of rho");
}

/// Minimum eigenvalue of the partial transpose on B.
inline double ppt_check(const DensityMatrix& rho) {
  return min_eigenvalue(partial_transpose(rho.matrix(), rho.dA(), rho.dB()));
}

}  // namespace sepcrit
