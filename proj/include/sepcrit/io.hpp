#pragma once

// Plain-text matrix format shared by `check` (input) and `choi` (output):
//
//   # comment lines start with '#'
//   dA dB
//   re,im re,im ...     <- dA*dB lines of dA*dB entries each
//
// Entries are written with 17 significant digits so doubles round-trip.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sepcrit/linalg.hpp"

namespace sepcrit {

struct MatrixFile {
  std::size_t dA = 0;
  std::size_t dB = 0;
  ComplexMatrix matrix;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(start, end - start));
    pos = end;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline bool parse_size(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline std::string format_double(double x, int digits) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace detail

inline MatrixFile read_matrix(std::istream& in) {
  MatrixFile out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  std::size_t row = 0;
  bool have_header = false;
  std::vector<Complex> entries;

  while (std::getline(in, line)) {
    ++line_no;
    const auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto tokens = detail::split_whitespace(content);
    if (!have_header) {
      if (tokens.size() != 2 || !detail::parse_size(tokens[0], out.dA) ||
          !detail::parse_size(tokens[1], out.dB) || out.dA == 0 || out.dB == 0) {
        detail::parse_fail(line_no, "expected header 'dA dB' with positive integers");
      }
      have_header = true;
      n = out.dA * out.dB;
      entries.reserve(n * n);
      continue;
    }
    if (row == n) detail::parse_fail(line_no, "unexpected data after " + std::to_string(n) + " rows");
    if (tokens.size() != n) {
      detail::parse_fail(line_no, "expected " + std::to_string(n) + " entries, found " +
                                      std::to_string(tokens.size()));
    }
    for (const auto token : tokens) {
      const auto comma = token.find(',');
      double re = 0.0, im = 0.0;
      if (comma == std::string_view::npos || !detail::parse_double(token.substr(0, comma), re) ||
          !detail::parse_double(token.substr(comma + 1), im)) {
        detail::parse_fail(line_no, "malformed entry '" + std::string(token) + "' (want re,im)");
      }
      entries.emplace_back(re, im);
    }
    ++row;
  }
  if (!have_header) detail::parse_fail(line_no, "missing header 'dA dB'");
  if (row != n) {
    detail::parse_fail(line_no, "expected " + std::to_string(n) + " rows, found " + std::to_string(row));
  }
  out.matrix = ComplexMatrix(n, std::move(entries));
  return out;
}

inline MatrixFile read_matrix_string(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const ComplexMatrix& m, std::size_t dA, std::size_t dB) {
  if (m.dim() != dA * dB) throw Error(ErrorCode::DimensionMismatch, "write_matrix");
  out << dA << ' ' << dB << '\n';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) out << ' ';
      out << detail::format_double(m(i, j).real(), 17) << ','
          << detail::format_double(m(i, j).imag(), 17);
    }
    out << '\n';
  }
}

}  // namespace sepcrit
