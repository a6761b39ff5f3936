#pragma once

// Parameter scans over the two test families: gamma intervals of detection for
// the Horodecki states, and (q, r) grids of SO(3)-invariant states at fixed p.

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sepcrit/criteria.hpp"
#include "sepcrit/io.hpp"
#include "sepcrit/maps.hpp"
#include "sepcrit/states.hpp"

namespace sepcrit {

// ---------------------------------------------------------------------------
// Map specifications: "name key=value ..."
//
//   identity d=3            transposition d=3
//   reduction d=3           tau d=4 [u=breuer|identity]
//   breuer d=4              breuer-tilde d=4
//   phi d=3 k=1             choi               (= phi d=3 k=1)
//   theta a=2 c=1,1,1       kossakowski a=1,1,0;0,1,1;1,0,1

struct ResolvedMap {
  MatrixMap map;
  std::optional<CPDecomposition> decomposition;  // absent for identity / transposition
};

namespace detail {

inline std::vector<double> parse_double_list(std::string_view s, char sep, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto end = s.find(sep, pos);
    if (end == std::string_view::npos) end = s.size();
    double v = 0.0;
    if (!parse_double(trim(s.substr(pos, end - pos)), v)) {
      throw Error(ErrorCode::InvalidParameters, "cannot parse " + what + " from '" + std::string(s) + "'");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

inline std::string normalize_name(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch == '_') ch = '-';
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

}  // namespace detail

inline ResolvedMap resolve_map(std::string_view spec, std::optional<std::size_t> default_d = std::nullopt,
                               double tol = kDefaultTol) {
  const auto tokens = detail::split_whitespace(detail::trim(spec));
  if (tokens.empty()) throw Error(ErrorCode::InvalidParameters, "empty map specification");
  const std::string name = detail::normalize_name(tokens[0]);
  std::map<std::string, std::string, std::less<>> kv;
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    const auto eq = tokens[t].find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::InvalidParameters, "expected key=value, got '" + std::string(tokens[t]) + "'");
    }
    kv[std::string(tokens[t].substr(0, eq))] = std::string(tokens[t].substr(eq + 1));
  }

  auto dimension = [&]() -> std::size_t {
    if (auto it = kv.find("d"); it != kv.end()) {
      std::size_t d = 0;
      if (!detail::parse_size(it->second, d) || d < 2) {
        throw Error(ErrorCode::InvalidParameters, "d must be an integer >= 2");
      }
      return d;
    }
    if (default_d) return *default_d;
    throw Error(ErrorCode::InvalidParameters, "map '" + name + "' needs d=<dimension>");
  };
  auto unitary = [&](std::size_t d) {
    const auto it = kv.find("u");
    const std::string choice = it != kv.end() ? it->second : (d % 2 == 0 ? "breuer" : "identity");
    if (choice == "breuer") return default_breuer_unitary(d);
    if (choice == "identity") return ComplexMatrix::identity(d);
    throw Error(ErrorCode::InvalidParameters, "u must be 'breuer' or 'identity'");
  };
  auto with_decomposition = [&](MapFamily family) {
    auto dec = make_decomposition(family, tol);
    auto map = dec.map();
    return ResolvedMap{std::move(map), std::move(dec)};
  };

  if (name == "identity") return {identity_map(dimension()), std::nullopt};
  if (name == "transposition") return {transposition_map(dimension()), std::nullopt};
  if (name == "reduction") return with_decomposition(family::Reduction{dimension()});
  if (name == "tau") {
    const auto d = dimension();
    return with_decomposition(family::TauU{unitary(d)});
  }
  if (name == "breuer" || name == "breuer-hall") {
    const auto d = dimension();
    return with_decomposition(family::BreuerHall{unitary(d)});
  }
  if (name == "breuer-tilde" || name == "breuer-hall-tilde") {
    const auto d = dimension();
    return with_decomposition(family::BreuerHallTilde{unitary(d)});
  }
  if (name == "choi") return with_decomposition(family::PhiDK{3, 1});
  if (name == "phi" || name == "phi-dk") {
    std::size_t k = 0;
    const auto it = kv.find("k");
    if (it == kv.end() || !detail::parse_size(it->second, k)) {
      throw Error(ErrorCode::InvalidParameters, "phi needs k=<integer>");
    }
    return with_decomposition(family::PhiDK{dimension(), k});
  }
  if (name == "theta") {
    const auto a_it = kv.find("a");
    const auto c_it = kv.find("c");
    if (a_it == kv.end() || c_it == kv.end()) {
      throw Error(ErrorCode::InvalidParameters, "theta needs a=<value> c=<c1,...,cd>");
    }
    double a = 0.0;
    if (!detail::parse_double(a_it->second, a)) throw Error(ErrorCode::InvalidParameters, "bad a");
    return with_decomposition(family::Theta{a, detail::parse_double_list(c_it->second, ',', "c")});
  }
  if (name == "kossakowski") {
    const auto it = kv.find("a");
    if (it == kv.end()) throw Error(ErrorCode::InvalidParameters, "kossakowski needs a=<rows>");
    family::Kossakowski k;
    std::string_view rows = it->second;
    std::size_t pos = 0;
    while (pos <= rows.size()) {
      auto end = rows.find(';', pos);
      if (end == std::string_view::npos) end = rows.size();
      k.a.push_back(detail::parse_double_list(rows.substr(pos, end - pos), ',', "a row"));
      pos = end + 1;
    }
    return with_decomposition(std::move(k));
  }
  throw Error(ErrorCode::InvalidParameters, "unknown map '" + name + "'");
}

// ---------------------------------------------------------------------------
// Criteria used by the scans

/// The (alpha, beta) inequality for a decomposition.
struct AlphaBetaCriterion {
  CPDecomposition decomposition;
  double alpha;
  double beta;
  InequalityKind kind;
};

/// Renyi-entropy inequality of the given power on subsystem A.
struct EntropicCriterion {
  double alpha;
};

/// Large-alpha limit at beta = 1.
struct LimitCriterion {
  MatrixMap map;
};

struct CriterionSpec {
  std::string label;
  std::variant<AlphaBetaCriterion, EntropicCriterion, LimitCriterion> test;
};

/// Kind implied by the range of beta: (1, inf) -> I, [0, 1] -> II, [-1, 0) -> III.
inline InequalityKind kind_for_beta(double beta) {
  if (beta > 1.0) return InequalityKind::I;
  if (beta >= 0.0) return InequalityKind::II;
  if (beta >= -1.0) return InequalityKind::III;
  throw Error(ErrorCode::ParameterOutOfRange, "beta must be >= -1, got " + std::to_string(beta));
}

inline CriterionResult evaluate(const CriterionSpec& spec, const DensityMatrix& rho, double tol) {
  struct Visitor {
    const DensityMatrix& rho;
    double tol;
    CriterionResult operator()(const AlphaBetaCriterion& c) const {
      return alpha_beta_inequality(rho, c.decomposition, c.alpha, c.beta, c.kind, tol);
    }
    CriterionResult operator()(const EntropicCriterion& c) const {
      return entropic_inequality(rho, c.alpha, Subsystem::A, tol);
    }
    CriterionResult operator()(const LimitCriterion& c) const {
      const double value = limit_witness(rho, c.map, tol);
      return {value, 0.0, value, value < 0.0, CriterionKind::Limit, std::nullopt, tol};
    }
  };
  return std::visit(Visitor{rho, tol}, spec.test);
}

/// Builds the criterion for a map spec at shared (alpha, beta, kind).
/// "entropic" maps to the Renyi inequality of power alpha + beta; alpha = inf
/// maps to the limit witness.
inline CriterionSpec make_criterion(std::string_view map_spec, double alpha, double beta,
                                    std::optional<InequalityKind> kind,
                                    std::optional<std::size_t> default_d, double tol = kDefaultTol) {
  const auto tokens = detail::split_whitespace(detail::trim(map_spec));
  const std::string head = tokens.empty() ? std::string{} : detail::normalize_name(tokens[0]);
  if (head == "entropic" || head == "e") {
    if (std::isinf(alpha)) throw Error(ErrorCode::ParameterOutOfRange, "entropic needs finite alpha");
    return {"E", EntropicCriterion{alpha + beta}};
  }
  auto resolved = resolve_map(map_spec, default_d, tol);
  std::string label = head;
  if (std::isinf(alpha)) {
    if (beta != 1.0) throw Error(ErrorCode::ParameterOutOfRange, "alpha = inf requires beta = 1");
    return {label, LimitCriterion{std::move(resolved.map)}};
  }
  if (!resolved.decomposition) {
    throw Error(ErrorCode::InvalidParameters, "map '" + head + "' has no CP splitting");
  }
  return {label, AlphaBetaCriterion{std::move(*resolved.decomposition), alpha, beta,
                                    kind.value_or(kind_for_beta(beta))}};
}

// ---------------------------------------------------------------------------
// Horodecki gamma scan

struct GammaInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_open = true;
  bool upper_open = true;
  bool empty = true;
};

struct Table1Query {
  double alpha = 1.0;  // +inf selects the limit witness
  double beta = 1.0;
  MapFamily family = family::PhiDK{3, 1};
  double bisect_tol = 1e-4;
  /// Violation tolerance. The traces shrink like lambda_max^alpha, so the
  /// default is well below the library-wide 1e-9.
  double tol = 1e-12;
  double grid_step = 0.01;
};

inline constexpr double kGammaMin = 2.0;
inline constexpr double kGammaMax = 5.0;

/// Whether the query's criterion detects sigma_gamma.
inline bool gamma_violated(double gamma, const Table1Query& query, const CPDecomposition& dec) {
  const auto rho = horodecki_state(gamma);
  if (std::isinf(query.alpha)) {
    return limit_witness(rho, dec.map(), query.tol) < 0.0;
  }
  return alpha_beta_inequality(rho, dec, query.alpha, query.beta, kind_for_beta(query.beta), query.tol)
      .violated;
}

/// Gamma range in [2, 5] where the criterion is violated. A coarse grid finds
/// the first and last violating points; each interior boundary is then
/// bisected and reported at its last non-violating value (open end). Ends at
/// the domain edges are reported closed.
inline GammaInterval table1(const Table1Query& query) {
  if (query.bisect_tol < 1e-6) {
    throw Error(ErrorCode::InvalidParameters, "bisect_tol must be >= 1e-6");
  }
  if (std::isinf(query.alpha) && query.beta != 1.0) {
    throw Error(ErrorCode::ParameterOutOfRange, "alpha = inf requires beta = 1");
  }
  const auto dec = make_decomposition(query.family);
  if (dec.d() != 3) throw Error(ErrorCode::DimensionMismatch, "Horodecki states need a map on d = 3");

  const auto steps = static_cast<std::size_t>(std::llround((kGammaMax - kGammaMin) / query.grid_step));
  auto grid = [&](std::size_t i) {
    return i == steps ? kGammaMax : kGammaMin + static_cast<double>(i) * query.grid_step;
  };
  std::vector<bool> verdict(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) verdict[i] = gamma_violated(grid(i), query, dec);

  GammaInterval out;
  std::size_t first = steps + 1, last = 0;
  for (std::size_t i = 0; i <= steps; ++i) {
    if (!verdict[i]) continue;
    if (first > steps) first = i;
    last = i;
  }
  if (first > steps) return out;
  out.empty = false;

  // Bisects between a satisfied point `good` and a violating point `bad`,
  // returning the satisfied end once the bracket is narrower than bisect_tol.
  auto bisect = [&](double good, double bad) {
    while (std::abs(bad - good) > query.bisect_tol) {
      const double mid = 0.5 * (good + bad);
      (gamma_violated(mid, query, dec) ? bad : good) = mid;
    }
    return good;
  };

  if (first == 0) {
    out.lower = kGammaMin;
    out.lower_open = false;
  } else {
    out.lower = bisect(grid(first - 1), grid(first));
  }
  if (last == steps) {
    out.upper = kGammaMax;
    out.upper_open = false;
  } else {
    out.upper = bisect(grid(last + 1), grid(last));
  }
  return out;
}

inline std::string format_interval(const GammaInterval& g, int decimals = 4) {
  if (g.empty) return "--";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%c%.*f, %.*f%c", g.lower_open ? '(' : '[', decimals, g.lower,
                decimals, g.upper, g.upper_open ? ')' : ']');
  return buf;
}

// ---------------------------------------------------------------------------
// SO(3) region scan

struct CriterionVerdict {
  std::string label;
  bool violated = false;
  double margin = 0.0;
};

struct ScanRow {
  double q = 0.0;
  double r = 0.0;
  double s = 0.0;
  bool ppt = false;
  std::vector<CriterionVerdict> results;
};

/// Number of admissible grid points for a given resolution.
constexpr std::size_t so3_grid_size(std::size_t resolution) noexcept {
  return resolution * (resolution + 1) / 2;
}

/// Evaluates every criterion on the triangular grid
///   q = i (1-p)/(n-1), r = j (1-p)/(n-1), i + j <= n - 1   (n = resolution),
/// rows ordered by i then j.
inline std::vector<ScanRow> so3_region(double p, const std::vector<CriterionSpec>& criteria,
                                       std::size_t resolution, double tol = kDefaultTol) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidParameters, "p must lie in [0, 1]");
  if (resolution < 2) throw Error(ErrorCode::InvalidParameters, "resolution must be >= 2");
  const std::size_t n = resolution - 1;
  const double step = (1.0 - p) / static_cast<double>(n);

  std::vector<ScanRow> rows;
  rows.reserve(so3_grid_size(resolution));
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; i + j <= n; ++j) {
      ScanRow row;
      row.q = static_cast<double>(i) * step;
      row.r = static_cast<double>(j) * step;
      row.s = static_cast<double>(n - i - j) * step;
      const auto rho = so3_state(SO3Params{p, row.q, row.r});
      row.ppt = ppt_check(rho) >= -tol;
      row.results.reserve(criteria.size());
      for (const auto& c : criteria) {
        const auto res = evaluate(c, rho, tol);
        row.results.push_back({c.label, res.violated, res.margin});
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<ScanRow>& rows,
                      const std::vector<CriterionSpec>& criteria) {
  out << "q,r,s,ppt";
  for (const auto& c : criteria) out << ',' << c.label << "_violated," << c.label << "_margin";
  out << '\n';
  for (const auto& row : rows) {
    out << detail::format_double(row.q, 9) << ',' << detail::format_double(row.r, 9) << ','
        << detail::format_double(row.s, 9) << ',' << (row.ppt ? 1 : 0);
    for (const auto& v : row.results) {
      out << ',' << (v.violated ? 1 : 0) << ',' << detail::format_double(v.margin, 9);
    }
    out << '\n';
  }
}

}  // namespace sepcrit
