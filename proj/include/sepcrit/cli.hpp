#pragma once

// Command-line front end:
//
//   sepcrit table1     [--alpha A ...] [--beta B] [--map SPEC] [--tol T] [--bisect-tol T]
//   sepcrit so3-region [--p P] [--map SPEC ...] [--alpha A] [--beta B] [--kind K] [--resolution N]
//   sepcrit check FILE [--map SPEC ...] [--alpha A] [--beta B] [--kind K]
//   sepcrit choi SPEC  [--part 0|1|2] [--samples N --seed S]
//
// Every subcommand accepts --tol and --out <path|stdout>. `check` exits with 2
// when any criterion is violated; all errors exit with 1.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sepcrit/criteria.hpp"
#include "sepcrit/io.hpp"
#include "sepcrit/maps.hpp"
#include "sepcrit/scan.hpp"
#include "sepcrit/states.hpp"

namespace sepcrit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

namespace detail {

inline double parse_alpha(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  if (!sepcrit::detail::parse_double(s, v)) {
    throw Error(ErrorCode::InvalidParameters, "cannot parse alpha '" + s + "'");
  }
  return v;
}

inline std::string format_alpha(double a) {
  return std::isinf(a) ? "inf" : sepcrit::detail::format_double(a, 9);
}

/// Output sink for --out: "stdout" (or empty) writes to the given stream.
class Sink {
 public:
  Sink(const std::string& target, std::ostream& fallback) : stream_(&fallback) {
    if (!target.empty() && target != "stdout") {
      file_ = std::make_unique<std::ofstream>(target);
      if (!*file_) throw Error(ErrorCode::InvalidParameters, "cannot open '" + target + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

inline std::optional<InequalityKind> kind_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto k = parse_inequality_kind(s);
  if (!k) throw Error(ErrorCode::InvalidParameters, "kind must be I, II, III or IV");
  return k;
}

/// Builds criteria for each --map, disambiguating repeated labels.
inline std::vector<CriterionSpec> build_criteria(const std::vector<std::string>& maps, double alpha,
                                                 double beta, std::optional<InequalityKind> kind,
                                                 std::optional<std::size_t> default_d, double tol) {
  std::vector<CriterionSpec> out;
  std::map<std::string, int> seen;
  for (const auto& m : maps) {
    auto c = make_criterion(m, alpha, beta, kind, default_d, tol);
    const int count = seen[c.label]++;
    if (count > 0) c.label += "_" + std::to_string(count + 1);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scalar separability criteria from positive maps"};
  app.require_subcommand(1);

  double tol = kDefaultTol;
  std::string out_target = "stdout";

  // table1
  auto* table = app.add_subcommand("table1", "gamma ranges of detection on the 3x3 Horodecki states");
  std::vector<std::string> table_alphas{"6", "7", "10", "13", "inf"};
  double table_beta = 1.0;
  std::string table_map = "phi d=3 k=1";
  double table_tol = 1e-12;
  double bisect_tol = 1e-4;
  table->add_option("--alpha", table_alphas, "alpha values (use 'inf' for the limit)");
  table->add_option("--beta", table_beta, "beta");
  table->add_option("--map", table_map, "map specification");
  table->add_option("--tol", table_tol, "violation tolerance");
  table->add_option("--bisect-tol", bisect_tol, "boundary bisection width");
  table->add_option("--out", out_target, "output path or 'stdout'");

  // so3-region
  auto* region = app.add_subcommand("so3-region", "criterion verdicts on a (q, r) grid of SO(3)-invariant states");
  double p = 0.2;
  std::vector<std::string> region_maps{"breuer"};
  std::string region_alpha = "1";
  double region_beta = 1.0;
  std::string region_kind;
  std::size_t resolution = 101;
  region->add_option("--p", p, "weight of P0");
  region->add_option("--map", region_maps, "map specifications (or 'entropic')");
  region->add_option("--alpha", region_alpha, "alpha ('inf' for the limit witness)");
  region->add_option("--beta", region_beta, "beta");
  region->add_option("--kind", region_kind, "I, II, III or IV (default: from beta)");
  region->add_option("--resolution", resolution, "grid points per edge (>= 2)");
  region->add_option("--tol", tol, "tolerance");
  region->add_option("--out", out_target, "output path or 'stdout'");

  // check
  auto* check = app.add_subcommand("check", "evaluate criteria on a state read from a matrix file");
  std::string state_file;
  std::vector<std::string> check_maps{"reduction"};
  std::string check_alpha = "1";
  double check_beta = 2.0;
  std::string check_kind;
  check->add_option("state_file", state_file, "matrix file")->required();
  check->add_option("--map", check_maps, "map specifications (or 'entropic')");
  check->add_option("--alpha", check_alpha, "alpha ('inf' for the limit witness)");
  check->add_option("--beta", check_beta, "beta");
  check->add_option("--kind", check_kind, "I, II, III or IV (default: from beta)");
  check->add_option("--tol", tol, "tolerance");
  check->add_option("--out", out_target, "output path or 'stdout'");

  // choi
  auto* choi = app.add_subcommand("choi", "print the Choi matrix of a catalog map");
  std::string choi_spec;
  int part = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  choi->add_option("map_spec", choi_spec, "map specification, e.g. \"theta a=2 c=1,1,1\"")->required();
  choi->add_option("--part", part, "0: the map, 1: its first CP part, 2: its second CP part")
      ->check(CLI::Range(0, 2));
  choi->add_option("--samples", samples, "also test positivity on this many random pure states");
  choi->add_option("--seed", seed, "seed for --samples");
  choi->add_option("--tol", tol, "tolerance");
  choi->add_option("--out", out_target, "output path or 'stdout'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    detail::Sink sink(out_target, out);
    std::ostream& os = sink.stream();

    if (*table) {
      os << "# map: " << table_map << "  beta=" << sepcrit::detail::format_double(table_beta, 9)
         << "  tol=" << sepcrit::detail::format_double(table_tol, 3)
         << "  bisect_tol=" << sepcrit::detail::format_double(bisect_tol, 3) << '\n';
      os << "alpha beta gamma_range\n";
      const auto resolved = resolve_map(table_map, 3);
      if (!resolved.decomposition) {
        throw Error(ErrorCode::InvalidParameters, "table1 needs a map with a CP splitting");
      }
      for (const auto& a : table_alphas) {
        Table1Query q;
        q.alpha = detail::parse_alpha(a);
        q.beta = table_beta;
        q.family = resolved.decomposition->params;
        q.bisect_tol = bisect_tol;
        q.tol = table_tol;
        os << detail::format_alpha(q.alpha) << ' ' << sepcrit::detail::format_double(q.beta, 9) << ' '
           << format_interval(table1(q)) << '\n';
      }
      return kExitOk;
    }

    if (*region) {
      const auto criteria = detail::build_criteria(region_maps, detail::parse_alpha(region_alpha),
                                                   region_beta, detail::kind_option(region_kind), 4, tol);
      write_csv(os, so3_region(p, criteria, resolution, tol), criteria);
      return kExitOk;
    }

    if (*check) {
      std::ifstream in(state_file);
      if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + state_file + "'");
      const auto file = read_matrix(in);
      const DensityMatrix rho(file.matrix, file.dA, file.dB);
      const auto criteria = detail::build_criteria(check_maps, detail::parse_alpha(check_alpha),
                                                   check_beta, detail::kind_option(check_kind),
                                                   file.dB, tol);
      os << "# label kind lhs rhs margin verdict\n";
      bool any = false;
      for (const auto& c : criteria) {
        const auto res = evaluate(c, rho, tol);
        any = any || res.violated;
        os << c.label << ' ' << to_string(res.kind) << ' '
           << sepcrit::detail::format_double(res.lhs, 12) << ' '
           << sepcrit::detail::format_double(res.rhs, 12) << ' '
           << sepcrit::detail::format_double(res.margin, 12) << ' '
           << (res.violated ? "VIOLATED" : "satisfied") << '\n';
      }
      return any ? kExitViolation : kExitOk;
    }

    if (*choi) {
      const auto resolved = resolve_map(choi_spec, std::nullopt, tol);
      const MatrixMap* target = &resolved.map;
      if (part != 0) {
        if (!resolved.decomposition) {
          throw Error(ErrorCode::InvalidParameters, "--part needs a map with a CP splitting");
        }
        target = part == 1 ? &resolved.decomposition->lambda1 : &resolved.decomposition->lambda2;
      }
      write_matrix(os, target->choi(), target->d(), target->d());
      std::ostream& verdict = sink.is_file() ? out : os;
      const double lowest = choi_min_eigenvalue(*target);
      verdict << "CP: " << (is_cp(*target, tol) ? "yes" : "no")
              << " (min eigenvalue = " << sepcrit::detail::format_double(lowest, 12) << ")\n";
      if (samples > 0) {
        const auto report = is_positive_sampled(*target, samples, seed, tol);
        verdict << "positive on " << samples << " samples: " << (report.positive ? "yes" : "no")
                << " (min eigenvalue = " << sepcrit::detail::format_double(report.min_eigenvalue, 12)
                << ")\n";
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace sepcrit::cli
