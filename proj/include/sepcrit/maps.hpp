#pragma once

// Linear maps on d x d matrices, stored as Choi matrices
//   C = sum_ij E_ij (x) L(E_ij),
// together with the catalog of positive maps and their splittings L = L1 - L2
// into completely positive parts.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sepcrit/linalg.hpp"
#include "sepcrit/random.hpp"

namespace sepcrit {

class MatrixMap {
 public:
  MatrixMap(ComplexMatrix choi, std::string label) : choi_(std::move(choi)), label_(std::move(label)) {
    const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(choi_.dim()))));
    if (root * root != choi_.dim() || root == 0) {
      throw Error(ErrorCode::DimensionMismatch,
                  "Choi matrix dimension " + std::to_string(choi_.dim()) + " is not a square");
    }
    d_ = root;
  }

  /// Builds the Choi matrix by evaluating `action` on every matrix unit.
  template <typename F>
  static MatrixMap from_action(std::size_t d, F&& action, std::string label) {
    ComplexMatrix choi(d * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const ComplexMatrix image = action(ComplexMatrix::unit(d, i, j));
        if (image.dim() != d) {
          throw Error(ErrorCode::DimensionMismatch, "map action changed the dimension");
        }
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) choi(i * d + k, j * d + l) = image(k, l);
      }
    return MatrixMap(std::move(choi), std::move(label));
  }

  std::size_t d() const noexcept { return d_; }
  const ComplexMatrix& choi() const noexcept { return choi_; }
  const std::string& label() const noexcept { return label_; }

  /// L(X) = sum_ij X_ij B_ij with B_ij the (i, j) block of the Choi matrix.
  ComplexMatrix operator()(const ComplexMatrix& x) const {
    if (x.dim() != d_) {
      throw Error(ErrorCode::DimensionMismatch, "map on " + std::to_string(d_) +
                                                    "x" + std::to_string(d_) + " applied to dim " +
                                                    std::to_string(x.dim()));
    }
    ComplexMatrix out(d_);
    accumulate_image(x, 0, 0, out, 0, 0);
    return out;
  }

  /// Adds L(block) to `out` at (row0, col0), where block is the d x d
  /// submatrix of `src` starting at (src_row, src_col).
  void accumulate_image(const ComplexMatrix& src, std::size_t src_row, std::size_t src_col,
                        ComplexMatrix& out, std::size_t row0, std::size_t col0) const {
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        const Complex xij = src(src_row + i, src_col + j);
        if (xij == Complex{}) continue;
        for (std::size_t k = 0; k < d_; ++k)
          for (std::size_t l = 0; l < d_; ++l)
            out(row0 + k, col0 + l) += xij * choi_(i * d_ + k, j * d_ + l);
      }
  }

 private:
  std::size_t d_ = 0;
  ComplexMatrix choi_;
  std::string label_;
};

inline MatrixMap operator+(const MatrixMap& a, const MatrixMap& b) {
  return MatrixMap(a.choi() + b.choi(), a.label() + " + " + b.label());
}

inline MatrixMap operator-(const MatrixMap& a, const MatrixMap& b) {
  return MatrixMap(a.choi() - b.choi(), a.label() + " - " + b.label());
}

inline ComplexMatrix apply_map(const MatrixMap& m, const ComplexMatrix& x) { return m(x); }

/// [I (x) L](rho) for rho on C^dA (x) C^d.
inline ComplexMatrix extend_apply(const MatrixMap& m, const ComplexMatrix& rho, std::size_t dA) {
  const std::size_t d = m.d();
  if (rho.dim() != dA * d) {
    throw Error(ErrorCode::DimensionMismatch, "extend_apply: dim " + std::to_string(rho.dim()) +
                                                  " != " + std::to_string(dA) + "*" +
                                                  std::to_string(d));
  }
  ComplexMatrix out(rho.dim());
  for (std::size_t a = 0; a < dA; ++a)
    for (std::size_t b = 0; b < dA; ++b) m.accumulate_image(rho, a * d, b * d, out, a * d, b * d);
  return out;
}

inline double choi_min_eigenvalue(const MatrixMap& m) { return min_eigenvalue(m.choi()); }

/// Complete positivity via positivity of the Choi matrix.
inline bool is_cp(const MatrixMap& m, double tol = kDefaultTol) {
  return choi_min_eigenvalue(m) >= -tol * m.choi().frobenius_norm();
}

struct PositivityReport {
  bool positive = true;
  double min_eigenvalue = 0.0;     // smallest eigenvalue seen over all samples
  std::vector<Complex> witness;    // a vector with L(|v><v|) not PSD, if found
};

/// Necessary check of positivity on Haar-random pure inputs. A negative
/// answer is a certificate (the witness vector); a positive one is not.
inline PositivityReport is_positive_sampled(const MatrixMap& m, int n_samples, std::uint64_t seed,
                                            double tol = kDefaultTol) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidParameters, "n_samples must be >= 1");
  Rng rng(seed);
  PositivityReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    auto v = random_pure_vector(m.d(), rng);
    const double lowest = min_eigenvalue(m(ComplexMatrix::projector(v)));
    if (lowest < report.min_eigenvalue) report.min_eigenvalue = lowest;
    if (lowest < -tol && report.positive) {
      report.positive = false;
      report.witness = std::move(v);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Elementary maps and operators

/// S|i> = |i + 1 mod d>
inline ComplexMatrix shift_operator(std::size_t d) {
  ComplexMatrix s(d);
  for (std::size_t i = 0; i < d; ++i) s((i + 1) % d, i) = 1.0;
  return s;
}

/// Dephasing: keeps the diagonal.
inline ComplexMatrix dephase(const ComplexMatrix& x) {
  ComplexMatrix out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out(i, i) = x(i, i);
  return out;
}

/// X -> U X^T U^dagger
inline ComplexMatrix twisted_transpose(const ComplexMatrix& u, const ComplexMatrix& x) {
  return u * x.transpose() * u.adjoint();
}

inline MatrixMap identity_map(std::size_t d) {
  return MatrixMap::from_action(d, [](const ComplexMatrix& x) { return x; }, "identity");
}

/// X -> (Tr X) 1
inline MatrixMap trace_map(std::size_t d) {
  return MatrixMap::from_action(
      d, [d](const ComplexMatrix& x) { return x.trace() * ComplexMatrix::identity(d); }, "trace");
}

inline MatrixMap transposition_map(std::size_t d) {
  return MatrixMap::from_action(d, [](const ComplexMatrix& x) { return x.transpose(); },
                                "transposition");
}

/// X -> U X^T U^dagger
inline MatrixMap tau_map(const ComplexMatrix& u) {
  return MatrixMap::from_action(
      u.dim(), [&u](const ComplexMatrix& x) { return twisted_transpose(u, x); }, "tau");
}

/// Antidiagonal V with V(i, d-1-i) = (-1)^i. For even d this is a real
/// antisymmetric unitary; d = 4 gives (V14, V23, V32, V41) = (1, -1, 1, -1).
inline ComplexMatrix default_breuer_unitary(std::size_t d = 4) {
  if (d == 0 || d % 2 != 0) {
    throw Error(ErrorCode::InvalidParameters,
                "an antisymmetric unitary needs even dimension, got " + std::to_string(d));
  }
  ComplexMatrix v(d);
  for (std::size_t i = 0; i < d; ++i) v(i, d - 1 - i) = (i % 2 == 0) ? 1.0 : -1.0;
  return v;
}

// ---------------------------------------------------------------------------
// Catalog of positive maps with CP splittings

namespace family {

/// R(X) = (Tr X) 1 - X
struct Reduction {
  std::size_t d;
};

/// tau^U(X) = U X^T U^dagger, U unitary.
struct TauU {
  ComplexMatrix u;
};

/// (Tr X) 1 - tau^U(X) - X with U^T = -U and U^dagger U <= 1.
struct BreuerHall {
  ComplexMatrix u;
};

/// (Tr X) 1 + tau^U(X) - X, same conditions on U.
struct BreuerHallTilde {
  ComplexMatrix u;
};

/// (d - k) eps(X) + sum_{i=1..k} eps(S^i X S^i^dagger) - X, 0 <= k <= d-1.
struct PhiDK {
  std::size_t d;
  std::size_t k;
};

/// a eps(X) + diag(c_d, c_1, ..., c_{d-1}) eps(S X S^dagger) - X.
struct Theta {
  double a;
  std::vector<double> c;
};

/// E_ii -> sum_j a_ij E_jj, E_ij -> -E_ij (i != j).
struct Kossakowski {
  std::vector<std::vector<double>> a;
};

}  // namespace family

using MapFamily = std::variant<family::Reduction, family::TauU, family::BreuerHall,
                               family::BreuerHallTilde, family::PhiDK, family::Theta,
                               family::Kossakowski>;

struct CPDecomposition {
  MatrixMap lambda1;
  MatrixMap lambda2;
  bool lambda2_is_identity = false;
  std::string name;
  MapFamily params;
  /// Indecomposability as established in the literature for the family and
  /// parameters; never decided numerically.
  bool indecomposable = false;
  /// Set for families whose positivity is not certified (Kossakowski class).
  bool positivity_unverified = false;

  std::size_t d() const noexcept { return lambda1.d(); }

  /// L = L1 - L2
  MatrixMap map() const { return MatrixMap(lambda1.choi() - lambda2.choi(), name); }
};

struct ThetaPositivity {
  bool positive = false;
  bool indecomposable = false;
  bool trace_condition = false;        // a >= d - 1
  bool geometric_condition = false;    // (c_1 ... c_d)^{1/d} >= d - a
};

inline ThetaPositivity theta_positivity(double a, const std::vector<double>& c) {
  if (c.size() < 2) throw Error(ErrorCode::InvalidParameters, "theta needs d >= 2 coefficients");
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidParameters, "theta requires a > 0");
  double log_sum = 0.0;
  for (double ci : c) {
    if (!(ci > 0.0)) throw Error(ErrorCode::InvalidParameters, "theta requires every c_i > 0");
    log_sum += std::log(ci);
  }
  const double d = static_cast<double>(c.size());
  const double geometric_mean = std::exp(log_sum / d);
  ThetaPositivity out;
  // 1e-12 slack absorbs the exp/log round trip at exact equality (Choi map).
  out.trace_condition = a >= d - 1.0 - 1e-12;
  out.geometric_condition = geometric_mean >= (d - a) - 1e-12 * std::max(1.0, std::abs(d - a));
  out.positive = out.trace_condition && out.geometric_condition;
  out.indecomposable = out.positive && a < d;
  return out;
}

namespace detail {

inline void require_matrix_parameter(const ComplexMatrix& u) {
  if (u.dim() < 2) throw Error(ErrorCode::InvalidParameters, "U must be at least 2x2");
}

inline void require_unitary(const ComplexMatrix& u, double tol) {
  require_matrix_parameter(u);
  const double defect = (u.adjoint() * u - ComplexMatrix::identity(u.dim())).frobenius_norm();
  if (defect > tol * std::max(1.0, u.frobenius_norm())) {
    throw Error(ErrorCode::InvalidParameters,
                "U is not unitary (||U^dagger U - 1||_F = " + std::to_string(defect) + ")");
  }
}

inline void require_breuer_unitary(const ComplexMatrix& u, double tol) {
  require_matrix_parameter(u);
  const double defect = (u.transpose() + u).frobenius_norm();
  if (defect > tol * std::max(1.0, u.frobenius_norm())) {
    throw Error(ErrorCode::NotAntisymmetric,
                "||U^T + U||_F = " + std::to_string(defect));
  }
  const double lowest = min_eigenvalue(ComplexMatrix::identity(u.dim()) - u.adjoint() * u);
  if (lowest < -tol) {
    throw Error(ErrorCode::InvalidParameters,
                "U^dagger U <= 1 fails (min eigenvalue of 1 - U^dagger U = " +
                    std::to_string(lowest) + ")");
  }
}

inline CPDecomposition build(const family::Reduction& f, double) {
  if (f.d < 2) throw Error(ErrorCode::InvalidParameters, "reduction needs d >= 2");
  return {trace_map(f.d), identity_map(f.d), true, "reduction", f, false, false};
}

inline CPDecomposition build(const family::TauU& f, double tol) {
  require_unitary(f.u, tol);
  const std::size_t d = f.u.dim();
  const ComplexMatrix& u = f.u;
  // tau1 = (1/2) tau^U o R~, tau2 = (1/2) tau^U o R
  auto lambda1 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        return 0.5 * twisted_transpose(u, x.trace() * ComplexMatrix::identity(d) + x);
      },
      "tau1");
  auto lambda2 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        return 0.5 * twisted_transpose(u, x.trace() * ComplexMatrix::identity(d) - x);
      },
      "tau2");
  return {std::move(lambda1), std::move(lambda2), false, "tau_u", f, false, false};
}

inline CPDecomposition build(const family::BreuerHall& f, double tol) {
  require_breuer_unitary(f.u, tol);
  const std::size_t d = f.u.dim();
  const ComplexMatrix& u = f.u;
  auto lambda1 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        return x.trace() * ComplexMatrix::identity(d) - twisted_transpose(u, x);
      },
      "breuer_hall1");
  return {std::move(lambda1), identity_map(d), true, "breuer_hall", f, true, false};
}

inline CPDecomposition build(const family::BreuerHallTilde& f, double tol) {
  require_breuer_unitary(f.u, tol);
  const std::size_t d = f.u.dim();
  const ComplexMatrix& u = f.u;
  auto lambda1 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        return x.trace() * ComplexMatrix::identity(d) + twisted_transpose(u, x);
      },
      "breuer_hall_tilde1");
  return {std::move(lambda1), identity_map(d), true, "breuer_hall_tilde", f, false, false};
}

inline CPDecomposition build(const family::PhiDK& f, double) {
  if (f.d < 2) throw Error(ErrorCode::InvalidParameters, "phi_dk needs d >= 2");
  if (f.k > f.d - 1) {
    throw Error(ErrorCode::InvalidParameters,
                "phi_dk needs 0 <= k <= d-1, got k=" + std::to_string(f.k));
  }
  const std::size_t d = f.d, k = f.k;
  std::vector<ComplexMatrix> shifts;  // S^1 .. S^k
  const ComplexMatrix s = shift_operator(d);
  ComplexMatrix power = ComplexMatrix::identity(d);
  for (std::size_t i = 1; i <= k; ++i) {
    power = s * power;
    shifts.push_back(power);
  }
  auto lambda1 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        ComplexMatrix out = static_cast<double>(d - k) * dephase(x);
        for (const auto& si : shifts) out += dephase(si * x * si.adjoint());
        return out;
      },
      "phi_dk1");
  const bool indecomposable = k >= 1 && k + 2 <= d;
  return {std::move(lambda1), identity_map(d), true,
          "phi_dk", f, indecomposable, false};
}

inline CPDecomposition build(const family::Theta& f, double) {
  const auto check = theta_positivity(f.a, f.c);
  const std::size_t d = f.c.size();
  if (!check.trace_condition) {
    throw Error(ErrorCode::InvalidParameters, "theta: a >= d-1 fails");
  }
  if (!check.geometric_condition) {
    throw Error(ErrorCode::InvalidParameters, "theta: (c_1...c_d)^(1/d) >= d-a fails");
  }
  std::vector<double> weights(d);  // diag(c_d, c_1, ..., c_{d-1})
  weights[0] = f.c[d - 1];
  for (std::size_t i = 1; i < d; ++i) weights[i] = f.c[i - 1];
  const ComplexMatrix diag = ComplexMatrix::diagonal(weights);
  const ComplexMatrix s = shift_operator(d);
  const double a = f.a;
  auto lambda1 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        return a * dephase(x) + diag * dephase(s * x * s.adjoint());
      },
      "theta1");
  return {std::move(lambda1), identity_map(d), true, "theta", f, check.indecomposable, false};
}

inline CPDecomposition build(const family::Kossakowski& f, double) {
  const std::size_t d = f.a.size();
  if (d < 2) throw Error(ErrorCode::InvalidParameters, "kossakowski needs d >= 2");
  for (std::size_t i = 0; i < d; ++i) {
    if (f.a[i].size() != d) throw Error(ErrorCode::InvalidParameters, "kossakowski a must be square");
    for (std::size_t j = 0; j < d; ++j) {
      const double shifted = f.a[i][j] + (i == j ? 1.0 : 0.0);
      if (shifted < 0.0) {
        throw Error(ErrorCode::InvalidParameters,
                    "kossakowski: a_ij + delta_ij >= 0 fails at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
  auto lambda1 = MatrixMap::from_action(
      d,
      [&](const ComplexMatrix& x) {
        ComplexMatrix out(d);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j)
            out(j, j) += x(i, i) * (f.a[i][j] + (i == j ? 1.0 : 0.0));
        return out;
      },
      "kossakowski1");
  return {std::move(lambda1), identity_map(d), true, "kossakowski", f, false, true};
}

}  // namespace detail

/// Builds L1, L2 for a catalog family after validating its parameters.
inline CPDecomposition make_decomposition(const MapFamily& spec, double tol = kDefaultTol) {
  return std::visit([tol](const auto& f) { return detail::build(f, tol); }, spec);
}

}  // namespace sepcrit
