#pragma once

// Dense complex matrices and the spectral primitives the rest of the library is
// built on. Dimensions of interest are small (at most a few dozen), so all
// storage is dense and row-major and all algorithms are the simple O(n^3) ones.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sepcrit/errors.hpp"

namespace sepcrit {

using Complex = std::complex<double>;

/// Relative tolerance used for Hermiticity / positivity decisions unless a
/// caller passes its own.
inline constexpr double kDefaultTol = 1e-9;

enum class Subsystem { A, B };

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

  ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(dim_ * dim_) + " entries, got " +
                      std::to_string(entries_.size()));
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix literal is not square");
      }
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// Matrix unit E_ij.
  static ComplexMatrix unit(std::size_t dim, std::size_t i, std::size_t j) {
    ComplexMatrix m(dim);
    m(i, j) = 1.0;
    return m;
  }

  /// |v><v|
  static ComplexMatrix projector(std::span<const Complex> v) {
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * dim_ + j];
  }

  std::span<const Complex> entries() const noexcept { return entries_; }

  bool operator==(const ComplexMatrix&) const = default;

  ComplexMatrix& operator+=(const ComplexMatrix& other) {
    require_same_dim(other);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& other) {
    require_same_dim(other);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& e : entries_) e *= s;
    return *this;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Complex trace() const noexcept {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e);
    return std::sqrt(s);
  }

 private:
  void require_same_dim(const ComplexMatrix& other) const {
    if (other.dim_ != dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::to_string(dim_) + " vs " + std::to_string(other.dim_));
    }
  }

  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "product of " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  ComplexMatrix c(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return c;
}

/// Tr(AB) without forming the product.
inline Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "trace_product");
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) t += a(i, j) * b(j, i);
  return t;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(s);
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTol) {
  return hermiticity_defect(a) <= tol * std::max(1.0, a.frobenius_norm());
}

/// ||AB - BA||_F
inline double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "commutator of " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  return (a * b - b * a).frobenius_norm();
}

/// A^n by repeated squaring; A^0 is the identity.
inline ComplexMatrix integer_power(const ComplexMatrix& a, unsigned n) {
  ComplexMatrix result = ComplexMatrix::identity(a.dim());
  ComplexMatrix base = a;
  bool first = true;
  while (n > 0) {
    if (n & 1U) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

struct HermitianEigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns

  /// V diag(f(lambda)) V^dagger
  template <typename F>
  ComplexMatrix map_spectrum(F&& f) const {
    const std::size_t n = eigenvalues.size();
    std::vector<double> fl(n);
    for (std::size_t k = 0; k < n; ++k) fl[k] = f(eigenvalues[k]);
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (fl[k] == 0.0) continue;
          s += eigenvectors(i, k) * fl[k] * std::conj(eigenvectors(j, k));
        }
        out(i, j) = s;
      }
    return out;
  }

  std::vector<Complex> eigenvector(std::size_t k) const {
    std::vector<Complex> v(eigenvalues.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }
};

namespace detail {

// One two-sided complex Jacobi rotation annihilating a(p,q). The 2x2 block is
// first made real symmetric by the phase of a(p,q), then rotated as in the
// real cyclic Jacobi method.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase_conj = std::conj(apq / mag);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // Columns p and q of the unitary, restricted to rows (p, q).
  const Complex upp = c, uqp = -s * phase_conj;
  const Complex upq = s, uqq = c * phase_conj;

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * upp + vkq * uqp;
    v(k, q) = vkp * upq + vkq * uqq;
  }
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic complex Jacobi eigensolver. Eigenvalues are returned ascending with
/// the matching eigenvectors as columns.
inline HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a, double tol = kDefaultTol) {
  const double norm = a.frobenius_norm();
  if (hermiticity_defect(a) > tol * std::max(1.0, norm)) {
    throw Error(ErrorCode::NonHermitian,
                "||A - A^dagger||_F = " + std::to_string(hermiticity_defect(a)));
  }
  const std::size_t n = a.dim();
  ComplexMatrix work(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) work(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  ComplexMatrix vectors = ComplexMatrix::identity(n);

  constexpr int kMaxSweeps = 100;
  const double stop = std::numeric_limits<double>::epsilon() * norm;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(work) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(work, vectors, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return work(x, x).real() < work(y, y).real();
  });

  HermitianEigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = work(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = vectors(i, order[k]);
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& a, double tol = kDefaultTol) {
  return hermitian_eig(a, tol).eigenvalues.front();
}

/// lambda^t for an eigenvalue of a PSD operator. Values inside the +-band are
/// treated as exact zeros and 0^t is 0 for every t >= 0, so A^0 is the
/// projector onto the support of A (the t -> 0+ limit).
inline double clamped_power(double lambda, double t, double band) {
  if (lambda <= band) return 0.0;
  if (t == 0.0) return 1.0;
  if (t == 1.0) return lambda;
  return std::pow(lambda, t);
}

/// Fractional power of a positive semidefinite matrix through its eigenbasis.
inline ComplexMatrix psd_power(const ComplexMatrix& a, double t, double tol = kDefaultTol) {
  const auto eig = hermitian_eig(a, tol);
  const double band = tol * a.frobenius_norm();
  const double lowest = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
  if (lowest < -band) {
    throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(lowest));
  }
  if (t < 0.0 && lowest <= band) {
    throw Error(ErrorCode::SingularNegativePower,
                "exponent " + std::to_string(t) + " of a numerically singular matrix");
  }
  return eig.map_spectrum([&](double l) { return clamped_power(l, t, band); });
}

inline ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dA, std::size_t dB,
                                   Subsystem keep) {
  if (rho.dim() != dA * dB) {
    throw Error(ErrorCode::DimensionMismatch, "partial_trace: dim " + std::to_string(rho.dim()) +
                                                  " != " + std::to_string(dA) + "*" +
                                                  std::to_string(dB));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out(dA);
    for (std::size_t i = 0; i < dA; ++i)
      for (std::size_t j = 0; j < dA; ++j)
        for (std::size_t k = 0; k < dB; ++k) out(i, j) += rho(i * dB + k, j * dB + k);
    return out;
  }
  ComplexMatrix out(dB);
  for (std::size_t k = 0; k < dB; ++k)
    for (std::size_t l = 0; l < dB; ++l)
      for (std::size_t i = 0; i < dA; ++i) out(k, l) += rho(i * dB + k, i * dB + l);
  return out;
}

/// Transposes every dB x dB block in place of its position (transpose on B).
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dA, std::size_t dB) {
  if (rho.dim() != dA * dB) {
    throw Error(ErrorCode::DimensionMismatch, "partial_transpose: dim " +
                                                  std::to_string(rho.dim()) + " != " +
                                                  std::to_string(dA) + "*" + std::to_string(dB));
  }
  ComplexMatrix out(rho.dim());
  for (std::size_t i = 0; i < dA; ++i)
    for (std::size_t j = 0; j < dA; ++j)
      for (std::size_t k = 0; k < dB; ++k)
        for (std::size_t l = 0; l < dB; ++l) out(i * dB + k, j * dB + l) = rho(i * dB + l, j * dB + k);
  return out;
}

/// Singular values in ascending order. Hermitian inputs use |eigenvalues|;
/// anything else goes through the Hermitian dilation [[0, X], [X^dagger, 0]],
/// whose spectrum is {+-sigma_i}.
inline std::vector<double> sorted_singular_values(const ComplexMatrix& x) {
  const std::size_t n = x.dim();
  std::vector<double> sv;
  sv.reserve(n);
  if (hermiticity_defect(x) <= 1e-13 * std::max(1.0, x.frobenius_norm())) {
    for (double l : hermitian_eig(x).eigenvalues) sv.push_back(std::abs(l));
  } else {
    ComplexMatrix dilation(2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        dilation(i, n + j) = x(i, j);
        dilation(n + j, i) = std::conj(x(i, j));
      }
    const auto eig = hermitian_eig(dilation);
    for (std::size_t k = n; k < 2 * n; ++k) sv.push_back(std::max(0.0, eig.eigenvalues[k]));
  }
  std::sort(sv.begin(), sv.end());
  return sv;
}

}  // namespace sepcrit
