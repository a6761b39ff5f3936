#pragma once

// Bipartite density matrices and the state families used for testing the
// criteria: SO(3)-invariant states of two spin-3/2 particles, the 3x3
// Horodecki family and seeded random ensembles.
//
// Basis convention: |ij> = |i>_A (x) |j>_B, row-major Kronecker order.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sepcrit/linalg.hpp"
#include "sepcrit/random.hpp"

namespace sepcrit {

class DensityMatrix {
 public:
  /// Validates unit trace, Hermiticity (1e-10) and positivity (-1e-9).
  DensityMatrix(ComplexMatrix matrix, std::size_t dA, std::size_t dB)
      : matrix_(std::move(matrix)), dA_(dA), dB_(dB) {
    if (dA == 0 || dB == 0 || matrix_.dim() != dA * dB) {
      throw Error(ErrorCode::DimensionMismatch, "state of dim " + std::to_string(matrix_.dim()) +
                                                    " declared as " + std::to_string(dA) + "x" +
                                                    std::to_string(dB));
    }
    const Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > 1e-10) {
      throw Error(ErrorCode::InvalidState, "trace is " + std::to_string(tr.real()));
    }
    if (hermiticity_defect(matrix_) > 1e-10) {
      throw Error(ErrorCode::InvalidState, "matrix is not Hermitian");
    }
    const double lowest = min_eigenvalue(matrix_);
    if (lowest < -1e-9) {
      throw Error(ErrorCode::InvalidState, "minimum eigenvalue " + std::to_string(lowest));
    }
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dA() const noexcept { return dA_; }
  std::size_t dB() const noexcept { return dB_; }
  std::size_t dim() const noexcept { return matrix_.dim(); }

  ComplexMatrix marginal(Subsystem keep) const { return partial_trace(matrix_, dA_, dB_, keep); }

 private:
  ComplexMatrix matrix_;
  std::size_t dA_;
  std::size_t dB_;
};

/// (1/sqrt d) sum_i |ii>
inline std::vector<Complex> maximally_entangled_vector(std::size_t d) {
  std::vector<Complex> v(d * d);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline DensityMatrix maximally_entangled_state(std::size_t d) {
  return {ComplexMatrix::projector(maximally_entangled_vector(d)), d, d};
}

/// Swap |ij> -> |ji> on C^d (x) C^d.
inline ComplexMatrix swap_operator(std::size_t d) {
  ComplexMatrix f(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// SO(3)-invariant states of two spin-3/2 particles

struct SpinMatrices {
  ComplexMatrix x, y, z;
};

/// Spin-j operators in the basis m = j, j-1, ..., -j.
inline SpinMatrices spin_matrices(double j) {
  const auto n = static_cast<std::size_t>(std::llround(2.0 * j + 1.0));
  ComplexMatrix raise(n), lower(n), z(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double m = j - static_cast<double>(a);
    z(a, a) = m;
    if (a > 0) {
      // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
      raise(a - 1, a) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
  }
  lower = raise.adjoint();
  const Complex i{0.0, 1.0};
  return {0.5 * (raise + lower), (-0.5 * i) * (raise - lower), std::move(z)};
}

/// Projectors onto total angular momentum J = 0..3 for j_A = j_B = 3/2,
/// built as spectral polynomials of J^2.
inline std::array<ComplexMatrix, 4> so3_projectors() {
  const auto spin = spin_matrices(1.5);
  const auto one = ComplexMatrix::identity(4);
  ComplexMatrix j2(16);
  for (const ComplexMatrix* s : {&spin.x, &spin.y, &spin.z}) {
    const ComplexMatrix total = kron(*s, one) + kron(one, *s);
    j2 += total * total;
  }
  std::array<ComplexMatrix, 4> projectors;
  const auto id16 = ComplexMatrix::identity(16);
  for (int big_j = 0; big_j < 4; ++big_j) {
    ComplexMatrix p = id16;
    const double casimir = big_j * (big_j + 1.0);
    for (int other = 0; other < 4; ++other) {
      if (other == big_j) continue;
      const double other_casimir = other * (other + 1.0);
      p = p * ((1.0 / (casimir - other_casimir)) * (j2 - other_casimir * id16));
    }
    projectors[static_cast<std::size_t>(big_j)] = std::move(p);
  }
  return projectors;
}

struct SO3Params {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;

  double s() const noexcept { return 1.0 - p - q - r; }

  bool admissible(double slack = 1e-12) const noexcept {
    for (double w : {p, q, r, s()})
      if (w < -slack || w > 1.0 + slack) return false;
    return true;
  }
};

/// p P0 + q P1/3 + r P2/5 + s P3/7 with s = 1 - p - q - r.
inline DensityMatrix so3_state(const SO3Params& params) {
  if (!params.admissible()) {
    throw Error(ErrorCode::InvalidParameters,
                "SO(3) weights out of [0,1]: p=" + std::to_string(params.p) +
                    " q=" + std::to_string(params.q) + " r=" + std::to_string(params.r));
  }
  static const std::array<ComplexMatrix, 4> projectors = so3_projectors();
  const std::array<double, 4> weights{params.p, params.q, params.r, params.s()};
  ComplexMatrix rho(16);
  for (std::size_t big_j = 0; big_j < 4; ++big_j) {
    rho += (weights[big_j] / (2.0 * static_cast<double>(big_j) + 1.0)) * projectors[big_j];
  }
  return {std::move(rho), 4, 4};
}

inline DensityMatrix so3_state(double p, double q, double r) { return so3_state({p, q, r}); }

// ---------------------------------------------------------------------------
// Horodecki 3x3 family

/// (2/7)|psi+><psi+| + (gamma/7) sigma+ + ((5-gamma)/7) sigma-, gamma in [2, 5].
inline DensityMatrix horodecki_state(double gamma) {
  if (!(gamma >= 2.0 && gamma <= 5.0)) {
    throw Error(ErrorCode::InvalidParameters,
                "gamma must lie in [2, 5], got " + std::to_string(gamma));
  }
  ComplexMatrix sigma_plus(9);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t idx = i * 3 + (i + 1) % 3;  // |01>, |12>, |20>
    sigma_plus(idx, idx) = 1.0 / 3.0;
  }
  const ComplexMatrix swap = swap_operator(3);
  const ComplexMatrix sigma_minus = swap * sigma_plus * swap.adjoint();
  ComplexMatrix rho = (2.0 / 7.0) * ComplexMatrix::projector(maximally_entangled_vector(3));
  rho += (gamma / 7.0) * sigma_plus;
  rho += ((5.0 - gamma) / 7.0) * sigma_minus;
  return {std::move(rho), 3, 3};
}

// ---------------------------------------------------------------------------
// Random ensembles

/// G G^dagger / Tr(G G^dagger), G Ginibre, from a fresh mt19937_64(seed).
inline ComplexMatrix random_density(std::size_t d, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorCode::InvalidParameters, "random_density needs d >= 2");
  Rng rng(seed);
  return random_density_matrix(d, rng);
}

/// Convex mixture of k random product states with flat Dirichlet weights.
inline DensityMatrix random_separable(std::size_t dA, std::size_t dB, std::size_t k,
                                      std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidParameters, "random_separable needs k >= 1");
  Rng rng(seed);
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> weights(k);
  double total = 0.0;
  for (auto& w : weights) total += (w = exponential(rng));
  ComplexMatrix rho(dA * dB);
  for (double w : weights) {
    const auto a = random_density_matrix(dA, rng);
    const auto b = random_density_matrix(dB, rng);
    rho += (w / total) * kron(a, b);
  }
  // Re-normalise away the last few ulps so the trace check is exact.
  rho *= 1.0 / rho.trace().real();
  return {std::move(rho), dA, dB};
}

/// Mixture of k pure product states, rank <= k; these sit on the boundary of
/// the state space and stress the clamping paths.
inline DensityMatrix random_pure_separable(std::size_t dA, std::size_t dB, std::size_t k,
                                           std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::InvalidParameters, "random_pure_separable needs k >= 1");
  Rng rng(seed);
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> weights(k);
  double total = 0.0;
  for (auto& w : weights) total += (w = exponential(rng));
  ComplexMatrix rho(dA * dB);
  for (double w : weights) {
    const auto a = ComplexMatrix::projector(random_pure_vector(dA, rng));
    const auto b = ComplexMatrix::projector(random_pure_vector(dB, rng));
    rho += (w / total) * kron(a, b);
  }
  rho *= 1.0 / rho.trace().real();
  return {std::move(rho), dA, dB};
}

}  // namespace sepcrit
