#pragma once

// Seeded random ensembles. All generators draw from std::mt19937_64 with the
// caller's seed and std::normal_distribution, so a given seed reproduces the
// same output on the same platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sepcrit/linalg.hpp"

namespace sepcrit {

using Rng = std::mt19937_64;

/// Vector of independent standard complex Gaussians (E|z|^2 = 1).
inline std::vector<Complex> gaussian_vector(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Complex> v(d);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = {re, im};
  }
  return v;
}

/// Haar-random unit vector.
inline std::vector<Complex> random_pure_vector(std::size_t d, Rng& rng) {
  auto v = gaussian_vector(d, rng);
  double n = 0.0;
  for (const auto& z : v) n += std::norm(z);
  n = std::sqrt(n);
  for (auto& z : v) z /= n;
  return v;
}

inline ComplexMatrix ginibre_matrix(std::size_t d, Rng& rng) {
  return ComplexMatrix(d, gaussian_vector(d * d, rng));
}

/// G G^dagger / Tr(G G^dagger) for a Ginibre matrix G.
inline ComplexMatrix random_density_matrix(std::size_t d, Rng& rng) {
  const auto g = ginibre_matrix(d, rng);
  auto rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

/// Haar-random unitary: Gram-Schmidt on the columns of a Ginibre matrix,
/// i.e. the Q factor of a QR decomposition whose R has positive diagonal.
inline ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  auto g = ginibre_matrix(d, rng);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex overlap = 0.0;
      for (std::size_t i = 0; i < d; ++i) overlap += std::conj(g(i, k)) * g(i, j);
      for (std::size_t i = 0; i < d; ++i) g(i, j) -= overlap * g(i, k);
    }
    double n = 0.0;
    for (std::size_t i = 0; i < d; ++i) n += std::norm(g(i, j));
    n = std::sqrt(n);
    for (std::size_t i = 0; i < d; ++i) g(i, j) /= n;
  }
  return g;
}

}  // namespace sepcrit
