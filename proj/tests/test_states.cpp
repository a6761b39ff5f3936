#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sepcrit/criteria.hpp"
#include "sepcrit/maps.hpp"
#include "sepcrit/states.hpp"

using namespace sepcrit;

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix(0.25 * ComplexMatrix::identity(4), 2, 2));
  try {
    DensityMatrix(0.25 * ComplexMatrix::identity(4), 2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  try {
    DensityMatrix(0.5 * ComplexMatrix::identity(4), 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidState);
  }
  const std::vector<double> indefinite{0.6, 0.6, 0.0, -0.2};
  EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal(indefinite), 2, 2), Error);
  ComplexMatrix skew = 0.25 * ComplexMatrix::identity(4);
  skew(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(skew, 2, 2), Error);
}

TEST(SO3Projectors, TracesCompletenessOrthogonality) {
  const auto p = so3_projectors();
  ComplexMatrix sum(16);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(p[j].trace().real(), 2.0 * j + 1.0, 1e-10);
    EXPECT_LE(max_abs_diff(p[j] * p[j], p[j]), 1e-10);
    sum += p[j];
    for (int k = j + 1; k < 4; ++k) EXPECT_LE((p[j] * p[k]).frobenius_norm(), 1e-10);
  }
  EXPECT_LE(max_abs_diff(sum, ComplexMatrix::identity(16)), 1e-10);
}

TEST(SO3Projectors, RankMatchesEigensolveOfJ2) {
  // Count eigenvalues of P_J near 1 with the inertia oracle.
  const auto p = so3_projectors();
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(16 - oracle::count_below(p[j], 0.5), 2 * j + 1);
  }
}

TEST(SO3Projectors, RotationInvariant) {
  const auto p = so3_projectors();
  const auto spin = spin_matrices(1.5);
  const auto one = ComplexMatrix::identity(4);
  for (const ComplexMatrix* s : {&spin.x, &spin.y, &spin.z}) {
    const auto total = kron(*s, one) + kron(one, *s);
    for (const auto& proj : p) EXPECT_LE(commutator_norm(proj, total), 1e-9);
  }
}

TEST(SpinMatrices, Commutation) {
  const auto s = spin_matrices(1.5);
  const Complex i{0.0, 1.0};
  EXPECT_LE(max_abs_diff(s.x * s.y - s.y * s.x, i * s.z), 1e-14);
  const auto casimir = s.x * s.x + s.y * s.y + s.z * s.z;
  EXPECT_LE(max_abs_diff(casimir, 3.75 * ComplexMatrix::identity(4)), 1e-14);
}

TEST(SO3State, MarginalsAndCommutation) {
  const auto tau = make_decomposition(family::TauU{default_breuer_unitary(4)}).map();
  for (const SO3Params params : {SO3Params{0.2, 0.3, 0.1}, SO3Params{0.0, 0.5, 0.5}, SO3Params{0.1, 0.0, 0.0}}) {
    const auto rho = so3_state(params);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LE(max_abs_diff(rho.marginal(Subsystem::A), 0.25 * ComplexMatrix::identity(4)), 1e-10);
    EXPECT_LE(max_abs_diff(rho.marginal(Subsystem::B), 0.25 * ComplexMatrix::identity(4)), 1e-10);
    EXPECT_LE(commutator_norm(rho.matrix(), extend_apply(tau, rho.matrix(), 4)), 1e-9);
  }
}

TEST(SO3State, SingletIsPure) {
  const auto rho = so3_state(1.0, 0.0, 0.0);
  EXPECT_NEAR(trace_product(rho.matrix(), rho.matrix()).real(), 1.0, 1e-10);
}

TEST(SO3State, RejectsInadmissible) {
  EXPECT_THROW(so3_state(0.5, 0.4, 0.3), Error);
  EXPECT_THROW(so3_state(-0.1, 0.5, 0.3), Error);
}

TEST(Horodecki, TraceAndPptBoundary) {
  for (double g : {2.0, 3.0, 3.5, 4.0, 4.5, 5.0}) {
    EXPECT_NEAR(horodecki_state(g).matrix().trace().real(), 1.0, 1e-14);
  }
  EXPECT_NEAR(ppt_check(horodecki_state(4.0)), 0.0, 1e-8);
  EXPECT_LT(ppt_check(horodecki_state(4.5)), -1e-3);
  EXPECT_GE(ppt_check(horodecki_state(3.0)), -1e-12);
  EXPECT_NEAR(oracle::min_eigenvalue(partial_transpose(horodecki_state(4.5).matrix(), 3, 3)),
              ppt_check(horodecki_state(4.5)), 1e-12);
}

TEST(Horodecki, RejectsOutOfRange) {
  try {
    horodecki_state(1.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameters);
  }
  EXPECT_THROW(horodecki_state(5.1), Error);
}

TEST(RandomDensity, TraceSpectrumDeterminism) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto rho = random_density(5, seed);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(rho), -1e-14);
    EXPECT_EQ(rho, random_density(5, seed));
  }
  EXPECT_NE(random_density(5, 1), random_density(5, 2));
}

TEST(RandomSeparable, PurityOfSingleProduct) {
  const auto rho = random_pure_separable(2, 3, 1, 4);
  const double purity = trace_product(rho.matrix(), rho.matrix()).real();
  const auto a = rho.marginal(Subsystem::A), b = rho.marginal(Subsystem::B);
  EXPECT_NEAR(purity, trace_product(a, a).real() * trace_product(b, b).real(), 1e-12);
  EXPECT_NEAR(purity, 1.0, 1e-12);

  const auto mixed = random_separable(3, 3, 1, 4);
  const auto ma = mixed.marginal(Subsystem::A), mb = mixed.marginal(Subsystem::B);
  EXPECT_NEAR(trace_product(mixed.matrix(), mixed.matrix()).real(),
              trace_product(ma, ma).real() * trace_product(mb, mb).real(), 1e-12);
}

TEST(RandomSeparable, PptAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_separable(3, 4, 5, seed);
    EXPECT_GE(ppt_check(rho), -1e-9);
    EXPECT_EQ(rho.matrix(), random_separable(3, 4, 5, seed).matrix());
  }
  EXPECT_THROW(random_separable(3, 3, 0, 1), Error);
}
