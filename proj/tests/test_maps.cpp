#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sepcrit/maps.hpp"
#include "sepcrit/random.hpp"
#include "sepcrit/states.hpp"

using namespace sepcrit;

namespace {

ComplexMatrix trace_times_identity(const ComplexMatrix& x) {
  return x.trace() * ComplexMatrix::identity(x.dim());
}

ComplexMatrix diagonal_part(const ComplexMatrix& x) {
  ComplexMatrix out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out(i, i) = x(i, i);
  return out;
}

// Defining formulas written out directly, without the library helpers.
ComplexMatrix reduction_formula(const ComplexMatrix& x) { return trace_times_identity(x) - x; }

ComplexMatrix phi_formula(const ComplexMatrix& x, std::size_t k) {
  const std::size_t d = x.dim();
  ComplexMatrix out = static_cast<double>(d - k) * diagonal_part(x);
  for (std::size_t i = 1; i <= k; ++i) {
    ComplexMatrix shifted(d);
    for (std::size_t a = 0; a < d; ++a) shifted((a + i) % d, (a + i) % d) = x(a, a);
    out += shifted;
  }
  return out - x;
}

ComplexMatrix breuer_formula(const ComplexMatrix& u, const ComplexMatrix& x) {
  return trace_times_identity(x) - u * x.transpose() * u.adjoint() - x;
}

void expect_is_cp_pair(const CPDecomposition& dec) {
  EXPECT_TRUE(is_cp(dec.lambda1, 1e-9)) << dec.name;
  EXPECT_TRUE(is_cp(dec.lambda2, 1e-9)) << dec.name;
}

}  // namespace

TEST(MatrixMap, RejectsNonSquareDimension) {
  try {
    MatrixMap(ComplexMatrix::identity(5), "bad");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(ApplyMap, IdentityReductionAndChoiMap) {
  Rng rng(1);
  const auto x = ginibre_matrix(3, rng);
  EXPECT_EQ(apply_map(identity_map(3), x), x);

  const auto r = make_decomposition(family::Reduction{3}).map();
  EXPECT_LE(max_abs_diff(apply_map(r, ComplexMatrix::identity(3)), 2.0 * ComplexMatrix::identity(3)), 1e-15);

  const auto phi = make_decomposition(family::PhiDK{3, 1}).map();
  const auto image = apply_map(phi, ComplexMatrix::unit(3, 0, 0));
  EXPECT_LE(max_abs_diff(image, ComplexMatrix::unit(3, 0, 0) + ComplexMatrix::unit(3, 1, 1)), 1e-15);

  EXPECT_THROW(apply_map(phi, ComplexMatrix::identity(2)), Error);
}

TEST(ExtendApply, TranspositionIsPartialTranspose) {
  Rng rng(2);
  const auto rho = random_density_matrix(6, rng);
  EXPECT_EQ(extend_apply(transposition_map(3), rho, 2), partial_transpose(rho, 2, 3));
  EXPECT_EQ(extend_apply(identity_map(3), rho, 2), rho);
}

TEST(ExtendApply, ReductionOnMaximallyEntangled) {
  const auto psi = maximally_entangled_state(3);
  const auto r = make_decomposition(family::Reduction{3}).map();
  const auto x = extend_apply(r, psi.matrix(), 3);
  EXPECT_NEAR(min_eigenvalue(x), 1.0 / 3.0 - 1.0, 1e-12);
  EXPECT_NEAR(oracle::min_eigenvalue(x), -2.0 / 3.0, 1e-12);
  // X = rho_A (x) 1 - rho
  const auto expected = kron(psi.marginal(Subsystem::A), ComplexMatrix::identity(3)) - psi.matrix();
  EXPECT_LE(max_abs_diff(x, expected), 1e-15);
}

TEST(ExtendApply, DimensionMismatch) {
  EXPECT_THROW(extend_apply(identity_map(3), ComplexMatrix::identity(8), 2), Error);
}

TEST(IsCp, Examples) {
  EXPECT_TRUE(is_cp(trace_map(3)));
  EXPECT_EQ(trace_map(3).choi(), ComplexMatrix::identity(9));
  const auto r = make_decomposition(family::Reduction{3}).map();
  EXPECT_FALSE(is_cp(r));
  // Choi(R) = 1 - d P+, lowest eigenvalue 1 - d.
  EXPECT_NEAR(choi_min_eigenvalue(r), -2.0, 1e-12);
  EXPECT_NEAR(oracle::min_eigenvalue(r.choi()), -2.0, 1e-12);
  const auto theta = make_decomposition(family::Theta{2.0, {1.0, 1.0, 1.0}});
  EXPECT_TRUE(is_cp(theta.lambda1));
  EXPECT_FALSE(is_cp(theta.map()));
}

TEST(IsPositiveSampled, Examples) {
  EXPECT_TRUE(is_positive_sampled(identity_map(3), 50, 7).positive);
  EXPECT_TRUE(is_positive_sampled(make_decomposition(family::Reduction{3}).map(), 200, 7).positive);
  const auto negative = MatrixMap(-1.0 * identity_map(3).choi(), "minus");
  const auto report = is_positive_sampled(negative, 1, 7);
  EXPECT_FALSE(report.positive);
  EXPECT_EQ(report.witness.size(), 3u);
  EXPECT_THROW(is_positive_sampled(identity_map(3), 0, 7), Error);
}

TEST(IsPositiveSampled, TranspositionPositiveButNotCp) {
  EXPECT_TRUE(is_positive_sampled(transposition_map(3), 100, 3).positive);
  EXPECT_FALSE(is_cp(transposition_map(3)));
}

TEST(Choi, TranspositionIsSwap) {
  for (std::size_t d : {2u, 3u, 4u}) EXPECT_EQ(transposition_map(d).choi(), swap_operator(d));
}

TEST(Decomposition, ReductionMatchesFormula) {
  const auto dec = make_decomposition(family::Reduction{3});
  EXPECT_TRUE(dec.lambda2_is_identity);
  expect_is_cp_pair(dec);
  EXPECT_LE(max_abs_diff(dec.map().choi(), oracle::choi_of(3, reduction_formula)), 1e-12);
  EXPECT_FALSE(dec.indecomposable);
}

TEST(Decomposition, IdentityLambda2IsExactPlusProjector) {
  ComplexMatrix expected(9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) expected(i * 3 + i, j * 3 + j) = 1.0;
  for (const MapFamily& f : std::vector<MapFamily>{family::Reduction{3}, family::PhiDK{3, 1},
                                                  family::Theta{2.0, {1.0, 1.0, 1.0}}}) {
    const auto dec = make_decomposition(f);
    ASSERT_TRUE(dec.lambda2_is_identity);
    EXPECT_EQ(dec.lambda2.choi(), expected) << dec.name;
  }
}

TEST(Decomposition, PhiMatchesFormula) {
  for (std::size_t d : {3u, 4u}) {
    for (std::size_t k = 0; k < d; ++k) {
      const auto dec = make_decomposition(family::PhiDK{d, k});
      expect_is_cp_pair(dec);
      const auto oracle_choi = oracle::choi_of(d, [k](const ComplexMatrix& x) { return phi_formula(x, k); });
      EXPECT_LE(max_abs_diff(dec.map().choi(), oracle_choi), 1e-12) << "d=" << d << " k=" << k;
      EXPECT_EQ(dec.indecomposable, k >= 1 && k <= d - 2);
    }
  }
}

TEST(Decomposition, PhiTopKIsReduction) {
  for (std::size_t d : {3u, 4u}) {
    const auto phi = make_decomposition(family::PhiDK{d, d - 1}).map();
    const auto r = make_decomposition(family::Reduction{d}).map();
    EXPECT_LE(max_abs_diff(phi.choi(), r.choi()), 1e-12);
  }
}

TEST(Decomposition, ChoiMapEqualsTheta211) {
  const auto phi = make_decomposition(family::PhiDK{3, 1});
  const auto theta = make_decomposition(family::Theta{2.0, {1.0, 1.0, 1.0}});
  EXPECT_LE(max_abs_diff(phi.map().choi(), theta.map().choi()), 1e-12);
  EXPECT_TRUE(theta.indecomposable);
  EXPECT_TRUE(phi.indecomposable);
}

TEST(Decomposition, PhiRejectsLargeK) {
  try {
    make_decomposition(family::PhiDK{3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameters);
  }
}

TEST(Decomposition, BreuerHallMatchesFormulaAndRelation) {
  const auto v = default_breuer_unitary(4);
  EXPECT_LE((v.adjoint() * v - ComplexMatrix::identity(4)).frobenius_norm(), 1e-15);
  EXPECT_EQ(v.transpose(), -1.0 * v);

  const auto dec = make_decomposition(family::BreuerHall{v});
  expect_is_cp_pair(dec);
  EXPECT_TRUE(dec.indecomposable);
  const auto oracle_choi = oracle::choi_of(4, [&](const ComplexMatrix& x) { return breuer_formula(v, x); });
  EXPECT_LE(max_abs_diff(dec.map().choi(), oracle_choi), 1e-12);

  const auto tau = make_decomposition(family::TauU{v});
  EXPECT_LE(max_abs_diff(dec.lambda1.choi(), 2.0 * tau.lambda2.choi()), 1e-12);
}

TEST(Decomposition, BreuerHallTildeMatchesFormula) {
  const auto v = default_breuer_unitary(4);
  const auto dec = make_decomposition(family::BreuerHallTilde{v});
  expect_is_cp_pair(dec);
  const auto oracle_choi = oracle::choi_of(4, [&](const ComplexMatrix& x) {
    return trace_times_identity(x) + v * x.transpose() * v.adjoint() - x;
  });
  EXPECT_LE(max_abs_diff(dec.map().choi(), oracle_choi), 1e-12);
}

TEST(Decomposition, BreuerHallRejectsSymmetricU) {
  try {
    make_decomposition(family::BreuerHall{ComplexMatrix::identity(4)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAntisymmetric);
  }
  // Antisymmetric but U^dagger U > 1.
  const auto big = 2.0 * default_breuer_unitary(4);
  EXPECT_THROW(make_decomposition(family::BreuerHall{big}), Error);
}

TEST(Decomposition, BreuerHallAcceptsContraction) {
  // Odd d: antisymmetric partial isometry.
  const ComplexMatrix u{{0.0, 1.0, 0.0}, {-1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  const auto dec = make_decomposition(family::BreuerHall{u});
  expect_is_cp_pair(dec);
  EXPECT_TRUE(is_positive_sampled(dec.map(), 200, 5).positive);
}

TEST(Decomposition, TauMatchesFormula) {
  Rng rng(9);
  const auto u = random_unitary(3, rng);
  const auto dec = make_decomposition(family::TauU{u});
  expect_is_cp_pair(dec);
  EXPECT_FALSE(dec.lambda2_is_identity);
  const auto oracle_choi = oracle::choi_of(3, [&](const ComplexMatrix& x) { return u * x.transpose() * u.adjoint(); });
  EXPECT_LE(max_abs_diff(dec.map().choi(), oracle_choi), 1e-12);
  EXPECT_THROW(make_decomposition(family::TauU{2.0 * u}), Error);
}

TEST(Decomposition, ThetaMatchesFormula) {
  const std::vector<double> c{0.5, 2.0, 1.5};
  const double a = 2.2;
  const auto dec = make_decomposition(family::Theta{a, c});
  expect_is_cp_pair(dec);
  const std::vector<double> weights{c[2], c[0], c[1]};
  const auto w = ComplexMatrix::diagonal(weights);
  const auto oracle_choi = oracle::choi_of(3, [&](const ComplexMatrix& x) {
    ComplexMatrix shifted(3);  // eps(S X S^dagger)
    for (std::size_t i = 0; i < 3; ++i) shifted((i + 1) % 3, (i + 1) % 3) = x(i, i);
    return a * diagonal_part(x) + w * shifted - x;
  });
  EXPECT_LE(max_abs_diff(dec.map().choi(), oracle_choi), 1e-12);
}

TEST(Decomposition, ThetaRejectsNonPositive) {
  EXPECT_THROW(make_decomposition(family::Theta{1.0, {1.0, 1.0, 1.0}}), Error);
  EXPECT_THROW(make_decomposition(family::Theta{2.0, {0.5, 0.5, 0.5}}), Error);
}

TEST(Decomposition, KossakowskiFlagsAndFormula) {
  const std::vector<std::vector<double>> a{{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}};
  const auto dec = make_decomposition(family::Kossakowski{a});
  EXPECT_TRUE(dec.positivity_unverified);
  expect_is_cp_pair(dec);
  // This parameter set is the Choi map.
  const auto phi = make_decomposition(family::PhiDK{3, 1}).map();
  EXPECT_LE(max_abs_diff(dec.map().choi(), phi.choi()), 1e-12);

  const std::vector<std::vector<double>> bad{{-2.0, 1.0}, {1.0, 0.0}};
  EXPECT_THROW(make_decomposition(family::Kossakowski{bad}), Error);
}

TEST(ThetaPositivity, Examples) {
  auto t = theta_positivity(2.0, {1.0, 1.0, 1.0});
  EXPECT_TRUE(t.positive);
  EXPECT_TRUE(t.indecomposable);
  t = theta_positivity(3.0, {1.0, 1.0, 1.0});
  EXPECT_TRUE(t.positive);
  EXPECT_FALSE(t.indecomposable);
  t = theta_positivity(1.0, {1.0, 1.0, 1.0});
  EXPECT_FALSE(t.positive);
  EXPECT_THROW(theta_positivity(-1.0, {1.0, 1.0, 1.0}), Error);
  EXPECT_THROW(theta_positivity(2.0, {1.0, 0.0, 1.0}), Error);
}

TEST(Catalog, SeparableStatesStayPositive) {
  std::vector<MapFamily> catalog{family::Reduction{3}, family::PhiDK{3, 1}, family::PhiDK{3, 0},
                                 family::Theta{2.0, {1.0, 1.0, 1.0}},
                                 family::TauU{ComplexMatrix::identity(3)}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_separable(3, 3, 4, seed);
    for (const auto& f : catalog) {
      const auto m = make_decomposition(f).map();
      EXPECT_GE(min_eigenvalue(extend_apply(m, rho.matrix(), 3)), -1e-9);
    }
  }
}
