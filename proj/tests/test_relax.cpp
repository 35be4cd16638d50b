#include <gtest/gtest.h>

#include "psdkit/relax.hpp"
#include "psdkit/random.hpp"

using namespace psdkit;
using namespace psdkit::relax;

namespace {

DephasingRates4 random_rates(Rng& rng) {
  return {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
}

double b_min_eigenvalue(const DephasingRates4& g) { return min_eigenvalue(to_complex(b_matrix(g))); }

}  // namespace

TEST(Ld, TwoLevelEntries) {
  RelaxationRates r(2);
  r.set_population(0, 1, 0.7);  // |2> -> |1>
  r.set_dephasing_pure(0, 1, 0.3);
  const ComplexMatrix ld = build_ld(r);
  // 1-based (m, n) -> m + (n - 1) N: (1,1)=1, (2,1)=2, (1,2)=3, (2,2)=4
  ComplexMatrix expected(4, 4);
  expected(0, 3) = 0.7;
  expected(3, 3) = -0.7;
  expected(1, 1) = -0.3;
  expected(2, 2) = -0.3;
  EXPECT_EQ(ld, expected);
}

TEST(Ld, ZeroRates) { EXPECT_EQ(build_ld(RelaxationRates(3)), ComplexMatrix(9, 9)); }

TEST(Ld, PopulationColumnsSumToZero) {
  Rng rng(81);
  for (std::size_t n = 2; n <= 5; ++n) {
    RelaxationRates r(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = 0; m < n; ++m)
        if (k != m) r.set_population(k, m, rng.uniform());
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = k + 1; m < n; ++m) {
        r.set_dephasing_pure(k, m, rng.uniform());
        r.set_dephasing_population(k, m, rng.uniform());
      }
    const ComplexMatrix ld = build_ld(r);
    for (std::size_t l = 0; l < n; ++l) {
      cplx sum = 0.0;
      for (std::size_t m = 0; m < n; ++m) sum += ld(ld_index(m, m, n), ld_index(l, l, n));
      EXPECT_NEAR(std::abs(sum), 0.0, 1e-15);
    }
  }
}

TEST(Ld, RejectsInvalidRates) {
  RelaxationRates r(2);
  r.set_population(0, 1, -1.0);
  EXPECT_THROW(build_ld(r), DomainError);
  RelaxationRates s(2);
  s.gamma_d[1] = 0.5;  // asymmetric
  EXPECT_THROW(build_ld(s), DomainError);
}

TEST(GammaTot, Examples) {
  EXPECT_DOUBLE_EQ(gamma_tot({1, 1, 1, 1, 1, 1}), 3.0);
  EXPECT_DOUBLE_EQ(gamma_tot({}), 0.0);
  EXPECT_DOUBLE_EQ(gamma_tot({0, 1, 0, 0, 1, 0}), 1.0);
}

TEST(BMatrix, Examples) {
  const auto b = b_matrix({0.4, 0.4, 0.4, 0.4, 0.4, 0.4});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(b[i][j], i == j ? 0.4 : 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(b_matrix({0, 1, 0, 0, 1, 0})[0][0], -1.0);
  for (const auto& row : b_matrix({}))
    for (double x : row) EXPECT_EQ(x, 0.0);
}

TEST(BMatrix, DiagonalInequalitiesMatchEntries) {
  Rng rng(82);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_rates(rng);
    const auto b = b_matrix(g);
    const auto v = inequality_values(g);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(v.diagonal[k], 2 * b[k][k], 1e-14);
  }
}

TEST(CpConstraints, EqualRatesPass) {
  const auto r = cp_constraints_n4({1, 1, 1, 1, 1, 1});
  EXPECT_TRUE(r.verdict);
  EXPECT_TRUE(r.inequality_verdict);
  ASSERT_TRUE(r.g12 && r.g23 && r.g13);
  EXPECT_EQ(*r.g12, 0.0);
  EXPECT_EQ(*r.g23, 0.0);
  EXPECT_EQ(*r.g13, 0.0);
}

TEST(CpConstraints, NegativeDiagonalFails) {
  const auto r = cp_constraints_n4({0, 1, 0, 0, 1, 0});
  EXPECT_FALSE(r.verdict);
  EXPECT_FALSE(r.diag_ok[0]);
  EXPECT_DOUBLE_EQ(r.b[0][0], -1.0);
  EXPECT_FALSE(r.inequality_verdict);
}

TEST(CpConstraints, RejectsNegativeRates) {
  EXPECT_THROW(cp_constraints_n4({-1, 0, 0, 0, 0, 0}), DomainError);
}

TEST(CpConstraints, AgreesWithEigenvalueTest) {
  Rng rng(83);
  for (int i = 0; i < 1000; ++i) {
    const auto g = random_rates(rng);
    EXPECT_EQ(cp_constraints_n4(g).verdict, b_min_eigenvalue(g) >= -1e-10);
  }
}

TEST(CpConstraints, ZeroDiagonalBranch) {
  // b11 = 0: Gamma13 + Gamma24 = Gamma_tot.
  const DephasingRates4 g{0.5, 1.0, 0.5, 0.5, 1.0, 0.5};
  const auto b = b_matrix(g);
  ASSERT_NEAR(b[0][0], 0.0, 1e-15);
  const auto r = cp_constraints_n4(g);
  EXPECT_EQ(r.verdict, b_min_eigenvalue(g) >= -1e-10);
  EXPECT_FALSE(r.degenerate.empty());
}

TEST(CpConstraints, DeterminantInequalityIsOnlyNecessaryAtTheBoundary) {
  // b = [[2, 0, 1.25], [0, 0, 0], [1.25, 0, 0.5]] satisfies every closed-form
  // inequality but is not positive.
  const DephasingRates4 g{1.0, 0.25, 2.5, 0.0, 0.25, 1.0};
  const auto b = b_matrix(g);
  ASSERT_NEAR(b[1][1], 0.0, 1e-15);
  ASSERT_NEAR(b[0][2], 1.25, 1e-15);
  const auto v = inequality_values(g);
  EXPECT_GE(v.g12, 0.0);
  EXPECT_GE(v.g23, 0.0);
  EXPECT_GE(v.g13, 0.0);
  for (double x : v.diagonal) EXPECT_GE(x, 0.0);
  const auto r = cp_constraints_n4(g);
  EXPECT_FALSE(r.verdict);
  EXPECT_LT(b_min_eigenvalue(g), 0.0);
}

TEST(Identity, ClosedFormsMatchCompactForms) {
  Rng rng(84);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_rates(rng);
    const auto id = inequality_identity_check(g);
    EXPECT_TRUE(id.holds);
    const auto b = b_matrix(g);
    const auto v = inequality_values(g);
    auto sq = [](double x) { return x * x; };
    EXPECT_NEAR(v.g12, 4 * (b[0][0] * b[1][1] - sq(b[0][1])), 1e-10);
    EXPECT_NEAR(v.g23, 4 * (b[1][1] * b[2][2] - sq(b[1][2])), 1e-10);
  }
}

TEST(Wrapper, PureDephasingFromFullRates) {
  RelaxationRates r(4);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t m = k + 1; m < 4; ++m) r.set_dephasing_pure(k, m, 1.0);
  EXPECT_TRUE(cp_constraints(r).verdict);
  EXPECT_THROW(cp_constraints(RelaxationRates(3)), CapacityError);
}
