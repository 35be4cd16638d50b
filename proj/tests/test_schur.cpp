#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "psdkit/schur.hpp"

using namespace psdkit;
using namespace psdkit::schur;

namespace {

Parameters scalar_params(std::vector<double> roots, std::vector<std::tuple<int, int, cplx>> g) {
  Parameters p(roots.size(), 1);
  for (std::size_t k = 0; k < roots.size(); ++k) p.set_root(k, ComplexMatrix::scalar(roots[k]));
  for (auto [k, j, v] : g) p.set_gamma(k, j, ComplexMatrix::scalar(v));
  return p;
}

}  // namespace

TEST(Defect, ScalarValues) {
  EXPECT_NEAR(defect(ComplexMatrix::scalar(0.0))(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(defect(ComplexMatrix::scalar(1.0))(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(defect(ComplexMatrix::scalar(0.6))(0, 0).real(), 0.8, 1e-15);
}

TEST(Defect, SquaresBackOnMatrices) {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix t = random_contraction(rng, 3, 3, 1.0);
    const ComplexMatrix d = defect(t);
    EXPECT_LE(max_abs_diff(d * d + t.adjoint() * t, ComplexMatrix::identity(3)), 1e-10);
  }
}

TEST(Julia, Examples) {
  EXPECT_EQ(julia(ComplexMatrix::scalar(0.0)), (ComplexMatrix{{0, 1}, {1, 0}}));
  EXPECT_LE(max_abs_diff(julia(ComplexMatrix::scalar(1.0)), ComplexMatrix{{1, 0}, {0, -1}}), 1e-15);
}

TEST(Julia, Unitary) {
  Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix u = julia(random_contraction(rng, 2, 2, 1.0));
    EXPECT_LE(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(4)), 1e-10);
  }
}

TEST(UnitaryChain, BaseCasesAndUnitarity) {
  Rng rng(33);
  const auto p = random_parameters(rng, 5, 1);
  EXPECT_EQ(unitary_chain(p, 2, 2), ComplexMatrix::identity(1));
  EXPECT_LE(max_abs_diff(unitary_chain(p, 1, 2), julia(p.gamma(1, 2))), 1e-15);
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = k; j < 5; ++j) {
      const ComplexMatrix u = unitary_chain(p, k, j);
      EXPECT_LE(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(u.rows())), 1e-9);
    }
  const auto q = random_parameters(rng, 4, 2);
  const ComplexMatrix u = unitary_chain(q, 0, 3);
  EXPECT_LE(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(8)), 1e-9);
}

TEST(Contractions, RowAndColumnAreContractions) {
  Rng rng(34);
  const auto p = random_parameters(rng, 6, 2, 1.0);
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t j = k + 1; j < 6; ++j) {
      EXPECT_LE(operator_norm(row_contraction(p, k, j)), 1.0 + 1e-10);
      EXPECT_LE(operator_norm(column_contraction(p, k, j)), 1.0 + 1e-10);
    }
}

TEST(Reconstruct, TwoByTwo) {
  const cplx c(0.3, -0.4);
  const auto s = reconstruct(scalar_params({1, 1}, {{0, 1, c}}));
  EXPECT_LE(max_abs_diff(s, ComplexMatrix{{1, c}, {std::conj(c), 1}}), 1e-15);
}

TEST(Reconstruct, ThreeByThreeHandSolved) {
  const auto s = reconstruct(scalar_params({1, 1, 1}, {{0, 1, 0.5}, {1, 2, 0.5}}));
  EXPECT_NEAR(s(0, 2).real(), 0.25, 1e-15);
  EXPECT_NEAR(s(0, 2).imag(), 0.0, 1e-15);
}

TEST(Reconstruct, UnitCircleGivesRankOne) {
  Rng rng(35);
  for (int i = 0; i < 10; ++i) {
    const std::size_t d = rng.index(2, 6);
    Parameters p(d, 1);
    for (std::size_t k = 0; k < d; ++k) p.set_root(k, ComplexMatrix::scalar(1.0));
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = k + 1; j < d; ++j)
        p.set_gamma(k, j, ComplexMatrix::scalar(std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi))));
    EXPECT_EQ(oracle::rank_gram_schmidt(reconstruct(p), 1e-7), 1u);
    EXPECT_TRUE(is_rank_one(p));
  }
}

TEST(Reconstruct, RandomIsPositive) {
  Rng rng(36);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_parameters(rng, rng.index(1, 7), rng.index(1, 3), 1.0);
    const ComplexMatrix s = reconstruct(p);
    EXPECT_TRUE(is_hermitian(s));
    EXPECT_GE(min_eigenvalue(s), -1e-9 * frobenius_norm(s));
  }
}

TEST(Extract, TwoByTwo) {
  const auto p = extract(ComplexMatrix{{1, 0.5}, {0.5, 1}});
  EXPECT_NEAR(p.gamma(0, 1)(0, 0).real(), 0.5, 1e-14);
}

TEST(Extract, ThreeByThreeHandSolved) {
  const auto p = extract(ComplexMatrix{{1, 0.5, 0.25}, {0.5, 1, 0.5}, {0.25, 0.5, 1}});
  EXPECT_NEAR(std::abs(p.gamma(0, 1)(0, 0) - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.gamma(1, 2)(0, 0) - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.gamma(0, 2)(0, 0)), 0.0, 1e-14);
}

TEST(Extract, RoundTripRandomBlocks) {
  Rng rng(37);
  for (int i = 0; i < 40; ++i) {
    const std::size_t b = rng.index(1, 3), d = rng.index(2, 6);
    const ComplexMatrix s = random_psd(rng, b * d);
    for (auto root : {RootChoice::positive_sqrt, RootChoice::cholesky}) {
      const auto p = extract(s, b, root);
      validate(p);
      EXPECT_LE(max_abs_diff(reconstruct(p), s), 1e-8 * frobenius_norm(s));
    }
  }
}

TEST(Extract, CholeskyRootIsUpperTriangular) {
  Rng rng(38);
  const auto p = extract(random_psd(rng, 6), 3, RootChoice::cholesky);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t r = 1; r < 3; ++r)
      for (std::size_t c = 0; c < r; ++c) EXPECT_EQ(p.root(k)(r, c), cplx(0.0));
}

TEST(Extract, ZeroDiagonalForcesZeroGamma) {
  const ComplexMatrix s{{1, 0, 0.5}, {0, 0, 0}, {0.5, 0, 1}};
  const auto p = extract(s);
  EXPECT_EQ(p.gamma(0, 1), ComplexMatrix::scalar(0.0));
  EXPECT_EQ(p.gamma(1, 2), ComplexMatrix::scalar(0.0));
  EXPECT_LE(max_abs_diff(reconstruct(p), s), 1e-12);
}

TEST(Extract, BoundaryRoundTrip) {
  Rng rng(39);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = rng.index(2, 6);
    const ComplexMatrix s = random_psd(rng, n, rng.index(1, n - 1));
    EXPECT_LE(max_abs_diff(reconstruct(extract(s)), s), 1e-8 * frobenius_norm(s));
  }
}

TEST(Extract, RejectsIndefinite) {
  EXPECT_THROW(extract(ComplexMatrix{{1, 2}, {2, 1}}), NotPsdError);
  EXPECT_THROW(extract(ComplexMatrix::identity(5), 2), DimensionError);
}

TEST(Parameters, RejectsBadIndices) {
  Parameters p(3, 1);
  EXPECT_THROW(p.set_gamma(1, 1, ComplexMatrix::scalar(0.1)), DomainError);
  EXPECT_THROW(p.set_gamma(0, 3, ComplexMatrix::scalar(0.1)), DomainError);
  EXPECT_THROW(p.set_root(0, ComplexMatrix(2, 2)), DimensionError);
  p.set_gamma(0, 1, ComplexMatrix::scalar(1.5));
  EXPECT_THROW(validate(p), DomainError);
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(determinant_formula(scalar_params({1, 1}, {{0, 1, 0.5}})), 0.75, 1e-15);
  EXPECT_NEAR(determinant_formula(scalar_params({2, 3, 0.5}, {})), 4 * 9 * 0.25, 1e-13);
  EXPECT_NEAR(determinant_formula(scalar_params({1, 2, 1}, {{0, 1, 0.2}, {1, 2, cplx(0, 1)}})),
              0.0, 1e-15);
}

TEST(Determinant, MatchesLeibnizOnBlocks) {
  Rng rng(40);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_parameters(rng, rng.index(2, 3), 2);
    const double ref = oracle::det_leibniz(reconstruct(p)).real();
    EXPECT_NEAR(determinant_formula(p), ref, 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST(RankOne, Examples) {
  EXPECT_TRUE(is_rank_one(scalar_params({1, 1, 1}, {{0, 1, 1}, {1, 2, -1}, {0, 2, cplx(0, 1)}})));
  EXPECT_FALSE(is_rank_one(scalar_params({1, 1, 1}, {{0, 1, 1}, {1, 2, 0.5}, {0, 2, 1}})));
  EXPECT_TRUE(is_rank_one(scalar_params({2, 0}, {})));
  EXPECT_FALSE(is_rank_one(scalar_params({0, 0}, {})));
}

TEST(RankOne, MatchesNumericalRank) {
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = rng.index(2, 6);
    const ComplexMatrix s = random_psd(rng, n, rng.index(1, 2));
    const auto p = extract(s);
    EXPECT_EQ(rank_from_parameters(p), oracle::rank_gram_schmidt(s, 1e-6 * frobenius_norm(s)));
  }
}

TEST(Truncate, LeadingSubmatrix) {
  Rng rng(42);
  const auto p = random_parameters(rng, 5, 1);
  const ComplexMatrix s = reconstruct(p);
  const auto t = truncate_leading(p, 3);
  EXPECT_LE(max_abs_diff(reconstruct(t), s.block(0, 0, 3, 3)), 1e-12);
  const auto again = extract(s.block(0, 0, 3, 3));
  for (const auto& [kj, g] : t.gammas())
    EXPECT_LE(max_abs_diff(again.gamma(kj.first, kj.second), g), 1e-9);
  EXPECT_EQ(reconstruct(truncate_leading(p, 5)), s);
  EXPECT_EQ(truncate_leading(p, 1).root(0), p.root(0));
  EXPECT_THROW(truncate_leading(p, 6), DomainError);
}

TEST(CholeskyViaParams, Examples) {
  const auto t = cholesky_via_params(scalar_params({1, 1}, {{0, 1, 0.5}}));
  EXPECT_LE(max_abs_diff(t, ComplexMatrix{{1, 0}, {0.5, std::sqrt(0.75)}}), 1e-15);
  const auto diag = cholesky_via_params(scalar_params({2, 3}, {}));
  EXPECT_LE(max_abs_diff(diag, ComplexMatrix::diagonal({2, 3})), 1e-15);
  Rng rng(43);
  const auto p = random_parameters(rng, 4, 2);
  const ComplexMatrix l = cholesky_via_params(p);
  EXPECT_LE(max_abs_diff(l * l.adjoint(), reconstruct(p)), 1e-8);
}

TEST(ParameterCount, ScalarIsDSquared) {
  for (std::size_t d = 1; d < 8; ++d) EXPECT_EQ(real_parameter_count(d), d * d);
}
