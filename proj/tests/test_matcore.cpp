#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psdkit/composite.hpp"
#include "psdkit/errors.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/random.hpp"

using namespace psdkit;

TEST(HermEig, TwoByTwoSymmetric) {
  const auto e = herm_eig(ComplexMatrix{{2, 1}, {1, 2}});
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], 3.0, 1e-12);
  EXPECT_NEAR(e.values[1], 1.0, 1e-12);
}

TEST(HermEig, Identity) {
  for (double w : herm_eig(ComplexMatrix::identity(5)).values) EXPECT_NEAR(w, 1.0, 1e-14);
}

TEST(HermEig, RandomRoundTrip) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = rng.index(1, 9);
    const ComplexMatrix h = random_hermitian(rng, n);
    const auto e = herm_eig(h);
    const ComplexMatrix back = e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint();
    EXPECT_LE(max_abs_diff(back, h), 1e-9 * std::max(1.0, frobenius_norm(h)));
    EXPECT_LE(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(n)), 1e-9);
    EXPECT_TRUE(std::is_sorted(e.values.rbegin(), e.values.rend()));
  }
}

TEST(HermEig, RejectsNonHermitianAndNonSquare) {
  EXPECT_THROW(herm_eig(ComplexMatrix{{1, 2}, {3, 4}}), DomainError);
  EXPECT_THROW(herm_eig(ComplexMatrix(2, 3)), DomainError);
}

TEST(PsdCholesky, Diagonal) {
  const auto t = psd_cholesky(ComplexMatrix::diagonal({4, 1}));
  EXPECT_LE(max_abs_diff(t, ComplexMatrix::diagonal({2, 1})), 1e-14);
}

TEST(PsdCholesky, RankOne) {
  const auto t = psd_cholesky(ComplexMatrix{{1, 1}, {1, 1}});
  EXPECT_LE(max_abs_diff(t, ComplexMatrix{{1, 0}, {1, 0}}), 1e-14);
}

TEST(PsdCholesky, IndefiniteReportsIndex) {
  try {
    psd_cholesky(ComplexMatrix{{1, 0.5}, {0.5, -1}});
    FAIL() << "expected NotPsdError";
  } catch (const NotPsdError& e) {
    EXPECT_EQ(e.index(), 2u);
    EXPECT_NEAR(e.value(), -1.25, 1e-14);
  }
}

TEST(PsdCholesky, RandomLowRank) {
  Rng rng(12);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = rng.index(2, 8);
    const ComplexMatrix s = random_psd(rng, n, rng.index(1, n));
    const auto t = psd_cholesky(s, Tolerance(1e-10 * frobenius_norm(s)));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) EXPECT_EQ(t(r, c), cplx(0.0));
    EXPECT_LE(max_abs_diff(t * t.adjoint(), s), 1e-8 * frobenius_norm(s));
  }
}

TEST(Charpoly, Examples) {
  auto b = charpoly_coeffs(ComplexMatrix::identity(2));
  EXPECT_NEAR(b[0], 2.0, 1e-14);
  EXPECT_NEAR(b[1], 1.0, 1e-14);
  b = charpoly_coeffs(ComplexMatrix::diagonal({1, 0}));
  EXPECT_NEAR(b[0], 1.0, 1e-14);
  EXPECT_NEAR(b[1], 0.0, 1e-14);
}

TEST(Charpoly, MatchesPrincipalMinorSums) {
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = rng.index(1, 6);
    const ComplexMatrix h = random_hermitian(rng, n);
    const auto b = charpoly_coeffs(h);
    const auto ref = oracle::principal_minor_sums(h);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(b[k], ref[k], 1e-8 * std::pow(3.0, k + 1));
  }
}

TEST(Charpoly, MatchesEigenvalueProducts) {
  Rng rng(14);
  const ComplexMatrix h = random_hermitian(rng, 4);
  const auto b = charpoly_coeffs(h);
  const auto e = oracle::elementary_symmetric(herm_eig(h).values);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(b[k], e[k], 1e-8);
}

TEST(Charpoly, PureStateHasOnlyFirstCoefficient) {
  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    const auto b = charpoly_coeffs(random_pure_state(rng, 4));
    EXPECT_NEAR(b[0], 1.0, 1e-12);
    for (std::size_t k = 1; k < b.size(); ++k) EXPECT_NEAR(b[k], 0.0, 1e-12);
  }
}

TEST(Charpoly, RejectsNonSquare) { EXPECT_THROW(charpoly_coeffs(ComplexMatrix(2, 3)), DomainError); }

TEST(MatrixSqrt, Examples) {
  EXPECT_LE(max_abs_diff(matrix_sqrt_psd(ComplexMatrix::diagonal({4, 9})),
                         ComplexMatrix::diagonal({2, 3})),
            1e-14);
  EXPECT_LE(max_abs_diff(matrix_sqrt_psd(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)),
            1e-14);
}

TEST(MatrixSqrt, SquaresBack) {
  Rng rng(16);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix s = random_psd(rng, rng.index(1, 7));
    const ComplexMatrix r = matrix_sqrt_psd(s);
    EXPECT_TRUE(is_hermitian(r));
    EXPECT_LE(max_abs_diff(r * r, s), 1e-8 * frobenius_norm(s));
  }
}

TEST(MatrixSqrt, RejectsNegativeEigenvalue) {
  EXPECT_THROW(matrix_sqrt_psd(ComplexMatrix::diagonal({1, -0.5})), NotPsdError);
}

TEST(Pinv, Examples) {
  EXPECT_LE(max_abs_diff(pinv(ComplexMatrix::diagonal({2, 0})), ComplexMatrix::diagonal({0.5, 0})),
            1e-14);
  Rng rng(17);
  const ComplexMatrix u = random_unitary(rng, 4);
  EXPECT_LE(max_abs_diff(pinv(u), u.adjoint()), 1e-10);
}

TEST(Pinv, PenroseIdentities) {
  Rng rng(18);
  for (int i = 0; i < 20; ++i) {
    const std::size_t r = rng.index(1, 6), c = rng.index(1, 6);
    ComplexMatrix m = random_matrix(rng, r, c);
    if (i % 2) m = m * random_matrix(rng, c, c).block(0, 0, c, 1) * random_matrix(rng, 1, c);
    const ComplexMatrix p = pinv(m);
    EXPECT_LE(max_abs_diff(m * p * m, m), 1e-8 * std::max(1.0, frobenius_norm(m)));
    EXPECT_LE(max_abs_diff(p * m * p, p), 1e-8 * std::max(1.0, frobenius_norm(p)));
    EXPECT_TRUE(is_hermitian(m * p, Tolerance(1e-8)));
    EXPECT_TRUE(is_hermitian(p * m, Tolerance(1e-8)));
  }
}

TEST(Det, Examples) {
  EXPECT_NEAR(std::abs(det_lu(ComplexMatrix::identity(4)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(det_lu(ComplexMatrix::diagonal({2, 3})) - 6.0), 0.0, 1e-15);
}

TEST(Det, MatchesEigenvalueProductAndLeibniz) {
  Rng rng(19);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = rng.index(1, 6);
    const ComplexMatrix h = random_hermitian(rng, n);
    double prod = 1.0;
    for (double w : herm_eig(h).values) prod *= w;
    const cplx det = det_lu(h);
    EXPECT_NEAR(det.real(), prod, 1e-8 * std::max(1.0, std::abs(prod)));
    EXPECT_LE(std::abs(det - oracle::det_leibniz(h)), 1e-8 * std::max(1.0, std::abs(det)));
  }
}

TEST(Vec, ColumnMajor) {
  const ComplexMatrix v{{1, 2}, {3, 4}};
  const ComplexMatrix w = vec(v);
  ASSERT_EQ(w.rows(), 4u);
  EXPECT_EQ(w(0, 0), cplx(1));
  EXPECT_EQ(w(1, 0), cplx(3));
  EXPECT_EQ(w(2, 0), cplx(2));
  EXPECT_EQ(w(3, 0), cplx(4));
  EXPECT_EQ(vec(ComplexMatrix::scalar(7))(0, 0), cplx(7));
}

TEST(Vec, RoundTrip) {
  Rng rng(20);
  const ComplexMatrix v = random_matrix(rng, 3, 5);
  EXPECT_EQ(unvec(vec(v), 3, 5), v);
  EXPECT_THROW(unvec(vec(v), 4, 4), DimensionError);
}

TEST(PartialTrace, KroneckerOracle) {
  Rng rng(21);
  const ComplexMatrix a = random_matrix(rng, 3, 3), b = random_matrix(rng, 2, 2);
  const ComplexMatrix ab = oracle::kron(a, b);
  EXPECT_LE(max_abs_diff(partial_trace(ab, 3, 2, Subsystem::second), a * b.trace()), 1e-12);
  EXPECT_LE(max_abs_diff(partial_trace(ab, 3, 2, Subsystem::first), b * a.trace()), 1e-12);
  const ComplexMatrix ib = oracle::kron(ComplexMatrix::identity(3), b);
  EXPECT_LE(max_abs_diff(partial_trace(ib, 3, 2, Subsystem::first), b * cplx(3)), 1e-12);
  EXPECT_THROW(partial_trace(ab, 4, 2, Subsystem::first), DimensionError);
}

TEST(PartialTranspose, KroneckerOracle) {
  Rng rng(22);
  const ComplexMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 3, 3);
  EXPECT_LE(max_abs_diff(partial_transpose(oracle::kron(a, b), 2, 3), oracle::kron(a, b.transpose())),
            1e-14);
  const ComplexMatrix m = random_matrix(rng, 6, 6);
  EXPECT_EQ(partial_transpose(partial_transpose(m, 2, 3), 2, 3), m);
  const ComplexMatrix d = ComplexMatrix::diagonal({1, 2, 3, 4});
  EXPECT_EQ(partial_transpose(d, 2, 2), d);
  EXPECT_THROW(partial_transpose(m, 4, 2), DimensionError);
}

TEST(Kron, MatchesOracle) {
  Rng rng(23);
  const ComplexMatrix a = random_matrix(rng, 2, 3), b = random_matrix(rng, 3, 2);
  EXPECT_EQ(kron(a, b), oracle::kron(a, b));
}

TEST(Svd, Reconstructs) {
  Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix m = random_matrix(rng, rng.index(1, 6), rng.index(1, 6));
    const auto s = svd(m);
    ComplexMatrix back(m.rows(), m.cols());
    for (std::size_t k = 0; k < s.sigma.size(); ++k)
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          back(r, c) += s.u(r, k) * s.sigma[k] * std::conj(s.v(c, k));
    EXPECT_LE(max_abs_diff(back, m), 1e-10);
  }
}
