#pragma once

// Dense kernels: Hermitian eigensolver, SVD, semidefinite Cholesky,
// characteristic polynomial, PSD square root, pseudoinverse, determinant.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "psdkit/errors.hpp"
#include "psdkit/matrix.hpp"

namespace psdkit {

struct HermEig {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns are eigenvectors, unitary
};

struct Svd {
  ComplexMatrix u;             // m x k, k = min(m, n)
  std::vector<double> sigma;   // descending, length k
  ComplexMatrix v;             // n x k
};

namespace detail {

// 2x2 unitary G with G* [[a, g], [conj g, b]] G diagonal (a, b real).
struct JacobiRotation {
  cplx pp, pq, qp, qq;
};

inline JacobiRotation jacobi_rotation(double a, double b, cplx g) {
  const double r = std::abs(g);
  const cplx phase = g / r;
  const double zeta = (b - a) / (2.0 * r);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  return {c, s, -s * std::conj(phase), c * std::conj(phase)};
}

// m <- m * G on columns p, q.
inline void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q,
                           const JacobiRotation& g) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const cplx mp = m(i, p), mq = m(i, q);
    m(i, p) = mp * g.pp + mq * g.qp;
    m(i, q) = mp * g.pq + mq * g.qq;
  }
}

// m <- G* * m on rows p, q.
inline void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q,
                        const JacobiRotation& g) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const cplx mp = m(p, j), mq = m(q, j);
    m(p, j) = std::conj(g.pp) * mp + std::conj(g.qp) * mq;
    m(q, j) = std::conj(g.pq) * mp + std::conj(g.qq) * mq;
  }
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

inline Svd svd_tall(const ComplexMatrix& m) {
  const std::size_t n = m.cols();
  ComplexMatrix u = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  constexpr int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double a = 0.0, b = 0.0;
        cplx g = 0.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
          a += std::norm(u(i, p));
          b += std::norm(u(i, q));
          g += std::conj(u(i, p)) * u(i, q);
        }
        if (std::abs(g) <= 1e-15 * std::sqrt(a * b) || std::abs(g) == 0.0) continue;
        const auto rot = jacobi_rotation(a, b, g);
        rotate_columns(u, p, q, rot);
        rotate_columns(v, p, q, rot);
        rotated = true;
      }
    if (!rotated) break;
  }
  std::vector<double> norms(n);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) s += std::norm(u(i, c));
    norms[c] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });
  Svd out{ComplexMatrix(m.rows(), n), std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    out.sigma[k] = norms[c];
    for (std::size_t i = 0; i < m.rows(); ++i)
      out.u(i, k) = norms[c] > 0.0 ? u(i, c) / norms[c] : cplx(0.0);
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, c);
  }
  return out;
}

}  // namespace detail

// Cyclic Jacobi eigensolver for Hermitian matrices.
inline HermEig herm_eig(const ComplexMatrix& h, Tolerance tol = {}) {
  require_hermitian(h, tol, "herm_eig");
  const std::size_t n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(frobenius_norm(a), 1e-300);
  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= 1e-16 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const auto rot = detail::jacobi_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
        detail::rotate_columns(a, p, q, rot);
        detail::rotate_rows(a, p, q, rot);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        detail::rotate_columns(v, p, q, rot);
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });
  HermEig out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& h, Tolerance tol = {}) {
  const auto e = herm_eig(h, tol);
  return e.values.empty() ? 0.0 : e.values.back();
}

// Thin singular value decomposition by one-sided Jacobi: m = U diag(sigma) V*.
inline Svd svd(const ComplexMatrix& m) {
  if (m.rows() >= m.cols()) return detail::svd_tall(m);
  auto t = detail::svd_tall(m.adjoint());
  return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

// Largest singular value.
inline double operator_norm(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  const auto s = svd(m);
  return s.sigma.empty() ? 0.0 : s.sigma.front();
}

// V diag(f(w)) V*
template <class F>
ComplexMatrix spectral_apply(const HermEig& e, F&& f) {
  const std::size_t n = e.values.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = e.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return out;
}

// Semidefinite Cholesky: lower-triangular T with S = T T*.
// Pivots in [-tol, tol] are treated as zero and their column is zeroed; the
// factor stays lower triangular in the original ordering.
inline ComplexMatrix psd_cholesky(const ComplexMatrix& s, Tolerance tol = {}) {
  require_hermitian(s, tol, "psd_cholesky");
  const std::size_t n = s.rows();
  ComplexMatrix t(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double pivot = s(k, k).real();
    for (std::size_t j = 0; j < k; ++j) pivot -= std::norm(t(k, j));
    if (pivot < -tol.eps)
      throw NotPsdError("not positive semidefinite", k + 1, pivot);
    if (pivot <= tol.eps) {
      // A vanishing pivot forces the rest of the column to vanish.
      for (std::size_t i = k + 1; i < n; ++i) {
        cplx r = s(i, k);
        for (std::size_t j = 0; j < k; ++j) r -= t(i, j) * std::conj(t(k, j));
        const double bound =
            std::sqrt(tol.eps * std::max(std::abs(s(i, i).real()), tol.eps)) + tol.eps;
        if (std::abs(r) > bound)
          throw NotPsdError("not positive semidefinite", i + 1, -std::abs(r));
      }
      continue;
    }
    const double d = std::sqrt(pivot);
    t(k, k) = d;
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx r = s(i, k);
      for (std::size_t j = 0; j < k; ++j) r -= t(i, j) * std::conj(t(k, j));
      t(i, k) = r / d;
    }
  }
  return t;
}

// Coefficients b_1..b_n of p(t) = t^n + sum_i (-1)^i b_i t^{n-i}, by the
// Faddeev-LeVerrier recursion. b_i is the sum of the i x i principal minors.
inline std::vector<double> charpoly_coeffs(const ComplexMatrix& h) {
  require_square(h, "charpoly_coeffs");
  const std::size_t n = h.rows();
  std::vector<double> b(n);
  // c[k] is the coefficient of t^{n-k}; c[0] = 1.
  ComplexMatrix m(n, n);
  cplx prev = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    m = h * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += prev;
    const cplx ck = -(h * m).trace() / static_cast<double>(k);
    b[k - 1] = ((k % 2 == 0) ? ck : -ck).real();
    prev = ck;
  }
  return b;
}

// Hermitian PSD square root. Eigenvalues in [-tol, 0) are clamped to zero.
inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& s, Tolerance tol = {}) {
  const auto e = herm_eig(s, tol);
  for (std::size_t k = 0; k < e.values.size(); ++k)
    if (e.values[k] < -tol.eps)
      throw NotPsdError("eigenvalue below tolerance", k + 1, e.values[k]);
  return hermitian_part(spectral_apply(e, [](double w) { return std::sqrt(std::max(w, 0.0)); }));
}

// Pseudoinverse treating singular values <= cutoff as zero.
inline ComplexMatrix pinv_absolute(const ComplexMatrix& m, double cutoff) {
  const auto s = svd(m);
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t k = 0; k < s.sigma.size(); ++k) {
    if (s.sigma[k] <= cutoff) continue;
    const double inv = 1.0 / s.sigma[k];
    for (std::size_t i = 0; i < m.cols(); ++i)
      for (std::size_t j = 0; j < m.rows(); ++j)
        out(i, j) += s.v(i, k) * inv * std::conj(s.u(j, k));
  }
  return out;
}

// Moore-Penrose pseudoinverse; singular values below tol * sigma_max are zero.
inline ComplexMatrix pinv(const ComplexMatrix& m, Tolerance tol = {}) {
  if (m.empty()) return ComplexMatrix(m.cols(), m.rows());
  const double smax = operator_norm(m);
  return pinv_absolute(m, tol.eps * smax);
}

// Determinant by LU with partial pivoting.
inline cplx det_lu(const ComplexMatrix& m) {
  require_square(m, "det_lu");
  ComplexMatrix a = m;
  const std::size_t n = a.rows();
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == cplx(0.0)) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

}  // namespace psdkit
