#pragma once

// Toeplitz and block-Toeplitz matrices, the index-reversal permutations that
// realize (partial) transposes, and PPT checks via Schur parameters.

#include <algorithm>
#include <numbers>
#include <cstddef>
#include <string>
#include <vector>

#include "psdkit/composite.hpp"
#include "psdkit/errors.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/matrix.hpp"
#include "psdkit/positivity.hpp"
#include "psdkit/random.hpp"
#include "psdkit/schur.hpp"

namespace psdkit::toeplitz {

// Symbols a_{-(n-1)} .. a_{n-1}; entry (i, j) is a_{i-j}.
struct ToeplitzSpec {
  std::size_t n = 0;
  std::vector<cplx> symbols;  // symbols[k + n - 1] = a_k

  cplx at(std::ptrdiff_t k) const {
    return symbols.at(static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(n) - 1));
  }
};

// Block symbols a_{-(m-1)} .. a_{m-1}, each block x block.
struct BlockToeplitzSpec {
  std::size_t m = 0;
  std::size_t block = 0;
  std::vector<ComplexMatrix> symbols;  // symbols[k + m - 1] = a_k

  const ComplexMatrix& at(std::ptrdiff_t k) const {
    return symbols.at(static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(m) - 1));
  }
};

// Hermitian spec from a_0 .. a_{n-1} with a_{-k} = conj(a_k).
inline ToeplitzSpec hermitian_spec(const std::vector<cplx>& first_column) {
  const std::size_t n = first_column.size();
  ToeplitzSpec s{n, std::vector<cplx>(n ? 2 * n - 1 : 0)};
  for (std::size_t k = 0; k < n; ++k) {
    s.symbols[n - 1 + k] = first_column[k];
    s.symbols[n - 1 - k] = std::conj(first_column[k]);
  }
  if (n) s.symbols[n - 1] = first_column[0].real();
  return s;
}

// Hermitian block spec from a_0 .. a_{m-1} with a_{-k} = a_k*.
inline BlockToeplitzSpec hermitian_block_spec(const std::vector<ComplexMatrix>& first_column) {
  const std::size_t m = first_column.size();
  const std::size_t b = m ? first_column.front().rows() : 0;
  BlockToeplitzSpec s{m, b, std::vector<ComplexMatrix>(m ? 2 * m - 1 : 0)};
  for (std::size_t k = 0; k < m; ++k) {
    s.symbols[m - 1 + k] = first_column[k];
    s.symbols[m - 1 - k] = first_column[k].adjoint();
  }
  if (m) s.symbols[m - 1] = hermitian_part(first_column[0]);
  return s;
}

inline ComplexMatrix build_toeplitz(const ToeplitzSpec& spec) {
  if (spec.symbols.size() != (spec.n ? 2 * spec.n - 1 : 0))
    throw DimensionError("build_toeplitz: need 2n-1 symbols");
  ComplexMatrix a(spec.n, spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j < spec.n; ++j)
      a(i, j) = spec.at(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j));
  return a;
}

inline ComplexMatrix build_block_toeplitz(const BlockToeplitzSpec& spec) {
  if (spec.symbols.size() != (spec.m ? 2 * spec.m - 1 : 0))
    throw DimensionError("build_block_toeplitz: need 2m-1 symbols");
  const std::size_t b = spec.block;
  ComplexMatrix a(spec.m * b, spec.m * b);
  for (std::size_t i = 0; i < spec.m; ++i)
    for (std::size_t j = 0; j < spec.m; ++j) {
      const auto& s = spec.at(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j));
      if (s.rows() != b || s.cols() != b) throw DimensionError("block symbol has wrong shape");
      a.set_block(i * b, j * b, s);
    }
  return a;
}

// max |A_ij - A_{i+1,j+1}| <= tol
inline bool is_toeplitz(const ComplexMatrix& a, double tol = 0.0) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i + 1 < a.rows(); ++i)
    for (std::size_t j = 0; j + 1 < a.cols(); ++j)
      if (std::abs(a(i, j) - a(i + 1, j + 1)) > tol) return false;
  return true;
}

inline bool is_block_toeplitz(const ComplexMatrix& a, std::size_t block, double tol = 0.0) {
  if (!a.is_square() || block == 0 || a.rows() % block) return false;
  const std::size_t m = a.rows() / block;
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j + 1 < m; ++j)
      if (max_abs_diff(a.block(i * block, j * block, block, block),
                       a.block((i + 1) * block, (j + 1) * block, block, block)) > tol)
        return false;
  return true;
}

// 0-based images of a bijection on {0, .., n-1}.
struct IndexPermutation {
  std::vector<std::size_t> images;

  std::size_t size() const noexcept { return images.size(); }
  std::size_t operator()(std::size_t i) const { return images.at(i); }
};

inline bool is_bijection(const IndexPermutation& s) {
  std::vector<bool> seen(s.size());
  for (auto i : s.images) {
    if (i >= s.size() || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

// i -> n - 1 - i
inline IndexPermutation sigma0(std::size_t n) {
  IndexPermutation s{std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) s.images[i] = n - 1 - i;
  return s;
}

// Reversal inside each of the m consecutive runs of length n.
inline IndexPermutation sigma_block(std::size_t n, std::size_t m) {
  IndexPermutation s{std::vector<std::size_t>(n * m)};
  for (std::size_t b = 0; b < m; ++b)
    for (std::size_t i = 0; i < n; ++i) s.images[b * n + i] = b * n + (n - 1 - i);
  return s;
}

inline IndexPermutation compose(const IndexPermutation& a, const IndexPermutation& b) {
  if (a.size() != b.size()) throw DimensionError("compose: sizes differ");
  IndexPermutation out{std::vector<std::size_t>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) out.images[i] = a(b(i));
  return out;
}

// Row i of the result is row sigma(i) of a; likewise for columns.
inline ComplexMatrix permute_rows_cols(const ComplexMatrix& a, const IndexPermutation& s) {
  if (!a.is_square() || a.rows() != s.size())
    throw DimensionError("permute_rows_cols: size mismatch");
  if (!is_bijection(s)) throw DomainError("permute_rows_cols: not a permutation");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(s(i), s(j));
  return out;
}

// R_{sigma0} C_{sigma0} A == A^T, entrywise within tol (0 means exact).
inline bool transpose_identity_check(const ComplexMatrix& a, double tol = 0.0) {
  require_square(a, "transpose_identity_check");
  return max_abs_diff(permute_rows_cols(a, sigma0(a.rows())), a.transpose()) <= tol;
}

// R_sigma C_sigma A == A^PT for A of size d1*d2, sigma reversing each run of d2.
inline bool pt_identity_check(const ComplexMatrix& a, std::size_t d1, std::size_t d2,
                              double tol = 0.0) {
  return max_abs_diff(permute_rows_cols(a, sigma_block(d2, d1)),
                      partial_transpose(a, d1, d2)) <= tol;
}

inline positivity::Verdict ppt_verdict(const ComplexMatrix& s, std::size_t d1, std::size_t d2,
                                       Tolerance tol = {}) {
  return positivity::check_p2_eigen(partial_transpose(s, d1, d2), tol);
}

// [[A, A^{1/2} G1 A^{1/2}, A^{1/2}(G1^2 + D_{G1*} G2 D_{G1}) A^{1/2}], ...]
inline ComplexMatrix block_toeplitz_from_params(const ComplexMatrix& a, const ComplexMatrix& g1,
                                                const ComplexMatrix& g2, Tolerance tol = {}) {
  const std::size_t n = a.rows();
  if (g1.rows() != n || g1.cols() != n || g2.rows() != n || g2.cols() != n)
    throw DimensionError("block_toeplitz_from_params: block shapes differ");
  const ComplexMatrix r = matrix_sqrt_psd(a, tol);
  const ComplexMatrix s12 = r * g1 * r;
  const ComplexMatrix s13 = r * (g1 * g1 + schur::defect(g1.adjoint()) * g2 * schur::defect(g1)) * r;
  ComplexMatrix b(3 * n, 3 * n);
  const ComplexMatrix diag = hermitian_part(a);
  for (std::size_t k = 0; k < 3; ++k) b.set_block(k * n, k * n, diag);
  b.set_block(0, n, s12);
  b.set_block(n, 2 * n, s12);
  b.set_block(n, 0, s12.adjoint());
  b.set_block(2 * n, n, s12.adjoint());
  b.set_block(0, 2 * n, s13);
  b.set_block(2 * n, 0, s13.adjoint());
  return b;
}

struct ParamTransposeReport {
  bool holds = false;
  double residual = 0.0;  // max |reconstruct(params^T) - B^PT|
};

// Extract {A^{1/2}, Gamma_kj} with block size `block`, transpose every
// parameter, reconstruct and compare with the partial transpose of B.
inline ParamTransposeReport param_transpose_check(const ComplexMatrix& b, std::size_t block,
                                                  Tolerance tol = {}) {
  const auto p = schur::extract(b, block, schur::RootChoice::positive_sqrt, tol);
  schur::Parameters t(p.d(), p.block());
  for (std::size_t k = 0; k < p.d(); ++k) t.set_root(k, p.root(k).transpose());
  for (const auto& [kj, g] : p.gammas()) t.set_gamma(kj.first, kj.second, g.transpose());
  const ComplexMatrix rebuilt = schur::reconstruct(t);
  ParamTransposeReport r;
  r.residual = max_abs_diff(rebuilt, partial_transpose(b, p.d(), p.block()));
  r.holds = r.residual <= 1e-8 * positivity::scale_of(b);
  return r;
}

// Positive Hermitian Toeplitz matrix of size n from single-index parameters
// Gamma_{k,j} = g_{j-k}; rebuilt exactly from its first column.
inline ComplexMatrix random_positive_toeplitz(Rng& rng, std::size_t n, double max_radius = 0.95) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    schur::Parameters p(n, 1);
    const double root = std::sqrt(rng.uniform(0.5, 2.0));
    std::vector<cplx> g(n);
    for (std::size_t l = 1; l < n; ++l)
      g[l] = std::polar(rng.uniform(0.0, max_radius), rng.uniform(0.0, 2.0 * std::numbers::pi));
    for (std::size_t k = 0; k < n; ++k) p.set_root(k, ComplexMatrix::scalar(root));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = k + 1; j < n; ++j) p.set_gamma(k, j, ComplexMatrix::scalar(g[j - k]));
    const ComplexMatrix s = schur::reconstruct(p);
    if (!is_toeplitz(s, 1e-10 * positivity::scale_of(s))) continue;
    std::vector<cplx> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = s(i, 0);
    return build_toeplitz(hermitian_spec(col));
  }
  throw NumericalError("random_positive_toeplitz: Toeplitz audit kept failing");
}

// Positive block-Toeplitz matrix with m blocks of size `block`.
inline ComplexMatrix random_positive_block_toeplitz(Rng& rng, std::size_t m, std::size_t block,
                                                    double max_norm = 0.95) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    schur::Parameters p(m, block);
    const ComplexMatrix a =
        random_psd(rng, block) + ComplexMatrix::identity(block) * cplx(0.1);
    const ComplexMatrix root = matrix_sqrt_psd(a);
    std::vector<ComplexMatrix> g(m);
    for (std::size_t l = 1; l < m; ++l) g[l] = random_contraction(rng, block, block, max_norm);
    for (std::size_t k = 0; k < m; ++k) p.set_root(k, root);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = k + 1; j < m; ++j) p.set_gamma(k, j, g[j - k]);
    const ComplexMatrix s = schur::reconstruct(p);
    if (!is_block_toeplitz(s, block, 1e-10 * positivity::scale_of(s))) continue;
    std::vector<ComplexMatrix> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = s.block(i * block, 0, block, block);
    return build_block_toeplitz(hermitian_block_spec(col));
  }
  throw NumericalError("random_positive_block_toeplitz: Toeplitz audit kept failing");
}

}  // namespace psdkit::toeplitz
