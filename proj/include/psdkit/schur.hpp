#pragma once

// Schur-Constantinescu parametrization of positive (block) matrices.
//
// A positive d x d block matrix S (blocks of size b) is encoded by diagonal
// roots L_kk (S_kk = L_kk* L_kk) and a family of contractions Gamma_kj,
// k < j. Off-diagonal blocks are
//
//   S_kj = L_kk* ( R_{k,j-1} U_{k+1,j-1} C_{k+1,j}
//                + D*_{k,k+1} ... D*_{k,j-1} Gamma_kj D_{k+1,j} ... D_{j-1,j} ) L_jj
//
// with D_T = (I - T*T)^{1/2}, D*_T = D_{T*}, R/C the row/column contractions
// and U the unitary chain built from Julia operators. Every index in this
// header is 0-based.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "psdkit/errors.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/matrix.hpp"
#include "psdkit/positivity.hpp"
#include "psdkit/random.hpp"

namespace psdkit::schur {

enum class RootChoice { positive_sqrt, cholesky };

class Parameters {
public:
  Parameters() = default;
  Parameters(std::size_t d, std::size_t block)
      : d_(d), block_(block), roots_(d, ComplexMatrix(block, block)) {}

  std::size_t d() const noexcept { return d_; }
  std::size_t block() const noexcept { return block_; }

  const ComplexMatrix& root(std::size_t k) const { return roots_.at(k); }
  void set_root(std::size_t k, ComplexMatrix l) {
    require_block(l, "root");
    roots_.at(k) = std::move(l);
  }

  // Gamma_kk and unset entries read as zero.
  ComplexMatrix gamma(std::size_t k, std::size_t j) const {
    auto it = gammas_.find({k, j});
    return it == gammas_.end() ? ComplexMatrix(block_, block_) : it->second;
  }
  void set_gamma(std::size_t k, std::size_t j, ComplexMatrix g) {
    if (!(k < j && j < d_)) throw DomainError("gamma index must satisfy k < j < d");
    require_block(g, "gamma");
    gammas_[{k, j}] = std::move(g);
  }

  const std::map<std::pair<std::size_t, std::size_t>, ComplexMatrix>& gammas() const {
    return gammas_;
  }

private:
  void require_block(const ComplexMatrix& m, const char* what) const {
    if (m.rows() != block_ || m.cols() != block_)
      throw DimensionError(std::string("schur: ") + what + " has wrong block shape");
  }

  std::size_t d_ = 0;
  std::size_t block_ = 1;
  std::vector<ComplexMatrix> roots_;
  std::map<std::pair<std::size_t, std::size_t>, ComplexMatrix> gammas_;
};

// Slack allowed on ||Gamma|| before it is rejected as a non-contraction.
inline constexpr double contraction_slack = 1e-8;

// (I - T*T)^{1/2}; eigenvalues of I - T*T slightly below zero are clamped.
inline ComplexMatrix defect(const ComplexMatrix& t) {
  if (t.rows() == 1 && t.cols() == 1) {
    const double v = 1.0 - std::norm(t(0, 0));
    if (v < -2.0 * contraction_slack) throw DomainError("defect: argument is not a contraction");
    return ComplexMatrix::scalar(std::sqrt(std::max(v, 0.0)));
  }
  const ComplexMatrix m = ComplexMatrix::identity(t.cols()) - t.adjoint() * t;
  const auto e = herm_eig(hermitian_part(m));
  if (!e.values.empty() && e.values.back() < -2.0 * contraction_slack)
    throw DomainError("defect: argument is not a contraction");
  return hermitian_part(
      spectral_apply(e, [](double w) { return std::sqrt(std::max(w, 0.0)); }));
}

// Julia operator [[T, D_{T*}], [D_T, -T*]], a unitary dilation of T.
inline ComplexMatrix julia(const ComplexMatrix& t) {
  const std::size_t r = t.rows(), c = t.cols();
  ComplexMatrix u(r + c, r + c);
  u.set_block(0, 0, t);
  u.set_block(0, c, defect(t.adjoint()));
  u.set_block(r, 0, defect(t));
  u.set_block(r, c, -t.adjoint());
  return u;
}

// Throws unless every root has the block shape and every Gamma is a contraction.
inline void validate(const Parameters& p) {
  for (const auto& [kj, g] : p.gammas())
    if (operator_norm(g) > 1.0 + contraction_slack)
      throw DomainError("schur: Gamma(" + std::to_string(kj.first + 1) + "," +
                        std::to_string(kj.second + 1) + ") is not a contraction");
}

// Memoized defects, Julia operators and unitary chains of a parameter set.
// Entries are computed on first use, so a parameter set that is filled in
// order of increasing j - k (as extraction does) can be queried while it grows.
class LatticeChain {
public:
  explicit LatticeChain(const Parameters& p) : p_(p) {}

  const ComplexMatrix& defect_of(std::size_t k, std::size_t j) const {
    return memo(defects_, k, j, [&] { return defect(p_.gamma(k, j)); });
  }
  const ComplexMatrix& defect_of_adjoint(std::size_t k, std::size_t j) const {
    return memo(adjoint_defects_, k, j, [&] { return defect(p_.gamma(k, j).adjoint()); });
  }
  const ComplexMatrix& julia_of(std::size_t k, std::size_t j) const {
    return memo(julias_, k, j, [&] { return julia(p_.gamma(k, j)); });
  }

  // [Gamma_{k,k+1}, D*_{k,k+1} Gamma_{k,k+2}, ..., D*_{k,k+1}..D*_{k,j-1} Gamma_{k,j}]
  ComplexMatrix row_contraction(std::size_t k, std::size_t j) const {
    require_order(k, j);
    const std::size_t b = p_.block();
    ComplexMatrix row(b, (j - k) * b);
    ComplexMatrix prefix = ComplexMatrix::identity(b);
    for (std::size_t l = 1; l <= j - k; ++l) {
      row.set_block(0, (l - 1) * b, prefix * p_.gamma(k, k + l));
      prefix = prefix * defect_of_adjoint(k, k + l);
    }
    return row;
  }

  // [Gamma_{j-1,j}; Gamma_{j-2,j} D_{j-1,j}; ...; Gamma_{k,j} D_{k+1,j}..D_{j-1,j}]
  ComplexMatrix column_contraction(std::size_t k, std::size_t j) const {
    require_order(k, j);
    const std::size_t b = p_.block();
    ComplexMatrix col((j - k) * b, b);
    ComplexMatrix suffix = ComplexMatrix::identity(b);
    for (std::size_t l = 1; l <= j - k; ++l) {
      col.set_block((l - 1) * b, 0, p_.gamma(j - l, j) * suffix);
      suffix = defect_of(j - l, j) * suffix;
    }
    return col;
  }

  // U_{k,k} = I and, for j > k,
  //   U_{k,j} = E_1(U(Gamma_{k,k+1})) ... E_{j-k}(U(Gamma_{k,j})) (U_{k+1,j} (+) I)
  // where E_l places the Julia operator on block positions l, l+1.
  const ComplexMatrix& unitary_chain(std::size_t k, std::size_t j) const {
    if (k > j || j >= p_.d()) throw DomainError("unitary_chain: need k <= j < d");
    return memo(chains_, k, j, [&] {
      const std::size_t b = p_.block();
      if (k == j) return ComplexMatrix::identity(b);
      const std::size_t n = (j - k + 1) * b;
      ComplexMatrix prod = ComplexMatrix::identity(n);
      for (std::size_t l = 1; l <= j - k; ++l) {
        const ComplexMatrix& u = julia_of(k, k + l);
        const std::size_t c0 = (l - 1) * b;
        const ComplexMatrix cols = prod.block(0, c0, n, 2 * b) * u;
        prod.set_block(0, c0, cols);
      }
      return prod * direct_sum(unitary_chain(k + 1, j), ComplexMatrix::identity(b));
    });
  }

  // D*_{k,k+1} ... D*_{k,j-1}
  ComplexMatrix left_defect_product(std::size_t k, std::size_t j) const {
    ComplexMatrix m = ComplexMatrix::identity(p_.block());
    for (std::size_t l = k + 1; l < j; ++l) m = m * defect_of_adjoint(k, l);
    return m;
  }

  // D_{k+1,j} ... D_{j-1,j}
  ComplexMatrix right_defect_product(std::size_t k, std::size_t j) const {
    ComplexMatrix m = ComplexMatrix::identity(p_.block());
    for (std::size_t l = k + 1; l < j; ++l) m = m * defect_of(l, j);
    return m;
  }

  // R_{k,j-1} U_{k+1,j-1} C_{k+1,j}; zero when j = k + 1.
  ComplexMatrix path_term(std::size_t k, std::size_t j) const {
    if (j <= k + 1) return ComplexMatrix(p_.block(), p_.block());
    return row_contraction(k, j - 1) * unitary_chain(k + 1, j - 1) *
           column_contraction(k + 1, j);
  }

private:
  using Cache = std::map<std::pair<std::size_t, std::size_t>, ComplexMatrix>;

  template <class F>
  static const ComplexMatrix& memo(Cache& cache, std::size_t k, std::size_t j, F&& make) {
    auto it = cache.find({k, j});
    if (it == cache.end()) it = cache.emplace(std::make_pair(k, j), make()).first;
    return it->second;
  }

  void require_order(std::size_t k, std::size_t j) const {
    if (!(k < j && j < p_.d())) throw DomainError("contraction index must satisfy k < j < d");
  }

  const Parameters& p_;
  mutable Cache defects_, adjoint_defects_, julias_, chains_;
};

inline ComplexMatrix row_contraction(const Parameters& p, std::size_t k, std::size_t j) {
  return LatticeChain(p).row_contraction(k, j);
}

inline ComplexMatrix column_contraction(const Parameters& p, std::size_t k, std::size_t j) {
  return LatticeChain(p).column_contraction(k, j);
}

inline ComplexMatrix unitary_chain(const Parameters& p, std::size_t k, std::size_t j) {
  return LatticeChain(p).unitary_chain(k, j);
}

inline ComplexMatrix reconstruct(const Parameters& p) {
  validate(p);
  const std::size_t d = p.d(), b = p.block();
  ComplexMatrix s(d * b, d * b);
  LatticeChain chain(p);
  for (std::size_t k = 0; k < d; ++k)
    s.set_block(k * b, k * b, p.root(k).adjoint() * p.root(k));
  for (std::size_t gap = 1; gap < d; ++gap)
    for (std::size_t k = 0; k + gap < d; ++k) {
      const std::size_t j = k + gap;
      const ComplexMatrix mid = chain.path_term(k, j) + chain.left_defect_product(k, j) *
                                                            p.gamma(k, j) *
                                                            chain.right_defect_product(k, j);
      const ComplexMatrix skj = p.root(k).adjoint() * mid * p.root(j);
      s.set_block(k * b, j * b, skj);
      s.set_block(j * b, k * b, skj.adjoint());
    }
  return s;
}

// Parameters of a positive matrix, solved in order of increasing j - k.
inline Parameters extract(const ComplexMatrix& s, std::size_t block = 1,
                          RootChoice root = RootChoice::positive_sqrt, Tolerance tol = {}) {
  require_hermitian(s, tol, "schur::extract");
  if (block == 0 || s.rows() % block != 0)
    throw DimensionError("schur::extract: size is not a multiple of the block size");
  const auto gate = positivity::check_p2_eigen(s, tol);
  if (!gate.is_psd)
    throw NotPsdError("schur::extract: matrix is not positive semidefinite",
                      gate.witness->index.value_or(0), gate.witness->value);

  const std::size_t b = block, d = s.rows() / block;
  const double scale = positivity::scale_of(s);
  const double root_cut = std::sqrt(tol.eps * scale);
  const double defect_cut = std::sqrt(tol.eps);
  const double residual_bound = std::sqrt(tol.eps) * scale;

  Parameters p(d, b);
  std::vector<bool> vanishing(d);
  for (std::size_t k = 0; k < d; ++k) {
    const ComplexMatrix skk = hermitian_part(s.block(k * b, k * b, b, b));
    vanishing[k] = max_abs(skk) <= tol.eps * scale;
    if (root == RootChoice::positive_sqrt)
      p.set_root(k, matrix_sqrt_psd(skk, Tolerance(tol.eps * scale)));
    else
      p.set_root(k, psd_cholesky(skk, Tolerance(tol.eps * scale)).adjoint());
  }

  LatticeChain chain(p);
  for (std::size_t gap = 1; gap < d; ++gap)
    for (std::size_t k = 0; k + gap < d; ++k) {
      const std::size_t j = k + gap;
      if (vanishing[k] || vanishing[j]) continue;  // Gamma_kj = 0
      const ComplexMatrix skj = s.block(k * b, j * b, b, b);
      const ComplexMatrix path = chain.path_term(k, j);
      const ComplexMatrix target = pinv_absolute(p.root(k).adjoint(), root_cut) * skj *
                                   pinv_absolute(p.root(j), root_cut);
      const ComplexMatrix left = chain.left_defect_product(k, j);
      const ComplexMatrix right = chain.right_defect_product(k, j);
      ComplexMatrix g = pinv_absolute(left, defect_cut) * (target - path) *
                        pinv_absolute(right, defect_cut);

      // Clamp to the closed unit ball.
      auto sv = svd(g);
      if (!sv.sigma.empty() && sv.sigma.front() > 1.0) {
        ComplexMatrix clamped(b, b);
        for (std::size_t i = 0; i < sv.sigma.size(); ++i) {
          const double si = std::min(sv.sigma[i], 1.0);
          for (std::size_t r = 0; r < b; ++r)
            for (std::size_t c = 0; c < b; ++c)
              clamped(r, c) += sv.u(r, i) * si * std::conj(sv.v(c, i));
        }
        g = clamped;
      }

      const ComplexMatrix rebuilt =
          p.root(k).adjoint() * (path + left * g * right) * p.root(j);
      const double resid = max_abs_diff(rebuilt, skj);
      if (resid > residual_bound)
        throw NumericalError("schur::extract: inconsistent residual " + std::to_string(resid) +
                             " at (" + std::to_string(k + 1) + "," + std::to_string(j + 1) +
                             ")");
      p.set_gamma(k, j, std::move(g));
    }
  return p;
}

// prod_k det(S_kk) * prod_{k<j} det(I - Gamma_kj* Gamma_kj)
inline double determinant_formula(const Parameters& p) {
  double det = 1.0;
  for (std::size_t k = 0; k < p.d(); ++k)
    det *= det_lu(p.root(k).adjoint() * p.root(k)).real();
  for (const auto& [kj, g] : p.gammas())
    det *= det_lu(ComplexMatrix::identity(p.block()) - g.adjoint() * g).real();
  return det;
}

namespace detail {

// Canonical: Gamma_kj vanishes when S_kk or S_jj does, and otherwise lies in
// the part that L_kk* Dleft (.) Dright L_jj can see. extract() returns
// canonical parameters.
inline bool is_canonical(const Parameters& p, Tolerance tol) {
  LatticeChain chain(p);
  const double cut = std::sqrt(tol.eps);
  for (const auto& [kj, g] : p.gammas()) {
    const auto [k, j] = kj;
    if (max_abs(g) <= tol.eps) continue;
    const double rk = operator_norm(p.root(k)), rj = operator_norm(p.root(j));
    if (rk <= cut || rj <= cut) return false;
    const ComplexMatrix left = p.root(k).adjoint() * chain.left_defect_product(k, j);
    const ComplexMatrix right = chain.right_defect_product(k, j) * p.root(j);
    const ComplexMatrix pl = pinv_absolute(left, cut * rk) * left;
    const ComplexMatrix pr = right * pinv_absolute(right, cut * rj);
    if (max_abs_diff(pl * g * pr, g) > cut) return false;
  }
  return true;
}

inline std::size_t lattice_rank(const Parameters& p, Tolerance tol) {
  LatticeChain chain(p);
  std::size_t rank = 0;
  for (std::size_t j = 0; j < p.d(); ++j) {
    ComplexMatrix m = p.root(j);
    for (std::size_t k = j; k-- > 0;) m = chain.defect_of(k, j) * m;
    const double cut = std::sqrt(tol.eps) * std::max(1.0, operator_norm(p.root(j)));
    for (double s : svd(m).sigma)
      if (s > cut) ++rank;
  }
  return rank;
}

}  // namespace detail

// Rank of the reconstructed matrix read off the lattice: block column j adds
// rank(D_{0,j} D_{1,j} ... D_{j-1,j} L_jj). Non-canonical parameter sets are
// first replaced by the canonical parameters of the same matrix.
inline std::size_t rank_from_parameters(const Parameters& p, Tolerance tol = {}) {
  if (!detail::is_canonical(p, tol))
    return detail::lattice_rank(
        extract(reconstruct(p), p.block(), RootChoice::positive_sqrt, tol), tol);
  return detail::lattice_rank(p, tol);
}

// Rank one iff exactly one block column contributes, and it contributes rank one.
// For scalar entries with every S_kk > 0 this reduces to: each column j >= 1
// has some Gamma_kj on the unit circle.
inline bool is_rank_one(const Parameters& p, Tolerance tol = {}) {
  return rank_from_parameters(p, tol) == 1;
}

// Parameters of the leading m x m block principal submatrix.
inline Parameters truncate_leading(const Parameters& p, std::size_t m) {
  if (m > p.d()) throw DomainError("truncate_leading: m exceeds d");
  Parameters out(m, p.block());
  for (std::size_t k = 0; k < m; ++k) out.set_root(k, p.root(k));
  for (const auto& [kj, g] : p.gammas())
    if (kj.second < m) out.set_gamma(kj.first, kj.second, g);
  return out;
}

// Lower-triangular T with reconstruct(p) = T T*.
inline ComplexMatrix cholesky_via_params(const Parameters& p, Tolerance tol = {}) {
  const ComplexMatrix s = reconstruct(p);
  return psd_cholesky(s, Tolerance(tol.eps * positivity::scale_of(s)));
}

// Real degrees of freedom: Hermitian roots count b^2 each, contractions 2 b^2.
// Scalar case: d + d(d-1) = d^2.
inline std::size_t real_parameter_count(std::size_t d, std::size_t block = 1) {
  return d * block * block + d * (d - 1) * block * block;
}

// Positive-definite roots and contractions with norm <= max_norm.
inline Parameters random_parameters(Rng& rng, std::size_t d, std::size_t block = 1,
                                    double max_norm = 0.95) {
  Parameters p(d, block);
  for (std::size_t k = 0; k < d; ++k) {
    if (block == 1)
      p.set_root(k, ComplexMatrix::scalar(rng.uniform(0.3, 2.0)));
    else
      p.set_root(k, matrix_sqrt_psd(random_psd(rng, block) +
                                    ComplexMatrix::identity(block) * cplx(0.1)));
  }
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = k + 1; j < d; ++j)
      p.set_gamma(k, j, random_contraction(rng, block, block, max_norm));
  return p;
}

}  // namespace psdkit::schur
