#pragma once

// Generalized Gell-Mann basis, Bloch coordinates rho = (I + sum beta_i lambda_i)/d,
// the symmetric structure tensor and the pure-state / square-root
// representation of density matrices.

#include <cmath>
#include <cstddef>
#include <vector>

#include "psdkit/errors.hpp"
#include "psdkit/matrix.hpp"

namespace psdkit::bloch {

struct GellMannBasis {
  std::size_t d = 0;
  std::vector<ComplexMatrix> lambdas;  // d^2 - 1 traceless Hermitian, Tr(l_i l_j) = 2 delta_ij

  std::size_t size() const noexcept { return lambdas.size(); }
};

struct BlochVector {
  std::size_t d = 0;
  std::vector<double> beta;
};

// d_{kli} = Tr({l_k, l_l} l_i) / 4, so that
// {l_k, l_l} = (4/d) delta_kl I + 2 sum_i d_{kli} l_i.
struct StructureTensor {
  std::size_t d = 0;
  std::size_t n = 0;  // d^2 - 1
  std::vector<double> entries;

  double operator()(std::size_t k, std::size_t l, std::size_t i) const {
    return entries[(k * n + l) * n + i];
  }
};

// Order: symmetric E_kj + E_jk for k < j (lexicographic), antisymmetric
// -i(E_kj - E_jk) for k < j (lexicographic), then diagonal h_2..h_d.
inline GellMannBasis gellmann(std::size_t d) {
  if (d < 2) throw DomainError("gellmann: dimension must be at least 2");
  GellMannBasis basis{d, {}};
  basis.lambdas.reserve(d * d - 1);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = k + 1; j < d; ++j) {
      ComplexMatrix f(d, d);
      f(k, j) = f(j, k) = 1.0;
      basis.lambdas.push_back(std::move(f));
    }
  const cplx i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = k + 1; j < d; ++j) {
      ComplexMatrix f(d, d);
      f(k, j) = -i_unit;
      f(j, k) = i_unit;
      basis.lambdas.push_back(std::move(f));
    }
  for (std::size_t m = 2; m <= d; ++m) {
    ComplexMatrix h(d, d);
    const double c = std::sqrt(2.0 / static_cast<double>(m * (m - 1)));
    for (std::size_t i = 0; i + 1 < m; ++i) h(i, i) = c;
    h(m - 1, m - 1) = c * (1.0 - static_cast<double>(m));
    basis.lambdas.push_back(std::move(h));
  }
  return basis;
}

inline BlochVector to_bloch(const ComplexMatrix& rho, const GellMannBasis& basis,
                            Tolerance tol = {}) {
  require_hermitian(rho, tol, "to_bloch");
  if (rho.rows() != basis.d) throw DimensionError("to_bloch: dimension mismatch");
  if (std::abs(rho.trace() - 1.0) > tol.eps * std::max(1.0, frobenius_norm(rho)))
    throw DomainError("to_bloch: trace is not 1");
  BlochVector out{basis.d, std::vector<double>(basis.size())};
  const double half_d = 0.5 * static_cast<double>(basis.d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    cplx tr = 0.0;
    const auto& l = basis.lambdas[i];
    for (std::size_t r = 0; r < basis.d; ++r)
      for (std::size_t c = 0; c < basis.d; ++c) tr += rho(r, c) * l(c, r);
    out.beta[i] = half_d * tr.real();
  }
  return out;
}

// Hermitian with unit trace; positivity is not implied.
inline ComplexMatrix from_bloch(const std::vector<double>& beta, const GellMannBasis& basis) {
  if (beta.size() != basis.size()) throw DimensionError("from_bloch: length is not d^2 - 1");
  ComplexMatrix rho = ComplexMatrix::identity(basis.d);
  for (std::size_t i = 0; i < beta.size(); ++i) rho += basis.lambdas[i] * cplx(beta[i]);
  return rho * cplx(1.0 / static_cast<double>(basis.d));
}

inline StructureTensor structure_tensor(const GellMannBasis& basis) {
  const std::size_t n = basis.size();
  StructureTensor t{basis.d, n, std::vector<double>(n * n * n)};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l) {
      const ComplexMatrix anti =
          basis.lambdas[k] * basis.lambdas[l] + basis.lambdas[l] * basis.lambdas[k];
      for (std::size_t i = 0; i < n; ++i) {
        const double v = 0.25 * (anti * basis.lambdas[i]).trace().real();
        t.entries[(k * n + l) * n + i] = v;
        t.entries[(l * n + k) * n + i] = v;
      }
    }
  return t;
}

// (x u y)_i = sum_{j,k} d_{ijk} x_j y_k
inline std::vector<double> cup(const std::vector<double>& x, const std::vector<double>& y,
                               const StructureTensor& t) {
  if (x.size() != t.n || y.size() != t.n) throw DimensionError("cup: length mismatch");
  std::vector<double> out(t.n);
  for (std::size_t i = 0; i < t.n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.n; ++j) {
      if (x[j] == 0.0) continue;
      for (std::size_t k = 0; k < t.n; ++k) s += t(i, j, k) * x[j] * y[k];
    }
    out[i] = s;
  }
  return out;
}

inline double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

struct PurityReport {
  bool pure = false;
  double norm_residual = 0.0;  // |<b,b> - (d^2 - d)/2|
  double cup_residual = 0.0;   // max_i |(d-2) b_i - (b u b)_i|
};

// <b,b> = (d^2 - d)/2 and (d - 2) b = b u b.
inline PurityReport purity(const std::vector<double>& beta, const StructureTensor& t,
                           Tolerance tol = {}) {
  const double d = static_cast<double>(t.d);
  PurityReport r;
  r.norm_residual = std::abs(squared_norm(beta) - 0.5 * (d * d - d));
  const auto bb = cup(beta, beta, t);
  for (std::size_t i = 0; i < beta.size(); ++i)
    r.cup_residual = std::max(r.cup_residual, std::abs((d - 2.0) * beta[i] - bb[i]));
  const double scale = std::max(1.0, 0.5 * (d * d - d));
  r.pure = r.norm_residual <= tol.eps * scale && r.cup_residual <= tol.eps * scale;
  return r;
}

inline bool is_pure(const std::vector<double>& beta, const StructureTensor& t,
                    Tolerance tol = {}) {
  return purity(beta, t, tol).pure;
}

struct Representation {
  ComplexMatrix rho;
  BlochVector beta;
  double kappa = 0.0;
  ComplexMatrix h;  // rho = h^2
};

// rho = H^2 with H = (kappa I + sum beta0_i lambda_i)/d,
// kappa = +sqrt((d^2 - 2|beta0|^2)/d), beta = (2 kappa/d) beta0 + (beta0 u beta0)/d.
inline Representation represent_from_beta0(const std::vector<double>& beta0,
                                           const GellMannBasis& basis,
                                           const StructureTensor& t, Tolerance tol = {}) {
  if (beta0.size() != basis.size()) throw DimensionError("represent: length is not d^2 - 1");
  const double d = static_cast<double>(basis.d);
  const double n2 = squared_norm(beta0);
  if (n2 > 0.5 * d * d + tol.eps * std::max(1.0, d * d))
    throw DomainError("represent: |beta0|^2 exceeds d^2/2");
  Representation r;
  r.kappa = std::sqrt(std::max(0.0, (d * d - 2.0 * n2) / d));
  const auto bb = cup(beta0, beta0, t);
  r.beta = BlochVector{basis.d, std::vector<double>(basis.size())};
  for (std::size_t i = 0; i < beta0.size(); ++i)
    r.beta.beta[i] = (2.0 * r.kappa / d) * beta0[i] + bb[i] / d;
  r.rho = from_bloch(r.beta.beta, basis);
  r.h = ComplexMatrix::identity(basis.d) * cplx(r.kappa);
  for (std::size_t i = 0; i < beta0.size(); ++i) r.h += basis.lambdas[i] * cplx(beta0[i]);
  r.h *= 1.0 / d;
  return r;
}

}  // namespace psdkit::bloch
