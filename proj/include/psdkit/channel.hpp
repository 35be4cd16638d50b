#pragma once

// Choi matrices and Kraus representations of linear maps M_{d_in} -> M_{d_out}.
// The Choi matrix lives on input (x) output: block (k, j) is Phi(E_kj), a
// d_out x d_out matrix, so S = sum_i vec(V_i) vec(V_i)*.

#include <cmath>
#include <cstddef>
#include <vector>

#include "psdkit/composite.hpp"
#include "psdkit/errors.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/matrix.hpp"
#include "psdkit/positivity.hpp"

namespace psdkit::channel {

struct KrausSet {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::vector<ComplexMatrix> ops;  // each d_out x d_in
};

struct ChoiMatrix {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  ComplexMatrix matrix;  // (d_in d_out) square
};

enum class SquareRoot { cholesky, spectral };

inline void validate(const KrausSet& k) {
  for (const auto& v : k.ops)
    if (v.rows() != k.d_out || v.cols() != k.d_in)
      throw DimensionError("Kraus operator shape is not d_out x d_in");
}

inline ChoiMatrix make_choi(ComplexMatrix m, std::size_t d_in, std::size_t d_out) {
  if (!m.is_square() || m.rows() != d_in * d_out)
    throw DimensionError("Choi matrix is not (d_in*d_out) square");
  return ChoiMatrix{d_in, d_out, std::move(m)};
}

// Phi(rho) = sum_i V_i rho V_i*
inline ComplexMatrix apply_kraus(const KrausSet& k, const ComplexMatrix& rho) {
  validate(k);
  if (rho.rows() != k.d_in || rho.cols() != k.d_in)
    throw DimensionError("apply_kraus: input is not d_in x d_in");
  ComplexMatrix out(k.d_out, k.d_out);
  for (const auto& v : k.ops) out += v * rho * v.adjoint();
  return out;
}

// Block assembly [Phi(E_kj)].
inline ChoiMatrix choi_from_kraus(const KrausSet& k) {
  validate(k);
  ComplexMatrix s(k.d_in * k.d_out, k.d_in * k.d_out);
  for (std::size_t a = 0; a < k.d_in; ++a)
    for (std::size_t b = 0; b < k.d_in; ++b)
      s.set_block(a * k.d_out, b * k.d_out, apply_kraus(k, matrix_unit(k.d_in, a, b)));
  return ChoiMatrix{k.d_in, k.d_out, std::move(s)};
}

// sum_i vec(V_i) vec(V_i)*
inline ChoiMatrix choi_from_kraus_vec(const KrausSet& k) {
  validate(k);
  ComplexMatrix s(k.d_in * k.d_out, k.d_in * k.d_out);
  for (const auto& v : k.ops) {
    const ComplexMatrix w = vec(v);
    s += w * w.adjoint();
  }
  return ChoiMatrix{k.d_in, k.d_out, std::move(s)};
}

// Kraus operators from the columns of a square root S = T T*; columns with
// norm <= tol * ||S||^{1/2} are dropped.
inline KrausSet kraus_from_choi(const ChoiMatrix& c, Tolerance tol = {},
                                SquareRoot method = SquareRoot::cholesky) {
  const double scale = positivity::scale_of(c.matrix);
  const auto gate = positivity::check_p2_eigen(c.matrix, tol);
  if (!gate.is_psd)
    throw NotPsdError("kraus_from_choi: Choi matrix is not positive semidefinite",
                      gate.witness->index.value_or(0), gate.witness->value);
  ComplexMatrix t;
  if (method == SquareRoot::cholesky) {
    t = psd_cholesky(c.matrix, Tolerance(tol.eps * scale));
  } else {
    const auto e = herm_eig(c.matrix, tol);
    t = ComplexMatrix(c.matrix.rows(), c.matrix.cols());
    for (std::size_t k = 0; k < e.values.size(); ++k) {
      const double s = std::sqrt(std::max(e.values[k], 0.0));
      for (std::size_t i = 0; i < t.rows(); ++i) t(i, k) = e.vectors(i, k) * s;
    }
  }
  KrausSet out{c.d_in, c.d_out, {}};
  const double cut = std::sqrt(tol.eps * frobenius_norm(c.matrix));
  for (std::size_t col = 0; col < t.cols(); ++col) {
    const ComplexMatrix w = t.column(col);
    if (frobenius_norm(w) <= cut) continue;
    out.ops.push_back(unvec(w, c.d_out, c.d_in));
  }
  return out;
}

inline positivity::Verdict is_cp(const ChoiMatrix& c, Tolerance tol = {}) {
  return positivity::check_p2_eigen(c.matrix, tol);
}

// Partial trace over the output factor equals I_{d_in}.
inline bool is_tp(const ChoiMatrix& c, Tolerance tol = {}) {
  const auto r = partial_trace(c.matrix, c.d_in, c.d_out, Subsystem::second);
  return max_abs_diff(r, ComplexMatrix::identity(c.d_in)) <= tol.eps;
}

// Partial trace over the input factor equals I_{d_out}.
inline bool is_unital(const ChoiMatrix& c, Tolerance tol = {}) {
  const auto r = partial_trace(c.matrix, c.d_in, c.d_out, Subsystem::first);
  return max_abs_diff(r, ComplexMatrix::identity(c.d_out)) <= tol.eps;
}

// sum_i V_i* V_i = I
inline bool is_tp(const KrausSet& k, Tolerance tol = {}) {
  validate(k);
  ComplexMatrix s(k.d_in, k.d_in);
  for (const auto& v : k.ops) s += v.adjoint() * v;
  return max_abs_diff(s, ComplexMatrix::identity(k.d_in)) <= tol.eps;
}

// sum_i V_i V_i* = I
inline bool is_unital(const KrausSet& k, Tolerance tol = {}) {
  validate(k);
  ComplexMatrix s(k.d_out, k.d_out);
  for (const auto& v : k.ops) s += v * v.adjoint();
  return max_abs_diff(s, ComplexMatrix::identity(k.d_out)) <= tol.eps;
}

}  // namespace psdkit::channel
