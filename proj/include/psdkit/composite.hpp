#pragma once

// Column stacking and bipartite operations. Composite index convention:
// (k, p) -> k * d2 + p, so block (k, j) of a (d1 d2) x (d1 d2) matrix is the
// d2 x d2 sub-block at rows k*d2.., cols j*d2...

#include <cstddef>

#include "psdkit/errors.hpp"
#include "psdkit/matrix.hpp"

namespace psdkit {

enum class Subsystem { first, second };

// Column-major stacking of a d x e matrix into a (d e) x 1 column.
inline ComplexMatrix vec(const ComplexMatrix& v) {
  ComplexMatrix out(v.rows() * v.cols(), 1);
  for (std::size_t c = 0; c < v.cols(); ++c)
    for (std::size_t r = 0; r < v.rows(); ++r) out(c * v.rows() + r, 0) = v(r, c);
  return out;
}

inline ComplexMatrix unvec(const ComplexMatrix& v, std::size_t d, std::size_t e) {
  if (v.cols() != 1 || v.rows() != d * e)
    throw DimensionError("unvec: length does not equal d*e");
  ComplexMatrix out(d, e);
  for (std::size_t c = 0; c < e; ++c)
    for (std::size_t r = 0; r < d; ++r) out(r, c) = v(c * d + r, 0);
  return out;
}

namespace detail {
inline void require_bipartite(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                              const char* what) {
  if (!m.is_square() || m.rows() != d1 * d2)
    throw DimensionError(std::string(what) + ": matrix is not (d1*d2) square");
}
}  // namespace detail

inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                                   Subsystem which) {
  detail::require_bipartite(m, d1, d2, "partial_trace");
  if (which == Subsystem::first) {
    ComplexMatrix out(d2, d2);
    for (std::size_t k = 0; k < d1; ++k)
      for (std::size_t p = 0; p < d2; ++p)
        for (std::size_t q = 0; q < d2; ++q) out(p, q) += m(k * d2 + p, k * d2 + q);
    return out;
  }
  ComplexMatrix out(d1, d1);
  for (std::size_t k = 0; k < d1; ++k)
    for (std::size_t j = 0; j < d1; ++j)
      for (std::size_t p = 0; p < d2; ++p) out(k, j) += m(k * d2 + p, j * d2 + p);
  return out;
}

// Transpose of each d2 x d2 block.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t d1,
                                       std::size_t d2) {
  detail::require_bipartite(m, d1, d2, "partial_transpose");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < d1; ++k)
    for (std::size_t j = 0; j < d1; ++j)
      for (std::size_t p = 0; p < d2; ++p)
        for (std::size_t q = 0; q < d2; ++q)
          out(k * d2 + p, j * d2 + q) = m(k * d2 + q, j * d2 + p);
  return out;
}

}  // namespace psdkit
