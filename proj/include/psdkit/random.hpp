#pragma once

// Seeded random fixtures shared by the self-test and the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "psdkit/linalg.hpp"
#include "psdkit/matrix.hpp"

namespace psdkit {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * unit_(engine_);
  }
  cplx complex_normal() { return {normal(), normal()}; }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(unit_(engine_) * static_cast<double>(hi - lo + 1)) %
                    (hi - lo + 1);
  }
  bool coin() { return unit_(engine_) < 0.5; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

inline ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& x : m.data()) x = rng.complex_normal();
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  return hermitian_part(random_matrix(rng, n, n));
}

// Haar-like unitary via modified Gram-Schmidt on a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  ComplexMatrix q = random_matrix(rng, n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, p)) * q(i, c);
      for (std::size_t i = 0; i < n; ++i) q(i, c) -= dot * q(i, p);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, c));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, c) /= nrm;
  }
  return q;
}

// U diag(w) U* with a random unitary U.
inline ComplexMatrix random_hermitian_with_spectrum(Rng& rng, const std::vector<double>& w) {
  const ComplexMatrix u = random_unitary(rng, w.size());
  return hermitian_part(u * ComplexMatrix::diagonal(w) * u.adjoint());
}

// M M* with M of shape n x rank.
inline ComplexMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank) {
  const ComplexMatrix m = random_matrix(rng, n, rank);
  return hermitian_part(m * m.adjoint());
}

inline ComplexMatrix random_psd(Rng& rng, std::size_t n) { return random_psd(rng, n, n); }

// Spectrum drawn in [0, 1] and shifted so the smallest eigenvalue lies in
// [-0.5, -0.05].
inline ComplexMatrix random_indefinite(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (auto& x : w) x = rng.uniform();
  const double shift = *std::min_element(w.begin(), w.end()) + rng.uniform(0.05, 0.5);
  for (auto& x : w) x -= shift;
  return random_hermitian_with_spectrum(rng, w);
}

// Contraction with operator norm drawn uniformly in [0, max_norm].
inline ComplexMatrix random_contraction(Rng& rng, std::size_t rows, std::size_t cols,
                                        double max_norm = 0.95) {
  ComplexMatrix g = random_matrix(rng, rows, cols);
  const double nrm = operator_norm(g);
  return g * cplx(rng.uniform(0.0, max_norm) / nrm);
}

inline ComplexMatrix random_pure_state(Rng& rng, std::size_t n) {
  ComplexMatrix v = random_matrix(rng, n, 1);
  v *= 1.0 / frobenius_norm(v);
  return hermitian_part(v * v.adjoint());
}

inline ComplexMatrix random_density(Rng& rng, std::size_t n, std::size_t rank) {
  ComplexMatrix p = random_psd(rng, n, rank);
  return p * cplx(1.0 / p.trace().real());
}

// Kraus operators (d_out x d_in each) of a trace-preserving channel: the
// stacked r*d_out x d_in matrix is an isometry.
inline std::vector<ComplexMatrix> random_tp_kraus(Rng& rng, std::size_t d_in,
                                                  std::size_t d_out, std::size_t r) {
  const std::size_t big = std::max(r * d_out, d_in);
  const ComplexMatrix u = random_unitary(rng, big);
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < r; ++i) ops.push_back(u.block(i * d_out, 0, d_out, d_in));
  return ops;
}

// sqrt(p_i) U_i: trace-preserving and unital.
inline std::vector<ComplexMatrix> random_mixed_unitary_kraus(Rng& rng, std::size_t d,
                                                             std::size_t r) {
  std::vector<double> p(r);
  double sum = 0.0;
  for (auto& x : p) sum += (x = rng.uniform(0.1, 1.0));
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < r; ++i)
    ops.push_back(random_unitary(rng, d) * cplx(std::sqrt(p[i] / sum)));
  return ops;
}

}  // namespace psdkit
