#pragma once

// Six equivalent positivity tests for Hermitian matrices and a consensus
// runner. "Non-negative" always means >= -tol * scale; each method documents
// its scale.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psdkit/errors.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/matrix.hpp"
#include "psdkit/random.hpp"

namespace psdkit::positivity {

enum class Method { p1, p2, p3, p4, p5, p6 };

inline std::string to_string(Method m) {
  static const char* names[] = {"p1", "p2", "p3", "p4", "p5", "p6"};
  return names[static_cast<int>(m)];
}

inline std::optional<Method> method_from_string(const std::string& s) {
  for (auto m : {Method::p1, Method::p2, Method::p3, Method::p4, Method::p5, Method::p6})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

// Evidence that a matrix is not PSD.
struct Witness {
  std::string kind;                 // "eigenvalue", "pivot", "minor", "coefficient", "vector"
  std::optional<std::size_t> index; // 1-based where meaningful
  double value = 0.0;
  std::vector<std::size_t> subset;  // principal minor indices (1-based)
  std::optional<ComplexMatrix> vector;
};

struct Verdict {
  bool is_psd = false;
  Method method = Method::p2;
  std::optional<Witness> witness;   // present iff !is_psd
  bool necessary_only = false;      // true for the sampling test
};

// max(1, ||P||_F), used to make tolerances scale-aware.
inline double scale_of(const ComplexMatrix& p) { return std::max(1.0, frobenius_norm(p)); }

namespace detail {
inline Verdict pass(Method m) { return Verdict{true, m, std::nullopt, false}; }
inline Verdict fail(Method m, Witness w) { return Verdict{false, m, std::move(w), false}; }
}  // namespace detail

// z*Pz >= -tol for `samples` random unit vectors. A failure is a proof of
// non-positivity; a pass is only evidence.
inline Verdict check_p1_quadratic_form(const ComplexMatrix& p, std::size_t samples,
                                       Tolerance tol = {}, std::uint64_t seed = 1) {
  require_hermitian(p, tol, "check_p1_quadratic_form");
  Rng rng(seed);
  const std::size_t n = p.rows();
  const double bound = tol.eps * scale_of(p);
  for (std::size_t s = 0; s < samples; ++s) {
    ComplexMatrix z = random_matrix(rng, n, 1);
    z *= 1.0 / frobenius_norm(z);
    const double q = (z.adjoint() * p * z)(0, 0).real();
    if (q < -bound) {
      Witness w{"vector", std::nullopt, q, {}, z};
      return detail::fail(Method::p1, std::move(w));
    }
  }
  Verdict v = detail::pass(Method::p1);
  v.necessary_only = true;
  return v;
}

// Smallest eigenvalue >= -tol * max(1, ||P||).
inline Verdict check_p2_eigen(const ComplexMatrix& p, Tolerance tol = {}) {
  const auto e = herm_eig(p, tol);
  const double lo = e.values.empty() ? 0.0 : e.values.back();
  if (lo >= -tol.eps * scale_of(p)) return detail::pass(Method::p2);
  return detail::fail(Method::p2, Witness{"eigenvalue", e.values.size(), lo, {}, {}});
}

// Semidefinite Cholesky with pivot tolerance tol * max(1, ||P||).
inline Verdict check_p3_cholesky(const ComplexMatrix& p, Tolerance tol = {}) {
  try {
    (void)psd_cholesky(p, Tolerance(tol.eps * scale_of(p)));
    return detail::pass(Method::p3);
  } catch (const NotPsdError& e) {
    return detail::fail(Method::p3, Witness{"pivot", e.index(), e.value(), {}, {}});
  }
}

inline constexpr std::size_t max_minor_dimension = 16;

// Every principal minor of order k must be >= -tol * max(1, ||P||)^k.
inline Verdict check_p4_minors(const ComplexMatrix& p, Tolerance tol = {}) {
  require_hermitian(p, tol, "check_p4_minors");
  const std::size_t n = p.rows();
  if (n > max_minor_dimension)
    throw CapacityError("check_p4_minors: dimension exceeds " +
                        std::to_string(max_minor_dimension));
  const double scale = scale_of(p);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    ComplexMatrix sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = p(idx[r], idx[c]);
    const double minor = det_lu(sub).real();
    if (minor < -tol.eps * std::pow(scale, static_cast<double>(idx.size()))) {
      for (auto& i : idx) ++i;
      return detail::fail(Method::p4, Witness{"minor", std::nullopt, minor, idx, {}});
    }
  }
  return detail::pass(Method::p4);
}

// b_i >= -tol * binom(n, i) * max(1, ||P||)^i for every characteristic
// polynomial coefficient.
inline Verdict check_p5_charpoly(const ComplexMatrix& p, Tolerance tol = {}) {
  require_hermitian(p, tol, "check_p5_charpoly");
  const auto b = charpoly_coeffs(hermitian_part(p));
  const std::size_t n = b.size();
  const double scale = scale_of(p);
  double binom = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    binom = binom * static_cast<double>(n - i + 1) / static_cast<double>(i);
    if (b[i - 1] < -tol.eps * binom * std::pow(scale, static_cast<double>(i)))
      return detail::fail(Method::p5, Witness{"coefficient", i, b[i - 1], {}, {}});
  }
  return detail::pass(Method::p5);
}

// A Hermitian square root exists and squares back to P.
inline Verdict check_p6_sqrt(const ComplexMatrix& p, Tolerance tol = {}) {
  const double scale = scale_of(p);
  try {
    const ComplexMatrix h = matrix_sqrt_psd(p, Tolerance(tol.eps * scale));
    const double resid = max_abs_diff(h * h, p);
    if (resid > 1e-8 * scale)
      throw NumericalError("check_p6_sqrt: square root residual " + std::to_string(resid));
    return detail::pass(Method::p6);
  } catch (const NotPsdError& e) {
    return detail::fail(Method::p6, Witness{"eigenvalue", e.index(), e.value(), {}, {}});
  }
}

inline Verdict check(const ComplexMatrix& p, Method m, Tolerance tol = {},
                     std::size_t samples = 1000, std::uint64_t seed = 1) {
  switch (m) {
    case Method::p1: return check_p1_quadratic_form(p, samples, tol, seed);
    case Method::p2: return check_p2_eigen(p, tol);
    case Method::p3: return check_p3_cholesky(p, tol);
    case Method::p4: return check_p4_minors(p, tol);
    case Method::p5: return check_p5_charpoly(p, tol);
    case Method::p6: return check_p6_sqrt(p, tol);
  }
  throw DomainError("unknown positivity method");
}

struct Consensus {
  std::map<Method, Verdict> verdicts;
  bool consistent = true;  // P2..P6 agree; P1 may only disagree by passing
  bool is_psd = false;     // the P2 verdict
};

// Runs P2-P6 (and P1 when samples > 0). P4 is skipped above its capacity.
inline Consensus consensus(const ComplexMatrix& p, Tolerance tol = {}, std::size_t samples = 0,
                           std::uint64_t seed = 1) {
  Consensus c;
  for (auto m : {Method::p2, Method::p3, Method::p4, Method::p5, Method::p6}) {
    if (m == Method::p4 && p.rows() > max_minor_dimension) continue;
    c.verdicts[m] = check(p, m, tol);
  }
  if (samples > 0) c.verdicts[Method::p1] = check_p1_quadratic_form(p, samples, tol, seed);
  c.is_psd = c.verdicts.at(Method::p2).is_psd;
  for (const auto& [m, v] : c.verdicts) {
    if (m == Method::p1) {
      // A sampled disproof contradicts a PSD consensus; a sampled pass cannot.
      if (!v.is_psd && c.is_psd) c.consistent = false;
    } else if (v.is_psd != c.is_psd) {
      c.consistent = false;
    }
  }
  return c;
}

}  // namespace psdkit::positivity
