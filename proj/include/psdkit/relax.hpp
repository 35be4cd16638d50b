#pragma once

// Dissipator assembly for N-level open systems and the complete-positivity
// constraints on pure-dephasing rates for N = 4.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "psdkit/errors.hpp"
#include "psdkit/matrix.hpp"

namespace psdkit::relax {

// gamma(k, n): population rate from level n to level k (zero diagonal).
// gamma_p / gamma_d: symmetric dephasing contributions (zero diagonal);
// the total dephasing rate is their sum.
struct RelaxationRates {
  std::size_t n = 0;
  std::vector<double> gamma;    // n x n row-major
  std::vector<double> gamma_p;  // n x n row-major, symmetric
  std::vector<double> gamma_d;  // n x n row-major, symmetric

  explicit RelaxationRates(std::size_t levels = 0)
      : n(levels), gamma(levels * levels), gamma_p(levels * levels), gamma_d(levels * levels) {}

  double population(std::size_t k, std::size_t m) const { return gamma[k * n + m]; }
  double dephasing(std::size_t k, std::size_t m) const {
    return gamma_p[k * n + m] + gamma_d[k * n + m];
  }

  void set_population(std::size_t k, std::size_t m, double v) { gamma[k * n + m] = v; }
  void set_dephasing_pure(std::size_t k, std::size_t m, double v) {
    gamma_d[k * n + m] = gamma_d[m * n + k] = v;
  }
  void set_dephasing_population(std::size_t k, std::size_t m, double v) {
    gamma_p[k * n + m] = gamma_p[m * n + k] = v;
  }
};

inline void validate(const RelaxationRates& r) {
  const std::size_t nn = r.n * r.n;
  if (r.gamma.size() != nn || r.gamma_p.size() != nn || r.gamma_d.size() != nn)
    throw DimensionError("relaxation rates: arrays are not n x n");
  for (std::size_t k = 0; k < r.n; ++k)
    for (std::size_t m = 0; m < r.n; ++m) {
      const std::size_t i = k * r.n + m, t = m * r.n + k;
      if (r.gamma[i] < 0.0 || r.gamma_p[i] < 0.0 || r.gamma_d[i] < 0.0)
        throw DomainError("relaxation rates must be non-negative");
      if (k == m && (r.gamma[i] != 0.0 || r.gamma_p[i] != 0.0 || r.gamma_d[i] != 0.0))
        throw DomainError("relaxation rates must have a zero diagonal");
      if (r.gamma_p[i] != r.gamma_p[t] || r.gamma_d[i] != r.gamma_d[t])
        throw DomainError("dephasing rates must be symmetric");
    }
}

// Composite index (m, n) -> m + n * N, 0-based.
inline std::size_t ld_index(std::size_t m, std::size_t n, std::size_t levels) {
  return m + n * levels;
}

// Dissipative generator acting on vec(rho). Entries are real.
inline ComplexMatrix build_ld(const RelaxationRates& r) {
  validate(r);
  const std::size_t n = r.n;
  ComplexMatrix ld(n * n, n * n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) {
      if (m == k) continue;
      const std::size_t mk = ld_index(m, k, n);
      ld(mk, mk) = -r.dephasing(m, k);
      ld(ld_index(m, m, n), ld_index(k, k, n)) = r.population(m, k);
    }
  for (std::size_t m = 0; m < n; ++m) {
    double out = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != m) out += r.population(k, m);
    ld(ld_index(m, m, n), ld_index(m, m, n)) = -out;
  }
  return ld;
}

// Pure-dephasing rates of a 4-level system, indexed by level pair.
struct DephasingRates4 {
  double g12 = 0, g13 = 0, g14 = 0, g23 = 0, g24 = 0, g34 = 0;

  bool any_negative() const {
    return g12 < 0 || g13 < 0 || g14 < 0 || g23 < 0 || g24 < 0 || g34 < 0;
  }
};

inline DephasingRates4 pure_dephasing_n4(const RelaxationRates& r) {
  if (r.n != 4)
    throw CapacityError("complete-positivity constraints are implemented for N = 4 only");
  auto at = [&](std::size_t k, std::size_t m) { return r.gamma_d[k * 4 + m]; };
  return {at(0, 1), at(0, 2), at(0, 3), at(1, 2), at(1, 3), at(2, 3)};
}

// Half the sum of all six pure-dephasing rates.
inline double gamma_tot(const DephasingRates4& g) {
  return 0.5 * (g.g12 + g.g13 + g.g14 + g.g23 + g.g24 + g.g34);
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

// The 3 x 3 matrix whose positivity is equivalent to complete positivity.
inline Matrix3 b_matrix(const DephasingRates4& g) {
  const double t = gamma_tot(g);
  Matrix3 b{};
  b[0][0] = t - (g.g13 + g.g24);
  b[1][1] = t - (g.g14 + g.g23);
  b[2][2] = t - (g.g12 + g.g34);
  b[0][1] = b[1][0] = 0.5 * (g.g12 - g.g34);
  b[0][2] = b[2][0] = 0.5 * (g.g14 - g.g23);
  b[1][2] = b[2][1] = 0.5 * (g.g13 - g.g24);
  return b;
}

inline ComplexMatrix to_complex(const Matrix3& b) {
  ComplexMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = b[i][j];
  return m;
}

// The inequality forms of the positivity conditions, written out in rates.
struct InequalityValues {
  std::array<double, 3> diagonal{};  // b_ii >= 0, each as lhs - rhs in rates
  double g12 = 0.0;                  // seven-term form of |g12| <= 1
  double g23 = 0.0;                  // seven-term form of |g23| <= 1
  double g13 = 0.0;                  // b11 b22 b33 + 2 b12 b13 b23 - (b11 b23^2 + b22 b13^2 + b33 b12^2)
};

inline InequalityValues inequality_values(const DephasingRates4& g) {
  auto sq = [](double x) { return x * x; };
  InequalityValues v;
  v.diagonal[0] = (g.g12 + g.g14 + g.g23 + g.g34) - (g.g13 + g.g24);
  v.diagonal[1] = (g.g12 + g.g13 + g.g24 + g.g34) - (g.g14 + g.g23);
  v.diagonal[2] = (g.g13 + g.g14 + g.g23 + g.g24) - (g.g12 + g.g34);
  v.g12 = 4 * g.g12 * g.g34 - sq(g.g13 - g.g14) - sq(g.g13 - g.g23) + sq(g.g13 - g.g24) +
          sq(g.g14 - g.g23) - sq(g.g14 - g.g24) - sq(g.g23 - g.g24);
  v.g23 = 4 * g.g13 * g.g24 - sq(g.g12 - g.g14) - sq(g.g12 - g.g23) + sq(g.g12 - g.g34) +
          sq(g.g14 - g.g23) - sq(g.g14 - g.g34) - sq(g.g23 - g.g34);
  const Matrix3 b = b_matrix(g);
  v.g13 = b[0][0] * b[1][1] * b[2][2] + 2 * b[0][1] * b[0][2] * b[1][2] -
          (b[0][0] * sq(b[1][2]) + b[1][1] * sq(b[0][2]) + b[2][2] * sq(b[0][1]));
  return v;
}

struct CpReport {
  Matrix3 b{};
  std::array<bool, 3> diag_ok{};
  // Schur parameters of B; empty when no contraction satisfies the relation
  // (B is then not positive).
  std::optional<double> g12, g23, g13;
  std::vector<std::string> degenerate;  // zero-diagonal / boundary branches taken
  InequalityValues inequalities;
  bool inequality_verdict = false;  // all closed-form inequalities >= -tol
  bool verdict = false;             // diag_ok and |g| <= 1
};

namespace detail {

// g with b_ij = sqrt(b_ii) g sqrt(b_jj); g = 0 where a diagonal vanishes.
inline std::optional<double> adjacent_parameter(double bii, double bjj, double bij, double tol,
                                                std::vector<std::string>& notes,
                                                const char* name) {
  if (bii <= tol || bjj <= tol) {
    notes.push_back(std::string(name) + ": zero diagonal, parameter set to 0");
    if (std::abs(bij) > std::sqrt(tol)) return std::nullopt;
    return 0.0;
  }
  return bij / std::sqrt(bii * bjj);
}

}  // namespace detail

// Complete-positivity check for N = 4 through the Schur parameters of B,
// alongside the explicit inequality forms.
inline CpReport cp_constraints_n4(const DephasingRates4& g, Tolerance tol = {}) {
  if (g.any_negative()) throw DomainError("relaxation rates must be non-negative");
  CpReport r;
  r.b = b_matrix(g);
  r.inequalities = inequality_values(g);
  const double scale = std::max(1.0, gamma_tot(g));
  const double t = tol.eps * scale;

  for (std::size_t i = 0; i < 3; ++i) r.diag_ok[i] = r.b[i][i] >= -t;
  const bool diag_ok = r.diag_ok[0] && r.diag_ok[1] && r.diag_ok[2];

  if (diag_ok) {
    const auto& b = r.b;
    r.g12 = detail::adjacent_parameter(b[0][0], b[1][1], b[0][1], t, r.degenerate, "g12");
    r.g23 = detail::adjacent_parameter(b[1][1], b[2][2], b[1][2], t, r.degenerate, "g23");
    const double slack = 1.0 + tol.eps;
    if (r.g12 && r.g23 && std::abs(*r.g12) <= slack && std::abs(*r.g23) <= slack) {
      if (b[0][0] <= t || b[2][2] <= t) {
        r.degenerate.push_back("g13: zero diagonal, parameter set to 0");
        if (std::abs(b[0][2]) <= std::sqrt(t)) r.g13 = 0.0;
      } else {
        const double x = b[0][2] / std::sqrt(b[0][0] * b[2][2]) - (*r.g12) * (*r.g23);
        const double d12 = std::sqrt(std::max(0.0, 1.0 - (*r.g12) * (*r.g12)));
        const double d23 = std::sqrt(std::max(0.0, 1.0 - (*r.g23) * (*r.g23)));
        const double denom = d12 * d23;
        const double cut = std::sqrt(tol.eps);
        if (denom > cut) {
          r.g13 = x / denom;
        } else {
          r.degenerate.push_back("g13: singular defect, parameter set to 0");
          if (std::abs(x) <= cut) r.g13 = 0.0;
        }
      }
    }
  }

  const double slack = 1.0 + tol.eps;
  r.verdict = diag_ok && r.g12 && r.g23 && r.g13 && std::abs(*r.g12) <= slack &&
              std::abs(*r.g23) <= slack && std::abs(*r.g13) <= slack;

  const auto& v = r.inequalities;
  r.inequality_verdict = v.diagonal[0] >= -t && v.diagonal[1] >= -t && v.diagonal[2] >= -t &&
                         v.g12 >= -t * scale && v.g23 >= -t * scale &&
                         v.g13 >= -t * scale * scale;
  return r;
}

inline CpReport cp_constraints(const RelaxationRates& rates, Tolerance tol = {}) {
  validate(rates);
  return cp_constraints_n4(pure_dephasing_n4(rates), tol);
}

struct IdentityCheck {
  bool holds = false;
  double g12_residual = 0.0;  // max deviation among the three g12 forms
  double g23_residual = 0.0;
};

// The seven-term inequality forms equal the compact forms
// 4 G12 G34 - (G14 + G23 - G13 - G24)^2 and 4 (b11 b22 - b12^2), and likewise
// for g23 with 4 G13 G24 - (G12 + G34 - G14 - G23)^2 and 4 (b22 b33 - b23^2).
inline IdentityCheck inequality_identity_check(const DephasingRates4& g, double tol = 1e-10) {
  auto sq = [](double x) { return x * x; };
  const auto v = inequality_values(g);
  const Matrix3 b = b_matrix(g);
  const double c12 = 4 * g.g12 * g.g34 - sq(g.g14 + g.g23 - g.g13 - g.g24);
  const double m12 = 4 * (b[0][0] * b[1][1] - sq(b[0][1]));
  const double c23 = 4 * g.g13 * g.g24 - sq(g.g12 + g.g34 - g.g14 - g.g23);
  const double m23 = 4 * (b[1][1] * b[2][2] - sq(b[1][2]));
  IdentityCheck r;
  r.g12_residual = std::max({std::abs(v.g12 - c12), std::abs(v.g12 - m12), std::abs(c12 - m12)});
  r.g23_residual = std::max({std::abs(v.g23 - c23), std::abs(v.g23 - m23), std::abs(c23 - m23)});
  const double scale = std::max(1.0, sq(gamma_tot(g)));
  r.holds = r.g12_residual <= tol * scale && r.g23_residual <= tol * scale;
  return r;
}

}  // namespace psdkit::relax
