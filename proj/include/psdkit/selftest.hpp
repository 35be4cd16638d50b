#pragma once

// Seeded randomized invariant suite over every module. The report holds only
// counts and residuals, so equal seeds give byte-identical output.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psdkit/bloch.hpp"
#include "psdkit/channel.hpp"
#include "psdkit/linalg.hpp"
#include "psdkit/positivity.hpp"
#include "psdkit/random.hpp"
#include "psdkit/relax.hpp"
#include "psdkit/schur.hpp"
#include "psdkit/toeplitz.hpp"

namespace psdkit::selftest {

struct Section {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_residual = 0.0;

  void record(bool ok, double residual = 0.0) {
    ++cases;
    if (!ok) ++failures;
    if (residual > max_residual) max_residual = residual;
  }
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<Section> sections;

  bool passed() const {
    for (const auto& s : sections)
      if (s.failures) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json out = {{"seed", seed}, {"passed", passed()}};
    out["sections"] = nlohmann::json::array();
    for (const auto& s : sections)
      out["sections"].push_back({{"name", s.name},
                                 {"cases", s.cases},
                                 {"failures", s.failures},
                                 {"max_residual", s.max_residual}});
    return out;
  }
};

namespace detail {

// Runs body; any library exception counts as a failed case.
inline void guarded(Section& s, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception&) {
    s.record(false);
  }
}

inline Section positivity_section(Rng& rng) {
  Section s{"positivity"};
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = rng.index(2, 8);
    const bool psd = i % 2 == 0;
    const ComplexMatrix m = psd ? random_psd(rng, n) : random_indefinite(rng, n);
    guarded(s, [&] {
      const auto c = positivity::consensus(m);
      s.record(c.consistent && c.is_psd == psd);
    });
  }
  return s;
}

inline Section schur_section(Rng& rng) {
  Section s{"schur"};
  for (int i = 0; i < 60; ++i) {
    const std::size_t d = rng.index(2, 6);
    const std::size_t b = i % 3 == 0 ? 2 : 1;
    const auto p = schur::random_parameters(rng, d, b);
    guarded(s, [&] {
      const ComplexMatrix m = schur::reconstruct(p);
      const double scale = positivity::scale_of(m);
      const bool positive = min_eigenvalue(m) >= -1e-9 * scale;
      const auto q = schur::extract(m, b);
      double resid = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        resid = std::max(resid, max_abs_diff(q.root(k), p.root(k)));
      for (const auto& [kj, g] : p.gammas())
        resid = std::max(resid, max_abs_diff(q.gamma(kj.first, kj.second), g));
      const double det = det_lu(m).real();
      const double det_rel =
          std::abs(schur::determinant_formula(p) - det) / std::max(std::abs(det), 1e-300);
      s.record(positive && resid <= 1e-8 && det_rel <= 1e-8, std::max(resid, det_rel));
    });
  }
  return s;
}

inline Section bloch_section(Rng& rng) {
  Section s{"bloch"};
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto basis = bloch::gellmann(d);
    const auto t = bloch::structure_tensor(basis);
    for (int i = 0; i < 20; ++i) {
      guarded(s, [&] {
        const auto pure = bloch::to_bloch(random_pure_state(rng, d), basis);
        const auto r = bloch::purity(pure.beta, t, Tolerance(1e-9));
        const auto mixed = bloch::to_bloch(random_density(rng, d, d), basis);
        const bool mixed_rejected = !bloch::is_pure(mixed.beta, t, Tolerance(1e-9));
        s.record(r.pure && mixed_rejected, std::max(r.norm_residual, r.cup_residual));
      });
      guarded(s, [&] {
        std::vector<double> beta0(basis.size());
        for (auto& x : beta0) x = rng.normal();
        const double target = rng.uniform(0.0, 0.5 * static_cast<double>(d * d));
        const double scale = std::sqrt(target / bloch::squared_norm(beta0));
        for (auto& x : beta0) x *= scale;
        const auto rep = bloch::represent_from_beta0(beta0, basis, t);
        const double resid = std::max(max_abs_diff(rep.rho, rep.h * rep.h),
                                      std::abs(rep.rho.trace() - 1.0));
        s.record(min_eigenvalue(rep.rho) >= -1e-9 && resid <= 1e-9, resid);
      });
    }
  }
  return s;
}

inline Section channel_section(Rng& rng) {
  Section s{"channel"};
  for (int i = 0; i < 40; ++i) {
    const std::size_t din = rng.index(2, 3), dout = rng.index(2, 3);
    const std::size_t r = rng.index((din + dout - 1) / dout, 3);
    channel::KrausSet k{din, dout, random_tp_kraus(rng, din, dout, r)};
    guarded(s, [&] {
      const auto c = channel::choi_from_kraus(k);
      const auto c_vec = channel::choi_from_kraus_vec(k);
      const auto back = channel::choi_from_kraus(channel::kraus_from_choi(c));
      const double resid =
          std::max(max_abs_diff(back.matrix, c.matrix), max_abs_diff(c_vec.matrix, c.matrix));
      const bool routes_agree = channel::is_tp(c) == channel::is_tp(k) &&
                                channel::is_unital(c) == channel::is_unital(k);
      s.record(channel::is_cp(c).is_psd && channel::is_tp(c) && routes_agree && resid <= 1e-8,
               resid);
    });
  }
  return s;
}

inline Section toeplitz_section(Rng& rng) {
  Section s{"toeplitz"};
  for (int i = 0; i < 40; ++i) {
    guarded(s, [&] {
      const std::size_t d1 = rng.index(2, 3), d2 = rng.index(2, 3);
      const ComplexMatrix a = toeplitz::random_positive_toeplitz(rng, d1 * d2);
      const ComplexMatrix pt = partial_transpose(a, d1, d2);
      const double lo = min_eigenvalue(pt);
      s.record(lo >= -1e-9 * positivity::scale_of(a) && toeplitz::pt_identity_check(a, d1, d2),
               std::max(0.0, -lo));
    });
  }
  for (int i = 0; i < 20; ++i) {
    guarded(s, [&] {
      const std::size_t m = rng.index(2, 4), b = rng.index(2, 3);
      const ComplexMatrix a = toeplitz::random_positive_block_toeplitz(rng, m, b);
      const auto r = toeplitz::param_transpose_check(a, b);
      const double lo = min_eigenvalue(partial_transpose(a, m, b));
      s.record(r.holds && lo >= -1e-9 * positivity::scale_of(a), r.residual);
    });
  }
  return s;
}

inline Section relax_section(Rng& rng) {
  Section s{"relax"};
  for (int i = 0; i < 200; ++i) {
    relax::DephasingRates4 g{rng.uniform(), rng.uniform(), rng.uniform(),
                             rng.uniform(), rng.uniform(), rng.uniform()};
    guarded(s, [&] {
      const auto report = relax::cp_constraints_n4(g);
      const auto b = relax::to_complex(relax::b_matrix(g));
      const bool oracle = min_eigenvalue(b) >= -1e-10 * positivity::scale_of(b);
      const auto id = relax::inequality_identity_check(g);
      s.record(report.verdict == oracle && id.holds,
               std::max(id.g12_residual, id.g23_residual));
    });
  }
  return s;
}

}  // namespace detail

inline Report run(std::uint64_t seed) {
  Rng rng(seed);
  Report r{seed, {}};
  r.sections.push_back(detail::positivity_section(rng));
  r.sections.push_back(detail::schur_section(rng));
  r.sections.push_back(detail::bloch_section(rng));
  r.sections.push_back(detail::channel_section(rng));
  r.sections.push_back(detail::toeplitz_section(rng));
  r.sections.push_back(detail::relax_section(rng));
  return r;
}

}  // namespace psdkit::selftest
