// psdkit command-line front end.
//
// Exit codes: 0 success / true verdict, 1 false verdict, 2 usage or I/O
// error, 3 numerical failure or disagreement between methods.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psdkit.hpp"

namespace {

using psdkit::ComplexMatrix;
using psdkit::Tolerance;
using json = nlohmann::json;
namespace io = psdkit::io;

enum Exit { ok = 0, negative = 1, usage = 2, numerical = 3 };

struct RunConfig {
  double tol = 1e-10;
  std::string format = "json";
  std::uint64_t seed = 42;
  std::string input;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void emit_matrix(const RunConfig& cfg, const ComplexMatrix& m) {
  if (cfg.format == "csv")
    std::cout << io::to_csv(m);
  else
    emit(io::to_json(m));
}

json not_psd_report(const psdkit::NotPsdError& e) {
  return {{"is_psd", false},
          {"error", e.what()},
          {"witness", {{"kind", "eigenvalue"}, {"index", e.index()}, {"value", e.value()}}}};
}

// --- check ----------------------------------------------------------------

int run_check(const RunConfig& cfg, const std::string& method, std::size_t samples) {
  namespace pos = psdkit::positivity;
  const ComplexMatrix m = io::load_matrix(cfg.input);
  const Tolerance tol(cfg.tol);
  if (method == "all") {
    const auto c = pos::consensus(m, tol, samples, cfg.seed);
    json verdicts = json::object();
    for (const auto& [k, v] : c.verdicts) verdicts[pos::to_string(k)] = io::to_json(v);
    emit({{"is_psd", c.is_psd}, {"consistent", c.consistent}, {"verdicts", verdicts}});
    if (!c.consistent) {
      std::cerr << "psdkit: positivity methods disagree\n";
      return numerical;
    }
    return c.is_psd ? ok : negative;
  }
  const auto m_id = pos::method_from_string(method);
  if (!m_id) throw CLI::ValidationError("--method", "unknown method " + method);
  const auto v = pos::check(m, *m_id, tol, samples, cfg.seed);
  emit(io::to_json(v));
  return v.is_psd ? ok : negative;
}

// --- schur ----------------------------------------------------------------

psdkit::schur::Parameters load_or_extract(const RunConfig& cfg, std::size_t block,
                                          psdkit::schur::RootChoice root) {
  const json j = io::parse_json(io::read_file(cfg.input));
  if (io::looks_like_parameters(j)) return io::parameters_from_json(j);
  return psdkit::schur::extract(io::matrix_from_json(j), block, root, Tolerance(cfg.tol));
}

int run_schur(const RunConfig& cfg, const std::string& verb, std::size_t block,
              const std::string& root_name) {
  namespace schur = psdkit::schur;
  const auto root =
      root_name == "chol" ? schur::RootChoice::cholesky : schur::RootChoice::positive_sqrt;
  const Tolerance tol(cfg.tol);
  if (verb == "extract") {
    const ComplexMatrix m = io::load_matrix(cfg.input);
    emit(io::to_json(schur::extract(m, block, root, tol)));
    return ok;
  }
  if (verb == "reconstruct") {
    const auto p = io::parameters_from_json(io::parse_json(io::read_file(cfg.input)));
    schur::validate(p);
    emit_matrix(cfg, schur::reconstruct(p));
    return ok;
  }
  const auto p = load_or_extract(cfg, block, root);
  if (verb == "det") {
    const double formula = schur::determinant_formula(p);
    const double lu = psdkit::det_lu(schur::reconstruct(p)).real();
    const double rel = std::abs(formula - lu) / std::max(std::abs(lu), 1e-300);
    emit({{"det_formula", formula}, {"det_lu", lu}, {"relative_error", rel}});
    return ok;
  }
  const std::size_t rank = schur::rank_from_parameters(p, tol);
  emit({{"rank", rank}, {"rank_one", rank == 1}});
  return rank == 1 ? ok : negative;
}

// --- bloch ----------------------------------------------------------------

int run_bloch(const RunConfig& cfg, const std::string& verb, std::size_t dim) {
  namespace bloch = psdkit::bloch;
  const auto basis = bloch::gellmann(dim);
  const Tolerance tol(cfg.tol);
  if (verb == "to-beta") {
    const ComplexMatrix rho = io::load_matrix(cfg.input);
    const auto b = bloch::to_bloch(rho, basis, tol);
    emit({{"d", dim}, {"beta", b.beta}});
    return ok;
  }
  const auto beta = io::real_vector_from_json(io::parse_json(io::read_file(cfg.input)));
  if (verb == "from-beta") {
    emit_matrix(cfg, bloch::from_bloch(beta, basis));
    return ok;
  }
  const auto t = bloch::structure_tensor(basis);
  if (verb == "pure") {
    if (beta.size() != basis.size()) throw psdkit::DimensionError("beta length is not d^2 - 1");
    const auto r = bloch::purity(beta, t, tol);
    emit({{"pure", r.pure}, {"norm_residual", r.norm_residual}, {"cup_residual", r.cup_residual}});
    return r.pure ? ok : negative;
  }
  const auto rep = bloch::represent_from_beta0(beta, basis, t, tol);
  const bool psd = psdkit::positivity::check_p2_eigen(rep.rho, tol).is_psd;
  emit({{"kappa", rep.kappa},
        {"beta", rep.beta.beta},
        {"rho", io::to_json(rep.rho)},
        {"h", io::to_json(rep.h)},
        {"is_psd", psd}});
  return psd ? ok : negative;
}

// --- channel --------------------------------------------------------------

int run_channel(const RunConfig& cfg, const std::string& verb, std::size_t din,
                std::size_t dout, const std::string& sqrt_name) {
  namespace ch = psdkit::channel;
  const Tolerance tol(cfg.tol);
  const json j = io::parse_json(io::read_file(cfg.input));
  const bool is_kraus = j.is_object() && j.contains("ops");
  auto choi_of_input = [&]() {
    if (is_kraus) return ch::choi_from_kraus(io::kraus_from_json(j));
    if (din == 0 || dout == 0) throw CLI::ValidationError("--din/--dout", "required for a Choi matrix");
    return ch::make_choi(io::matrix_from_json(j), din, dout);
  };
  if (verb == "choi") {
    emit_matrix(cfg, choi_of_input().matrix);
    return ok;
  }
  if (verb == "kraus") {
    const auto method = sqrt_name == "spectral" ? ch::SquareRoot::spectral : ch::SquareRoot::cholesky;
    emit(io::to_json(ch::kraus_from_choi(choi_of_input(), tol, method)));
    return ok;
  }
  const auto c = choi_of_input();
  const auto cp = ch::is_cp(c, tol);
  emit({{"cp", io::to_json(cp)}, {"tp", ch::is_tp(c, tol)}, {"unital", ch::is_unital(c, tol)}});
  return cp.is_psd ? ok : negative;
}

// --- toeplitz -------------------------------------------------------------

int run_toeplitz(const RunConfig& cfg, const std::string& verb, std::size_t d1, std::size_t d2,
                 std::size_t block) {
  namespace tp = psdkit::toeplitz;
  const Tolerance tol(cfg.tol);
  const ComplexMatrix m = io::load_matrix(cfg.input);
  if (verb == "ppt") {
    if (d1 == 0 || d2 == 0) throw CLI::ValidationError("--d1/--d2", "both are required");
    const auto v = tp::ppt_verdict(m, d1, d2, tol);
    const double scale = psdkit::positivity::scale_of(m);
    emit({{"ppt", v.is_psd},
          {"verdict", io::to_json(v)},
          {"toeplitz", tp::is_toeplitz(m, tol.eps * scale)},
          {"block_toeplitz", tp::is_block_toeplitz(m, d2, tol.eps * scale)}});
    return v.is_psd ? ok : negative;
  }
  if (block == 0) throw CLI::ValidationError("--block", "is required");
  const auto r = tp::param_transpose_check(m, block, tol);
  emit({{"holds", r.holds}, {"residual", r.residual}});
  return r.holds ? ok : negative;
}

// --- relax ----------------------------------------------------------------

int run_relax(const RunConfig& cfg, const std::string& verb, const std::string& rates_path,
              std::size_t levels) {
  namespace rx = psdkit::relax;
  const Tolerance tol(cfg.tol);
  const json j = io::parse_json(io::read_file(rates_path));
  if (verb == "check4") {
    const auto g = io::dephasing4_from_json(j);
    if (g.any_negative()) throw psdkit::DomainError("rates must be non-negative");
    const auto r = rx::cp_constraints_n4(g, tol);
    emit(io::to_json(r));
    return r.verdict ? ok : negative;
  }
  const auto rates = io::rates_from_json(j, levels);
  const ComplexMatrix ld = rx::build_ld(rates);
  if (cfg.format == "csv") {
    std::cout << io::to_csv(ld);
    return ok;
  }
  json out = {{"levels", rates.n}, {"ld", io::to_json(ld)}};
  if (rates.n == 4) out["cp"] = io::to_json(rx::cp_constraints(rates, tol));
  emit(out);
  return ok;
}

std::optional<double> env_tolerance() {
  const char* s = std::getenv("PSDKIT_TOL");
  if (!s || !*s) return std::nullopt;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw CLI::ValidationError("PSDKIT_TOL", std::string("not a number: ") + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive semidefinite matrices via Schur parameters"};
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<double> tol_flag;
  app.add_option("--tol", tol_flag, "tolerance (default 1e-10, or PSDKIT_TOL)");
  app.add_option("--format", cfg.format, "output format for matrices")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "seed for randomized subcommands");

  // check
  auto* check = app.add_subcommand("check", "positivity verdict");
  std::string method = "all";
  std::size_t samples = 1000;
  check->add_option("file", cfg.input)->required();
  check->add_option("--method", method)
      ->check(CLI::IsMember({"p1", "p2", "p3", "p4", "p5", "p6", "all"}));
  check->add_option("--samples", samples, "random vectors for p1");

  // schur
  auto* schur = app.add_subcommand("schur", "Schur parameters");
  schur->require_subcommand(1);
  std::size_t block = 1;
  std::string root = "sqrt";
  for (const char* verb : {"extract", "reconstruct", "det", "rankone"}) {
    auto* s = schur->add_subcommand(verb);
    s->add_option("file", cfg.input)->required();
    s->add_option("--block", block)->check(CLI::PositiveNumber);
    s->add_option("--root", root)->check(CLI::IsMember({"sqrt", "chol"}));
  }

  // bloch
  auto* bl = app.add_subcommand("bloch", "Bloch vectors");
  bl->require_subcommand(1);
  std::size_t dim = 0;
  for (const char* verb : {"to-beta", "from-beta", "pure", "represent"}) {
    auto* s = bl->add_subcommand(verb);
    s->add_option("file", cfg.input)->required();
    s->add_option("--dim", dim)->required()->check(CLI::Range(2, 64));
  }

  // channel
  auto* chn = app.add_subcommand("channel", "Choi and Kraus");
  chn->require_subcommand(1);
  std::size_t din = 0, dout = 0;
  std::string sqrt_name = "chol";
  for (const char* verb : {"choi", "kraus", "verdicts"}) {
    auto* s = chn->add_subcommand(verb);
    s->add_option("file", cfg.input)->required();
    s->add_option("--din", din);
    s->add_option("--dout", dout);
    s->add_option("--sqrt", sqrt_name)->check(CLI::IsMember({"chol", "spectral"}));
  }

  // toeplitz
  auto* tpl = app.add_subcommand("toeplitz", "PPT checks");
  tpl->require_subcommand(1);
  std::size_t d1 = 0, d2 = 0, tblock = 0;
  auto* ppt = tpl->add_subcommand("ppt");
  ppt->add_option("file", cfg.input)->required();
  ppt->add_option("--d1", d1)->required();
  ppt->add_option("--d2", d2)->required();
  auto* ptc = tpl->add_subcommand("ptcheck");
  ptc->add_option("file", cfg.input)->required();
  ptc->add_option("--block", tblock)->required()->check(CLI::PositiveNumber);

  // relax
  auto* rlx = app.add_subcommand("relax", "relaxation rates");
  rlx->require_subcommand(1);
  std::string rates;
  std::size_t levels = 0;
  auto* c4 = rlx->add_subcommand("check4");
  c4->add_option("--rates", rates)->required();
  auto* ld = rlx->add_subcommand("ld");
  ld->add_option("--rates", rates)->required();
  ld->add_option("--levels", levels);

  // selftest
  auto* st = app.add_subcommand("selftest", "randomized invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    cfg.tol = tol_flag ? *tol_flag : env_tolerance().value_or(1e-10);
    if (!(cfg.tol > 0.0)) throw CLI::ValidationError("--tol", "must be positive");

    if (*check) return run_check(cfg, method, samples);
    for (auto* s : schur->get_subcommands())
      if (*s) return run_schur(cfg, s->get_name(), block, root);
    for (auto* s : bl->get_subcommands())
      if (*s) return run_bloch(cfg, s->get_name(), dim);
    for (auto* s : chn->get_subcommands())
      if (*s) return run_channel(cfg, s->get_name(), din, dout, sqrt_name);
    if (*ppt) return run_toeplitz(cfg, "ppt", d1, d2, 0);
    if (*ptc) return run_toeplitz(cfg, "ptcheck", 0, 0, tblock);
    if (*c4) return run_relax(cfg, "check4", rates, 0);
    if (*ld) return run_relax(cfg, "ld", rates, levels);
    if (*st) {
      const auto report = psdkit::selftest::run(cfg.seed);
      emit(report.to_json());
      return report.passed() ? ok : negative;
    }
  } catch (const psdkit::NotPsdError& e) {
    emit(not_psd_report(e));
    std::cerr << "psdkit: " << e.what() << '\n';
    return negative;
  } catch (const psdkit::NumericalError& e) {
    std::cerr << "psdkit: numerical failure: " << e.what() << '\n';
    return numerical;
  } catch (const psdkit::Error& e) {
    std::cerr << "psdkit: " << e.what() << '\n';
    return usage;
  } catch (const CLI::Error& e) {
    std::cerr << "psdkit: " << e.what() << '\n';
    return usage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "psdkit: malformed input: " << e.what() << '\n';
    return usage;
  }
  std::cerr << "psdkit: no subcommand\n";
  return usage;
}
