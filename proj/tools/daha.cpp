#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

using namespace daha;
using daha::cli::Options;

namespace {

struct Flags {
  int n = 2;
  std::uint64_t seed = 1;
  std::string precision = "double";
  double tolerance = 1e-9;
  int samples = 20;
  std::string params_file, config_file;
  int m = 0;
  std::string lambda;
  int degree = 3;
  bool mcondition = false;
  std::string hamiltonian_form;
  bool timing = false;
  std::string out, report, in, dump_ops;
};

// flag > config file > default
Options resolve(const CLI::App& app, const Flags& f) {
  json file = json::object();
  if (!f.config_file.empty()) file = cli::read_json(f.config_file);
  if (!file.is_object()) throw Refusal("config file must hold a JSON object");
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  auto pick = [&](const char* flag, const char* key, auto def) {
    using T = decltype(def);
    if (given(flag) || !file.contains(key)) return def;
    try {
      return file.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Refusal(std::string("config key ") + key + ": " + e.what());
    }
  };

  Options o;
  auto& c = o.cfg;
  c.n = pick("--n", "n", f.n);
  c.seed = pick("--seed", "seed", f.seed);
  c.tolerance = pick("--tolerance", "tolerance", f.tolerance);
  c.samples = pick("--samples", "samples", f.samples);
  c.degree = pick("--degree", "degree", f.degree);
  c.mcondition = pick("--mcondition", "mcondition", f.mcondition);
  std::string prec = pick("--precision", "precision", f.precision);
  if (prec == "double")
    c.precision = Precision::dbl;
  else if (prec == "extended")
    c.precision = Precision::extended;
  else
    throw Refusal("precision must be double or extended, got " + prec);
  if (given("--m"))
    c.m = f.m;
  else if (file.contains("m"))
    c.m = file.at("m").get<int>();

  if (given("--lambda"))
    c.lambda = cli::parse_lambda(f.lambda);
  else if (file.contains("lambda"))
    c.lambda = file.at("lambda").is_string() ? cli::parse_lambda(file.at("lambda").get<std::string>()) : file.at("lambda").get<Exp>();

  if (given("--params"))
    c.params = params_from_json(cli::read_json(f.params_file));
  else if (file.contains("params"))
    c.params = params_from_json(file.at("params").is_string() ? cli::read_json(file.at("params").get<std::string>()) : file.at("params"));
  if (c.params && !given("--n") && !file.contains("n")) c.n = c.params->n;

  o.hamiltonian_form = pick("--hamiltonian-form", "hamiltonian_form", f.hamiltonian_form);
  if (!o.hamiltonian_form.empty()) parse_ham_form(o.hamiltonian_form);
  o.timing = pick("--timing", "timing", f.timing);
  o.out = f.out;
  o.report = f.report;
  o.in = f.in;
  o.dump_ops = f.dump_ops;
  if (c.n < 1 || c.n > 10) throw Refusal("n must be in 1..10");
  if (c.samples < 1) throw Refusal("samples must be positive");
  if (!(c.tolerance > 0)) throw Refusal("tolerance must be positive");
  return o;
}

int emit_report(CheckReport R, const Options& o) {
  if (!o.timing) R.wall_time_ms.reset();
  cli::write_json(R.to_json(), o.report);
  auto fails = R.failures();
  std::cerr << R.suite << ": " << (R.pass() ? "pass" : "FAIL") << " (" << R.checks.size() << " checks, " << fails.size() << " failed)\n";
  for (auto* c : fails) std::cerr << "  " << c->name << " residual " << c->residual << " >= " << c->tolerance << "\n";
  return R.pass() ? exit_ok : exit_check_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine Hecke / two-boundary TL toolkit: verification suites, Koornwinder polynomials, reflection qKZ solutions"};
  app.fallthrough();
  app.require_subcommand(1);
  Flags f;
  app.add_option("--n", f.n, "number of sites");
  app.add_option("--seed", f.seed, "sampling seed");
  app.add_option("--precision", f.precision, "double | extended")->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--tolerance", f.tolerance, "base tolerance on normalized residuals");
  app.add_option("--samples", f.samples, "random sample points per check");
  app.add_option("--params", f.params_file, "ParamSet JSON file");
  app.add_option("--config", f.config_file, "JSON config; flags override its keys");
  app.add_option("--m", f.m, "qKZ exponent m");
  app.add_option("--lambda", f.lambda, "composition, e.g. \"1,-2\"");
  app.add_option("--degree", f.degree, "koornwinder tables and suite: all lambda with |lambda|_1 <= degree");
  app.add_flag("--mcondition", f.mcondition, "sample parameters satisfying the polynomial-solution condition for --m");
  app.add_option("--hamiltonian-form", f.hamiltonian_form, "tl | pauli | transfer | transfer_fd | pauli_displayed | tl_displayed");
  app.add_flag("--timing", f.timing, "include wall_time_ms in reports");
  app.add_option("--out", f.out, "output file (or directory for tables)");
  app.add_option("--report", f.report, "report file (default stdout)");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "algebra | matchmaker | baxter | transfer | koornwinder | qkz | all")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--dump-ops", f.dump_ops, "write the spin-rep T_j and e_j operators as JSON");

  auto* kw = app.add_subcommand("koornwinder", "Koornwinder polynomials");
  kw->require_subcommand(1);
  auto* kw_compute = kw->add_subcommand("compute", "compute P_lambda");

  auto* qkz = app.add_subcommand("qkz", "reflection qKZ solutions");
  qkz->require_subcommand(1);
  auto* qkz_build = qkz->add_subcommand("build", "build the polynomial solution for --m");
  auto* qkz_verify = qkz->add_subcommand("verify", "verify a stored solution");
  qkz_verify->add_option("--in", f.in, "solution JSON")->required();

  std::string kind;
  auto* emit = app.add_subcommand("emit", "emit artifacts");
  emit->require_subcommand(1);
  auto* tables = emit->add_subcommand("tables", "JSON tables");
  tables->add_option("kind", kind, "koornwinder | hamiltonian_spectrum")->required()->check(CLI::IsMember({"koornwinder", "hamiltonian_spectrum"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_refusal;
  }

  try {
    Options o = resolve(app, f);
    const bool ext = o.cfg.precision == Precision::extended;

    if (*verify) {
      if (!o.dump_ops.empty()) cli::write_json(cli::dump_ops<cd>(o.cfg), o.dump_ops);
      return emit_report(run_suite(suite, o.cfg, cli::run_suite_extended), o);
    }
    if (*kw_compute) {
      if (!o.cfg.lambda) throw Refusal("koornwinder compute needs --lambda");
      cli::write_json(ext ? cli::koornwinder_compute_extended(o.cfg, *o.cfg.lambda) : cli::koornwinder_compute<cd>(o.cfg, *o.cfg.lambda), o.out);
      return exit_ok;
    }
    if (*qkz_build) {
      cli::write_json(ext ? cli::qkz_build_extended(o.cfg) : cli::qkz_build<cd>(o.cfg), o.out);
      return exit_ok;
    }
    if (*qkz_verify) {
      auto sol = cli::read_json(o.in);
      auto R = ext ? cli::qkz_verify_extended(sol, o.cfg) : cli::qkz_verify<cd>(sol, o.cfg);
      R.precision = ext ? "extended" : "double";
      return emit_report(R, o);
    }
    if (*tables) {
      if (kind == "koornwinder") {
        cli::koornwinder_table<cd>(o.cfg, o.out.empty() ? "tables" : o.out);
      } else {
        cli::write_json(cli::hamiltonian_spectrum<cd>(o.cfg, o.hamiltonian_form), o.out);
      }
      return exit_ok;
    }
  } catch (const ConditionRefusal& e) {
    std::cout << json{{"refusal", e.what()}, {"condition", e.report}}.dump(2) << "\n";
    std::cerr << "refused: " << e.what() << "\n";
    return exit_refusal;
  } catch (const Error& e) {
    std::cerr << (e.code == exit_defect ? "" : "refused: ") << e.what() << "\n";
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "refused: JSON input: " << e.what() << "\n";
    return exit_refusal;
  } catch (const std::exception& e) {
    std::cerr << "internal defect: " << e.what() << "\n";
    return exit_defect;
  }
  return exit_ok;
}
