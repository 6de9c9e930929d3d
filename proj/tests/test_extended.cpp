#include "catch_amalgamated.hpp"

#include "daha/extended.hpp"
#include "daha/suites.hpp"

using namespace daha;

namespace {

CheckReport extended_runner(const std::string& name, const SuiteConfig& cfg) { return run_suite_as<xcd>(name, cfg); }

}  // namespace

TEST_CASE("Yang-Baxter and reflection residuals far below double precision") {
  auto p = sample_generic(1, 2).convert<xcd>();
  const xcd x(cd(0.9, 0.3)), y(cd(1.2, -0.7));
  CHECK(ybe_residual(p, x, y) < 1e-40);
  CHECK(re_left_residual(p, x, y) < 1e-40);
  CHECK(re_right_residual(p, x, y) < 1e-40);
}

TEST_CASE("algebra suite in extended precision") {
  SuiteConfig cfg;
  cfg.n = 2;
  cfg.samples = 3;
  cfg.precision = Precision::extended;
  auto R = run_suite("algebra", cfg, extended_runner);
  CHECK(R.precision == "extended");
  CHECK(R.pass());
  for (auto& c : R.checks)
    if (c.tolerance < 1e-6) CHECK(c.residual < 1e-30);
}

TEST_CASE("extended and double reports describe the same parameter point") {
  SuiteConfig cfg;
  cfg.n = 2;
  cfg.samples = 2;
  auto d = run_suite("algebra", cfg);
  cfg.precision = Precision::extended;
  auto e = run_suite("algebra", cfg, extended_runner);
  CHECK(d.params_fingerprint == e.params_fingerprint);
  CHECK(d.checks.size() == e.checks.size());
}

TEST_CASE("constrained qKZ solution in extended precision") {
  auto p = sample_generic(3, 2, std::optional<int>(1)).convert<xcd>();
  p.psin = psin_for_mcondition(p, 1);
  CHECK(check_mcondition(p, 1, 1e-40).satisfied);
  auto sol = build_polynomial_solution(p, 1);
  auto rep = verify_solution(sol, 5, 1);
  CHECK(rep.transport < 1e-30);
  CHECK(rep.invariance < 1e-30);
}
