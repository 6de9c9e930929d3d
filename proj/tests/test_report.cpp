#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>

#include "daha/suites.hpp"

using namespace daha;

namespace {

json stable_json(CheckReport R) {
  R.wall_time_ms.reset();
  return R.to_json();
}

}  // namespace

TEST_CASE("pass is the conjunction of the checks") {
  CheckReport R;
  CHECK(R.pass());
  R.add("a", 1e-12, 1e-9, "x");
  CHECK(R.pass());
  R.add("b", 2e-9, 1e-9, "y");
  CHECK_FALSE(R.pass());
  REQUIRE(R.failures().size() == 1);
  CHECK(R.failures()[0]->name == "b");
  CHECK(R.worst() == 2e-9);
  CHECK(R.worst("a") == 1e-12);
}

TEST_CASE("non-finite residuals fail") {
  CheckReport R;
  R.add("nan", std::numeric_limits<double>::quiet_NaN(), 1.0, "");
  R.add("inf", std::numeric_limits<double>::infinity(), 1.0, "");
  CHECK(R.failures().size() == 2);
}

TEST_CASE("lower bounds are stored as bound over observed") {
  CheckReport R;
  R.add_lower("big", 1e-2, 1e-3, "ctrl");
  R.add_lower("small", 1e-4, 1e-3, "ctrl");
  R.add_lower("zero", 0.0, 1e-3, "ctrl");
  CHECK(R.checks[0].pass);
  CHECK(R.checks[0].residual == Catch::Approx(0.1));
  CHECK(R.checks[0].tolerance == 1.0);
  CHECK_FALSE(R.checks[1].pass);
  CHECK_FALSE(R.checks[2].pass);
}

TEST_CASE("boolean checks") {
  CheckReport R;
  R.add_bool("yes", true, "");
  R.add_bool("no", false, "");
  CHECK(R.checks[0].pass);
  CHECK_FALSE(R.checks[1].pass);
}

TEST_CASE("JSON layout: checks sorted by name, timing only when set") {
  CheckReport R;
  R.suite = "demo";
  R.add("zeta", 0, 1, "");
  R.add("alpha", 0, 1, "");
  R.add("mid", 0, 1, "");
  auto j = R.to_json();
  CHECK(j.at("checks")[0].at("name") == "alpha");
  CHECK(j.at("checks")[1].at("name") == "mid");
  CHECK(j.at("checks")[2].at("name") == "zeta");
  CHECK_FALSE(j.contains("wall_time_ms"));
  for (auto key : {"suite", "n", "seed", "precision", "params_fingerprint", "checks", "pass", "notes"}) CHECK(j.contains(key));
  R.wall_time_ms = 5;
  CHECK(R.to_json().at("wall_time_ms") == 5);
}

TEST_CASE("merge prefixes names and notes") {
  CheckReport a, b;
  b.add("x", 0, 1, "");
  b.notes.push_back("hello");
  a.merge(b, "sub.");
  CHECK(a.checks[0].name == "sub.x");
  CHECK(a.notes[0] == "sub.hello");
}

TEST_CASE("every suite passes at n = 2") {
  for (auto& s : suite_names()) {
    SuiteConfig cfg;
    cfg.n = 2;
    cfg.samples = 5;
    auto R = run_suite(s, cfg);
    INFO(s);
    for (auto* f : R.failures()) INFO(f->name << " " << f->residual);
    CHECK(R.pass());
    CHECK(R.suite == s);
    CHECK(R.n == 2);
    CHECK(R.precision == "double");
    CHECK(!R.checks.empty());
  }
}

TEST_CASE("suite reports are reproducible") {
  for (std::string s : {"algebra", "baxter", "koornwinder"}) {
    SuiteConfig cfg;
    cfg.n = 2;
    cfg.seed = 4;
    cfg.samples = 4;
    CHECK(stable_json(run_suite(s, cfg)).dump() == stable_json(run_suite(s, cfg)).dump());
  }
  SuiteConfig a, b;
  a.seed = 1;
  b.seed = 2;
  CHECK(stable_json(run_suite("baxter", a)).at("params_fingerprint") != stable_json(run_suite("baxter", b)).at("params_fingerprint"));
}

TEST_CASE("aggregate run skips suites outside their range") {
  SuiteConfig cfg;
  cfg.n = 4;
  cfg.samples = 2;
  cfg.degree = 1;
  auto R = run_suite("all", cfg);
  int skipped = 0;
  for (auto& note : R.notes)
    if (note.find("skipped") != std::string::npos) ++skipped;
  CHECK(skipped == 2);
  bool has_baxter = false;
  for (auto& c : R.checks) has_baxter |= c.name.rfind("baxter.", 0) == 0;
  CHECK(has_baxter);
}

TEST_CASE("suite refusals") {
  SuiteConfig cfg;
  CHECK_THROWS_AS(run_suite("nonsense", cfg), Refusal);
  cfg.n = 4;
  CHECK_THROWS_AS(run_suite("koornwinder", cfg), Refusal);
  cfg.n = 2;
  cfg.precision = Precision::extended;
  CHECK_THROWS_AS(run_suite("algebra", cfg), Refusal);
  SuiteConfig bad;
  bad.n = 3;
  bad.params = sample_generic(1, 2);
  CHECK_THROWS_AS(run_suite("algebra", bad), Refusal);
}

TEST_CASE("qkz suite refuses an unsatisfied condition and accepts a constrained one") {
  SuiteConfig cfg;
  cfg.n = 2;
  cfg.m = 1;
  CHECK_THROWS_AS(run_suite("qkz", cfg), ConditionRefusal);
  cfg.mcondition = true;
  cfg.samples = 5;
  CHECK(run_suite("qkz", cfg).pass());
}
