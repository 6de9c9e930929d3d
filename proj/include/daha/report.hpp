#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "params.hpp"

namespace daha {

struct Check {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string context;
};

struct CheckReport {
  std::string suite;
  int n = 0;
  std::uint64_t seed = 0;
  std::string precision = "double";
  std::string params_fingerprint;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::optional<long long> wall_time_ms;  // left out of the JSON unless set

  void add(const std::string& name, double residual, double tol, const std::string& ctx) {
    Check c{name, residual, tol, false, ctx};
    c.pass = std::isfinite(residual) && residual < tol;
    checks.push_back(std::move(c));
  }

  // passes when `observed` exceeds `bound`; recorded as bound/observed against 1
  void add_lower(const std::string& name, double observed, double bound, const std::string& ctx) {
    double r = observed > 0 ? bound / observed : 1e300;
    add(name, r, 1.0, ctx + " (lower bound " + fmt(bound) + ", recorded as bound/observed)");
  }

  void add_bool(const std::string& name, bool ok, const std::string& ctx) { add(name, ok ? 0.0 : 1.0, 0.5, ctx); }

  void merge(const CheckReport& o, const std::string& prefix) {
    for (auto c : o.checks) {
      c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
    for (auto& s : o.notes) notes.push_back(prefix + s);
  }

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }

  double worst(const std::string& prefix = "") const {
    double r = 0;
    for (auto& c : checks)
      if (c.name.rfind(prefix, 0) == 0) r = std::max(r, c.residual);
    return r;
  }

  std::vector<const Check*> failures() const {
    std::vector<const Check*> f;
    for (auto& c : checks)
      if (!c.pass) f.push_back(&c);
    return f;
  }

  json to_json() const {
    auto sorted = checks;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
    json cs = json::array();
    for (auto& c : sorted)
      cs.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}, {"context", c.context}});
    json j = {{"suite", suite},       {"n", n},
              {"seed", seed},         {"precision", precision},
              {"params_fingerprint", params_fingerprint},
              {"checks", cs},         {"pass", pass()},
              {"notes", notes}};
    if (wall_time_ms) j["wall_time_ms"] = *wall_time_ms;
    return j;
  }

  static std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
  }
};

}  // namespace daha
