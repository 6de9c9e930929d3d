#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "errors.hpp"
#include "scalar.hpp"

namespace daha {

using json = nlohmann::json;

template <class S>
struct ParamSet {
  int n = 2;
  S q_sqrt{1}, kappa0{1}, kappa{1}, kappan{1}, upsilon0{1}, upsilonn{1}, psi0{1}, psin{1}, kappa_sqrt{1};

  S q() const { return q_sqrt * q_sqrt; }
  // kappa_j for j = 0..n
  S kap(int j) const { return j == 0 ? kappa0 : (j == n ? kappan : kappa); }

  template <class S2>
  ParamSet<S2> convert() const {
    ParamSet<S2> p;
    p.n = n;
    auto c = [](const S& z) { return S2(to_cd(z).real(), to_cd(z).imag()); };
    p.q_sqrt = c(q_sqrt);
    p.kappa0 = c(kappa0);
    p.kappa = c(kappa);
    p.kappan = c(kappan);
    p.upsilon0 = c(upsilon0);
    p.upsilonn = c(upsilonn);
    p.psi0 = c(psi0);
    p.psin = c(psin);
    p.kappa_sqrt = csqrt(p.kappa);
    // keep the stored branch of kappa_sqrt
    if (absd(S2(p.kappa_sqrt - c(kappa_sqrt))) > absd(S2(p.kappa_sqrt + c(kappa_sqrt))))
      p.kappa_sqrt = -p.kappa_sqrt;
    return p;
  }

  void validate() const {
    if (n < 1) throw Refusal("ParamSet: n must be >= 1");
    const S* all[] = {&q_sqrt, &kappa0, &kappa, &kappan, &upsilon0, &upsilonn, &psi0, &psin, &kappa_sqrt};
    for (auto* z : all)
      if (absd(*z) == 0) throw Refusal("ParamSet: zero parameter");
    if (absd(S(kappa_sqrt * kappa_sqrt - kappa)) > 1e-12 * std::max(1.0, absd(kappa)))
      throw Refusal("ParamSet: kappa_sqrt^2 != kappa");
  }
};

inline json cd_json(const cd& z) { return json::array({z.real(), z.imag()}); }
inline cd cd_from_json(const json& j) { return cd(j.at(0).get<double>(), j.at(1).get<double>()); }

template <class S>
json params_to_json(const ParamSet<S>& p) {
  json j;
  j["n"] = p.n;
  j["q_sqrt"] = cd_json(to_cd(p.q_sqrt));
  j["kappa0"] = cd_json(to_cd(p.kappa0));
  j["kappa"] = cd_json(to_cd(p.kappa));
  j["kappan"] = cd_json(to_cd(p.kappan));
  j["upsilon0"] = cd_json(to_cd(p.upsilon0));
  j["upsilonn"] = cd_json(to_cd(p.upsilonn));
  j["psi0"] = cd_json(to_cd(p.psi0));
  j["psin"] = cd_json(to_cd(p.psin));
  j["kappa_sqrt"] = cd_json(to_cd(p.kappa_sqrt));
  return j;
}

inline ParamSet<cd> params_from_json(const json& j) {
  ParamSet<cd> p;
  p.n = j.at("n").get<int>();
  p.q_sqrt = cd_from_json(j.at("q_sqrt"));
  p.kappa0 = cd_from_json(j.at("kappa0"));
  p.kappa = cd_from_json(j.at("kappa"));
  p.kappan = cd_from_json(j.at("kappan"));
  p.upsilon0 = cd_from_json(j.at("upsilon0"));
  p.upsilonn = cd_from_json(j.at("upsilonn"));
  p.psi0 = cd_from_json(j.at("psi0"));
  p.psin = cd_from_json(j.at("psin"));
  if (j.contains("kappa_sqrt"))
    p.kappa_sqrt = cd_from_json(j.at("kappa_sqrt"));
  else
    p.kappa_sqrt = std::sqrt(p.kappa);
  p.validate();
  return p;
}

// FNV-1a over the canonical JSON dump
inline std::string fingerprint(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <class S>
std::string params_fingerprint(const ParamSet<S>& p) {
  return fingerprint(params_to_json(p).dump());
}

inline int eta(int x) { return x > 0 ? 1 : -1; }

// spectral point gamma_lambda
template <class S>
std::vector<S> gamma_lambda(const std::vector<int>& lam, const ParamSet<S>& p) {
  const int n = static_cast<int>(lam.size());
  std::vector<S> g(n);
  const S q = p.q(), k = p.kappa, k0kn = p.kappa0 * p.kappan;
  for (int i = 0; i < n; ++i) {
    S v = ipow(q, lam[i]) * ipow(k0kn, -eta(lam[i]));
    int e = 0;
    for (int j = 0; j < n; ++j) {
      if (j < i) e += eta(lam[j] - lam[i]);
      if (j > i) e -= eta(lam[i] - lam[j]);
      if (j != i) e -= eta(lam[i] + lam[j]);
    }
    g[i] = v * ipow(k, e);
  }
  return g;
}

// all lambda in Z^n with sum |lambda_i| <= d, in lexicographic order
inline std::vector<std::vector<int>> l1_ball(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, -d);
  auto rec = [&](auto&& self, int i, int budget) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int v = -budget; v <= budget; ++v) {
      cur[i] = v;
      self(self, i + 1, budget - std::abs(v));
    }
  };
  rec(rec, 0, d);
  return out;
}

struct SampleOptions {
  std::optional<int> mcondition;  // solve psin from the polynomial-solution condition
  int gamma_degree = 4;
  int probes = 32;
  double den_floor = 1e-3;
  int max_retries = 64;
};

namespace detail {

struct Draw {
  std::mt19937_64 rng;
  explicit Draw(std::uint64_t seed) : rng(seed) {}
  double u01() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
  cd point() {
    double r = 0.6 + u01();
    double th = 2.0 * std::numbers::pi * u01();
    return std::polar(r, th);
  }
};

inline std::vector<std::pair<std::string, cd>> param_denominators(const ParamSet<cd>& p) {
  const cd k = p.kappa, k0 = p.kappa0, kn = p.kappan, u0 = p.upsilon0, un = p.upsilonn;
  const cd s = p.psi0 * p.psin;
  std::vector<std::pair<std::string, cd>> d = {
      {"kappa+1/kappa", k + 1.0 / k},
      {"kappa-1/kappa", k - 1.0 / k},
      {"kappa/kappa0+kappa0/kappa", k / k0 + k0 / k},
      {"kappa/kappan+kappan/kappa", k / kn + kn / k},
      {"1+kappa^2", 1.0 + k * k},
      {"1-kappa0*upsilon0", 1.0 - k0 * u0},
      {"1+kappa0/upsilon0", 1.0 + k0 / u0},
      {"1-kappan*upsilonn", 1.0 - kn * un},
      {"1+kappan/upsilonn", 1.0 + kn / un},
      {"1-kappa^2*kappa0*upsilon0", 1.0 - k * k * k0 * u0},
      {"1+kappa^2*kappa0/upsilon0", 1.0 + k * k * k0 / u0},
  };
  if (p.n % 2) {
    d.push_back({"1+kappa0/kappan*psi0*psin", 1.0 + k0 / kn * s});
    d.push_back({"1+kappan/kappa0*psi0*psin", 1.0 + kn / k0 * s});
  } else {
    d.push_back({"1-kappa0*kappan/kappa*psi0*psin", 1.0 - k0 * kn / k * s});
    d.push_back({"1-kappa/(kappa0*kappan)*psi0*psin", 1.0 - k / (k0 * kn) * s});
  }
  return d;
}

inline std::vector<std::pair<std::string, cd>> probe_denominators(const ParamSet<cd>& p, cd x, const std::vector<cd>& t) {
  const cd k = p.kappa, k0 = p.kappa0, kn = p.kappan, u0 = p.upsilon0, un = p.upsilonn, q = p.q();
  std::vector<std::pair<std::string, cd>> d = {
      {"1-kappa^2 x", 1.0 - k * k * x},
      {"1-kappa0 upsilon0 x", 1.0 - k0 * u0 * x},
      {"1+kappa0 x/upsilon0", 1.0 + k0 * x / u0},
      {"1-kappan upsilonn x", 1.0 - kn * un * x},
      {"1+kappan x/upsilonn", 1.0 + kn * x / un},
      {"1-kappa^2 kappa0 upsilon0 x", 1.0 - k * k * k0 * u0 * x},
      {"1+kappa^2 kappa0 x/upsilon0", 1.0 + k * k * k0 * x / u0},
      {"1-kappa^2 x^2", 1.0 - k * k * x * x},
      {"1-q t1^-2", 1.0 - q / (t[0] * t[0])},
      {"1-tn^2", 1.0 - t.back() * t.back()},
  };
  for (size_t i = 0; i + 1 < t.size(); ++i) d.push_back({"1-t_i/t_i+1", 1.0 - t[i] / t[i + 1]});
  return d;
}

// empty string when generic
inline std::string screen(const ParamSet<cd>& p, Draw& dr, const SampleOptions& o) {
  double aq = std::abs(p.q());
  if (std::abs(aq - 1.0) <= 0.05) return "|q| within 0.05 of 1";
  for (auto& [name, v] : param_denominators(p))
    if (std::abs(v) < o.den_floor) return "denominator " + name;
  for (int k = 0; k < o.probes; ++k) {
    cd x = dr.point();
    std::vector<cd> t(p.n);
    for (auto& z : t) z = dr.point();
    for (auto& [name, v] : probe_denominators(p, x, t))
      if (std::abs(v) < o.den_floor) return "probe denominator " + name;
  }
  auto lams = l1_ball(p.n, o.gamma_degree);
  std::vector<std::vector<cd>> gs;
  gs.reserve(lams.size());
  for (auto& l : lams) gs.push_back(gamma_lambda(l, p));
  for (size_t a = 0; a < gs.size(); ++a)
    for (size_t b = a + 1; b < gs.size(); ++b) {
      double dmax = 0, scale = 1;
      for (int i = 0; i < p.n; ++i) {
        dmax = std::max(dmax, std::abs(gs[a][i] - gs[b][i]));
        scale = std::max({scale, std::abs(gs[a][i]), std::abs(gs[b][i])});
        if (dmax > 1e-6 * scale) break;
      }
      if (dmax <= 1e-6 * scale) return "gamma_lambda collision";
    }
  return "";
}

}  // namespace detail

// psin solving psi0 psin q^m = (kappa0 kappan kappa^(n-1))^eta(m)
template <class S>
S psin_for_mcondition(const ParamSet<S>& p, int m) {
  S base = p.kappa0 * p.kappan * ipow(p.kappa, p.n - 1);
  return ipow(base, eta(m)) * ipow(p.q(), -m) / p.psi0;
}

inline ParamSet<cd> sample_generic(std::uint64_t seed, int n, const SampleOptions& o = {}) {
  if (n < 1) throw Refusal("sample_generic: n must be >= 1");
  detail::Draw dr(seed);
  std::string last;
  for (int attempt = 0; attempt < o.max_retries; ++attempt) {
    ParamSet<cd> p;
    p.n = n;
    p.q_sqrt = dr.point();
    p.kappa0 = dr.point();
    p.kappa = dr.point();
    p.kappan = dr.point();
    p.upsilon0 = dr.point();
    p.upsilonn = dr.point();
    p.psi0 = dr.point();
    p.psin = dr.point();
    p.kappa_sqrt = std::sqrt(p.kappa);
    if (o.mcondition) p.psin = psin_for_mcondition(p, *o.mcondition);
    last = detail::screen(p, dr, o);
    if (last.empty()) return p;
  }
  throw NonGeneric("non-generic sampling failure: " + last);
}

inline ParamSet<cd> sample_generic(std::uint64_t seed, int n, std::optional<int> mcondition) {
  SampleOptions o;
  o.mcondition = mcondition;
  return sample_generic(seed, n, o);
}

}  // namespace daha
