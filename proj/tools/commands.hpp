#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "daha/suites.hpp"

namespace daha::cli {

// resolved configuration: defaults < config file < flags
struct Options {
  SuiteConfig cfg;
  std::string suite;
  std::string out, report, in, dump_ops;
  std::string hamiltonian_form;  // empty: all three
  bool timing = false;
};

inline Exp parse_lambda(const std::string& s) {
  Exp e;
  std::string tok;
  for (char c : s + ",") {
    if (c == ',') {
      if (tok.empty()) throw Refusal("bad --lambda: " + s);
      try {
        size_t pos = 0;
        e.push_back(std::stoi(tok, &pos));
        if (pos != tok.size()) throw Refusal("bad --lambda: " + s);
      } catch (const std::logic_error&) {
        throw Refusal("bad --lambda: " + s);
      }
      tok.clear();
    } else if (c != ' ') {
      tok += c;
    }
  }
  return e;
}

inline void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw Refusal("cannot write " + path);
  f << j.dump(2) << "\n";
}

inline json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Refusal("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Refusal("parse error in " + path + ": " + e.what());
  }
}

template <class S>
ParamSet<S> working_params(const SuiteConfig& cfg) {
  return detail::base_params(cfg).template convert<S>();
}

template <class S>
json koornwinder_compute(const SuiteConfig& cfg, const Exp& lam) {
  if (static_cast<int>(lam.size()) != cfg.n) throw Refusal("--lambda has " + std::to_string(lam.size()) + " parts but n = " + std::to_string(cfg.n));
  auto p = working_params<S>(cfg);
  return koornwinder_to_json(compute_P(lam, p));
}

template <class S>
json qkz_build(const SuiteConfig& cfg) {
  if (!cfg.m) throw Refusal("qkz build needs --m");
  ParamSet<S> p = cfg.mcondition ? detail::constrained_params<S>(cfg, *cfg.m) : working_params<S>(cfg);
  return solution_to_json(build_polynomial_solution(p, *cfg.m));
}

template <class S>
KZSolution<S> convert_solution(const KZSolution<cd>& s) {
  KZSolution<S> o;
  o.params = s.params.template convert<S>();
  o.dim = s.dim;
  for (auto& c : s.components) o.components.push_back(c.template convert<S>());
  o.m = s.m;
  o.lambda = s.lambda;
  o.construction = s.construction;
  return o;
}

template <class S>
CheckReport qkz_verify(const json& sol_json, const SuiteConfig& cfg) {
  auto sol = convert_solution<S>(solution_from_json(sol_json));
  auto v = verify_solution(sol, cfg.samples, cfg.seed);
  CheckReport R;
  for (auto& [k, val] : v.residuals)
    R.add(k, val, 10 * cfg.tolerance, k.rfind("transport", 0) == 0 ? "C_{tau_i}(t) f(q^-e_i t) = f(t)" : "C_{s_j}(t) f(s_j t) = f(t)");
  if (v.resamples) R.notes.push_back("resampled " + std::to_string(v.resamples) + " points near poles");
  R.suite = "qkz_verify";
  R.n = sol.params.n;
  R.seed = cfg.seed;
  R.params_fingerprint = params_fingerprint(solution_from_json(sol_json).params);
  return R;
}

// eigenvalues sorted by (re, im)
inline std::vector<cd> sorted_spectrum(const Mat<cd>& H) {
  Eigen::ComplexEigenSolver<Mat<cd>> es(H, false);
  std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return ev;
}

// greedy nearest matching; robust to near-ties in the sort order
inline double spectrum_distance(const std::vector<cd>& a, const std::vector<cd>& b) {
  std::vector<bool> used(b.size(), false);
  double d = 0, s = 1e-300;
  for (auto& x : a) {
    size_t best = 0;
    double bd = 1e300;
    for (size_t k = 0; k < b.size(); ++k)
      if (!used[k] && std::abs(x - b[k]) < bd) {
        bd = std::abs(x - b[k]);
        best = k;
      }
    used[best] = true;
    d = std::max(d, bd);
    s = std::max(s, std::abs(x));
  }
  return d / s;
}

template <class S>
json hamiltonian_spectrum(const SuiteConfig& cfg, const std::string& form) {
  auto p = working_params<S>(cfg);
  auto r = build_spin_rep(p);
  std::vector<std::string> forms = form.empty() ? std::vector<std::string>{"tl", "pauli", "transfer"} : std::vector<std::string>{form};
  json out = {{"n", cfg.n}, {"params", params_to_json(p)}, {"spectra", json::object()}};
  std::vector<std::vector<cd>> specs;
  for (auto& f : forms) {
    Mat<S> H = hamiltonian(r, parse_ham_form(f));
    Mat<cd> Hd(H.rows(), H.cols());
    for (Eigen::Index i = 0; i < H.rows(); ++i)
      for (Eigen::Index j = 0; j < H.cols(); ++j) Hd(i, j) = to_cd(H(i, j));
    specs.push_back(sorted_spectrum(Hd));
    json ev = json::array();
    for (auto& z : specs.back()) ev.push_back(cd_json(z));
    out["spectra"][f] = ev;
  }
  json agree = json::object();
  for (size_t a = 0; a < forms.size(); ++a)
    for (size_t b = a + 1; b < forms.size(); ++b) agree[forms[a] + "_vs_" + forms[b]] = spectrum_distance(specs[a], specs[b]);
  out["pairwise_distance"] = agree;
  return out;
}

inline std::string lambda_tag(const Exp& e) {
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) s += (i ? "_" : "") + (e[i] < 0 ? "m" + std::to_string(-e[i]) : std::to_string(e[i]));
  return s;
}

// one file per lambda plus manifest.json in dir
template <class S>
json koornwinder_table(const SuiteConfig& cfg, const std::string& dir) {
  std::vector<Exp> lams = cfg.lambda ? std::vector<Exp>{*cfg.lambda} : l1_ball(cfg.n, cfg.degree);
  std::filesystem::create_directories(dir);
  json files = json::array();
  auto p = working_params<S>(cfg);
  for (auto& lam : lams) {
    std::string name = "koornwinder_n" + std::to_string(cfg.n) + "_lambda_" + lambda_tag(lam) + ".json";
    write_json(koornwinder_to_json(compute_P(lam, p)), (std::filesystem::path(dir) / name).string());
    files.push_back(name);
  }
  json manifest = {{"kind", "koornwinder"}, {"n", cfg.n}, {"params_fingerprint", params_fingerprint(p)}, {"files", files}};
  write_json(manifest, (std::filesystem::path(dir) / "manifest.json").string());
  return manifest;
}

template <class S>
json dump_ops(const SuiteConfig& cfg) {
  auto p = working_params<S>(cfg);
  auto r = build_spin_rep(p);
  json T = json::array(), E = json::array();
  for (int j = 0; j <= cfg.n; ++j) {
    T.push_back(linop_to_json(r.T[j], BasisTag::spin));
    E.push_back(linop_to_json(r.e[j], BasisTag::spin));
  }
  return {{"n", cfg.n}, {"params", params_to_json(p)}, {"T", T}, {"e", E}};
}

// extended-precision entry points, defined in extended.cpp
CheckReport run_suite_extended(const std::string& name, const SuiteConfig& cfg);
json koornwinder_compute_extended(const SuiteConfig& cfg, const Exp& lam);
json qkz_build_extended(const SuiteConfig& cfg);
CheckReport qkz_verify_extended(const json& sol, const SuiteConfig& cfg);

}  // namespace daha::cli
