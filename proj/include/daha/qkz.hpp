#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "baxter.hpp"
#include "errors.hpp"
#include "koornwinder.hpp"
#include "laurent.hpp"
#include "params.hpp"
#include "spinrep.hpp"
#include "weyl.hpp"

namespace daha {

template <class S>
struct ConditionReport {
  int m = 0;
  S lhs{0}, rhs{0};
  bool satisfied = false;
};

// psi0 psin q^m = (kappa0 kappan kappa^(n-1))^eta(m)
template <class S>
ConditionReport<S> check_mcondition(const ParamSet<S>& p, int m, double tol = 1e-9) {
  ConditionReport<S> c;
  c.m = m;
  c.lhs = p.psi0 * p.psin * ipow(p.q(), m);
  c.rhs = ipow(S(p.kappa0 * p.kappan * ipow(p.kappa, p.n - 1)), eta(m));
  c.satisfied = absd(S(c.lhs - c.rhs)) < tol * std::max(absd(c.lhs), absd(c.rhs));
  return c;
}

template <class S>
json condition_to_json(const ConditionReport<S>& c) {
  return {{"m", c.m}, {"lhs", cd_json(to_cd(c.lhs))}, {"rhs", cd_json(to_cd(c.rhs))}, {"satisfied", c.satisfied}};
}

struct ConditionRefusal : Refusal {
  json report;
  ConditionRefusal(const std::string& msg, json r) : Refusal(msg), report(std::move(r)) {}
};

template <class S>
struct KZSolution {
  ParamSet<S> params;
  int dim = 0;
  std::vector<LaurentPoly<S>> components;
  int m = 0;
  Exp lambda;
  std::string construction;

  std::vector<S> eval(const std::vector<S>& t) const {
    std::vector<S> v;
    for (auto& c : components) v.push_back(c.eval(t));
    return v;
  }
  Vec<S> eval_vec(const std::vector<S>& t) const {
    Vec<S> v(dim);
    for (int k = 0; k < dim; ++k) v(k) = components[k].eval(t);
    return v;
  }
  double max_abs_coeff() const {
    double r = 0;
    for (auto& c : components) r = std::max(r, c.max_abs_coeff());
    return r;
  }
};

template <class S>
json solution_to_json(const KZSolution<S>& s) {
  json comps = json::array();
  for (auto& c : s.components) comps.push_back(poly_to_json(c));
  return {{"rep", {{"kind", "spin"}, {"dim", s.dim}, {"params", params_to_json(s.params)}}},
          {"components", comps},
          {"metadata", {{"m", s.m}, {"lambda", s.lambda}, {"construction", s.construction}}}};
}

inline KZSolution<cd> solution_from_json(const json& j) {
  KZSolution<cd> s;
  s.params = params_from_json(j.at("rep").at("params"));
  s.dim = j.at("rep").at("dim").get<int>();
  for (auto& c : j.at("components")) s.components.push_back(poly_from_json(c));
  if (static_cast<int>(s.components.size()) != s.dim) throw Refusal("solution file: component count != dim");
  auto& md = j.at("metadata");
  s.m = md.value("m", 0);
  s.lambda = md.value("lambda", Exp{});
  s.construction = md.value("construction", std::string());
  return s;
}

// w0^I = w0 (w0_I)^-1
inline WeylElem w0_upper(const std::set<int>& I, int n) { return longest_element(n) * parabolic_longest(I, n).inverse(); }

// phi -> sum_w varpi(T_{w (w0^I)^-1}) phi (x) v_w, with reps W0^I and the columns of V as v_w
template <class S>
KZSolution<S> cm_alpha(const LaurentPoly<S>& phi, const ParamSet<S>& p, const std::set<int>& I, const std::vector<WeylElem>& reps,
                       const Mat<S>& V) {
  const int n = p.n;
  if (static_cast<int>(reps.size()) != V.cols()) throw std::invalid_argument("cm_alpha: reps and basis columns differ");
  KZSolution<S> sol;
  sol.params = p;
  sol.dim = static_cast<int>(V.rows());
  sol.components.assign(sol.dim, LaurentPoly<S>(n));
  const WeylElem w0I = w0_upper(I, n);
  for (size_t c = 0; c < reps.size(); ++c) {
    auto word = reduced_word(reps[c] * w0I.inverse());
    auto phw = noumi_T_word(word, phi, p);
    for (int k = 0; k < sol.dim; ++k)
      if (V(k, c) != S(0)) sol.components[k] += phw * V(k, c);
  }
  sol.construction = "cm_alpha";
  return sol;
}

// spin case: I = J with v_w = T_w v+
template <class S>
KZSolution<S> cm_alpha(const LaurentPoly<S>& phi, const ParamSet<S>& p) {
  auto rep = build_spin_rep(p);
  auto ps = principal_series_basis(rep);
  return cm_alpha(phi, p, J_set(p.n), ps.reps, ps.V);
}

// same components via cached span matrices of varpi(T_j); phi must lie in the span of lam
template <class S>
KZSolution<S> cm_alpha_matrix(const LaurentPoly<S>& phi, const ParamSet<S>& p, const Exp& lam) {
  const int n = p.n;
  auto rep = build_spin_rep(p);
  auto ps = principal_series_basis(rep);
  auto basis = span_basis(lam, false);
  std::map<Exp, int> idx;
  for (size_t a = 0; a < basis.size(); ++a) idx[basis[a]] = static_cast<int>(a);
  const int N = static_cast<int>(basis.size());
  std::vector<Mat<S>> Tm;
  for (int j = 0; j <= n; ++j) {
    Mat<S> A = Mat<S>::Zero(N, N);
    for (int a = 0; a < N; ++a) {
      auto img = noumi_T_apply(j, LaurentPoly<S>::monomial(basis[a]), p);
      for (auto& [e, c] : img.terms()) {
        auto it = idx.find(e);
        if (it == idx.end()) throw Refusal("cm_alpha_matrix: span not stable under T_" + std::to_string(j));
        A(it->second, a) += c;
      }
    }
    Tm.push_back(std::move(A));
  }
  Vec<S> x = Vec<S>::Zero(N);
  for (auto& [e, c] : phi.terms()) x(idx.at(e)) = c;
  const WeylElem w0I = w0_upper(J_set(n), n);
  KZSolution<S> sol;
  sol.params = p;
  sol.dim = rep.dim;
  sol.components.assign(sol.dim, LaurentPoly<S>(n));
  for (size_t c = 0; c < ps.reps.size(); ++c) {
    Vec<S> y = x;
    auto word = reduced_word(ps.reps[c] * w0I.inverse());
    for (auto it = word.rbegin(); it != word.rend(); ++it) y = Tm[*it] * y;
    for (int k = 0; k < sol.dim; ++k)
      for (int a = 0; a < N; ++a)
        if (y(a) != S(0)) sol.components[k].add_term(basis[a], y(a) * ps.V(k, c));
  }
  sol.construction = "cm_alpha_matrix";
  return sol;
}

struct QKZCaps {
  int max_degree = 4;  // |m| n
};

constexpr double nontrivial_tol = 1e-9;

template <class S>
KZSolution<S> build_polynomial_solution(const ParamSet<S>& p, int m, const QKZCaps& caps = {}) {
  const int n = p.n;
  auto cond = check_mcondition(p, m);
  if (!cond.satisfied)
    throw ConditionRefusal("polynomial-solution condition not satisfied for m = " + std::to_string(m), condition_to_json(cond));
  if (std::abs(m) * n > caps.max_degree) throw Refusal("build_polynomial_solution: |m| n exceeds cap " + std::to_string(caps.max_degree));

  Exp lam(n, m);
  auto zeta = zeta_point(p);
  auto gm = gamma_lambda(lam, p);
  auto wz = act_point(w0_upper(J_set(n), n), zeta, S(1));
  double d = 0, s = 0;
  for (int i = 0; i < n; ++i) {
    d = std::max(d, absd(S(wz[i] - gm[i])));
    s = std::max(s, absd(gm[i]));
  }
  if (d > 1e-9 * s) throw Defect("w0^J zeta != gamma_m at a point satisfying the condition");

  KoornwinderCaps kc;
  kc.max_degree = std::max(kc.max_degree, caps.max_degree);
  auto P = compute_P(lam, p, kc);
  auto sol = cm_alpha(P.P, p);
  sol.m = m;
  sol.lambda = lam;
  sol.construction = "polynomial_solution";
  if (sol.max_abs_coeff() <= nontrivial_tol) throw Defect("built solution vanishes identically");
  return sol;
}

struct VerifyReport {
  Residuals residuals;  // transport_i, invariance_s_j
  double transport = 0, invariance = 0;
  int resamples = 0;
};

// C_{tau_i}(t) f(q^-e_i t) = f(t) and C_{s_j}(t) f(s_j t) = f(t) at random t
template <class S>
VerifyReport verify_solution(const KZSolution<S>& sol, int samples, std::uint64_t seed) {
  const auto& p = sol.params;
  const int n = p.n;
  auto rep = build_spin_rep(p);
  if (rep.dim != sol.dim) throw Refusal("verify_solution: dimension mismatch");
  const S q = p.q();
  const QPair<S> qq = QPair<S>::from(p);
  detail::Draw dr(seed);
  VerifyReport out;
  for (int i = 1; i <= n; ++i) out.residuals["transport_" + std::to_string(i)] = 0;
  for (int j = 0; j <= n; ++j) out.residuals["invariance_s" + std::to_string(j)] = 0;
  for (int smp = 0; smp < samples; ++smp) {
    for (int tries = 0;; ++tries) {
      std::vector<S> t(n);
      for (auto& z : t) z = from_cd<S>(dr.point());
      try {
        Residuals r;
        Vec<S> ft = sol.eval_vec(t);
        double sc = max_abs(ft);
        if (sc == 0) sc = 1;
        for (int i = 1; i <= n; ++i) {
          Vec<S> lhs = transport_C_tau(rep, i, t, qq) * sol.eval_vec(shift_down(t, i, q));
          r["transport_" + std::to_string(i)] = max_abs(Vec<S>(lhs - ft)) / sc;
        }
        for (int j = 0; j <= n; ++j) {
          Vec<S> lhs = cocycle_simple(rep, j, t, qq) * sol.eval_vec(act_point(WeylElem::generator(j, n), t, q));
          r["invariance_s" + std::to_string(j)] = max_abs(Vec<S>(lhs - ft)) / sc;
        }
        for (auto& [k, v] : r) out.residuals[k] = std::max(out.residuals[k], v);
        break;
      } catch (const PoleError&) {
        ++out.resamples;
        if (tries > 32) throw;
      }
    }
  }
  for (auto& [k, v] : out.residuals) {
    double& fam = k.rfind("transport", 0) == 0 ? out.transport : out.invariance;
    fam = std::max(fam, v);
  }
  return out;
}

inline json verify_to_json(const VerifyReport& r) {
  json res = json::object();
  for (auto& [k, v] : r.residuals) res[k] = v;
  return {{"residuals", res}, {"transport_max", r.transport}, {"invariance_max", r.invariance}, {"resamples", r.resamples}};
}

// adds eps * max|coeff| * t_1 to the first component
template <class S>
KZSolution<S> perturb_solution(KZSolution<S> sol, double eps = 0.1) {
  const int n = sol.params.n;
  Exp e(n, 0);
  e[0] = 1;
  sol.components[0].add_term(e, S(eps * std::max(1.0, sol.max_abs_coeff())));
  sol.construction += "+perturbed";
  return sol;
}

// C_{tau_i}(t) C_{tau_j}(q^-e_i t) - C_{tau_j}(t) C_{tau_i}(q^-e_j t)
template <class S>
double transport_consistency_residual(const HeckeRep<S>& r, int i, int j, const std::vector<S>& t) {
  const S q = r.params.q();
  Mat<S> a = transport_C_tau(r, i, t) * transport_C_tau(r, j, shift_down(t, i, q));
  Mat<S> b = transport_C_tau(r, j, t) * transport_C_tau(r, i, shift_down(t, j, q));
  return residual(a, b);
}

}  // namespace daha
