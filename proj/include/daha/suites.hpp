#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "baxter.hpp"
#include "koornwinder.hpp"
#include "laurent.hpp"
#include "matchings.hpp"
#include "params.hpp"
#include "qkz.hpp"
#include "report.hpp"
#include "spinrep.hpp"
#include "transfer.hpp"
#include "weyl.hpp"

namespace daha {

struct SuiteConfig {
  int n = 2;
  std::uint64_t seed = 1;
  int samples = 20;
  double tolerance = 1e-9;
  Precision precision = Precision::dbl;
  std::optional<ParamSet<cd>> params;  // overrides sampling
  std::optional<int> m;
  bool mcondition = false;  // sample params satisfying the polynomial-solution condition for m
  std::optional<Exp> lambda;
  int degree = 3;  // koornwinder: all lambda with |lambda|_1 <= degree
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s = {"algebra", "matchmaker", "baxter", "transfer", "koornwinder", "qkz", "all"};
  return s;
}

namespace detail {

inline ParamSet<cd> base_params(const SuiteConfig& c) {
  if (c.params) {
    if (c.params->n != c.n) throw Refusal("params file has n = " + std::to_string(c.params->n) + " but n = " + std::to_string(c.n) + " was requested");
    c.params->validate();
    return *c.params;
  }
  return sample_generic(c.seed, c.n);
}

// constrained set for m, re-solving psin at the working precision
template <class S>
ParamSet<S> constrained_params(const SuiteConfig& c, int m) {
  ParamSet<cd> base = c.params ? *c.params : sample_generic(c.seed, c.n, std::optional<int>(m));
  auto p = base.template convert<S>();
  p.psin = psin_for_mcondition(p, m);
  return p;
}

template <class S>
std::vector<S> draw_point(Draw& dr, int n) {
  std::vector<S> t(n);
  for (auto& z : t) z = from_cd<S>(dr.point());
  return t;
}

template <class S>
S draw_scalar(Draw& dr) {
  return from_cd<S>(dr.point());
}

// random Laurent polynomial with |mu|_1 <= deg
template <class S>
LaurentPoly<S> random_poly(Draw& dr, int n, int deg, int terms) {
  auto ball = l1_ball(n, deg);
  LaurentPoly<S> f(n);
  for (int k = 0; k < terms; ++k) {
    auto& e = ball[static_cast<size_t>(dr.u01() * static_cast<double>(ball.size())) % ball.size()];
    f.add_term(e, draw_scalar<S>(dr));
  }
  return f;
}

inline std::string exp_str(const Exp& e) {
  std::string s = "(";
  for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + ")";
}

inline Word random_word(std::mt19937_64& rng, int n, int maxlen) {
  int len = static_cast<int>(rng() % static_cast<std::uint64_t>(maxlen + 1));
  Word w;
  for (int k = 0; k < len; ++k) w.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1)));
  return w;
}

template <class S>
double vec_residual(const std::vector<S>& a, const std::vector<S>& b) {
  double d = 0, s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, absd(S(a[i] - b[i])));
    s = std::max({s, absd(a[i]), absd(b[i])});
  }
  return s == 0 ? d : d / s;
}

// runs f, retrying with fresh draws on poles
template <class F>
void sampled(Draw& dr, F&& f) {
  for (int k = 0;; ++k) {
    try {
      f(dr);
      return;
    } catch (const PoleError&) {
      if (k > 32) throw;
    }
  }
}

inline void require_n(const char* suite, int n, int lo, int hi) {
  if (n < lo || n > hi)
    throw Refusal(std::string(suite) + " suite supports n in " + std::to_string(lo) + ".." + std::to_string(hi) + ", got " + std::to_string(n));
}

}  // namespace detail

// ---- weyl + spin representation + matchmaker ----

template <class S>
CheckReport suite_matchmaker(const SuiteConfig& cfg) {
  const int n = cfg.n;
  detail::require_n("matchmaker", n, 2, 6);
  const double tol = cfg.tolerance;
  CheckReport R;
  auto p = detail::base_params(cfg).template convert<S>();
  auto r = build_spin_rep(p);

  // nu bijection and Lsum, exhaustively for n <= 6
  int nu_bad = 0, lsum_bad = 0, stats_bad = 0;
  for (int k = 1; k <= 6; ++k) {
    auto ms = enumerate_matchings(k);
    if (static_cast<int>(ms.size()) != (1 << k)) ++nu_bad;
    for (int idx = 0; idx < (1 << k); ++idx) {
      auto nu = nu_from_index(idx, k);
      if (nu_of(matching_from_nu(nu)) != nu) ++nu_bad;
      if (!(matching_from_nu(nu_of(ms[idx])) == ms[idx])) ++nu_bad;
      if (lsum(ms[idx]) != -pty(k)) ++lsum_bad;
      for (auto& om : orientations(ms[idx])) {
        auto a = orientation_stats(om), b = orientation_stats_scan(om);
        if (a.orient != b.orient || a.N00 != b.N00 || a.N01 != b.N01 || a.Nn0 != b.Nn0 || a.Nn1 != b.Nn1) ++stats_bad;
      }
    }
  }
  R.add("nu_bijection", nu_bad, 0.5, "nu is a bijection onto sign strings and #matchings = 2^n, n <= 6 (mismatch count)");
  R.add("lsum_identity", lsum_bad, 0.5, "sum_{j,h} (-1)^h L_{j,h}(p) = -pty(n) for every matching, n <= 6 (mismatch count)");
  R.add("orientation_stats_two_path", stats_bad, 0.5, "orientation counters: incremental vs brute-force edge scan (mismatch count)");

  auto g = m_gauge(p);
  auto W = matchmaker_matrices(n, r.tl, g.beta0, g.beta1);
  R.add("omega_tl_relations", max_residual(check_tl_relations(W, r.tl)), tol, "two-boundary TL relations for the matchmaker representation");
  auto Psi = intertwiner_Psi(p, g, false);
  for (int j = 0; j <= n; ++j)
    R.add("intertwiner_e" + std::to_string(j), residual(Mat<S>(Psi * W[j]), Mat<S>(r.e[j] * Psi)), tol,
          "Psi omega(e_j) = rho_hat(e_j) Psi");
  R.add_lower("intertwiner_det", absd(S(Psi.determinant())), 1e-8, "|det Psi| at a generic point");
  R.add("intertwiner_limit", residual(intertwiner_Psi_limit(n), identity<cd>(1 << n)), 1e-300,
        "degenerate limit psi0 = psin = 1/kappa = 0 sends each matching to its nu-basis spin vector");
  return R;
}

template <class S>
CheckReport suite_algebra(const SuiteConfig& cfg) {
  const int n = cfg.n;
  detail::require_n("algebra", n, 2, 6);
  const double tol = cfg.tolerance;
  CheckReport R;
  auto p = detail::base_params(cfg).template convert<S>();
  auto r = build_spin_rep(p);

  // affine Weyl group
  {
    std::mt19937_64 rng(cfg.seed);
    int bad_round = 0, bad_len = 0;
    for (int k = 0; k < 200; ++k) {
      auto w = detail::random_word(rng, n, 12);
      auto g = from_word(w, n);
      auto rw = reduced_word(g);
      if (!(from_word(rw, n) == g)) ++bad_round;
      if (static_cast<int>(rw.size()) != length(g) || length(g) > static_cast<int>(w.size())) ++bad_len;
    }
    R.add("weyl_word_roundtrip", bad_round, 0.5, "from_word(reduced_word(g)) = g on random elements (mismatch count)");
    R.add("weyl_length", bad_len, 0.5, "reduced word length equals l(g) and l(g) <= word length (mismatch count)");
    int bad_rel = 0;
    auto s = [&](int j) { return WeylElem::generator(j, n); };
    WeylElem e(n);
    for (int j = 0; j <= n; ++j)
      if (!(s(j) * s(j) == e)) ++bad_rel;
    for (int i = 0; i < n; ++i) {
      bool four = i == 0 || i + 1 == n;
      auto a = four ? s(i) * s(i + 1) * s(i) * s(i + 1) : s(i) * s(i + 1) * s(i);
      auto b = four ? s(i + 1) * s(i) * s(i + 1) * s(i) : s(i + 1) * s(i) * s(i + 1);
      if (!(a == b)) ++bad_rel;
    }
    for (int i = 0; i <= n; ++i)
      for (int j = i + 2; j <= n; ++j)
        if (!(s(i) * s(j) == s(j) * s(i))) ++bad_rel;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (!(WeylElem::tau(i, n) * WeylElem::tau(j, n) == WeylElem::tau(j, n) * WeylElem::tau(i, n))) ++bad_rel;
    R.add("weyl_relations", bad_rel, 0.5, "Coxeter relations of the generators and commuting translations (mismatch count)");
    detail::Draw dr(cfg.seed + 101);
    double act = 0;
    for (int k = 0; k < 100; ++k) {
      auto g = from_word(detail::random_word(rng, n, 8), n), h = from_word(detail::random_word(rng, n, 8), n);
      auto t = detail::draw_point<S>(dr, n);
      act = std::max(act, detail::vec_residual(act_point(g, act_point(h, t, p), p), act_point(g * h, t, p)));
    }
    R.add("weyl_action_homomorphism", act, tol, "act(g, act(h, t)) = act(gh, t)");
    auto reps = min_coset_reps(J_set(n), n);
    R.add("coset_reps_count", std::abs(static_cast<double>(reps.size()) - (1 << n)), 0.5, "#W0^J = 2^n");
    auto star = star_involution(J_set(n), n);
    int bad_star = 0;
    for (auto [i, is] : star.map)
      if (is != n - i) ++bad_star;
    R.add("star_involution_J", bad_star, 0.5, "i* = n - i for I = J");
  }

  // Hecke and TL relations
  for (auto& [k, v] : check_hecke_relations(r)) R.add("hecke_" + k, v, tol, "affine Hecke relation for rho(T_j)");
  for (auto& [k, v] : check_tl_relations(r.e, r.tl)) R.add("spin_" + k, v, tol, "two-boundary TL relation for rho_hat(e_j)");
  R.add("spin_T0_is_Kbar", residual(r.T[0], place<S>(Kbar_mat(p), {0}, n)), tol, "rho(T_0) acts on the first leg by Kbar");
  R.add("spin_Tn_is_K", residual(r.T[n], place<S>(K_mat(p), {n - 1}, n)), tol, "rho(T_n) acts on the last leg by K");

  // Murphy elements and principal series
  std::vector<Mat<S>> Y;
  for (int i = 1; i <= n; ++i) Y.push_back(murphy_Y(r, i));
  double ycomm = 0, yeig = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ycomm = std::max(ycomm, residual(Mat<S>(Y[i] * Y[j]), Mat<S>(Y[j] * Y[i])));
  Vec<S> vp = vplus<S>(n);
  for (int i = 1; i <= n; ++i)
    yeig = std::max(yeig, residual(Vec<S>(Y[i - 1] * vp), Vec<S>(p.psi0 * p.psin * ipow(p.kappa, n - 2 * i + 1) * vp)));
  R.add("murphy_commute", ycomm, tol, "rho(Y_i) pairwise commute");
  R.add("murphy_vplus_eigen", yeig, tol, "rho(Y_i) v+ = psi0 psin kappa^(n-2i+1) v+");
  double tj = 0;
  for (int i = 1; i < n; ++i) tj = std::max(tj, residual(Vec<S>(r.T[i] * vp), Vec<S>(p.kappa * vp)));
  R.add("principal_series_J_eigen", tj, tol, "rho(T_i) v+ = kappa v+ for i in J");
  auto ps = principal_series_basis(r, 1e300);
  R.add("principal_series_condition", ps.cond, 1e12, "condition number of the 2^n vectors rho(T_w) v+");

  auto M = suite_matchmaker<S>(cfg);
  R.merge(M, "matchmaker_");
  return R;
}

// ---- Baxterization and cocycle ----

template <class S>
CheckReport suite_baxter(const SuiteConfig& cfg) {
  const int n = cfg.n;
  detail::require_n("baxter", n, 2, 8);
  const double tol = cfg.tolerance;
  CheckReport R;
  auto p = detail::base_params(cfg).template convert<S>();
  auto r = build_spin_rep(p);
  const Mat<S> I = identity<S>(r.dim), I2 = identity<S>(2), I4 = identity<S>(4), P = flip<S>();
  const S one(1), zero(0);

  double sp1 = residual(baxter_K0(r, one), I);
  sp1 = std::max(sp1, residual(baxter_Kn(r, one), I));
  for (int i = 1; i < n; ++i) sp1 = std::max(sp1, residual(baxter_Ri(r, i, one), I));
  R.add("specialization_one", sp1, tol, "K0(1) = R_i(1) = Kn(1) = Id");
  double sp0 = residual(baxter_K0(r, zero), Mat<S>(p.kappa0 * r.Ti[0]));
  sp0 = std::max(sp0, residual(baxter_Kn(r, zero), Mat<S>(p.kappan * r.Ti[n])));
  for (int i = 1; i < n; ++i) sp0 = std::max(sp0, residual(baxter_Ri(r, i, zero), Mat<S>(p.kappa * r.Ti[i])));
  R.add("specialization_zero", sp0, tol, "K0(0) = kappa0 T0^-1, R_i(0) = kappa T_i^-1, Kn(0) = kappan Tn^-1");

  R.add("r_regularity", residual(r_mat(p, one), P), tol, "r(1) = P");
  R.add("k_regularity", std::max(residual(k_mat(p, one), I2), residual(k_mat(p, S(-1)), I2)), tol, "k(1) = Id = k(-1)");
  R.add("kbar_regularity", std::max(residual(kbar_mat(p, one), I2), residual(kbar_mat(p, S(-1)), I2)), tol, "kbar(1) = Id = kbar(-1)");
  R.add("r_zero_limit", residual(r_mat(p, zero), Mat<S>(p.kappa * P * upsilon_mat(p).inverse() * P)), tol,
        "r(0) = kappa P Upsilon^-1 P");
  R.add("k_zero_limit", residual(k_mat(p, zero), Mat<S>(p.kappan * K_mat(p).inverse())), tol, "k(0) = kappan K^-1");
  R.add("kbar_zero_limit", residual(kbar_mat(p, zero), Mat<S>(p.kappa0 * Kbar_mat(p).inverse())), tol, "kbar(0) = kappa0 Kbar^-1");
  {
    double lit = residual(r_mat(p, zero), Mat<S>(p.kappa * upsilon_mat(p).inverse()));
    R.notes.push_back("r(0) against kappa Upsilon^-1 without the flip conjugation: residual " + CheckReport::fmt(lit));
  }

  detail::Draw dr(cfg.seed + 202);
  double unit = 0, runit = 0, cons = 0, braid = 0, refl = 0, far = 0;
  for (int s = 0; s < cfg.samples; ++s)
    detail::sampled(dr, [&](detail::Draw& d) {
      S x = detail::draw_scalar<S>(d), y = detail::draw_scalar<S>(d), xi = one / x;
      double u = residual(Mat<S>(baxter_K0(r, x) * baxter_K0(r, xi)), I);
      u = std::max(u, residual(Mat<S>(baxter_Kn(r, x) * baxter_Kn(r, xi)), I));
      for (int i = 1; i < n; ++i) u = std::max(u, residual(Mat<S>(baxter_Ri(r, i, x) * baxter_Ri(r, i, xi)), I));
      double ru = residual(Mat<S>(r_mat(p, x) * P * r_mat(p, xi) * P), I4);
      double c = residual(baxter_K0(r, x), place<S>(kbar_mat(p, x), {0}, n));
      c = std::max(c, residual(baxter_Kn(r, x), place<S>(k_mat(p, x), {n - 1}, n)));
      for (int i = 1; i < n; ++i) c = std::max(c, residual(baxter_Ri(r, i, x), place<S>(rcheck_mat(p, x), {i - 1, i}, n)));
      double b = 0, f = 0;
      for (int i = 1; i + 1 < n; ++i)
        b = std::max(b, residual(Mat<S>(baxter_Ri(r, i, x) * baxter_Ri(r, i + 1, S(x * y)) * baxter_Ri(r, i, y)),
                                 Mat<S>(baxter_Ri(r, i + 1, y) * baxter_Ri(r, i, S(x * y)) * baxter_Ri(r, i + 1, x))));
      double rf = residual(Mat<S>(baxter_Ri(r, 1, S(x / y)) * baxter_K0(r, x) * baxter_Ri(r, 1, S(x * y)) * baxter_K0(r, y)),
                           Mat<S>(baxter_K0(r, y) * baxter_Ri(r, 1, S(x * y)) * baxter_K0(r, x) * baxter_Ri(r, 1, S(x / y))));
      rf = std::max(rf, residual(Mat<S>(baxter_Ri(r, n - 1, S(x / y)) * baxter_Kn(r, x) * baxter_Ri(r, n - 1, S(x * y)) * baxter_Kn(r, y)),
                                 Mat<S>(baxter_Kn(r, y) * baxter_Ri(r, n - 1, S(x * y)) * baxter_Kn(r, x) * baxter_Ri(r, n - 1, S(x / y)))));
      auto C = [&](int j, const S& z) { return j == 0 ? baxter_K0(r, z) : (j == n ? baxter_Kn(r, z) : baxter_Ri(r, j, z)); };
      for (int i = 0; i <= n; ++i)
        for (int j = i + 2; j <= n; ++j) f = std::max(f, residual(Mat<S>(C(i, x) * C(j, y)), Mat<S>(C(j, y) * C(i, x))));
      unit = std::max(unit, u);
      runit = std::max(runit, ru);
      cons = std::max(cons, c);
      braid = std::max(braid, b);
      refl = std::max(refl, rf);
      far = std::max(far, f);
    });
  R.add("unitarity", unit, tol, "K0(x)K0(1/x) = R_i(x)R_i(1/x) = Kn(x)Kn(1/x) = Id");
  R.add("r_unitarity", runit, tol, "r(x) r21(1/x) = Id");
  R.add("explicit_consistency", cons, tol, "explicit kbar, r P, k equal the spin-rep K0, R_i, Kn on their legs");
  R.add("braid_spectral", braid, tol, "R_i(x)R_{i+1}(xy)R_i(y) = R_{i+1}(y)R_i(xy)R_{i+1}(x)");
  R.add("reflection_spectral", refl, tol, "R_1(x/y)K0(x)R_1(xy)K0(y) = K0(y)R_1(xy)K0(x)R_1(x/y) and the Kn analogue");
  R.add("far_commuting", far, tol, "factors on non-adjacent nodes commute");

  auto yr = [&] {
    detail::Draw d(cfg.seed + 303);
    Residuals out{{"ybe", 0.0}, {"re_left", 0.0}, {"re_right", 0.0}};
    double neg = 1e300;
    ParamSet<S> pert = p;
    pert.upsilon0 = p.upsilon0 * S(1.1);
    for (int s = 0; s < cfg.samples; ++s)
      detail::sampled(d, [&](detail::Draw& dd) {
        S x = detail::draw_scalar<S>(dd), y = detail::draw_scalar<S>(dd);
        double a = ybe_residual(p, x, y), b = re_left_residual(p, x, y), c = re_right_residual(p, x, y);
        double ng = re_left_residual(p, x, y, &pert);
        out["ybe"] = std::max(out["ybe"], a);
        out["re_left"] = std::max(out["re_left"], b);
        out["re_right"] = std::max(out["re_right"], c);
        neg = std::min(neg, ng);
      });
    return std::make_pair(out, neg);
  }();
  R.add("ybe", yr.first["ybe"], tol, "r12(x) r13(xy) r23(y) = r23(y) r13(xy) r12(x)");
  R.add("re_left", yr.first["re_left"], tol, "left reflection equation for kbar");
  R.add("re_right", yr.first["re_right"], tol, "right reflection equation for k");
  R.add_lower("re_left_negative_control", yr.second, 1e-3, "left reflection equation with upsilon0 perturbed on one side");

  // cocycle
  std::mt19937_64 rng(cfg.seed + 404);
  detail::Draw dt(cfg.seed + 505);
  double ce = 0, csi = 0, indep = 0, law = 0;
  {
    auto t = detail::draw_point<S>(dt, n);
    ce = residual(cocycle_C(r, WeylElem(n), t), I);
    for (int i = 1; i < n; ++i) csi = std::max(csi, residual(cocycle_C(r, WeylElem::generator(i, n), t), baxter_Ri(r, i, S(t[i - 1] / t[i]))));
  }
  R.add("cocycle_identity", ce, tol, "C_e = Id");
  R.add("cocycle_simple", csi, tol, "C_{s_i}(t) = R_i(t_i/t_{i+1})");
  for (int k = 0; k < 50; ++k) {
    WeylElem g;
    do g = from_word(detail::random_word(rng, n, 8), n);
    while (length(g) > 8);
    detail::sampled(dt, [&](detail::Draw& d) {
      auto t = detail::draw_point<S>(d, n);
      auto w2 = random_reduced_word(g, rng);
      indep = std::max(indep, residual(cocycle_word(r, reduced_word(g), t, QPair<S>::from(p)), cocycle_word(r, w2, t, QPair<S>::from(p))));
    });
  }
  for (int k = 0; k < 20; ++k) {
    auto g = from_word(detail::random_word(rng, n, 5), n), h = from_word(detail::random_word(rng, n, 5), n);
    detail::sampled(dt, [&](detail::Draw& d) {
      auto t = detail::draw_point<S>(d, n);
      law = std::max(law, residual(cocycle_C(r, g * h, t), Mat<S>(cocycle_C(r, g, t) * cocycle_C(r, h, act_point(g.inverse(), t, p)))));
    });
  }
  R.add("cocycle_word_independence", indep, tol, "C_w along two random reduced words agree, 50 elements of length <= 8");
  R.add("cocycle_law", law, tol, "C_{gh}(t) = C_g(t) C_h(g^-1 t)");

  double tau = 0, shift = 0;
  for (int s = 0; s < std::min(cfg.samples, 10); ++s)
    detail::sampled(dt, [&](detail::Draw& d) {
      auto t = detail::draw_point<S>(d, n);
      for (int i = 1; i <= n; ++i) tau = std::max(tau, residual(transport_C_tau(r, i, t), cocycle_C(r, WeylElem::tau(i, n), t)));
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) shift = std::max(shift, transport_consistency_residual(r, i, j, t));
    });
  R.add("transport_explicit_vs_cocycle", tau, tol, "explicit product for C_{tau_i} equals the cocycle along a reduced word");
  R.add("transport_commuting_shift", shift, tol, "C_{tau_i}(t) C_{tau_j}(q^-e_i t) = C_{tau_j}(t) C_{tau_i}(q^-e_j t)");

  {
    ParamSet<S> p1 = p;
    p1.kappa0 = p1.kappa = p1.kappan = p1.upsilon0 = p1.upsilonn = p1.kappa_sqrt = S(1);
    auto r1 = build_spin_rep(p1);
    double d = 0;
    for (int k = 0; k < 10; ++k) {
      auto g = from_word(detail::random_word(rng, n, 8), n);
      auto t = detail::draw_point<S>(dt, n);
      d = std::max(d, residual(cocycle_C(r1, g, t), T_word(r1, reduced_word(g))));
    }
    R.add("cocycle_group_algebra_point", d, tol, "at kappa_j = upsilon_j = 1 the cocycle is rho(T_w), independent of t");
  }
  return R;
}

// ---- transfer matrices and Hamiltonians ----

template <class S>
CheckReport suite_transfer(const SuiteConfig& cfg) {
  const int n = cfg.n;
  detail::require_n("transfer", n, 2, 6);
  const double tol = cfg.tolerance;
  CheckReport R;
  auto p = detail::base_params(cfg).template convert<S>();
  auto r = build_spin_rep(p);
  detail::Draw dr(cfg.seed + 606);
  const int ns = std::max(1, std::min(cfg.samples, 10));

  double comm = 0, bc = 0, cu = 0, pt = 0, uf = 0, ex = 0, ii = 0, id = 0, ip = 0;
  for (int s = 0; s < ns; ++s)
    detail::sampled(dr, [&](detail::Draw& d) {
      S x = detail::draw_scalar<S>(d), y = detail::draw_scalar<S>(d);
      auto t = detail::draw_point<S>(d, n);
      Mat<S> Tx = transfer_T(p, x, t), Ty = transfer_T(p, y, t);
      double c = residual(Mat<S>(Tx * Ty), Mat<S>(Ty * Tx));
      double b = boundary_crossing_residual(p, x), u = crossing_unitarity_residual(p, x), q = pt_symmetry_residual(p, x);
      double f = residual(monodromy_U(p, x, t), monodromy_U_check(p, x, t));
      double e = max_residual(transfer_exchange_residuals(p, x, t));
      Residuals it;
      for (int i = 1; i <= n; ++i)
        for (auto& [k, v] : check_transfer_vs_transport(r, i, t)) it[k] = std::max(it[k], v);
      comm = std::max(comm, c);
      bc = std::max(bc, b);
      cu = std::max(cu, u);
      pt = std::max(pt, q);
      uf = std::max(uf, f);
      ex = std::max(ex, e);
      ii = std::max(ii, it["interp_inverse"]);
      id = std::max(id, it["interp_direct"]);
      ip = std::max(ip, it["interp_product"]);
    });
  R.add("transfer_commute", comm, 10 * tol, "[T(x;t), T(y;t)] = 0");
  R.add("boundary_crossing", bc, tol, "Tr0(theta0 kbar0(kappa^2 x) theta0 rcheck01(x^2)) = Phi_bdy(x) kbar1(x)");
  R.add("crossing_unitarity", cu, tol, "theta-conjugated partial-transpose unitarity with Phi(x)");
  R.add("pt_symmetry", pt, tol, "r21(x) = r12(x)^T");
  R.add("monodromy_two_forms", uf, tol, "monodromy built from r and from rcheck agree");
  R.add("transfer_exchange", ex, tol, "T(x;t) rcheck(t_i/t_{i+1}) = rcheck(t_i/t_{i+1}) T(x; s_i t) and the k_n analogue");
  R.add("interpolation_inverse", ii, 10 * tol, "T(1/t_i; t) = Phi_bdy(1/t_i) C_{tau_i}(t) at q = 1");
  R.add("interpolation_direct", id, 10 * tol, "T(t_i; t) = Phi_bdy(t_i) C_{tau_i}(t)^-1 at q = 1");
  R.add("interpolation_product", ip, 10 * tol, "T(t_i;t) T(1/t_i;t) is the scalar Phi_bdy(t_i) Phi_bdy(1/t_i)");
  R.add("rcheck_derivative", rcheck_derivative_residual(p), tol, "rcheck'(1) = e / (kappa - 1/kappa)");

  Mat<S> Hp = hamiltonian(r, HamForm::pauli), Ht = hamiltonian(r, HamForm::tl), Hx = hamiltonian(r, HamForm::transfer);
  R.add("hamiltonian_tl_vs_pauli", residual(Ht, Hp), tol, "TL form of H equals the Pauli form");
  R.add("hamiltonian_transfer_vs_pauli", residual(Hx, Hp), 100 * tol, "log-derivative of the transfer matrix equals the Pauli form");
  if constexpr (std::is_same_v<S, cd>)
    R.add("hamiltonian_transfer_fd", residual(hamiltonian(r, HamForm::transfer_fd), Hx), 1e-5,
          "central complex-step difference agrees with the analytic derivative");
  R.notes.push_back("displayed Pauli boundary sign vs transfer form: residual " + CheckReport::fmt(residual(hamiltonian(r, HamForm::pauli_displayed), Hx)));
  R.notes.push_back("TL form without the (kappa - 1/kappa) boundary factor vs transfer form: residual " +
                    CheckReport::fmt(residual(hamiltonian(r, HamForm::tl_displayed), Hx)));
  return R;
}

// ---- Koornwinder polynomials ----

template <class S>
CheckReport suite_koornwinder(const SuiteConfig& cfg) {
  const int n = cfg.n;
  detail::require_n("koornwinder", n, 1, 3);
  const double tol = cfg.tolerance;
  CheckReport R;
  auto p = detail::base_params(cfg).template convert<S>();
  detail::Draw dr(cfg.seed + 707);
  const S q = p.q();

  // operator-level checks on random polynomials
  double quad = 0, inv = 0, ddr = 0, ceval = 0, mul = 0;
  for (int k = 0; k < 20; ++k) {
    auto f = detail::random_poly<S>(dr, n, 3, 6);
    for (int j = 0; j <= n; ++j) {
      const S kj = p.kap(j);
      auto Tf = noumi_T_apply(j, f, p);
      auto TTf = noumi_T_apply(j, Tf, p);
      quad = std::max(quad, poly_residual(TTf, Tf * S(S(1) / kj - kj) + f));
      inv = std::max(inv, poly_residual(noumi_T_apply(j, noumi_T_apply(j, f, p, true), p), f));
      auto dd = divided_difference(f, j, q);
      auto den = c_denominator(j, n, q);
      LaurentPoly<S> D = LaurentPoly<S>::constant(n, S(1));
      D.add_term(den.d, -den.c);
      ddr = std::max(ddr, poly_residual(dd * D, reflect(f, j, q) - f));
    }
    detail::sampled(dr, [&](detail::Draw& d) {
      auto t = detail::draw_point<S>(d, n);
      for (int j = 0; j <= n; ++j) {
        S lhs = noumi_T_apply(j, f, p).eval(t);
        S rhs = f.eval(t) / p.kap(j) + c_eval(j, t, p, true) * (f.eval(act_point(WeylElem::generator(j, n), t, q)) - f.eval(t));
        ceval = std::max(ceval, absd(S(lhs - rhs)) / std::max(absd(lhs), absd(rhs)));
      }
      auto g = detail::random_poly<S>(d, n, 2, 4);
      S a = (f * g).eval(t), b = f.eval(t) * g.eval(t);
      mul = std::max(mul, absd(S(a - b)) / std::max(absd(a), 1e-300));
    });
  }
  R.add("noumi_quadratic", quad, tol, "(T_j - kappa_j^-1)(T_j + kappa_j) f = 0 on random f");
  R.add("noumi_inverse", inv, tol, "T_j T_j^-1 f = f on random f");
  R.add("divided_difference_exact", ddr, tol, "divided difference times the c_j denominator equals f o s_j - f");
  R.add("noumi_pointwise", ceval, tol, "T_j f evaluated pointwise equals kappa_j^-1 f(t) + c_j(t)(f(s_j t) - f(t)) with inverted parameters");
  R.add("laurent_mul_eval", mul, tol, "eval(a b) = eval(a) eval(b)");

  auto g0 = gamma_lambda(Exp(n, 0), p);
  double y1 = 0;
  for (int i = 1; i <= n; ++i)
    y1 = std::max(y1, poly_residual(noumi_Y_apply(i, LaurentPoly<S>::constant(n, S(1)), p), LaurentPoly<S>::constant(n, S(1) / g0[i - 1])));
  R.add("Y_on_constants", y1, tol, "Y_i 1 = gamma_{0,i}^-1");

  auto P0 = compute_P(Exp(n, 0), p);
  R.add_bool("P0_is_one", P0.P.size() == 1 && P0.P.coeff(Exp(n, 0)) == S(1), "P_0 = 1 exactly");

  std::vector<Exp> lams;
  if (cfg.lambda)
    lams = {*cfg.lambda};
  else
    lams = l1_ball(n, cfg.degree);
  double eig = 0, com = 0, fix = 0, nonfix = 1e300, leak = 0;
  bool monic = true, support = true;
  std::string worst;
  for (auto& lam : lams) {
    auto res = compute_P(lam, p);
    if (res.eigen_residual > eig) {
      eig = res.eigen_residual;
      worst = detail::exp_str(lam);
    }
    com = std::max(com, res.commutator);
    leak = std::max(leak, res.leak);
    monic = monic && res.P.coeff(lam) == S(1);
    support = support && support_contained(res.P, lam, res.enlarged);
    for (auto& row : fixed_point_rows(lam, res.P, p)) {
      if (row.fixed)
        fix = std::max(fix, row.residual);
      else
        nonfix = std::min(nonfix, row.residual);
    }
  }
  R.add("P_eigen", eig, 10 * tol, "Y_i P_lambda = gamma_{lambda,i}^-1 P_lambda, " + std::to_string(lams.size()) + " lambdas; worst at " + worst);
  R.add("Y_commute_on_span", com, 10 * tol, "[Y_i, Y_j] = 0 on the monomial spans");
  R.add("span_stability", leak, tol, "Y_i maps the span {mu : mu+ <= lambda+} into itself");
  R.add_bool("P_monic", monic, "coefficient of t^lambda is exactly 1");
  R.add_bool("P_support", support, "support of P_lambda lies in the span");
  R.add("tl_eigen_fixed", fix, 10 * tol, "T_i P_lambda = kappa_i^-1 P_lambda when s_i lambda = lambda");
  if (nonfix < 1e300) R.add_lower("tl_eigen_nonfixed", nonfix, 1e-6, "T_i P_lambda != kappa_i^-1 P_lambda when s_i lambda != lambda");
  return R;
}

// ---- reflection qKZ ----

template <class S>
CheckReport suite_qkz(const SuiteConfig& cfg) {
  const int n = cfg.n;
  detail::require_n("qkz", n, 2, 3);
  const double tol = cfg.tolerance;
  CheckReport R;
  const int samples = cfg.samples;

  if (cfg.m && !cfg.mcondition) {
    // explicit m on the given or sampled parameters: the builder decides
    auto p = detail::base_params(cfg).template convert<S>();
    auto sol = build_polynomial_solution(p, *cfg.m);
    auto v = verify_solution(sol, samples, cfg.seed);
    R.add("m=" + std::to_string(*cfg.m) + "_transport", v.transport, 10 * tol, "C_{tau_i}(t) f(q^-e_i t) = f(t)");
    R.add("m=" + std::to_string(*cfg.m) + "_invariance", v.invariance, 10 * tol, "C_{s_j}(t) f(s_j t) = f(t)");
    return R;
  }

  std::vector<int> ms = cfg.m ? std::vector<int>{*cfg.m} : std::vector<int>{-1, 0, 1};
  for (int m : ms) {
    const std::string pre = "m=" + std::to_string(m) + "_";
    auto p = detail::constrained_params<S>(cfg, m);
    auto cond = check_mcondition(p, m);
    R.add_bool(pre + "condition", cond.satisfied, "parameters satisfy psi0 psin q^m = (kappa0 kappan kappa^(n-1))^eta(m)");
    auto sol = build_polynomial_solution(p, m);
    auto v = verify_solution(sol, samples, cfg.seed);
    for (auto& [k, val] : v.residuals) R.add(pre + k, val, 10 * tol, k.rfind("transport", 0) == 0 ? "C_{tau_i}(t) f(q^-e_i t) = f(t)" : "C_{s_j}(t) f(s_j t) = f(t)");
    R.add_lower(pre + "nontrivial", sol.max_abs_coeff(), nontrivial_tol, "max-abs coefficient of the solution");
    auto vp = verify_solution(perturb_solution(sol), samples, cfg.seed);
    R.add_lower(pre + "perturbed_fails", std::max(vp.transport, vp.invariance), 1e-3, "perturbed solution fails verification");

    auto Pm = compute_P(Exp(n, m), p).P;
    auto two = cm_alpha_matrix(Pm, p, Exp(n, m));
    double d = 0;
    for (int k = 0; k < sol.dim; ++k) d = std::max(d, poly_residual(sol.components[k], two.components[k]));
    R.add(pre + "alpha_two_path", d, tol, "alpha by word application vs cached span matrices");
    const S c = from_cd<S>(cd(0.3, -1.7));
    auto a1 = cm_alpha(Pm * c, p), a0 = cm_alpha(Pm, p);
    double lin = 0;
    for (int k = 0; k < sol.dim; ++k) lin = std::max(lin, poly_residual(a1.components[k], a0.components[k] * c));
    R.add(pre + "alpha_linear", lin, tol, "alpha(c phi) = c alpha(phi)");
    R.add_bool(pre + "component_count", static_cast<int>(sol.components.size()) == (1 << n), "2^n components");

    auto rep = build_spin_rep(p);
    detail::Draw dr(cfg.seed + 808 + static_cast<std::uint64_t>(m + 10));
    double shift = 0;
    for (int s = 0; s < 5; ++s)
      detail::sampled(dr, [&](detail::Draw& dd) {
        auto t = detail::draw_point<S>(dd, n);
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j) shift = std::max(shift, transport_consistency_residual(rep, i, j, t));
      });
    R.add(pre + "transport_commuting_shift", shift, 10 * tol, "C_{tau_i}(t) C_{tau_j}(q^-e_i t) = C_{tau_j}(t) C_{tau_i}(q^-e_j t) at the solution's parameters");
  }

  // refusal on unconstrained parameters
  {
    auto p = (cfg.params ? *cfg.params : sample_generic(cfg.seed, n)).template convert<S>();
    bool refused_all = true;
    for (int m : ms) {
      bool unsat = !check_mcondition(p, m).satisfied;
      bool refused = false;
      try {
        build_polynomial_solution(p, m);
      } catch (const ConditionRefusal&) {
        refused = true;
      }
      refused_all = refused_all && (refused == unsat);
    }
    R.add_bool("refusal_matches_condition", refused_all, "builder refuses exactly when the condition fails");
  }
  return R;
}

// ---- dispatch ----

template <class S>
CheckReport run_suite_as(const std::string& name, const SuiteConfig& cfg) {
  if (name == "algebra") return suite_algebra<S>(cfg);
  if (name == "matchmaker") return suite_matchmaker<S>(cfg);
  if (name == "baxter") return suite_baxter<S>(cfg);
  if (name == "transfer") return suite_transfer<S>(cfg);
  if (name == "koornwinder") return suite_koornwinder<S>(cfg);
  if (name == "qkz") return suite_qkz<S>(cfg);
  if (name == "all") {
    CheckReport R;
    for (auto& s : suite_names()) {
      if (s == "all" || s == "matchmaker") continue;
      try {
        R.merge(run_suite_as<S>(s, cfg), s + ".");
      } catch (const Refusal& e) {
        // suites outside their n-range are skipped in the aggregate
        if (std::string(e.what()).find("suite supports n") == std::string::npos) throw;
        R.notes.push_back(s + " skipped: " + e.what());
      }
    }
    return R;
  }
  throw Refusal("unknown suite: " + name);
}

using SuiteRunner = std::function<CheckReport(const std::string&, const SuiteConfig&)>;

// the extended-precision instantiation lives in a separate translation unit (see tools/)
inline CheckReport run_suite(const std::string& name, const SuiteConfig& cfg, const SuiteRunner& extended = {}) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport R;
  if (cfg.precision == Precision::extended) {
    if (!extended) throw Refusal("extended precision is not available in this build");
    R = extended(name, cfg);
    R.precision = "extended";
  } else {
    R = run_suite_as<cd>(name, cfg);
    R.precision = "double";
  }
  R.suite = name;
  R.n = cfg.n;
  R.seed = cfg.seed;
  R.params_fingerprint = params_fingerprint(detail::base_params(cfg));
  R.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return R;
}

}  // namespace daha
