#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "scalar.hpp"
#include "spinrep.hpp"
#include "weyl.hpp"

namespace daha {

constexpr double pole_threshold = 1e-6;

// throws PoleError when `v` (a factor of the form 1 - c) is within the relative threshold of zero
template <class S>
void pole_guard(const S& v, const S& c, const char* what) {
  if (absd(v) < pole_threshold * std::max(1.0, absd(c))) throw PoleError(what);
}

template <class S>
S boundary_den(const S& kj, const S& uj, const S& x, const char* what) {
  S a = kj * uj * x, b = kj * x / uj;
  pole_guard(S(S(1) - a), a, what);
  pole_guard(S(S(1) + b), b, what);
  return (S(1) - a) * (S(1) + b);
}

template <class S>
Mat<S> baxter_K0(const HeckeRep<S>& r, const S& x) {
  const auto& p = r.params;
  S den = boundary_den(p.kappa0, p.upsilon0, x, "K0") / p.kappa0;
  Mat<S> I = identity<S>(r.dim);
  return (r.Ti[0] + (S(1) / p.upsilon0 - p.upsilon0) * x * I - x * x * r.T[0]) / den;
}

template <class S>
Mat<S> baxter_Kn(const HeckeRep<S>& r, const S& x) {
  const auto& p = r.params;
  const int n = r.n;
  S den = boundary_den(p.kappan, p.upsilonn, x, "Kn") / p.kappan;
  Mat<S> I = identity<S>(r.dim);
  return (r.Ti[n] + (S(1) / p.upsilonn - p.upsilonn) * x * I - x * x * r.T[n]) / den;
}

template <class S>
Mat<S> baxter_Ri(const HeckeRep<S>& r, int i, const S& x) {
  if (i < 1 || i >= r.n) throw std::invalid_argument("baxter_Ri: index out of range");
  const S k = r.params.kappa, a = k * k * x;
  pole_guard(S(S(1) - a), a, "R_i");
  return (r.Ti[i] - x * r.T[i]) / ((S(1) - a) / k);
}

// ---- explicit local matrices ----

template <class S>
Mat<S> flip() {
  Mat<S> P = Mat<S>::Zero(4, 4);
  P(0, 0) = P(1, 2) = P(2, 1) = P(3, 3) = S(1);
  return P;
}

template <class S>
Mat<S> r_mat(const ParamSet<S>& p, const S& x) {
  const S k = p.kappa, a = k * k * x;
  pole_guard(S(S(1) - a), a, "r");
  Mat<S> m = Mat<S>::Zero(4, 4);
  m(0, 0) = m(3, 3) = S(1) - a;
  m(1, 1) = m(2, 2) = k * (S(1) - x);
  m(1, 2) = S(1) - k * k;
  m(2, 1) = (S(1) - k * k) * x;
  return m / (S(1) - a);
}

template <class S>
Mat<S> rcheck_mat(const ParamSet<S>& p, const S& x) {
  return r_mat(p, x) * flip<S>();
}

template <class S>
Mat<S> kbar_mat(const ParamSet<S>& p, const S& x) {
  const S k0 = p.kappa0, u0 = p.upsilon0, s = p.psi0;
  S den = boundary_den(k0, u0, x, "kbar");
  Mat<S> m(2, 2);
  m << (S(1) / k0 - k0) * x * x + (S(1) / u0 - u0) * x, s * (S(1) - x * x), (S(1) - x * x) / s,
      S(1) / k0 - k0 + (S(1) / u0 - u0) * x;
  return m * (k0 / den);
}

template <class S>
Mat<S> k_mat(const ParamSet<S>& p, const S& x) {
  const S kn = p.kappan, un = p.upsilonn, s = p.psin;
  S den = boundary_den(kn, un, x, "k");
  Mat<S> m(2, 2);
  m << S(1) / kn - kn + (S(1) / un - un) * x, (S(1) - x * x) / s, s * (S(1) - x * x),
      (S(1) / kn - kn) * x * x + (S(1) / un - un) * x;
  return m * (kn / den);
}

template <class S>
Mat<S> upsilon_mat(const ParamSet<S>& p) {
  const S k = p.kappa;
  Mat<S> m = Mat<S>::Zero(4, 4);
  m(0, 0) = m(3, 3) = k;
  m(1, 1) = m(2, 2) = S(1);
  m(2, 1) = k - S(1) / k;
  return m;
}

template <class S>
Mat<S> Kbar_mat(const ParamSet<S>& p) {
  Mat<S> m(2, 2);
  m << p.kappa0 - S(1) / p.kappa0, p.psi0, S(1) / p.psi0, S(0);
  return m;
}

template <class S>
Mat<S> K_mat(const ParamSet<S>& p) {
  Mat<S> m(2, 2);
  m << S(0), S(1) / p.psin, p.psin, p.kappan - S(1) / p.kappan;
  return m;
}

// ---- Yang-Baxter and reflection equations ----

template <class S>
double ybe_residual(const ParamSet<S>& p, const S& x, const S& y) {
  auto r12 = place<S>(r_mat(p, x), {0, 1}, 3);
  auto r13 = place<S>(r_mat(p, S(x * y)), {0, 2}, 3);
  auto r23 = place<S>(r_mat(p, y), {1, 2}, 3);
  return residual(Mat<S>(r12 * r13 * r23), Mat<S>(r23 * r13 * r12));
}

template <class S>
double re_left_residual(const ParamSet<S>& p, const S& x, const S& y, const ParamSet<S>* rhs = nullptr) {
  const ParamSet<S>& q = rhs ? *rhs : p;
  Mat<S> lhs = place<S>(r_mat(p, S(x / y)), {0, 1}, 2) * place<S>(kbar_mat(p, x), {1}, 2) * place<S>(r_mat(p, S(x * y)), {1, 0}, 2) *
             place<S>(kbar_mat(p, y), {0}, 2);
  Mat<S> rr = place<S>(kbar_mat(q, y), {0}, 2) * place<S>(r_mat(q, S(x * y)), {0, 1}, 2) * place<S>(kbar_mat(q, x), {1}, 2) *
            place<S>(r_mat(q, S(x / y)), {1, 0}, 2);
  return residual(lhs, rr);
}

template <class S>
double re_right_residual(const ParamSet<S>& p, const S& x, const S& y) {
  Mat<S> lhs = place<S>(r_mat(p, S(x / y)), {0, 1}, 2) * place<S>(k_mat(p, x), {0}, 2) * place<S>(r_mat(p, S(x * y)), {1, 0}, 2) *
             place<S>(k_mat(p, y), {1}, 2);
  Mat<S> rr = place<S>(k_mat(p, y), {1}, 2) * place<S>(r_mat(p, S(x * y)), {0, 1}, 2) * place<S>(k_mat(p, x), {0}, 2) *
            place<S>(r_mat(p, S(x / y)), {1, 0}, 2);
  return residual(lhs, rr);
}

// draws points until `f` runs without hitting a pole
template <class F>
auto with_resample(detail::Draw& dr, F&& f, int tries = 32) {
  for (int k = 0;; ++k) {
    try {
      return f(dr);
    } catch (const PoleError&) {
      if (k + 1 >= tries) throw;
    }
  }
}

inline Residuals check_ybe_re(const ParamSet<cd>& p, int samples, std::uint64_t seed) {
  detail::Draw dr(seed);
  Residuals out{{"ybe", 0.0}, {"re_left", 0.0}, {"re_right", 0.0}};
  for (int s = 0; s < samples; ++s) {
    auto res = with_resample(dr, [&](detail::Draw& d) {
      cd x = d.point(), y = d.point();
      return std::array<double, 3>{ybe_residual(p, x, y), re_left_residual(p, x, y), re_right_residual(p, x, y)};
    });
    out["ybe"] = std::max(out["ybe"], res[0]);
    out["re_left"] = std::max(out["re_left"], res[1]);
    out["re_right"] = std::max(out["re_right"], res[2]);
  }
  return out;
}

// ---- cocycle ----

// q and q^{1/2} used by the point action; q = 1 specializations pass their own
template <class S>
struct QPair {
  S q, q_sqrt;
  static QPair from(const ParamSet<S>& p) { return {p.q(), p.q_sqrt}; }
};

template <class S>
Mat<S> cocycle_simple(const HeckeRep<S>& r, int j, const std::vector<S>& t, const QPair<S>& qq) {
  const int n = r.n;
  if (j == 0) return baxter_K0(r, S(qq.q_sqrt / t[0]));
  if (j == n) return baxter_Kn(r, t[n - 1]);
  return baxter_Ri(r, j, S(t[j - 1] / t[j]));
}

// C_w(t) along a word: C_{w s_j}(t) = C_w(t) C_{s_j}(w^{-1} t)
template <class S>
Mat<S> cocycle_word(const HeckeRep<S>& r, const Word& w, const std::vector<S>& t, const QPair<S>& qq) {
  const int n = r.n;
  Mat<S> M = identity<S>(r.dim);
  WeylElem g(n);
  for (int j : w) {
    M = M * cocycle_simple(r, j, act_point(g.inverse(), t, qq.q), qq);
    g = g * WeylElem::generator(j, n);
  }
  return M;
}

template <class S>
Mat<S> cocycle_C(const HeckeRep<S>& r, const WeylElem& g, const std::vector<S>& t, const QPair<S>& qq) {
  return cocycle_word(r, reduced_word(g), t, qq);
}

template <class S>
Mat<S> cocycle_C(const HeckeRep<S>& r, const WeylElem& g, const std::vector<S>& t) {
  return cocycle_C(r, g, t, QPair<S>::from(r.params));
}

// reduced word using a random left descent at every step
template <class Rng>
Word random_reduced_word(WeylElem g, Rng& rng) {
  const int n = g.rank();
  Word w;
  for (;;) {
    auto d = left_descents(g);
    if (d.empty()) break;
    int j = d[std::uniform_int_distribution<size_t>(0, d.size() - 1)(rng)];
    w.push_back(j);
    g = WeylElem::generator(j, n) * g;
  }
  return w;
}

// explicit product for C_{tau_i}
template <class S>
Mat<S> transport_C_tau(const HeckeRep<S>& r, int i, const std::vector<S>& t, const QPair<S>& qq) {
  const int n = r.n;
  if (i < 1 || i > n) throw std::invalid_argument("transport_C_tau: index out of range");
  const S q = qq.q, ti = t[i - 1];
  Mat<S> M = identity<S>(r.dim);
  for (int j = i - 1; j >= 1; --j) M = M * baxter_Ri(r, j, S(t[j - 1] / ti));
  M = M * baxter_K0(r, S(qq.q_sqrt / ti));
  for (int j = 1; j < i; ++j) M = M * baxter_Ri(r, j, S(q / (t[j - 1] * ti)));
  for (int j = i; j < n; ++j) M = M * baxter_Ri(r, j, S(q / (ti * t[j])));
  M = M * baxter_Kn(r, S(q / ti));
  for (int j = n - 1; j >= i; --j) M = M * baxter_Ri(r, j, S(q * t[j] / ti));
  return M;
}

template <class S>
Mat<S> transport_C_tau(const HeckeRep<S>& r, int i, const std::vector<S>& t) {
  return transport_C_tau(r, i, t, QPair<S>::from(r.params));
}

// q^{-e_i} t
template <class S>
std::vector<S> shift_down(std::vector<S> t, int i, const S& q) {
  t[i - 1] /= q;
  return t;
}

// all T_j = Id with kappa_j = 1
template <class S>
HeckeRep<S> identity_rep(int n, int dim) {
  HeckeRep<S> r;
  r.n = n;
  r.dim = dim;
  for (int j = 0; j <= n; ++j) {
    r.T.push_back(identity<S>(dim));
    r.Ti.push_back(identity<S>(dim));
    r.kap.push_back(S(1));
  }
  r.params.n = n;
  return r;
}

}  // namespace daha
