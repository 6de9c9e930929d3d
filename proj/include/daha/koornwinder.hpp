#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "baxter.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "params.hpp"
#include "scalar.hpp"

namespace daha {

template <class S>
struct SpectralPoint {
  std::vector<S> gamma;
  std::vector<int> lambda;
};

template <class S>
SpectralPoint<S> spectral_point(const std::vector<int>& lam, const ParamSet<S>& p) {
  if (static_cast<int>(lam.size()) != p.n) throw std::invalid_argument("spectral_point: lambda length != n");
  return {gamma_lambda(lam, p), lam};
}

// c_j(t); with `inverted` the kappa's and upsilon's are replaced by their inverses
template <class S>
S c_eval(int j, const std::vector<S>& t, const ParamSet<S>& p, bool inverted) {
  const int n = p.n;
  if (j < 0 || j > n) throw std::invalid_argument("c_eval: index out of range");
  auto inv = [&](const S& z) { return inverted ? S(S(1) / z) : z; };
  if (j == 0) {
    const S k0 = inv(p.kappa0), u0 = inv(p.upsilon0), x = p.q_sqrt / t[0];
    S den = S(1) - x * x;
    pole_guard(den, S(x * x), "c_0");
    return (S(1) - k0 * u0 * x) * (S(1) + k0 * x / u0) / (k0 * den);
  }
  if (j == n) {
    const S kn = inv(p.kappan), un = inv(p.upsilonn), x = t[n - 1];
    S den = S(1) - x * x;
    pole_guard(den, S(x * x), "c_n");
    return (S(1) - kn * un * x) * (S(1) + kn * x / un) / (kn * den);
  }
  const S k = inv(p.kappa), x = t[j - 1] / t[j];
  S den = S(1) - x;
  pole_guard(den, x, "c_i");
  return (S(1) - k * k * x) / (k * den);
}

namespace detail {

// numerator of the inverted-parameter c_j as a Laurent polynomial
template <class S>
LaurentPoly<S> c_numerator(int j, const ParamSet<S>& p) {
  const int n = p.n;
  Exp z(n, 0);
  LaurentPoly<S> N = LaurentPoly<S>::constant(n, S(1));
  if (j == 0) {
    const S k0 = p.kappa0, u0 = p.upsilon0, qs = p.q_sqrt;
    const S a = -qs / (k0 * u0), b = qs * u0 / k0;
    N += LaurentPoly<S>::var(n, 0, -1) * S(a + b);
    N += LaurentPoly<S>::var(n, 0, -2) * S(a * b);
    return N * k0;
  }
  if (j == n) {
    const S kn = p.kappan, un = p.upsilonn;
    const S a = -S(1) / (kn * un), b = un / kn;
    N += LaurentPoly<S>::var(n, n - 1, 1) * S(a + b);
    N += LaurentPoly<S>::var(n, n - 1, 2) * S(a * b);
    return N * kn;
  }
  Exp e = z;
  e[j - 1] = 1;
  e[j] = -1;
  N.add_term(e, -S(1) / (p.kappa * p.kappa));
  return N * p.kappa;
}

}  // namespace detail

// varpi(T_j) f with inverted parameters: kappa_j^-1 f + c_j (f o s_j - f)
template <class S>
LaurentPoly<S> noumi_T_apply(int j, const LaurentPoly<S>& f, const ParamSet<S>& p, bool inverse = false) {
  const S kj = p.kap(j);
  LaurentPoly<S> out = f * S(S(1) / kj);
  out += detail::c_numerator(j, p) * divided_difference(f, j, p.q());
  if (inverse) out += f * S(kj - S(1) / kj);
  return out;
}

// word applied rightmost letter first
template <class S>
LaurentPoly<S> noumi_T_word(const Word& w, LaurentPoly<S> f, const ParamSet<S>& p) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) f = noumi_T_apply(*it, f, p);
  return f;
}

// Y_i = T_{i-1}^-1 ... T_1^-1 T_0 T_1 ... T_{n-1} T_n T_{n-1} ... T_i
template <class S>
LaurentPoly<S> noumi_Y_apply(int i, LaurentPoly<S> f, const ParamSet<S>& p) {
  const int n = p.n;
  if (i < 1 || i > n) throw std::invalid_argument("noumi_Y_apply: index out of range");
  std::vector<std::pair<int, bool>> seq;
  for (int j = i - 1; j >= 1; --j) seq.push_back({j, true});
  seq.push_back({0, false});
  for (int j = 1; j < n; ++j) seq.push_back({j, false});
  seq.push_back({n, false});
  for (int j = n - 1; j >= i; --j) seq.push_back({j, false});
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) f = noumi_T_apply(it->first, f, p, it->second);
  return f;
}

// mu+ <= lambda+ on sorted absolute values
inline bool dominated(const Exp& mu, const Exp& lam) {
  auto sorted_abs = [](Exp v) {
    for (auto& x : v) x = std::abs(x);
    std::sort(v.rbegin(), v.rend());
    return v;
  };
  Exp a = sorted_abs(mu), b = sorted_abs(lam);
  int sa = 0, sb = 0;
  for (size_t r = 0; r < a.size(); ++r) {
    sa += a[r];
    sb += b[r];
    if (sa > sb) return false;
  }
  return true;
}

template <class S>
struct MonomialSpan {
  Exp lambda;
  std::vector<Exp> basis;
  std::map<Exp, int> index;
  std::vector<Mat<S>> Y;  // Y[i-1] restricted to the span
  double leak = 0;        // largest out-of-span coefficient, relative
  bool enlarged = false;
};

namespace detail {

inline std::vector<Exp> box(int n, int M) {
  std::vector<Exp> out;
  Exp cur(n, -M);
  for (;;) {
    out.push_back(cur);
    int i = n - 1;
    while (i >= 0 && cur[i] == M) cur[i--] = -M;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

}  // namespace detail

// basis {mu : mu+ <= lambda+}; the enlarged variant keeps every mu with |mu|_1 <= |lambda|_1
inline std::vector<Exp> span_basis(const Exp& lam, bool enlarged) {
  const int n = static_cast<int>(lam.size());
  int M = 0, L1 = 0;
  for (int v : lam) {
    M = std::max(M, std::abs(v));
    L1 += std::abs(v);
  }
  std::vector<Exp> out;
  for (auto& mu : detail::box(n, enlarged ? L1 : M)) {
    int s = 0;
    for (int v : mu) s += std::abs(v);
    if (enlarged ? s <= L1 : dominated(mu, lam)) out.push_back(mu);
  }
  return out;
}

template <class S>
MonomialSpan<S> build_span(const Exp& lam, const ParamSet<S>& p, bool enlarged = false) {
  MonomialSpan<S> sp;
  sp.lambda = lam;
  sp.enlarged = enlarged;
  sp.basis = span_basis(lam, enlarged);
  for (size_t a = 0; a < sp.basis.size(); ++a) sp.index[sp.basis[a]] = static_cast<int>(a);
  const int N = static_cast<int>(sp.basis.size());
  for (int i = 1; i <= p.n; ++i) {
    Mat<S> A = Mat<S>::Zero(N, N);
    double scale = 0, out = 0;
    for (int a = 0; a < N; ++a) {
      auto img = noumi_Y_apply(i, LaurentPoly<S>::monomial(sp.basis[a]), p);
      for (auto& [e, c] : img.terms()) {
        scale = std::max(scale, absd(c));
        auto it = sp.index.find(e);
        if (it == sp.index.end())
          out = std::max(out, absd(c));
        else
          A(it->second, a) += c;
      }
    }
    sp.leak = std::max(sp.leak, scale == 0 ? out : out / scale);
    sp.Y.push_back(std::move(A));
  }
  return sp;
}

template <class S>
double commutator_residual(const MonomialSpan<S>& sp) {
  double r = 0;
  for (size_t i = 0; i < sp.Y.size(); ++i)
    for (size_t j = i + 1; j < sp.Y.size(); ++j) r = std::max(r, residual(sp.Y[i] * sp.Y[j], sp.Y[j] * sp.Y[i]));
  return r;
}

struct KoornwinderCaps {
  int max_n = 3;
  int max_degree = 4;
};

template <class S>
struct KoornwinderResult {
  LaurentPoly<S> P;
  SpectralPoint<S> gamma;
  double eigen_residual = 0;
  double commutator = 0;
  double leak = 0;
  double sv_gap = 0;  // second smallest / largest singular value
  int span_size = 0;
  bool enlarged = false;
};

template <class S>
double eigen_residual(const LaurentPoly<S>& P, const std::vector<S>& gamma, const ParamSet<S>& p) {
  double r = 0;
  for (int i = 1; i <= p.n; ++i) r = std::max(r, poly_residual(noumi_Y_apply(i, P, p), P * S(S(1) / gamma[i - 1])));
  return r;
}

constexpr double span_leak_tol = 1e-9;
constexpr double null_gap = 1e-6;
constexpr double gamma_separation = 1e-6;

// monic nonsymmetric Koornwinder polynomial P_lambda
template <class S>
KoornwinderResult<S> compute_P(const Exp& lam, const ParamSet<S>& p, const KoornwinderCaps& caps = {}) {
  const int n = p.n;
  if (static_cast<int>(lam.size()) != n) throw Refusal("compute_P: lambda length != n");
  int L1 = 0;
  for (int v : lam) L1 += std::abs(v);
  if (n > caps.max_n) throw Refusal("compute_P: n exceeds cap " + std::to_string(caps.max_n));
  if (L1 > caps.max_degree) throw Refusal("compute_P: |lambda| exceeds cap " + std::to_string(caps.max_degree));

  KoornwinderResult<S> res;
  res.gamma = spectral_point(lam, p);
  auto sp = build_span(lam, p);
  if (sp.leak > span_leak_tol) {
    sp = build_span(lam, p, true);
    if (sp.leak > span_leak_tol) throw Defect("span not stable under Y at lambda, leak " + std::to_string(sp.leak));
  }
  const int N = static_cast<int>(sp.basis.size());

  // gamma_mu must be pairwise distinct on the span
  std::vector<std::vector<S>> gs;
  for (auto& mu : sp.basis) gs.push_back(gamma_lambda(mu, p));
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      double d = 0, s = 0;
      for (int i = 0; i < n; ++i) {
        d = std::max(d, absd(S(gs[a][i] - gs[b][i])));
        s = std::max({s, absd(gs[a][i]), absd(gs[b][i])});
      }
      if (d <= gamma_separation * s) throw NonGeneric("non-generic spectrum at lambda: gamma collision on the span");
    }

  Mat<S> B(n * N, N);
  for (int i = 0; i < n; ++i) B.block(i * N, 0, N, N) = sp.Y[i] - identity<S>(N) / res.gamma.gamma[i];
  Eigen::JacobiSVD<Mat<S>> svd(B, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = absd(S(sv(0)));
  for (int i = 0; i < n; ++i) smax = std::max({smax, max_abs(sp.Y[i]), 1.0 / absd(res.gamma.gamma[i])});
  int kernel = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (absd(S(sv(k))) <= null_gap * smax) ++kernel;
  if (kernel != 1) throw NonGeneric("non-generic spectrum at lambda (joint kernel dimension " + std::to_string(kernel) + ")");
  res.sv_gap = N > 1 ? absd(S(sv(N - 2))) / smax : 1.0;

  Vec<S> v = svd.matrixV().col(N - 1);
  const S lead = v(sp.index.at(lam));
  if (absd(lead) == 0) throw Defect("compute_P: vanishing leading coefficient");
  LaurentPoly<S> P(n);
  for (int a = 0; a < N; ++a) {
    if (sp.basis[a] == lam) {
      P.add_term(lam, S(1));
      continue;
    }
    S c = v(a) / lead;
    if (absd(c) > 1e-14) P.add_term(sp.basis[a], c);
  }
  res.P = std::move(P);
  res.eigen_residual = eigen_residual(res.P, res.gamma.gamma, p);
  res.commutator = commutator_residual(sp);
  res.leak = sp.leak;
  res.span_size = N;
  res.enlarged = sp.enlarged;
  return res;
}

// s_i lambda for i = 1..n (i = n flips the last sign)
inline Exp simple_reflect(Exp lam, int i) {
  const int n = static_cast<int>(lam.size());
  if (i < n)
    std::swap(lam[i - 1], lam[i]);
  else
    lam[n - 1] = -lam[n - 1];
  return lam;
}

struct FixedPointRow {
  int i;
  bool fixed;       // s_i lambda = lambda
  double residual;  // |varpi(T_i) P - kappa_i^-1 P| / |P|
};

// the residual must vanish exactly for the fixed indices and be bounded away from 0 otherwise
template <class S>
std::vector<FixedPointRow> fixed_point_rows(const Exp& lam, const LaurentPoly<S>& P, const ParamSet<S>& p) {
  std::vector<FixedPointRow> rows;
  for (int i = 1; i <= p.n; ++i) {
    auto d = noumi_T_apply(i, P, p) - P * S(S(1) / p.kap(i));
    rows.push_back({i, simple_reflect(lam, i) == lam, d.max_abs_coeff() / P.max_abs_coeff()});
  }
  return rows;
}

// support check: every exponent of P lies in the (possibly enlarged) span
template <class S>
bool support_contained(const LaurentPoly<S>& P, const Exp& lam, bool enlarged) {
  auto b = span_basis(lam, enlarged);
  std::set<Exp> s(b.begin(), b.end());
  for (auto& [e, c] : P.terms())
    if (!s.count(e)) return false;
  return true;
}

template <class S>
json koornwinder_to_json(const KoornwinderResult<S>& r) {
  json g = json::array();
  for (auto& z : r.gamma.gamma) g.push_back(cd_json(to_cd(z)));
  json j = poly_to_json(r.P);
  j["metadata"] = {{"lambda", r.gamma.lambda}, {"gamma_lambda", g}, {"eigen_residual", r.eigen_residual},
                   {"span_size", r.span_size}, {"span_enlarged", r.enlarged}};
  return j;
}

}  // namespace daha
