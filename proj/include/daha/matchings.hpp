#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "scalar.hpp"
#include "spinrep.hpp"

namespace daha {

inline int pty(int i) { return ((i % 2) + 2) % 2; }

// Pairs {a,b} with a < b on the sites 0..n+1; 0 and n+1 are the boundaries.
struct Matching {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // sorted

  bool operator==(const Matching&) const = default;
  auto operator<=>(const Matching&) const = default;

  int mate(int i) const {
    for (auto& [a, b] : pairs) {
      if (a == i) return b;
      if (b == i) return a;
    }
    throw std::invalid_argument("Matching::mate: site " + std::to_string(i) + " is unmatched");
  }

  void normalize() {
    for (auto& pr : pairs)
      if (pr.first > pr.second) std::swap(pr.first, pr.second);
    std::sort(pairs.begin(), pairs.end());
  }

  // checks matching conditions: every inner site once, non-crossing, {0,n+1} absent
  bool valid() const {
    std::vector<int> cnt(n + 2, 0);
    for (auto& [a, b] : pairs) {
      if (a < 0 || b > n + 1 || a >= b) return false;
      if (a == 0 && b == n + 1) return false;
      if (a >= 1) ++cnt[a];
      if (b <= n) ++cnt[b];
    }
    for (int i = 1; i <= n; ++i)
      if (cnt[i] != 1) return false;
    for (auto& [i, j] : pairs)
      for (auto& [k, l] : pairs)
        if (i < k && k < j && j < l) return false;
    return true;
  }
};

using Nu = std::vector<char>;  // '+' / '-'

inline Nu nu_of(const Matching& m) {
  Nu v(m.n);
  for (int i = 1; i <= m.n; ++i) v[i - 1] = m.mate(i) < i ? '-' : '+';
  return v;
}

inline Matching matching_from_nu(const Nu& nu) {
  Matching m;
  m.n = static_cast<int>(nu.size());
  std::vector<int> open;
  for (int i = 1; i <= m.n; ++i) {
    if (nu[i - 1] == '+') {
      open.push_back(i);
    } else if (!open.empty()) {
      m.pairs.push_back({open.back(), i});
      open.pop_back();
    } else {
      m.pairs.push_back({0, i});
    }
  }
  for (int k : open) m.pairs.push_back({k, m.n + 1});
  m.normalize();
  return m;
}

inline int nu_index(const Nu& nu) {
  int r = 0;
  for (char c : nu) r = (r << 1) | (c == '-' ? 1 : 0);
  return r;
}

inline Nu nu_from_index(int idx, int n) {
  Nu v(n);
  for (int i = 0; i < n; ++i) v[i] = (idx >> (n - 1 - i)) & 1 ? '-' : '+';
  return v;
}

inline std::string nu_string(const Nu& nu) {
  std::string s = "(";
  for (size_t i = 0; i < nu.size(); ++i) {
    if (i) s += ",";
    s += nu[i];
  }
  return s + ")";
}

// accepts "(+,+,-)" or "++-"
inline Nu parse_nu(const std::string& s) {
  Nu v;
  for (char c : s)
    if (c == '+' || c == '-') v.push_back(c);
    else if (c != '(' && c != ')' && c != ',' && c != ' ') throw std::invalid_argument("parse_nu: bad character in " + s);
  return v;
}

// the 2^n matchings ordered by nu in lexicographic order with + before -
inline std::vector<Matching> enumerate_matchings(int n) {
  if (n < 1 || n > 10) throw Refusal("enumerate_matchings: n must be in 1..10");
  std::vector<Matching> out;
  for (int idx = 0; idx < (1 << n); ++idx) {
    auto m = matching_from_nu(nu_from_index(idx, n));
    if (!m.valid() || nu_index(nu_of(m)) != idx) throw Defect("nu is not a bijection at index " + std::to_string(idx));
    out.push_back(m);
  }
  return out;
}

inline json matching_to_json(const Matching& m) {
  json j = json::array();
  for (auto& [a, b] : m.pairs) j.push_back({a, b});
  return j;
}

// Ordered pairs (from, to).
struct OrientedMatching {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;

  Matching forget() const {
    Matching m{n, pairs};
    m.normalize();
    return m;
  }
};

struct OrientationStats {
  int orient = 0;
  int N00 = 0, N01 = 0, Nn0 = 0, Nn1 = 0;
  bool operator==(const OrientationStats&) const = default;
};

inline OrientationStats orientation_stats(const OrientedMatching& om) {
  OrientationStats s;
  const int n = om.n;
  for (auto& [x, y] : om.pairs) {
    if (y == 0 && x >= 1 && x <= n) (pty(x) ? s.N01 : s.N00)++;
    if (x == n + 1 && y >= 1 && y <= n) (pty(n + 1 - y) ? s.Nn1 : s.Nn0)++;
    if (x >= 1 && x <= n && y >= 1 && y <= n && y < x) s.orient++;
  }
  s.orient += s.N00 + s.Nn0;
  return s;
}

// independent recount: scan sites instead of pairs
inline OrientationStats orientation_stats_scan(const OrientedMatching& om) {
  OrientationStats s;
  const int n = om.n;
  for (int i = 1; i <= n; ++i)
    for (auto& pr : om.pairs) {
      if (pr == std::make_pair(i, 0)) (i % 2 == 0 ? s.N00 : s.N01)++;
      if (pr == std::make_pair(n + 1, i)) ((n + 1 - i) % 2 == 0 ? s.Nn0 : s.Nn1)++;
      for (int j = i + 1; j <= n; ++j)
        if (pr == std::make_pair(j, i)) s.orient++;
    }
  s.orient += s.N00 + s.Nn0;
  return s;
}

// v(om) as spin-basis index: '+' where the arc leaves the site
inline int oriented_spin_index(const OrientedMatching& om) {
  const int n = om.n;
  Nu r(n, '?');
  for (auto& [x, y] : om.pairs) {
    if (x >= 1 && x <= n) r[x - 1] = '+';
    if (y >= 1 && y <= n) r[y - 1] = '-';
  }
  return nu_index(r);
}

inline std::vector<OrientedMatching> orientations(const Matching& m) {
  std::vector<OrientedMatching> out;
  const int k = static_cast<int>(m.pairs.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    OrientedMatching om{m.n, {}};
    for (int a = 0; a < k; ++a) {
      auto [x, y] = m.pairs[a];
      om.pairs.push_back((mask >> (k - 1 - a)) & 1 ? std::make_pair(y, x) : std::make_pair(x, y));
    }
    out.push_back(om);
  }
  return out;
}

struct LCounts {
  int L00 = 0, L01 = 0, Ln0 = 0, Ln1 = 0;
};

inline LCounts l_counts(const Matching& m) {
  LCounts c;
  for (auto& [a, b] : m.pairs) {
    if (a == 0 && b >= 1 && b <= m.n) (pty(b) ? c.L01 : c.L00)++;
    if (b == m.n + 1 && a >= 1 && a <= m.n) (pty(a) ? c.Ln1 : c.Ln0)++;
  }
  return c;
}

inline int lsum(const Matching& m) {
  auto c = l_counts(m);
  return c.L00 - c.L01 + c.Ln0 - c.Ln1;
}

namespace detail {

inline Matching without(const Matching& m, std::initializer_list<int> sites) {
  Matching r{m.n, {}};
  for (auto& pr : m.pairs) {
    bool hit = false;
    for (int s : sites)
      if (pr.first == s || pr.second == s) hit = true;
    if (!hit) r.pairs.push_back(pr);
  }
  return r;
}

inline Matching with(Matching m, std::initializer_list<std::pair<int, int>> add) {
  for (auto pr : add) m.pairs.push_back(pr);
  m.normalize();
  return m;
}

}  // namespace detail

// e_j acting on one basis matching: (coefficient, image)
template <class S>
std::pair<S, Matching> matchmaker_on(int j, const Matching& p, const TLParams<S>& tl, const S& beta0, const S& beta1) {
  using detail::with;
  using detail::without;
  const int n = p.n;
  const S beta[2] = {beta0, beta1};
  if (j >= 1 && j < n) {
    const int i = j, a = p.mate(i), b = p.mate(i + 1);
    if (a == i + 1) return {tl.delta, p};
    Matching base = with(without(p, {i, i + 1}), {{i, i + 1}});
    if (a == 0 && b == 0) return {ipow(tl.delta0, pty(i - 1)), base};
    if (a == n + 1 && b == n + 1) return {ipow(tl.deltan, pty(n + 1 - i)), base};
    if (a == 0 && b == n + 1) return {beta[pty(i)], base};
    return {S(1), with(base, {{a, b}})};
  }
  if (j == 0) {
    const int a = p.mate(1);
    if (a == 0) return {tl.delta0, p};
    if (a == n + 1) return {beta0, with(without(p, {1}), {{0, 1}})};
    return {S(1), with(without(p, {1, a}), {{0, 1}, {0, a}})};
  }
  if (j == n) {
    const int a = p.mate(n);
    if (a == n + 1) return {tl.deltan, p};
    if (a == 0) return {beta[pty(n)], with(without(p, {n}), {{n, n + 1}})};
    return {S(1), with(without(p, {n, a}), {{n, n + 1}, {a, n + 1}})};
  }
  throw std::invalid_argument("matchmaker: generator index out of range");
}

template <class S>
std::vector<Mat<S>> matchmaker_matrices(int n, const TLParams<S>& tl, const S& beta0, const S& beta1) {
  auto ms = enumerate_matchings(n);
  std::vector<Mat<S>> W;
  for (int j = 0; j <= n; ++j) {
    Mat<S> A = Mat<S>::Zero(1 << n, 1 << n);
    for (size_t c = 0; c < ms.size(); ++c) {
      auto [co, out] = matchmaker_on(j, ms[c], tl, beta0, beta1);
      A(nu_index(nu_of(out)), c) += co;
    }
    W.push_back(A);
  }
  return W;
}

template <class S>
using MatchVec = std::map<Matching, S>;

template <class S>
MatchVec<S> matchmaker_apply(int j, const MatchVec<S>& v, const TLParams<S>& tl, const S& beta0, const S& beta1) {
  MatchVec<S> out;
  for (auto& [m, c] : v) {
    auto [co, img] = matchmaker_on(j, m, tl, beta0, beta1);
    out[img] += co * c;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == S(0) ? out.erase(it) : std::next(it);
  return out;
}

template <class S>
S beta_product(const ParamSet<S>& p) {
  const S k = p.kappa, k0 = p.kappa0, kn = p.kappan, s = p.psi0 * p.psin;
  S den = (k / k0 + k0 / k) * (k / kn + kn / k);
  S num = p.n % 2 ? (S(1) + k0 / kn * s) * (S(1) + kn / k0 * s) : (S(1) - k0 * kn / k * s) * (S(1) - k / (k0 * kn) * s);
  if (absd(den) < 1e-12) throw NonGeneric("beta_product: vanishing denominator");
  S r = num / den / s;
  if (absd(num) < 1e-12 * std::max(1.0, absd(den))) throw NonGeneric("beta_product: vanishing numerator factor");
  return r;
}

template <class S>
struct MGauge {
  S M00, M01, Mn0, Mn1;
  S beta0, beta1;
};

// M00 = 1, beta0 = 1; the remaining weights follow from the M-relations
template <class S>
MGauge<S> m_gauge(const ParamSet<S>& p, const S& beta0 = S(1)) {
  const S k = p.kappa, k0 = p.kappa0, kn = p.kappan, s = p.psi0 * p.psin;
  const S F = p.n % 2 ? S(1) + k0 / kn * s : S(1) - k0 * kn / k * s;
  MGauge<S> g;
  g.beta0 = beta0;
  g.beta1 = beta_product(p) / beta0;
  g.M00 = S(1);
  g.M01 = S(1) / (p.psi0 * (k / k0 + k0 / k)) / g.M00;
  g.Mn1 = beta0 / F / g.M00;
  g.Mn0 = S(1) / (p.psin * (k / kn + kn / k)) / g.Mn1;
  return g;
}


// columns indexed by matchings, rows by spin basis
template <class S>
Mat<S> intertwiner_Psi(const ParamSet<S>& p, const MGauge<S>& g, bool check_det = true) {
  const int n = p.n;
  const S k = p.kappa, k0 = p.kappa0, kn = p.kappan;
  auto ms = enumerate_matchings(n);
  Mat<S> Psi = Mat<S>::Zero(1 << n, 1 << n);
  for (size_t c = 0; c < ms.size(); ++c) {
    auto L = l_counts(ms[c]);
    S M = ipow(g.M00, L.L00) * ipow(g.M01, L.L01) * ipow(g.Mn0, L.Ln0) * ipow(g.Mn1, L.Ln1);
    for (auto& om : orientations(ms[c])) {
      auto st = orientation_stats(om);
      S w = ipow(-k, -st.orient);
      w *= ipow(-k0, st.N00 - st.N01) * ipow(p.psi0, st.N00 + st.N01);
      w *= ipow(-kn, st.Nn0 - st.Nn1) * ipow(p.psin, st.Nn0 + st.Nn1);
      Psi(oriented_spin_index(om), c) += M * w;
    }
  }
  if (check_det) {
    Eigen::FullPivLU<Mat<S>> lu(Psi);
    if (lu.rank() < Psi.rows()) throw NonGeneric("intertwiner degenerate");
  }
  return Psi;
}

template <class S>
Mat<S> intertwiner_Psi(const ParamSet<S>& p) {
  return intertwiner_Psi(p, m_gauge(p));
}

// psi0 = psin = 1/kappa = 0 and no M prefactor: only the all-"natural" orientation survives
inline Mat<cd> intertwiner_Psi_limit(int n) {
  auto ms = enumerate_matchings(n);
  Mat<cd> Psi = Mat<cd>::Zero(1 << n, 1 << n);
  for (size_t c = 0; c < ms.size(); ++c)
    for (auto& om : orientations(ms[c])) {
      auto st = orientation_stats(om);
      int nb = st.N00 + st.N01 + st.Nn0 + st.Nn1;
      // (-kappa)^{-or} -> 0 unless or = 0; psi_j^{N} -> 0 unless N = 0
      if (st.orient == 0 && nb == 0) Psi(oriented_spin_index(om), c) += 1.0;
    }
  return Psi;
}

}  // namespace daha
