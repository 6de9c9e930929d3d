#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "scalar.hpp"

namespace daha {

using Word = std::vector<int>;

// g(x) = w(x + trans) where (w y)_i = signs[i] * y[perm[i]]; all indices 0-based
struct WeylElem {
  std::vector<int> perm, signs, trans;

  WeylElem() = default;
  explicit WeylElem(int n) : perm(n), signs(n, 1), trans(n, 0) { std::iota(perm.begin(), perm.end(), 0); }

  int rank() const { return static_cast<int>(perm.size()); }
  bool operator==(const WeylElem&) const = default;
  auto operator<=>(const WeylElem&) const = default;

  bool finite() const {
    return std::all_of(trans.begin(), trans.end(), [](int v) { return v == 0; });
  }

  static WeylElem identity(int n) { return WeylElem(n); }

  static WeylElem generator(int j, int n) {
    if (j < 0 || j > n) throw std::invalid_argument("WeylElem::generator: index out of range");
    WeylElem g(n);
    if (j == 0) {
      g.signs[0] = -1;
      g.trans[0] = -1;
    } else if (j == n) {
      g.signs[n - 1] = -1;
    } else {
      std::swap(g.perm[j - 1], g.perm[j]);
    }
    return g;
  }

  static WeylElem translation(const std::vector<int>& lam) {
    WeylElem g(static_cast<int>(lam.size()));
    g.trans = lam;
    return g;
  }

  // tau_i = translation by the i-th unit vector, i = 1..n
  static WeylElem tau(int i, int n) {
    std::vector<int> lam(n, 0);
    lam.at(i - 1) = 1;
    return translation(lam);
  }

  // the linear part applied to an integer vector
  std::vector<int> lin(const std::vector<int>& y) const {
    std::vector<int> r(rank());
    for (int i = 0; i < rank(); ++i) r[i] = signs[i] * y[perm[i]];
    return r;
  }
  std::vector<int> lin_inv(const std::vector<int>& y) const {
    std::vector<int> r(rank());
    for (int i = 0; i < rank(); ++i) r[perm[i]] = signs[i] * y[i];
    return r;
  }

  // affine action on D-scaled integer points: X -> w(X + D trans)
  std::vector<int> apply_scaled(const std::vector<int>& x, int D) const {
    std::vector<int> y(rank());
    for (int i = 0; i < rank(); ++i) y[i] = x[i] + D * trans[i];
    return lin(y);
  }

  friend WeylElem operator*(const WeylElem& g, const WeylElem& h) {
    const int n = g.rank();
    if (h.rank() != n) throw std::invalid_argument("WeylElem: rank mismatch");
    WeylElem r(n);
    for (int i = 0; i < n; ++i) {
      r.perm[i] = h.perm[g.perm[i]];
      r.signs[i] = g.signs[i] * h.signs[g.perm[i]];
    }
    auto hl = h.lin_inv(g.trans);
    for (int i = 0; i < n; ++i) r.trans[i] = h.trans[i] + hl[i];
    return r;
  }

  WeylElem inverse() const {
    const int n = rank();
    WeylElem r(n);
    for (int i = 0; i < n; ++i) {
      r.perm[perm[i]] = i;
      r.signs[perm[i]] = signs[i];
    }
    auto wl = lin(trans);
    for (int i = 0; i < n; ++i) r.trans[i] = -wl[i];
    return r;
  }

  WeylElem linear_part() const {
    WeylElem r = *this;
    std::fill(r.trans.begin(), r.trans.end(), 0);
    return r;
  }
};

inline WeylElem from_word(const Word& w, int n) {
  WeylElem g(n);
  for (int j : w) g = g * WeylElem::generator(j, n);
  return g;
}

namespace detail {

inline int floordiv(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// generic alcove point scaled by D = 2n+2: X_i = n+1-i
inline std::vector<int> alcove_point(int n) {
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i) x[i] = n - i;
  return x;
}

}  // namespace detail

// number of affine root hyperplanes separating the base alcove from its image
inline int length(const WeylElem& g) {
  const int n = g.rank(), D = 2 * n + 2;
  auto p = detail::alcove_point(n);
  auto gp = g.apply_scaled(p, D);
  int l = 0;
  auto add = [&](int a0, int a1) { l += std::abs(detail::floordiv(a1, D) - detail::floordiv(a0, D)); };
  for (int i = 0; i < n; ++i) {
    add(2 * p[i], 2 * gp[i]);
    for (int j = i + 1; j < n; ++j) {
      add(p[i] - p[j], gp[i] - gp[j]);
      add(p[i] + p[j], gp[i] + gp[j]);
    }
  }
  return l;
}

// left descents: s_j with l(s_j g) < l(g)
inline std::vector<int> left_descents(const WeylElem& g) {
  const int n = g.rank(), D = 2 * n + 2;
  auto x = g.apply_scaled(detail::alcove_point(n), D);
  std::vector<int> d;
  if (2 * x[0] > D) d.push_back(0);
  for (int i = 1; i < n; ++i)
    if (x[i - 1] < x[i]) d.push_back(i);
  if (x[n - 1] < 0) d.push_back(n);
  return d;
}

// greedy descent walk, smallest index first
inline Word reduced_word(WeylElem g) {
  const int n = g.rank();
  Word w;
  for (;;) {
    auto d = left_descents(g);
    if (d.empty()) break;
    w.push_back(d.front());
    g = WeylElem::generator(d.front(), n) * g;
  }
  return w;
}

template <class S>
std::vector<S> act_point(const WeylElem& g, const std::vector<S>& t, const S& q) {
  const int n = g.rank();
  if (static_cast<int>(t.size()) != n) throw std::invalid_argument("act_point: dimension mismatch");
  for (auto& z : t)
    if (absd(z) == 0) throw Refusal("act_point: zero coordinate");
  std::vector<S> r(n);
  for (int i = 0; i < n; ++i) {
    int p = g.perm[i], e = g.signs[i];
    r[i] = ipow(q, e * g.trans[p]) * ipow(t[p], e);
  }
  return r;
}

template <class S>
std::vector<S> act_point(const WeylElem& g, const std::vector<S>& t, const ParamSet<S>& p) {
  return act_point(g, t, p.q());
}

// all 2^n n! signed permutations
inline std::vector<WeylElem> finite_weyl_group(int n) {
  if (n < 1 || n > 6) throw Refusal("finite_weyl_group: n must be in 1..6");
  std::vector<WeylElem> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int m = 0; m < (1 << n); ++m) {
      WeylElem g(n);
      g.perm = perm;
      for (int i = 0; i < n; ++i) g.signs[i] = (m >> (n - 1 - i)) & 1 ? -1 : 1;
      out.push_back(g);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline WeylElem longest_element(int n) {
  WeylElem g(n);
  std::fill(g.signs.begin(), g.signs.end(), -1);
  return g;
}

// subgroup generated by s_i, i in I (subset of 1..n)
inline std::vector<WeylElem> parabolic_subgroup(const std::set<int>& I, int n) {
  std::set<WeylElem> seen{WeylElem(n)};
  std::vector<WeylElem> frontier{WeylElem(n)};
  while (!frontier.empty()) {
    std::vector<WeylElem> next;
    for (auto& g : frontier)
      for (int i : I) {
        auto h = g * WeylElem::generator(i, n);
        if (seen.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

inline WeylElem parabolic_longest(const std::set<int>& I, int n) {
  for (int i : I)
    if (i < 1 || i > n) throw std::invalid_argument("parabolic subset must lie in 1..n");
  auto sub = parabolic_subgroup(I, n);
  return *std::max_element(sub.begin(), sub.end(), [](auto& a, auto& b) { return length(a) < length(b); });
}

// W0^I sorted by (length, reduced word)
inline std::vector<WeylElem> min_coset_reps(const std::set<int>& I, int n) {
  std::vector<std::pair<std::pair<int, Word>, WeylElem>> keyed;
  for (auto& w : finite_weyl_group(n)) {
    int lw = length(w);
    bool ok = true;
    for (int i : I)
      if (length(w * WeylElem::generator(i, n)) < lw) {
        ok = false;
        break;
      }
    if (ok) keyed.push_back({{lw, reduced_word(w)}, w});
  }
  std::sort(keyed.begin(), keyed.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<WeylElem> out;
  for (auto& k : keyed) out.push_back(k.second);
  return out;
}

inline std::set<int> J_set(int n) {
  std::set<int> J;
  for (int i = 1; i < n; ++i) J.insert(i);
  return J;
}

struct StarInvolution {
  WeylElem w0I;
  std::set<int> Istar;
  std::vector<std::pair<int, int>> map;  // (i, i*)
};

inline StarInvolution star_involution(const std::set<int>& I, int n) {
  StarInvolution r;
  r.w0I = longest_element(n) * parabolic_longest(I, n).inverse();
  for (int i : I) {
    auto lhs = r.w0I * WeylElem::generator(i, n);
    int found = -1;
    for (int j = 1; j <= n; ++j)
      if (WeylElem::generator(j, n) * r.w0I == lhs) {
        found = j;
        break;
      }
    if (found < 0) throw Defect("star_involution: no index matches for i = " + std::to_string(i));
    r.Istar.insert(found);
    r.map.push_back({i, found});
  }
  return r;
}

inline json weyl_to_json(const WeylElem& g) {
  std::vector<int> perm1(g.perm);
  for (auto& v : perm1) ++v;
  return {{"perm", perm1}, {"signs", g.signs}, {"trans", g.trans}};
}

inline WeylElem weyl_from_json(const json& j) {
  WeylElem g;
  g.perm = j.at("perm").get<std::vector<int>>();
  for (auto& v : g.perm) --v;
  g.signs = j.at("signs").get<std::vector<int>>();
  g.trans = j.at("trans").get<std::vector<int>>();
  return g;
}

}  // namespace daha
