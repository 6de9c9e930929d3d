#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "scalar.hpp"

namespace daha {

using Exp = std::vector<int>;

template <class S>
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(int n_vars) : n_(n_vars) {}

  static LaurentPoly constant(int n, S c) {
    LaurentPoly p(n);
    p.add_term(Exp(n, 0), c);
    return p;
  }
  static LaurentPoly monomial(const Exp& e, S c = S(1)) {
    LaurentPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }
  // t_i (0-based i)
  static LaurentPoly var(int n, int i, int power = 1) {
    Exp e(n, 0);
    e[i] = power;
    return monomial(e);
  }

  int n_vars() const { return n_; }
  const std::map<Exp, S>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }

  S coeff(const Exp& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? S(0) : it->second;
  }

  void add_term(const Exp& e, const S& c) {
    if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("LaurentPoly: exponent length mismatch");
    auto it = t_.find(e);
    if (it == t_.end()) {
      if (c != S(0)) t_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == S(0)) t_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    check(o);
    for (auto& [e, c] : o.t_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    check(o);
    for (auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
  }
  LaurentPoly& operator*=(const S& s) {
    if (s == S(0)) {
      t_.clear();
      return *this;
    }
    for (auto& [e, c] : t_) c *= s;
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, const S& s) { return a *= s; }
  friend LaurentPoly operator*(const S& s, LaurentPoly a) { return a *= s; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check(b);
    LaurentPoly r(a.n_);
    Exp e(a.n_);
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) {
        for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  // multiply by c * t^e
  LaurentPoly shifted(const Exp& e, const S& c) const {
    LaurentPoly r(n_);
    Exp f(n_);
    for (auto& [ea, ca] : t_) {
      for (int i = 0; i < n_; ++i) f[i] = ea[i] + e[i];
      r.add_term(f, ca * c);
    }
    return r;
  }

  S eval(const std::vector<S>& t) const {
    if (static_cast<int>(t.size()) != n_) throw std::invalid_argument("LaurentPoly::eval: point dimension");
    S s(0);
    for (auto& [e, c] : t_) {
      S m = c;
      for (int i = 0; i < n_; ++i) m *= ipow(t[i], e[i]);
      s += m;
    }
    return s;
  }

  double max_abs_coeff() const {
    double m = 0;
    for (auto& [e, c] : t_) m = std::max(m, absd(c));
    return m;
  }

  template <class S2>
  LaurentPoly<S2> convert() const {
    LaurentPoly<S2> r(n_);
    for (auto& [e, c] : t_) r.add_term(e, from_cd<S2>(to_cd(c)));
    return r;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : t_) {
      if (!first) os << " + ";
      first = false;
      cd z = to_cd(c);
      os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
      for (int i = 0; i < n_; ++i)
        if (e[i]) os << "*t" << i + 1 << "^" << e[i];
    }
    return first ? "0" : os.str();
  }

 private:
  void check(const LaurentPoly& o) const {
    if (o.n_ != n_) throw std::invalid_argument("LaurentPoly: mismatched n_vars");
  }
  int n_ = 0;
  std::map<Exp, S> t_;
};

template <class S>
LaurentPoly<S> laurent_mul(const LaurentPoly<S>& a, const LaurentPoly<S>& b) {
  return a * b;
}

// max-abs coefficient of a-b normalized by the larger operand
template <class S>
double poly_residual(const LaurentPoly<S>& a, const LaurentPoly<S>& b) {
  double d = (a - b).max_abs_coeff();
  double s = std::max(a.max_abs_coeff(), b.max_abs_coeff());
  return s == 0 ? d : d / s;
}

template <class S>
json poly_to_json(const LaurentPoly<S>& p) {
  json j;
  j["n_vars"] = p.n_vars();
  json terms = json::array();
  for (auto& [e, c] : p.terms()) {
    cd z = to_cd(c);
    terms.push_back({{"exp", e}, {"re", z.real()}, {"im", z.imag()}});
  }
  j["terms"] = terms;
  return j;
}

inline LaurentPoly<cd> poly_from_json(const json& j) {
  LaurentPoly<cd> p(j.at("n_vars").get<int>());
  for (auto& t : j.at("terms")) p.add_term(t.at("exp").get<Exp>(), cd(t.at("re").get<double>(), t.at("im").get<double>()));
  return p;
}

// f o s_j under the q-dependent action: s0 t = (q/t1, t2, ...), s_i swaps, s_n inverts t_n
template <class S>
LaurentPoly<S> reflect(const LaurentPoly<S>& f, int j, const S& q) {
  const int n = f.n_vars();
  if (j < 0 || j > n) throw std::invalid_argument("reflect: generator index");
  LaurentPoly<S> r(n);
  for (auto& [e0, c0] : f.terms()) {
    Exp e = e0;
    S c = c0;
    if (j == 0) {
      c *= ipow(q, e[0]);
      e[0] = -e[0];
    } else if (j == n) {
      e[n - 1] = -e[n - 1];
    } else {
      std::swap(e[j - 1], e[j]);
    }
    r.add_term(e, c);
  }
  return r;
}

// Denominator of c_j written as 1 - c * t^d.
template <class S>
struct LineDenominator {
  Exp d;
  S c;
};

template <class S>
LineDenominator<S> c_denominator(int j, int n, const S& q) {
  Exp d(n, 0);
  if (j == 0) {
    d[0] = -2;
    return {d, q};
  }
  if (j == n) {
    d[n - 1] = 2;
    return {d, S(1)};
  }
  d[j - 1] = 1;
  d[j] = -1;
  return {d, S(1)};
}

// Exact division g / (1 - c t^d). Terms are grouped into lines e + k d and each line
// is divided by the recursion h_k = a_k + c h_{k-1}; the leftover must vanish.
template <class S>
LaurentPoly<S> divide_line(const LaurentPoly<S>& g, const LineDenominator<S>& den, double tol = 1e-9) {
  const int n = g.n_vars();
  int piv = -1;
  for (int i = 0; i < n; ++i)
    if (den.d[i] != 0) {
      piv = i;
      break;
    }
  if (piv < 0) throw std::invalid_argument("divide_line: zero direction");
  const int dp = den.d[piv];
  // line key: exponent reduced so that the pivot coordinate lies in [0, |dp|)
  auto line_of = [&](const Exp& e, int& k) {
    int a = e[piv];
    int m = ((a % dp) + std::abs(dp)) % std::abs(dp);
    k = (a - m) / dp;
    Exp base = e;
    for (int i = 0; i < n; ++i) base[i] -= k * den.d[i];
    return base;
  };
  std::map<Exp, std::map<int, S>> lines;
  for (auto& [e, c] : g.terms()) {
    int k;
    Exp b = line_of(e, k);
    lines[b][k] += c;
  }
  LaurentPoly<S> out(n);
  double scale = std::max(1.0, g.max_abs_coeff());
  for (auto& [b, coeffs] : lines) {
    int lo = coeffs.begin()->first, hi = coeffs.rbegin()->first;
    S h(0);
    for (int k = lo; k <= hi; ++k) {
      auto it = coeffs.find(k);
      S a = it == coeffs.end() ? S(0) : it->second;
      S hk = a + den.c * h;
      if (k == hi) {
        if (absd(hk) > tol * scale * std::max(1.0, absd(den.c))) throw Defect("divided difference remainder " + std::to_string(absd(hk)));
        break;
      }
      Exp e = b;
      for (int i = 0; i < n; ++i) e[i] += k * den.d[i];
      out.add_term(e, hk);
      h = hk;
    }
  }
  return out;
}

// (f o s_j - f) / denominator(c_j)
template <class S>
LaurentPoly<S> divided_difference(const LaurentPoly<S>& f, int j, const S& q) {
  auto g = reflect(f, j, q) - f;
  return divide_line(g, c_denominator(j, f.n_vars(), q));
}

template <class S>
LaurentPoly<S> divided_difference(const LaurentPoly<S>& f, int j, const ParamSet<S>& p) {
  return divided_difference(f, j, p.q());
}

}  // namespace daha
