#include "catch_amalgamated.hpp"

#include <functional>
#include <random>

#include "daha/koornwinder.hpp"

using namespace daha;
using P = LaurentPoly<cd>;
using Fn = std::function<cd(const std::vector<cd>&)>;

namespace {

std::vector<cd> s_point(int j, std::vector<cd> t, cd q) {
  const int n = static_cast<int>(t.size());
  if (j == 0)
    t[0] = q / t[0];
  else if (j == n)
    t[n - 1] = 1.0 / t[n - 1];
  else
    std::swap(t[j - 1], t[j]);
  return t;
}

// c_j with inverted kappa's and upsilon's, written out from the closed forms
cd c_inv(int j, const std::vector<cd>& t, const ParamSet<cd>& p) {
  const int n = p.n;
  if (j == 0) {
    const cd k = 1.0 / p.kappa0, u = 1.0 / p.upsilon0, z = p.q_sqrt / t[0];
    return (1.0 - k * u * z) * (1.0 + k / u * z) / (k * (1.0 - z * z));
  }
  if (j == n) {
    const cd k = 1.0 / p.kappan, u = 1.0 / p.upsilonn, z = t[n - 1];
    return (1.0 - k * u * z) * (1.0 + k / u * z) / (k * (1.0 - z * z));
  }
  const cd k = 1.0 / p.kappa, z = t[j - 1] / t[j];
  return (1.0 - k * k * z) / (k * (1.0 - z));
}

// T_j acting on a function of the point, inverted parameters
Fn T_fn(int j, Fn f, const ParamSet<cd>& p, bool inverse) {
  return [=](const std::vector<cd>& t) {
    const cd kj = p.kap(j);
    cd v = f(t) / kj + c_inv(j, t, p) * (f(s_point(j, t, p.q())) - f(t));
    return inverse ? v + (kj - 1.0 / kj) * f(t) : v;
  };
}

Fn Y_fn(int i, Fn f, const ParamSet<cd>& p) {
  const int n = p.n;
  // Y_i = T_{i-1}^-1 ... T_1^-1 T_0 T_1 ... T_{n-1} T_n T_{n-1} ... T_i, rightmost first
  for (int j = i; j <= n - 1; ++j) f = T_fn(j, f, p, false);
  f = T_fn(n, f, p, false);
  for (int j = n - 1; j >= 1; --j) f = T_fn(j, f, p, false);
  f = T_fn(0, f, p, false);
  for (int j = 1; j <= i - 1; ++j) f = T_fn(j, f, p, true);
  return f;
}

Fn as_fn(const P& f) {
  return [f](const std::vector<cd>& t) { return f.eval(t); };
}

std::vector<cd> random_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> r(0.7, 1.4), th(0, 6.283185307179586);
  std::vector<cd> t(n);
  for (auto& z : t) z = std::polar(r(rng), th(rng));
  return t;
}

P random_poly(std::mt19937_64& rng, int n, int deg, int terms) {
  std::uniform_int_distribution<int> ex(-deg, deg);
  std::normal_distribution<double> g;
  P f(n);
  for (int k = 0; k < terms; ++k) {
    Exp e(n);
    int budget = deg;
    for (auto& x : e) {
      x = std::clamp(ex(rng), -budget, budget);
      budget -= std::abs(x);
    }
    f.add_term(e, cd(g(rng), g(rng)));
  }
  return f;
}

}  // namespace

TEST_CASE("c_i zeros in plain and inverted mode") {
  auto p = sample_generic(1, 2);
  const cd k = p.kappa;
  std::vector<cd> t{cd(0.8, 0.3), cd(0.8, 0.3) * k * k};
  CHECK(std::abs(c_eval(1, t, p, false)) < 1e-14);
  std::vector<cd> u{cd(0.8, 0.3), cd(0.8, 0.3) / (k * k)};
  CHECK(std::abs(c_eval(1, u, p, true)) < 1e-14);
  CHECK(std::abs(c_eval(1, u, p, false)) > 1e-3);
}

TEST_CASE("c_eval against the closed forms") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n, n);
    auto t = random_point(rng, n);
    for (int j = 0; j <= n; ++j) {
      cd v = c_eval(j, t, p, true);
      CHECK(std::isfinite(std::abs(v)));
      CHECK(std::abs(v - c_inv(j, t, p)) < 1e-13 * std::max(1.0, std::abs(v)));
    }
  }
  auto p = sample_generic(2, 2);
  CHECK_THROWS_AS(c_eval(2, std::vector<cd>{cd(1.2), cd(1)}, p, true), PoleError);
}

TEST_CASE("T_j on constants") {
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n + 2, n);
    auto one = P::constant(n, cd(1));
    for (int j = 0; j <= n; ++j) CHECK(poly_residual(noumi_T_apply(j, one, p), one * (1.0 / p.kap(j))) < 1e-15);
  }
}

TEST_CASE("T_j matches the pointwise operator") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n + 4, n);
    for (int k = 0; k < 5; ++k) {
      auto f = random_poly(rng, n, 3, 6);
      auto t = random_point(rng, n);
      for (int j = 0; j <= n; ++j) {
        cd a = noumi_T_apply(j, f, p).eval(t), b = T_fn(j, as_fn(f), p, false)(t);
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
      }
    }
  }
}

TEST_CASE("Hecke quadratic relation and inverse law on polynomials") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 2; ++n) {
    auto p = sample_generic(n + 6, n);
    for (int k = 0; k < 20; ++k) {
      auto f = random_poly(rng, n, 3, 5);
      for (int j = 0; j <= n; ++j) {
        const cd kj = p.kap(j);
        auto g = noumi_T_apply(j, f, p);
        auto quad = noumi_T_apply(j, g, p) + g * (kj - 1.0 / kj) - f;
        CHECK(quad.max_abs_coeff() < 1e-10 * std::max(1.0, f.max_abs_coeff()));
        CHECK(poly_residual(noumi_T_apply(j, noumi_T_apply(j, f, p, true), p), f) < 1e-10);
      }
    }
  }
}

TEST_CASE("Y_i matches the pointwise composition and the Y's commute") {
  std::mt19937_64 rng(4);
  auto p = sample_generic(5, 2);
  for (int k = 0; k < 5; ++k) {
    auto f = random_poly(rng, 2, 2, 5);
    auto t = random_point(rng, 2);
    for (int i = 1; i <= 2; ++i) {
      cd a = noumi_Y_apply(i, f, p).eval(t), b = Y_fn(i, as_fn(f), p)(t);
      CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(b)));
    }
    auto ab = noumi_Y_apply(1, noumi_Y_apply(2, f, p), p), ba = noumi_Y_apply(2, noumi_Y_apply(1, f, p), p);
    CHECK((ab - ba).max_abs_coeff() < 1e-9 * std::max(1.0, ab.max_abs_coeff()));
  }
}

TEST_CASE("Y_i on 1 is the inverse spectral value at 0") {
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n + 9, n);
    auto g = gamma_lambda(std::vector<int>(n, 0), p);
    auto one = P::constant(n, cd(1));
    for (int i = 1; i <= n; ++i) CHECK(poly_residual(noumi_Y_apply(i, one, p), one * (1.0 / g[i - 1])) < 1e-12);
  }
}

TEST_CASE("spectral point special cases") {
  auto p = sample_generic(3, 3);
  const cd k = p.kappa, q = p.q(), kk = p.kappa0 * p.kappan;
  const int n = 3;
  for (int m : {1, 2}) {
    auto g = gamma_lambda(std::vector<int>(n, m), p);
    for (int i = 1; i <= n; ++i) CHECK(std::abs(g[i - 1] - std::pow(q, m) / kk * ipow(k, -2 * (i - 1))) < 1e-12 * std::abs(g[i - 1]));
  }
  auto g0 = gamma_lambda({0, 0, 0}, p);
  for (int i = 1; i <= n; ++i) CHECK(std::abs(g0[i - 1] - kk * ipow(k, 2 * (n - i))) < 1e-13 * std::abs(g0[i - 1]));
  for (auto lam : std::vector<std::vector<int>>{{-2, -1, 0}, {-1, -1, -1}, {-3, 0, 0}, {-2, -2, -1}}) {
    auto g = gamma_lambda(lam, p);
    for (int i = 1; i <= n; ++i)
      CHECK(std::abs(g[i - 1] - kk * ipow(k, 2 * (n - i)) * ipow(q, lam[i - 1])) < 1e-12 * std::abs(g[i - 1]));
  }
}

TEST_CASE("P_0 = 1") {
  for (int n = 1; n <= 3; ++n) {
    auto r = compute_P(std::vector<int>(n, 0), sample_generic(n, n));
    CHECK(poly_residual(r.P, P::constant(n, cd(1))) == 0);
  }
}

TEST_CASE("degree one at n = 1") {
  auto p = sample_generic(2, 1);
  auto r = compute_P({1}, p);
  for (auto& [e, c] : r.P.terms()) CHECK(std::abs(e[0]) <= 1);
  CHECK(r.P.coeff({1}) == cd(1));
  CHECK(r.eigen_residual < 1e-9);
  std::mt19937_64 rng(5);
  for (int s = 0; s < 3; ++s) {
    auto t = random_point(rng, 1);
    cd lhs = Y_fn(1, as_fn(r.P), p)(t), rhs = r.P.eval(t) / r.gamma.gamma[0];
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
  }
}

TEST_CASE("eigenfunctions, pointwise, n = 2") {
  auto p = sample_generic(3, 2);
  std::mt19937_64 rng(6);
  for (auto lam : std::vector<Exp>{{1, 0}, {0, -1}, {1, -1}, {2, 1}, {-1, -2}}) {
    auto r = compute_P(lam, p);
    CHECK(r.P.coeff(lam) == cd(1));
    CHECK(r.eigen_residual < 1e-9);
    CHECK(support_contained(r.P, lam, r.enlarged));
    auto t = random_point(rng, 2);
    for (int i = 1; i <= 2; ++i) {
      cd lhs = Y_fn(i, as_fn(r.P), p)(t), rhs = r.P.eval(t) / r.gamma.gamma[i - 1];
      CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("T_i fixes P_lambda exactly when s_i fixes lambda") {
  for (int n = 2; n <= 3; ++n) {
    auto p = sample_generic(n + 12, n);
    for (auto& lam : l1_ball(n, n == 2 ? 3 : 2)) {
      auto r = compute_P(lam, p);
      for (auto& row : fixed_point_rows(lam, r.P, p)) {
        if (row.fixed)
          CHECK(row.residual < 1e-9);
        else
          CHECK(row.residual > 1e-6);
      }
    }
  }
}

TEST_CASE("dominance order") {
  CHECK(dominated({1, -1}, {2, 0}));
  CHECK(dominated({0, -2}, {2, 0}));
  CHECK_FALSE(dominated({2, 1}, {2, 0}));
  CHECK_FALSE(dominated({3, 0}, {2, 1}));
  CHECK(dominated({-1, 1, 1}, {1, 1, 1}));
}

TEST_CASE("simple reflections of lambda") {
  CHECK(simple_reflect({1, 2, -3}, 1) == Exp{2, 1, -3});
  CHECK(simple_reflect({1, 2, -3}, 3) == Exp{1, 2, 3});
}

TEST_CASE("caps and malformed input") {
  auto p3 = sample_generic(1, 3);
  CHECK_THROWS_AS(compute_P({3, 2, 0}, p3), Refusal);
  CHECK_THROWS_AS(compute_P({1, 0}, p3), Refusal);
  CHECK_THROWS_AS(compute_P({1, 0, 0, 0}, sample_generic(1, 4)), Refusal);
}

TEST_CASE("koornwinder JSON carries the metadata") {
  auto r = compute_P({1, -1}, sample_generic(1, 2));
  auto j = koornwinder_to_json(r);
  CHECK(j.at("metadata").at("lambda") == json({1, -1}));
  CHECK(j.at("metadata").at("gamma_lambda").size() == 2);
  CHECK(poly_residual(poly_from_json(j), r.P) == 0);
}
