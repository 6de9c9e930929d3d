#include "catch_amalgamated.hpp"

#include <random>
#include <set>

#include "daha/matchings.hpp"
#include "daha/spinrep.hpp"

using namespace daha;
using M = Mat<cd>;

namespace {

// all two-boundary non-crossing perfect matchings by exhaustive search over pair sets
void search(int n, int site, Matching& cur, std::vector<int>& used, std::set<Matching>& out) {
  if (site > n) {
    Matching m = cur;
    m.normalize();
    if (m.valid()) out.insert(m);
    return;
  }
  if (used[site]) {
    search(n, site + 1, cur, used, out);
    return;
  }
  used[site] = 1;
  for (int b = 0; b <= n + 1; ++b) {
    if (b == site) continue;
    if (b >= 1 && b <= n && used[b]) continue;
    if (b >= 1 && b <= n) used[b] = 1;
    cur.pairs.push_back({site, b});
    search(n, site + 1, cur, used, out);
    cur.pairs.pop_back();
    if (b >= 1 && b <= n) used[b] = 0;
  }
  used[site] = 0;
}

std::set<Matching> brute_matchings(int n) {
  Matching cur{n, {}};
  std::vector<int> used(n + 2, 0);
  std::set<Matching> out;
  search(n, 1, cur, used, out);
  return out;
}

double rel(const M& a, const M& b) { return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()); }

}  // namespace

TEST_CASE("n = 1 has the two matchings") {
  auto ms = enumerate_matchings(1);
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].pairs == std::vector<std::pair<int, int>>{{1, 2}});
  CHECK(ms[1].pairs == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(nu_of(ms[0]) == Nu{'+'});
  CHECK(nu_of(ms[1]) == Nu{'-'});
}

TEST_CASE("enumeration agrees with exhaustive search") {
  CHECK(enumerate_matchings(3).size() == 8);
  for (int n = 1; n <= 6; ++n) {
    auto ms = enumerate_matchings(n);
    std::set<Matching> got(ms.begin(), ms.end());
    CHECK(got.size() == (size_t(1) << n));
    CHECK(got == brute_matchings(n));
  }
}

TEST_CASE("nu is a bijection") {
  for (int n = 1; n <= 6; ++n) {
    auto ms = enumerate_matchings(n);
    for (int idx = 0; idx < (1 << n); ++idx) {
      CHECK(nu_index(nu_of(ms[idx])) == idx);
      CHECK(matching_from_nu(nu_of(ms[idx])) == ms[idx]);
    }
  }
}

TEST_CASE("n = 4 matching with boundary arcs at both ends") {
  Matching m{4, {{0, 1}, {2, 3}, {4, 5}}};
  auto ms = enumerate_matchings(4);
  CHECK(std::find(ms.begin(), ms.end(), m) != ms.end());
  // m_i > i gives +, so the arc to the right boundary gives +
  CHECK(nu_string(nu_of(m)) == "(-,+,-,+)");
  CHECK(matching_from_nu(parse_nu("-+-+")) == m);

  OrientedMatching om{4, {{0, 1}, {3, 2}, {5, 4}}};
  CHECK(om.forget() == m);
  CHECK(nu_from_index(oriented_spin_index(om), 4) == parse_nu("(-,-,+,-)"));
}

TEST_CASE("parse_nu rejects junk") {
  CHECK(parse_nu("(+, -)") == Nu{'+', '-'});
  CHECK_THROWS(parse_nu("(+,x)"));
}

TEST_CASE("orientation counters") {
  OrientedMatching natural{4, {{1, 2}, {3, 4}}};
  CHECK(orientation_stats(natural).orient == 0);
  CHECK(orientation_stats(natural) == OrientationStats{});

  OrientedMatching om{4, {{0, 1}, {3, 2}, {5, 4}}};
  auto s = orientation_stats(om);
  CHECK(s.N00 == 0);
  CHECK(s.N01 == 0);
  CHECK(s.orient == 1);
  OrientedMatching in{3, {{1, 0}, {2, 0}, {4, 3}}};
  // (2,0): pty(2)=0; (4,3): pty(n+1-3)=1
  auto t = orientation_stats(in);
  CHECK(t.N00 == 1);
  CHECK(t.N01 == 1);
  CHECK(t.Nn1 == 1);
  CHECK(t.Nn0 == 0);
  CHECK(t.orient == 1);
}

TEST_CASE("orientation counters: pair scan and site scan agree") {
  for (int n = 1; n <= 6; ++n)
    for (auto& m : enumerate_matchings(n)) {
      auto os = orientations(m);
      CHECK(os.size() == (size_t(1) << m.pairs.size()));
      for (auto& om : os) {
        CHECK(om.forget() == m);
        CHECK(orientation_stats(om) == orientation_stats_scan(om));
      }
    }
}

TEST_CASE("Lsum identity") {
  for (int n = 1; n <= 6; ++n)
    for (auto& m : enumerate_matchings(n)) {
      int s = 0;
      for (auto& [a, b] : m.pairs) {
        int inner = a == 0 ? b : (b == n + 1 ? a : -1);
        if (inner > 0 && (a == 0 || b == n + 1)) s += inner % 2 ? -1 : 1;
      }
      CHECK(s == -(n % 2));
      CHECK(lsum(m) == s);
    }
}

TEST_CASE("e2 e0 on (+,+,-)") {
  auto p = sample_generic(3, 3);
  auto tl = delta_from_kappa(p);
  const cd b0(0.7, 0.4), b1(1.3, -0.2);
  MatchVec<cd> v{{matching_from_nu(parse_nu("(+,+,-)")), cd(1)}};
  auto w = matchmaker_apply(2, matchmaker_apply(0, v, tl, b0, b1), tl, b0, b1);
  REQUIRE(w.size() == 1);
  CHECK(w.begin()->first == matching_from_nu(parse_nu("(-,+,-)")));
  CHECK(std::abs(w.begin()->second - b0 * tl.delta) < 1e-15);
}

TEST_CASE("e_i on a matching with m_i = i+1 gives delta") {
  auto p = sample_generic(5, 4);
  auto tl = delta_from_kappa(p);
  for (auto& m : enumerate_matchings(4))
    for (int i = 1; i < 4; ++i)
      if (m.mate(i) == i + 1) {
        auto [c, img] = matchmaker_on(i, m, tl, cd(1), cd(2));
        CHECK(img == m);
        CHECK(c == tl.delta);
      }
}

TEST_CASE("apply and matrix form agree") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 4; ++n) {
    auto p = sample_generic(n, n);
    auto tl = delta_from_kappa(p);
    const cd b0(0.9, 0.1), b1(0.4, 1.1);
    auto W = matchmaker_matrices(n, tl, b0, b1);
    auto ms = enumerate_matchings(n);
    Vec<cd> x(1 << n);
    MatchVec<cd> v;
    for (int c = 0; c < (1 << n); ++c) {
      x(c) = cd(g(rng), g(rng));
      v[ms[c]] = x(c);
    }
    for (int j = 0; j <= n; ++j) {
      Vec<cd> y = W[j] * x;
      auto w = matchmaker_apply(j, v, tl, b0, b1);
      Vec<cd> z = Vec<cd>::Zero(1 << n);
      for (auto& [m, c] : w) z(nu_index(nu_of(m))) = c;
      CHECK((y - z).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("matchmaker satisfies the TL relations") {
  for (int n = 2; n <= 5; ++n) {
    auto p = sample_generic(50 + n, n);
    auto tl = delta_from_kappa(p);
    auto W = matchmaker_matrices(n, tl, cd(0.8, 0.3), cd(1.2, -0.5));
    const cd dj[3] = {tl.delta0, tl.delta, tl.deltan};
    for (int j = 0; j <= n; ++j) CHECK(rel(M(W[j] * W[j]), M(dj[j == 0 ? 0 : (j == n ? 2 : 1)] * W[j])) < 1e-12);
    for (int i = 1; i < n; ++i) {
      CHECK(rel(M(W[i] * W[i + 1] * W[i]), W[i]) < 1e-12);
      CHECK(rel(M(W[i] * W[i - 1] * W[i]), W[i]) < 1e-12);
    }
    for (int i = 0; i <= n; ++i)
      for (int j = i + 2; j <= n; ++j) CHECK(rel(M(W[i] * W[j]), M(W[j] * W[i])) < 1e-12);
    CHECK(max_residual(check_tl_relations(W, tl)) < 1e-10);
  }
}

TEST_CASE("beta_product: both parity branches by direct evaluation") {
  for (int n : {2, 3}) {
    auto p = sample_generic(60 + n, n);
    const cd k = p.kappa, k0 = p.kappa0, kn = p.kappan, s = p.psi0 * p.psin;
    const cd den = (k / k0 + 1.0 / k * k0) * (k / kn + 1.0 / k * kn);
    const cd num = n % 2 ? (1.0 + k0 / kn * s) * (1.0 + kn / k0 * s) : (1.0 - k0 * kn / k * s) * (1.0 - k / k0 / kn * s);
    const cd want = num / den / p.psi0 / p.psin;
    CHECK(std::abs(beta_product(p) - want) < 1e-13 * std::abs(want));
  }
}

TEST_CASE("beta_product: vanishing factor at n odd") {
  auto p = sample_generic(7, 3);
  p.psin = -p.kappan / (p.kappa0 * p.psi0);
  CHECK_THROWS_AS(beta_product(p), NonGeneric);
}

TEST_CASE("gauge satisfies the M-relations") {
  for (int n = 2; n <= 5; ++n) {
    auto p = sample_generic(n, n);
    auto g = m_gauge(p);
    const cd k = p.kappa, s = p.psi0 * p.psin;
    CHECK(g.M00 == cd(1));
    CHECK(g.beta0 == cd(1));
    CHECK(std::abs(g.M00 * g.M01 * p.psi0 * (k / p.kappa0 + p.kappa0 / k) - 1.0) < 1e-13);
    CHECK(std::abs(g.Mn0 * g.Mn1 * p.psin * (k / p.kappan + p.kappan / k) - 1.0) < 1e-13);
    const cd F = n % 2 ? 1.0 + p.kappa0 / p.kappan * s : 1.0 - p.kappa0 * p.kappan / k * s;
    CHECK(std::abs(g.M00 * g.Mn1 * F - g.beta0) < 1e-13);
    CHECK(std::abs(g.beta0 * g.beta1 - beta_product(p)) < 1e-13 * std::abs(beta_product(p)));
  }
}

TEST_CASE("Psi intertwines the matchmaker with the spin representation") {
  for (int n = 2; n <= 4; ++n)
    for (std::uint64_t seed : {1, 2}) {
      auto p = sample_generic(seed, n);
      auto r = build_spin_rep(p);
      auto g = m_gauge(p);
      auto W = matchmaker_matrices(n, r.tl, g.beta0, g.beta1);
      M Psi = intertwiner_Psi(p, g);
      for (int j = 0; j <= n; ++j) CHECK(rel(M(Psi * W[j]), M(r.e[j] * Psi)) < 1e-10);
      Eigen::FullPivLU<M> lu(Psi);
      CHECK(lu.rank() == (1 << n));
    }
}

TEST_CASE("a wrong beta product breaks intertwining") {
  auto p = sample_generic(2, 3);
  auto r = build_spin_rep(p);
  auto g = m_gauge(p);
  auto W = matchmaker_matrices(3, r.tl, g.beta0, cd(1.1) * g.beta1);
  M Psi = intertwiner_Psi(p, g, false);
  double worst = 0;
  for (int j = 0; j <= 3; ++j) worst = std::max(worst, rel(M(Psi * W[j]), M(r.e[j] * Psi)));
  CHECK(worst > 1e-3);
}

TEST_CASE("degenerate limit is the nu-basis map") {
  for (int n = 1; n <= 6; ++n) {
    M L = intertwiner_Psi_limit(n);
    auto ms = enumerate_matchings(n);
    for (int c = 0; c < (1 << n); ++c)
      for (int r = 0; r < (1 << n); ++r) CHECK(L(r, c) == (r == nu_index(nu_of(ms[c])) ? cd(1) : cd(0)));
  }
}

TEST_CASE("matching JSON") {
  Matching m{4, {{0, 1}, {2, 3}, {4, 5}}};
  CHECK(matching_to_json(m).dump() == "[[0,1],[2,3],[4,5]]");
}

TEST_CASE("enumeration size cap") { CHECK_THROWS_AS(enumerate_matchings(11), Refusal); }
