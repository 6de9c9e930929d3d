#include "catch_amalgamated.hpp"

#include <random>

#include "daha/transfer.hpp"

using namespace daha;
using M = Mat<cd>;

namespace {

double rel(const M& a, const M& b) { return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()); }

cd random_x(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.6, 1.6), th(0, 6.283185307179586);
  return std::polar(r(rng), th(rng));
}

std::vector<cd> random_point(std::mt19937_64& rng, int n) {
  std::vector<cd> t(n);
  for (auto& z : t) z = random_x(rng);
  return t;
}

// operator A on legs (a, b) of L legs, leg 0 = most significant bit, by explicit index loops
M on_legs(const M& A, int a, int b, int L) {
  const int D = 1 << L;
  M out = M::Zero(D, D);
  auto bit = [&](int idx, int leg) { return (idx >> (L - 1 - leg)) & 1; };
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) {
      bool rest = true;
      for (int l = 0; l < L; ++l)
        if (l != a && l != b && bit(r, l) != bit(c, l)) rest = false;
      if (!rest) continue;
      out(r, c) = A(2 * bit(r, a) + bit(r, b), 2 * bit(c, a) + bit(c, b));
    }
  return out;
}

M on_leg(const M& A, int a, int L) {
  const int D = 1 << L;
  M out = M::Zero(D, D);
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c)
      if ((r ^ c) == ((r ^ c) & (1 << (L - 1 - a)))) out(r, c) = A((r >> (L - 1 - a)) & 1, (c >> (L - 1 - a)) & 1);
  return out;
}

// transfer matrix assembled independently: explicit leg embedding and trace over the auxiliary bit
M transfer_oracle(const ParamSet<cd>& p, cd x, const std::vector<cd>& t) {
  const int n = p.n, L = n + 1, D = 1 << L;
  M U = M::Identity(D, D);
  for (int i = 1; i <= n; ++i) U = U * on_legs(r_mat(p, x / t[i - 1]), 0, i, L);
  U = U * on_leg(k_mat(p, x), 0, L);
  for (int i = n; i >= 1; --i) U = U * on_legs(r_mat(p, x * t[i - 1]), i, 0, L);
  M th = M::Zero(2, 2);
  th(0, 0) = 1.0 / std::sqrt(p.kappa);
  th(1, 1) = std::sqrt(p.kappa);
  M BU = on_leg(M(th * kbar_mat(p, p.kappa * p.kappa * x) * th), 0, L) * U;
  const int d = 1 << n;
  return BU.block(0, 0, d, d) + BU.block(d, d, d, d);
}

}  // namespace

TEST_CASE("leg embedding agrees with the oracle") {
  M A = M::Random(4, 4), B = M::Random(2, 2);
  CHECK(rel(place<cd>(A, {0, 2}, 3), on_legs(A, 0, 2, 3)) == 0);
  CHECK(rel(place<cd>(A, {2, 0}, 3), on_legs(A, 2, 0, 3)) == 0);
  CHECK(rel(place<cd>(B, {1}, 3), on_leg(B, 1, 3)) == 0);
}

TEST_CASE("monodromy at x = 1, t = 1 is the identity") {
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n, n);
    std::vector<cd> one(n, cd(1));
    CHECK(rel(monodromy_U(p, cd(1), one), identity<cd>(1 << (n + 1))) < 1e-14);
  }
}

TEST_CASE("both monodromy forms agree") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n + 4, n);
    for (int s = 0; s < 5; ++s) {
      auto t = random_point(rng, n);
      cd x = random_x(rng);
      CHECK(rel(monodromy_U(p, x, t), monodromy_U_check(p, x, t)) < 1e-11);
    }
  }
}

TEST_CASE("transfer matrix against the independent assembly") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 3; ++n) {
    auto p = sample_generic(n + 8, n);
    auto t = random_point(rng, n);
    cd x = random_x(rng);
    CHECK(rel(transfer_T(p, x, t), transfer_oracle(p, x, t)) < 1e-12);
  }
}

TEST_CASE("transfer matrices commute") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 4; ++n) {
    auto p = sample_generic(n, n);
    for (int s = 0; s < (n == 4 ? 4 : 10); ++s) {
      auto t = random_point(rng, n);
      M a = transfer_T(p, random_x(rng), t), b = transfer_T(p, random_x(rng), t);
      CHECK(rel(M(a * b), M(b * a)) < 1e-10);
    }
  }
}

TEST_CASE("exchange relations") {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 3; ++n) {
    auto p = sample_generic(n + 1, n);
    for (int s = 0; s < 5; ++s)
      for (auto& [k, v] : transfer_exchange_residuals(p, random_x(rng), random_point(rng, n))) CHECK(v < 1e-10);
  }
}

TEST_CASE("crossing, boundary crossing and PT symmetry") {
  auto p = sample_generic(2, 2);
  CHECK(boundary_crossing_residual(p, cd(1)) < 1e-14);
  const cd k = p.kappa, k2 = k * k, k0 = p.kappa0, u0 = p.upsilon0;
  const cd phi1 = k * (1.0 - k0 * u0) * (1.0 + k0 / u0) * (1.0 - k2 * k2) / ((1.0 - k2 * k0 * u0) * (1.0 + k2 * k0 / u0) * (1.0 - k2));
  CHECK(std::abs(Phi_bdy(p, cd(1)) - phi1) < 1e-14 * std::abs(phi1));
  std::mt19937_64 rng(5);
  for (int s = 0; s < 10; ++s) {
    cd x = random_x(rng);
    CHECK(pt_symmetry_residual(p, x) < 1e-14);
    CHECK(crossing_unitarity_residual(p, x) < 1e-11);
    CHECK(std::abs(Phi(p, x) - (1.0 - x) * (1.0 - k2 * k2 * x) / ((1.0 - k2 * x) * (1.0 - k2 * x))) < 1e-13);
  }
  auto res = check_boundary_crossing(p, 10, 7);
  for (auto& [name, v] : res) CHECK(v < 1e-10);
}

TEST_CASE("rational matrices: values and derivatives") {
  auto p = sample_generic(3, 2);
  std::mt19937_64 rng(6);
  const double h = 1e-5;
  for (int s = 0; s < 5; ++s) {
    cd x = random_x(rng);
    CHECK(rel(r_rat(p).value(x), r_mat(p, x)) < 1e-14);
    CHECK(rel(k_rat(p).value(x), k_mat(p, x)) < 1e-14);
    CHECK(rel(kbar_rat(p).value(x), kbar_mat(p, x)) < 1e-14);
    M fd = (r_mat(p, x + h) - r_mat(p, x - h)) / (2 * h);
    CHECK(rel(r_rat(p).deriv(x), fd) < 1e-8);
    M fk = (k_mat(p, x + h) - k_mat(p, x - h)) / (2 * h);
    CHECK(rel(k_rat(p).deriv(x), fk) < 1e-8);
  }
  CHECK(rcheck_derivative_residual(p) < 1e-13);
}

TEST_CASE("analytic derivative of T against a central difference") {
  auto p = sample_generic(4, 2);
  std::vector<cd> t{cd(0.9, 0.3), cd(1.2, -0.5)};
  const cd x(0.8, 0.4);
  const double h = 1e-5;
  auto vd = transfer_T_diff(p, x, t);
  CHECK(rel(vd.val, transfer_T(p, x, t)) < 1e-14);
  CHECK(rel(vd.der, M((transfer_T(p, x + h, t) - transfer_T(p, x - h, t)) / (2 * h))) < 1e-7);
}

TEST_CASE("three Hamiltonian forms agree") {
  for (int n = 2; n <= 3; ++n)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto p = sample_generic(seed, n);
      auto r = build_spin_rep(p);
      M tl = hamiltonian(r, HamForm::tl), pauli = hamiltonian(r, HamForm::pauli);
      CHECK(rel(tl, pauli) < 1e-11);
      CHECK(rel(hamiltonian(r, HamForm::transfer), pauli) < 1e-7);
      CHECK(rel(hamiltonian(r, HamForm::transfer_fd), pauli) < 1e-5);
    }
}

TEST_CASE("boundary terms as displayed do not match") {
  auto r = build_spin_rep(sample_generic(1, 3));
  M pauli = hamiltonian(r, HamForm::pauli);
  CHECK(rel(hamiltonian(r, HamForm::pauli_displayed), pauli) > 1e-3);
  CHECK(rel(hamiltonian(r, HamForm::tl_displayed), pauli) > 1e-3);
}

TEST_CASE("TL Hamiltonian from its local pieces") {
  auto p = sample_generic(2, 3);
  auto r = build_spin_rep(p);
  const cd k = p.kappa;
  M want = r.e[1] + r.e[2];
  for (int j : {0, 3}) {
    const cd kj = j ? p.kappan : p.kappa0, uj = j ? p.upsilonn : p.upsilon0;
    const cd dj = -kj * (k / kj + kj / k) / ((1.0 - kj * uj) * (1.0 + kj / uj));
    want += (k - 1.0 / k) * dj * r.e[j];
  }
  CHECK(rel(hamiltonian_tl(r), want) < 1e-14);
}

TEST_CASE("transfer at t_i interpolates the transport operator") {
  std::mt19937_64 rng(8);
  for (int n = 2; n <= 3; ++n) {
    auto p = sample_generic(n + 30, n);
    auto r = build_spin_rep(p);
    for (int s = 0; s < 5; ++s) {
      auto t = random_point(rng, n);
      for (int i = 1; i <= n; ++i)
        for (auto& [k, v] : check_transfer_vs_transport(r, i, t)) CHECK(v < 1e-9);
    }
  }
}

TEST_CASE("unknown Hamiltonian form") { CHECK_THROWS_AS(parse_ham_form("xyz"), std::invalid_argument); }
