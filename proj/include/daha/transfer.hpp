#pragma once

#include <complex>
#include <string>
#include <vector>

#include "baxter.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "scalar.hpp"
#include "spinrep.hpp"

namespace daha {

// Matrix of rational functions sum_k num[k] x^k / sum_k den[k] x^k.
template <class S>
struct RatMat {
  std::vector<Mat<S>> num;
  std::vector<S> den;

  static S horner(const std::vector<S>& c, const S& x) {
    S v(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }
  static S horner_d(const std::vector<S>& c, const S& x) {
    S v(0);
    for (size_t k = c.size(); k-- > 1;) v = v * x + S(static_cast<double>(k)) * c[k];
    return v;
  }

  S den_at(const S& x) const {
    S d = horner(den, x);
    double scale = 0;
    S xp(1);
    for (auto& c : den) {
      scale = std::max(scale, absd(S(c * xp)));
      xp *= x;
    }
    if (absd(d) < pole_threshold * std::max(1.0, scale)) throw PoleError("rational matrix denominator");
    return d;
  }
  Mat<S> num_at(const Mat<S>& z, const S& x) const {
    Mat<S> v = z;
    for (auto it = num.rbegin(); it != num.rend(); ++it) v = v * x + *it;
    return v;
  }
  Mat<S> num_d(const Mat<S>& z, const S& x) const {
    Mat<S> v = z;
    for (size_t k = num.size(); k-- > 1;) v = v * x + S(static_cast<double>(k)) * num[k];
    return v;
  }

  Mat<S> value(const S& x) const {
    Mat<S> z = Mat<S>::Zero(num[0].rows(), num[0].cols());
    return num_at(z, x) / den_at(x);
  }

  // quotient rule
  Mat<S> deriv(const S& x) const {
    Mat<S> z = Mat<S>::Zero(num[0].rows(), num[0].cols());
    S d = den_at(x), dd = horner_d(den, x);
    return (num_d(z, x) * d - num_at(z, x) * dd) / (d * d);
  }
};

template <class S>
RatMat<S> r_rat(const ParamSet<S>& p) {
  const S k = p.kappa;
  Mat<S> a0 = Mat<S>::Zero(4, 4), a1 = Mat<S>::Zero(4, 4);
  a0(0, 0) = a0(3, 3) = S(1);
  a1(0, 0) = a1(3, 3) = -k * k;
  a0(1, 1) = a0(2, 2) = k;
  a1(1, 1) = a1(2, 2) = -k;
  a0(1, 2) = S(1) - k * k;
  a1(2, 1) = S(1) - k * k;
  return {{a0, a1}, {S(1), S(-k * k)}};
}

template <class S>
RatMat<S> kbar_rat(const ParamSet<S>& p) {
  const S k0 = p.kappa0, u0 = p.upsilon0, s = p.psi0;
  const S a = S(1) / k0 - k0, b = S(1) / u0 - u0;
  Mat<S> c0(2, 2), c1(2, 2), c2(2, 2);
  c0 << S(0), s, S(1) / s, a;
  c1 << b, S(0), S(0), b;
  c2 << a, -s, -S(1) / s, S(0);
  return {{S(k0) * c0, S(k0) * c1, S(k0) * c2}, {S(1), S(k0 / u0 - k0 * u0), S(-k0 * k0)}};
}

template <class S>
RatMat<S> k_rat(const ParamSet<S>& p) {
  const S kn = p.kappan, un = p.upsilonn, s = p.psin;
  const S a = S(1) / kn - kn, b = S(1) / un - un;
  Mat<S> c0(2, 2), c1(2, 2), c2(2, 2);
  c0 << a, S(1) / s, s, S(0);
  c1 << b, S(0), S(0), b;
  c2 << S(0), -S(1) / s, -s, a;
  return {{S(kn) * c0, S(kn) * c1, S(kn) * c2}, {S(1), S(kn / un - kn * un), S(-kn * kn)}};
}

template <class S>
Mat<S> theta_mat(const ParamSet<S>& p) {
  Mat<S> th = Mat<S>::Zero(2, 2);
  th(0, 0) = S(1) / p.kappa_sqrt;
  th(1, 1) = p.kappa_sqrt;
  return th;
}

// trace over leg 0 of an L-leg operator
template <class S>
Mat<S> ptrace0(const Mat<S>& M) {
  const Eigen::Index D = M.rows() / 2;
  return M.topLeftCorner(D, D) + M.bottomRightCorner(D, D);
}

// partial transpose of a two-leg operator on the given leg (0 or 1)
template <class S>
Mat<S> partial_transpose(const Mat<S>& M, int leg) {
  Mat<S> R(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          // M[(a,b),(c,d)]
          if (leg == 0)
            R(2 * c + b, 2 * a + d) = M(2 * a + b, 2 * c + d);
          else
            R(2 * a + d, 2 * c + b) = M(2 * a + b, 2 * c + d);
        }
  return R;
}

template <class S>
struct MonoFactor {
  RatMat<S> f;
  std::vector<int> legs;
  S a;  // argument scale: factor evaluated at a * x
};

// r_{01}(x/t_1) ... r_{0n}(x/t_n) k_0(x) r_{n0}(x t_n) ... r_{10}(x t_1)
template <class S>
std::vector<MonoFactor<S>> monodromy_factors(const ParamSet<S>& p, const std::vector<S>& t) {
  const int n = p.n;
  auto r = r_rat(p);
  std::vector<MonoFactor<S>> fs;
  for (int i = 1; i <= n; ++i) fs.push_back({r, {0, i}, S(1) / t[i - 1]});
  fs.push_back({k_rat(p), {0}, S(1)});
  for (int i = n; i >= 1; --i) fs.push_back({r, {i, 0}, t[i - 1]});
  return fs;
}

template <class S>
Mat<S> monodromy_U(const ParamSet<S>& p, const S& x, const std::vector<S>& t) {
  const int L = p.n + 1;
  Mat<S> U = identity<S>(1 << L);
  for (auto& f : monodromy_factors(p, t)) U = U * place<S>(f.f.value(S(f.a * x)), f.legs, L);
  return U;
}

// the rcheck form: rc_{01}(x/t_1) rc_{12}(x/t_2) ... rc_{n-1,n}(x/t_n) k_n(x) rc_{n-1,n}(x t_n) ... rc_{01}(x t_1)
template <class S>
Mat<S> monodromy_U_check(const ParamSet<S>& p, const S& x, const std::vector<S>& t) {
  const int n = p.n, L = n + 1;
  Mat<S> U = identity<S>(1 << L);
  for (int i = 1; i <= n; ++i) U = U * place<S>(rcheck_mat(p, S(x / t[i - 1])), {i - 1, i}, L);
  U = U * place<S>(k_mat(p, x), {n}, L);
  for (int i = n; i >= 1; --i) U = U * place<S>(rcheck_mat(p, S(x * t[i - 1])), {i - 1, i}, L);
  return U;
}

template <class S>
Mat<S> transfer_T(const ParamSet<S>& p, const S& x, const std::vector<S>& t) {
  const int L = p.n + 1;
  Mat<S> th = theta_mat(p);
  Mat<S> B = place<S>(th * kbar_mat(p, S(p.kappa * p.kappa * x)) * th, {0}, L);
  return ptrace0<S>(B * monodromy_U(p, x, t));
}

template <class S>
struct ValDer {
  Mat<S> val, der;
};

// T(x;t) and dT/dx by the product rule over the monodromy factors
template <class S>
ValDer<S> transfer_T_diff(const ParamSet<S>& p, const S& x, const std::vector<S>& t) {
  const int L = p.n + 1, D = 1 << L;
  const S k2 = p.kappa * p.kappa;
  Mat<S> th = theta_mat(p);
  auto kb = kbar_rat(p);
  std::vector<Mat<S>> V, Dv;
  V.push_back(place<S>(th * kb.value(S(k2 * x)) * th, {0}, L));
  Dv.push_back(place<S>(th * kb.deriv(S(k2 * x)) * th, {0}, L) * k2);
  for (auto& f : monodromy_factors(p, t)) {
    V.push_back(place<S>(f.f.value(S(f.a * x)), f.legs, L));
    Dv.push_back(place<S>(f.f.deriv(S(f.a * x)), f.legs, L) * f.a);
  }
  const size_t m = V.size();
  std::vector<Mat<S>> pre(m + 1), suf(m + 1);
  pre[0] = identity<S>(D);
  for (size_t k = 0; k < m; ++k) pre[k + 1] = pre[k] * V[k];
  suf[m] = identity<S>(D);
  for (size_t k = m; k-- > 0;) suf[k] = V[k] * suf[k + 1];
  Mat<S> der = Mat<S>::Zero(D, D);
  for (size_t k = 0; k < m; ++k) der += pre[k] * Dv[k] * suf[k + 1];
  return {ptrace0<S>(pre[m]), ptrace0<S>(der)};
}

template <class S>
S Phi(const ParamSet<S>& p, const S& x) {
  const S k2 = p.kappa * p.kappa;
  return (S(1) - x) * (S(1) - k2 * k2 * x) / ((S(1) - k2 * x) * (S(1) - k2 * x));
}

template <class S>
S Phi_bdy(const ParamSet<S>& p, const S& x) {
  const S k = p.kappa, k2 = k * k, k0 = p.kappa0, u0 = p.upsilon0;
  return k * (S(1) - k0 * u0 * x) * (S(1) + k0 * x / u0) * (S(1) - k2 * k2 * x * x) /
         ((S(1) - k2 * k0 * u0 * x) * (S(1) + k2 * k0 * x / u0) * (S(1) - k2 * x * x));
}

// theta1^-1 theta2^-1 r^{T1}(kappa^-4/x) theta1 theta2 r^{T2}(x) - Phi(x) Id
template <class S>
double crossing_unitarity_residual(const ParamSet<S>& p, const S& x) {
  const S k2 = p.kappa * p.kappa;
  Mat<S> th = theta_mat(p), thi = th.inverse();
  Mat<S> tt = place<S>(th, {0}, 2) * place<S>(th, {1}, 2);
  Mat<S> tti = place<S>(thi, {0}, 2) * place<S>(thi, {1}, 2);
  Mat<S> lhs = tti * partial_transpose<S>(r_mat(p, S(S(1) / (k2 * k2 * x))), 0) * tt * partial_transpose<S>(r_mat(p, x), 1);
  return residual(lhs, Phi(p, x) * identity<S>(4));
}

template <class S>
double pt_symmetry_residual(const ParamSet<S>& p, const S& x) {
  Mat<S> r = r_mat(p, x), P = flip<S>();
  return residual(Mat<S>(P * r * P), Mat<S>(r.transpose()));
}

template <class S>
double boundary_crossing_residual(const ParamSet<S>& p, const S& x) {
  Mat<S> th = theta_mat(p);
  Mat<S> M = place<S>(th * kbar_mat(p, S(p.kappa * p.kappa * x)) * th, {0}, 2) * rcheck_mat(p, S(x * x));
  return residual(ptrace0<S>(M), Phi_bdy(p, x) * kbar_mat(p, x));
}

inline Residuals check_boundary_crossing(const ParamSet<cd>& p, int samples, std::uint64_t seed) {
  detail::Draw dr(seed);
  Residuals out{{"boundary_crossing", 0.0}, {"crossing_unitarity", 0.0}, {"pt_symmetry", 0.0}};
  for (int s = 0; s < samples; ++s) {
    auto r = with_resample(dr, [&](detail::Draw& d) {
      cd x = d.point();
      return std::array<double, 3>{boundary_crossing_residual(p, x), crossing_unitarity_residual(p, x), pt_symmetry_residual(p, x)};
    });
    out["boundary_crossing"] = std::max(out["boundary_crossing"], r[0]);
    out["crossing_unitarity"] = std::max(out["crossing_unitarity"], r[1]);
    out["pt_symmetry"] = std::max(out["pt_symmetry"], r[2]);
  }
  return out;
}

// ---- Hamiltonians ----

enum class HamForm { transfer, transfer_fd, pauli, tl, pauli_displayed, tl_displayed };

inline HamForm parse_ham_form(const std::string& s) {
  if (s == "transfer") return HamForm::transfer;
  if (s == "transfer_fd") return HamForm::transfer_fd;
  if (s == "pauli") return HamForm::pauli;
  if (s == "tl") return HamForm::tl;
  if (s == "pauli_displayed") return HamForm::pauli_displayed;
  if (s == "tl_displayed") return HamForm::tl_displayed;
  throw std::invalid_argument("unknown hamiltonian form: " + s);
}

inline const char* ham_form_name(HamForm f) {
  switch (f) {
    case HamForm::transfer: return "transfer";
    case HamForm::transfer_fd: return "transfer_fd";
    case HamForm::pauli: return "pauli";
    case HamForm::tl: return "tl";
    case HamForm::pauli_displayed: return "pauli_displayed";
    default: return "tl_displayed";
  }
}

template <class S>
S boundary_factor(const S& kj, const S& uj) {
  S v = (S(1) - kj * uj) * (S(1) + kj / uj);
  if (absd(v) < 1e-10) throw NonGeneric("derivative singularity at boundary parameters");
  return v;
}

template <class S>
S ham_C0(const ParamSet<S>& p) {
  const S k = p.kappa, k2 = k * k, k0 = p.kappa0, u0 = p.upsilon0;
  return -S(1) / (k * (S(1) + k2)) * (k2 - k0 * u0) * (k2 + k0 / u0) / boundary_factor(k0, u0);
}

template <class S>
S ham_Ctilde(const ParamSet<S>& p) {
  const S k = p.kappa;
  S s = (S(1) + p.kappa0 * p.kappa0) / boundary_factor(p.kappa0, p.upsilon0) +
        (S(1) + p.kappan * p.kappan) / boundary_factor(p.kappan, p.upsilonn);
  return (k - S(1) / k) / S(2) * s - S(static_cast<double>(p.n - 1)) / S(4) * (k + S(1) / k);
}

// d_0, d_n of the TL form
template <class S>
S ham_d(const ParamSet<S>& p, int j) {
  const S k = p.kappa, kj = j == 0 ? p.kappa0 : p.kappan, uj = j == 0 ? p.upsilon0 : p.upsilonn;
  return -kj * (k / kj + kj / k) / boundary_factor(kj, uj);
}

template <class S>
Mat<S> hamiltonian_tl(const SpinRep<S>& r, bool displayed = false) {
  const auto& p = r.params;
  const int n = r.n;
  const S k = p.kappa;
  const S bf = displayed ? S(1) : k - S(1) / k;
  Mat<S> H = Mat<S>::Zero(r.dim, r.dim);
  for (int i = 1; i < n; ++i) H += r.e[i];
  H += bf * (ham_d(p, 0) * r.e[0] + ham_d(p, n) * r.e[n]);
  return H;
}

template <class S>
Mat<S> hamiltonian_pauli(const ParamSet<S>& p, bool displayed = false) {
  const int n = p.n, D = 1 << n;
  const S k = p.kappa, k0 = p.kappa0, kn = p.kappan, u0 = p.upsilon0, un = p.upsilonn;
  const S I(0, 1);
  Mat<S> sx(2, 2), sy(2, 2), sz(2, 2), sp(2, 2), sm(2, 2);
  sx << S(0), S(1), S(1), S(0);
  sy << S(0), -I, I, S(0);
  sz << S(1), S(0), S(0), S(-1);
  sp << S(0), S(1), S(0), S(0);
  sm << S(0), S(0), S(1), S(0);
  auto on = [&](const Mat<S>& A, int leg) { return place<S>(A, {leg}, n); };
  Mat<S> H = Mat<S>::Zero(D, D);
  for (int i = 0; i + 1 < n; ++i)
    H += on(sx, i) * on(sx, i + 1) + on(sy, i) * on(sy, i + 1) + (k + S(1) / k) / S(2) * on(sz, i) * on(sz, i + 1);
  // the displayed boundary terms carry the opposite sign on the sigma^+- parts
  const S sg = displayed ? S(1) : S(-1);
  Mat<S> B0 = ((S(1) + k0 * u0) * (S(1) - k0 / u0) * on(sz, 0) + sg * S(4) * k0 * (p.psi0 * on(sp, 0) + S(1) / p.psi0 * on(sm, 0))) /
              ((S(1) + k0 / u0) * (S(1) - k0 * u0));
  Mat<S> Bn = ((S(1) + kn * un) * (S(1) - kn / un) * on(sz, n - 1) - sg * S(4) * kn * (S(1) / p.psin * on(sp, n - 1) + p.psin * on(sm, n - 1))) /
              ((S(1) + kn / un) * (S(1) - kn * un));
  H += (k - S(1) / k) / S(2) * (B0 - Bn);
  H /= S(2);
  H += ham_Ctilde(p) * identity<S>(D);
  return H;
}

template <class S>
S kbar_trace_norm(const ParamSet<S>& p, const S& x, bool deriv) {
  Mat<S> th = theta_mat(p);
  auto kb = kbar_rat(p);
  const S k2 = p.kappa * p.kappa;
  return deriv ? S((th * kb.deriv(S(k2 * x)) * th).trace() * k2) : S((th * kb.value(S(k2 * x)) * th).trace());
}

// (kappa - 1/kappa)/2 d/dx log(T(x;1)/c(x)) at x = 1, minus C0
template <class S>
Mat<S> hamiltonian_transfer(const ParamSet<S>& p) {
  const int n = p.n;
  std::vector<S> one(n, S(1));
  auto vd = transfer_T_diff(p, S(1), one);
  S c = kbar_trace_norm(p, S(1), false), dc = kbar_trace_norm(p, S(1), true);
  Mat<S> M = vd.val / c;
  Mat<S> dM = vd.der / c - vd.val * (dc / (c * c));
  const S k = p.kappa;
  Mat<S> L = M.fullPivLu().solve(dM);
  return (k - S(1) / k) / S(2) * L - ham_C0(p) * identity<S>(1 << n);
}

// central difference with a complex step
template <class S>
Mat<S> hamiltonian_transfer_fd(const ParamSet<S>& p, double step = 1e-6) {
  const int n = p.n;
  std::vector<S> one(n, S(1));
  const S h = S(step / std::sqrt(2.0), step / std::sqrt(2.0));
  auto M = [&](const S& x) { return Mat<S>(transfer_T(p, x, one) / kbar_trace_norm(p, x, false)); };
  Mat<S> M1 = M(S(1));
  Mat<S> dM = (M(S(1) + h) - M(S(1) - h)) / (S(2) * h);
  const S k = p.kappa;
  return (k - S(1) / k) / S(2) * M1.fullPivLu().solve(dM) - ham_C0(p) * identity<S>(1 << n);
}

template <class S>
Mat<S> hamiltonian(const SpinRep<S>& r, HamForm f) {
  switch (f) {
    case HamForm::transfer: return hamiltonian_transfer(r.params);
    case HamForm::transfer_fd: return hamiltonian_transfer_fd(r.params);
    case HamForm::pauli: return hamiltonian_pauli(r.params, false);
    case HamForm::pauli_displayed: return hamiltonian_pauli(r.params, true);
    case HamForm::tl: return hamiltonian_tl(r, false);
    default: return hamiltonian_tl(r, true);
  }
}

// rcheck'(1) = e / (kappa - 1/kappa) on two legs
template <class S>
double rcheck_derivative_residual(const ParamSet<S>& p) {
  Mat<S> d = r_rat(p).deriv(S(1)) * flip<S>();
  return residual(d, local_ei(p.kappa) / (p.kappa - S(1) / p.kappa));
}

template <class S>
std::vector<S> reflect_point(const std::vector<S>& t, int j, const S& q) {
  return act_point(WeylElem::generator(j, static_cast<int>(t.size())), t, q);
}

// T(x;t) rc_{i,i+1}(t_i/t_{i+1}) = rc_{i,i+1}(t_i/t_{i+1}) T(x; s_i t), and the k_n analogue
template <class S>
Residuals transfer_exchange_residuals(const ParamSet<S>& p, const S& x, const std::vector<S>& t) {
  const int n = p.n;
  Residuals out;
  Mat<S> T = transfer_T(p, x, t);
  for (int i = 1; i < n; ++i) {
    Mat<S> R = place<S>(rcheck_mat(p, S(t[i - 1] / t[i])), {i - 1, i}, n);
    Mat<S> Ts = transfer_T(p, x, reflect_point(t, i, p.q()));
    out["exchange_r_" + std::to_string(i)] = residual(T * R, R * Ts);
  }
  Mat<S> K = place<S>(k_mat(p, t[n - 1]), {n - 1}, n);
  out["exchange_k"] = residual(T * K, K * transfer_T(p, x, reflect_point(t, n, p.q())));
  return out;
}

// both interpolation identities at q = 1
template <class S>
Residuals check_transfer_vs_transport(const SpinRep<S>& r, int i, const std::vector<S>& t) {
  const auto& p = r.params;
  const QPair<S> q1{S(1), S(1)};
  Residuals out;
  const S ti = t[i - 1];
  Mat<S> C = transport_C_tau<S>(r, i, t, q1);
  Mat<S> T1 = transfer_T(p, S(S(1) / ti), t), T2 = transfer_T(p, ti, t);
  out["interp_inverse"] = residual(T1, Phi_bdy(p, S(S(1) / ti)) * C);
  out["interp_direct"] = residual(T2, Phi_bdy(p, ti) * Mat<S>(C.inverse()));
  // T(t_i)T(1/t_i) is a multiple of the identity
  out["interp_product"] = residual(T2 * T1, Phi_bdy(p, ti) * Phi_bdy(p, S(S(1) / ti)) * identity<S>(r.dim));
  return out;
}

}  // namespace daha
