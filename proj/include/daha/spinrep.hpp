#pragma once

#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "scalar.hpp"
#include "weyl.hpp"

namespace daha {

enum class BasisTag { spin, matchings, monomials };

inline const char* basis_name(BasisTag b) {
  switch (b) {
    case BasisTag::spin: return "spin";
    case BasisTag::matchings: return "matchings";
    default: return "monomials";
  }
}

template <class S>
struct LinOp {
  Mat<S> m;
  BasisTag basis = BasisTag::spin;
  int dim() const { return static_cast<int>(m.rows()); }
};

template <class S>
json linop_to_json(const Mat<S>& m, BasisTag b) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cd_json(to_cd(m(i, j))));
    rows.push_back(row);
  }
  return {{"basis_tag", basis_name(b)}, {"dim", m.rows()}, {"entries", rows}};
}

// Matrix acting on the tensor legs `legs` (0-based, big-endian, leg 0 most significant)
// of an L-fold tensor power of C^2. A is 2^|legs| square in the order given by `legs`.
template <class S>
Mat<S> place(const Mat<S>& A, const std::vector<int>& legs, int L) {
  const int m = static_cast<int>(legs.size());
  const int D = 1 << L, d = 1 << m;
  if (A.rows() != d || A.cols() != d) throw std::invalid_argument("place: operator size does not match legs");
  Mat<S> M = Mat<S>::Zero(D, D);
  std::vector<int> shift(m);
  int mask = 0;
  for (int k = 0; k < m; ++k) {
    shift[k] = L - 1 - legs[k];
    mask |= 1 << shift[k];
  }
  for (int a = 0; a < D; ++a) {
    int ia = 0;
    for (int k = 0; k < m; ++k) ia = (ia << 1) | ((a >> shift[k]) & 1);
    const int rest = a & ~mask;
    for (int jb = 0; jb < d; ++jb) {
      const S& v = A(jb, ia);
      if (v == S(0)) continue;
      int b = rest;
      for (int k = 0; k < m; ++k) b |= ((jb >> (m - 1 - k)) & 1) << shift[k];
      M(b, a) += v;
    }
  }
  return M;
}

template <class S>
struct TLParams {
  S delta0, delta, deltan;
};

template <class S>
TLParams<S> delta_from_kappa(const ParamSet<S>& p) {
  const S k = p.kappa;
  S d0 = k / p.kappa0 + p.kappa0 / k, dn = k / p.kappan + p.kappan / k;
  if (absd(d0) < 1e-12 || absd(dn) < 1e-12) throw NonGeneric("parameter mismatch singularity");
  TLParams<S> t;
  t.delta = -(k + S(1) / k);
  if (absd(t.delta) < 1e-12) throw NonGeneric("delta = -(kappa + 1/kappa) vanishes");
  t.delta0 = -(p.kappa0 + S(1) / p.kappa0) / d0;
  t.deltan = -(p.kappan + S(1) / p.kappan) / dn;
  return t;
}

template <class S>
S tl_delta(const TLParams<S>& d, int j, int n) {
  return j == 0 ? d.delta0 : (j == n ? d.deltan : d.delta);
}

// local matrices of the two-boundary TL generators
template <class S>
Mat<S> local_e0(const ParamSet<S>& p) {
  S den = p.kappa / p.kappa0 + p.kappa0 / p.kappa;
  Mat<S> e(2, 2);
  e << -S(1) / p.kappa0, p.psi0, S(1) / p.psi0, -p.kappa0;
  return e / den;
}

template <class S>
Mat<S> local_en(const ParamSet<S>& p) {
  S den = p.kappa / p.kappan + p.kappan / p.kappa;
  Mat<S> e(2, 2);
  e << -p.kappan, S(1) / p.psin, p.psin, -S(1) / p.kappan;
  return e / den;
}

template <class S>
Mat<S> local_ei(const S& k) {
  Mat<S> e = Mat<S>::Zero(4, 4);
  e(1, 1) = -k;
  e(1, 2) = S(1);
  e(2, 1) = S(1);
  e(2, 2) = -S(1) / k;
  return e;
}

// Hecke generators T_j, their inverses and the kappa_j they satisfy quadratic relations for
template <class S>
struct HeckeRep {
  int n = 0;
  int dim = 0;
  std::vector<Mat<S>> T, Ti;
  std::vector<S> kap;
  ParamSet<S> params;
};

template <class S>
struct SpinRep : HeckeRep<S> {
  std::vector<Mat<S>> e;
  TLParams<S> tl;
};

constexpr int spin_n_cap = 10;

template <class S>
SpinRep<S> build_spin_rep(const ParamSet<S>& p) {
  const int n = p.n;
  if (n < 1) throw Refusal("build_spin_rep: n must be >= 1");
  if (n > spin_n_cap) throw Refusal("build_spin_rep: n exceeds size cap " + std::to_string(spin_n_cap));
  SpinRep<S> r;
  r.n = n;
  r.dim = 1 << n;
  r.params = p;
  r.tl = delta_from_kappa(p);
  r.e.resize(n + 1);
  r.e[0] = place<S>(local_e0(p), {0}, n);
  for (int i = 1; i < n; ++i) r.e[i] = place<S>(local_ei(p.kappa), {i - 1, i}, n);
  r.e[n] = place<S>(local_en(p), {n - 1}, n);
  const Mat<S> I = identity<S>(r.dim);
  for (int j = 0; j <= n; ++j) {
    S kj = p.kap(j);
    r.kap.push_back(kj);
    S c = (j == 0 || j == n) ? p.kappa / kj + kj / p.kappa : S(1);
    Mat<S> T = kj * I + c * r.e[j];
    r.T.push_back(T);
    r.Ti.push_back(T + (S(1) / kj - kj) * I);
  }
  return r;
}

using Residuals = std::map<std::string, double>;

// quadratic relations and the four braid families of the affine braid group
template <class S>
Residuals check_hecke_relations(const HeckeRep<S>& r) {
  Residuals out;
  const int n = r.n;
  const Mat<S> I = identity<S>(r.dim);
  for (int j = 0; j <= n; ++j) {
    const auto& T = r.T[j];
    out["quadratic_" + std::to_string(j)] = residual(T * T, (r.kap[j] - S(1) / r.kap[j]) * T + I);
    out["inverse_" + std::to_string(j)] = residual(T * r.Ti[j], I);
  }
  if (n < 2) return out;
  for (int i = 0; i < n; ++i) {
    const auto &A = r.T[i], &B = r.T[i + 1];
    bool four = (i == 0 || i + 1 == n);
    Mat<S> l = four ? Mat<S>(A * B * A * B) : Mat<S>(A * B * A);
    Mat<S> rr = four ? Mat<S>(B * A * B * A) : Mat<S>(B * A * B);
    out["braid_" + std::to_string(i) + "_" + std::to_string(i + 1)] = residual(l, rr);
  }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 2; j <= n; ++j)
      out["commute_" + std::to_string(i) + "_" + std::to_string(j)] = residual(r.T[i] * r.T[j], r.T[j] * r.T[i]);
  return out;
}

// TL relations for any family e_0..e_n
template <class S>
Residuals check_tl_relations(const std::vector<Mat<S>>& e, const TLParams<S>& tl) {
  Residuals out;
  const int n = static_cast<int>(e.size()) - 1;
  for (int j = 0; j <= n; ++j)
    out["tl_quadratic_" + std::to_string(j)] = residual(e[j] * e[j], tl_delta(tl, j, n) * e[j]);
  if (n < 2) return out;
  for (int i = 1; i < n; ++i)
    for (int j : {i - 1, i + 1}) out["tl_noncommuting_" + std::to_string(i) + "_" + std::to_string(j)] = residual(e[i] * e[j] * e[i], e[i]);
  for (int i = 0; i <= n; ++i)
    for (int j = i + 2; j <= n; ++j)
      out["tl_commuting_" + std::to_string(i) + "_" + std::to_string(j)] = residual(e[i] * e[j], e[j] * e[i]);
  return out;
}

inline double max_residual(const Residuals& r) {
  double m = 0;
  for (auto& [k, v] : r) m = std::max(m, v);
  return m;
}

// Y_i = T_{i-1}^{-1} ... T_1^{-1} T_0 T_1 ... T_{n-1} T_n T_{n-1} ... T_i
template <class S>
Mat<S> murphy_Y(const HeckeRep<S>& r, int i) {
  const int n = r.n;
  if (i < 1 || i > n) throw std::invalid_argument("murphy_Y: index out of range");
  Mat<S> Y = identity<S>(r.dim);
  for (int j = i - 1; j >= 1; --j) Y = Y * r.Ti[j];
  Y = Y * r.T[0];
  for (int j = 1; j < n; ++j) Y = Y * r.T[j];
  Y = Y * r.T[n];
  for (int j = n - 1; j >= i; --j) Y = Y * r.T[j];
  return Y;
}

// T_w for a word: product T_{w_1} ... T_{w_k}
template <class S>
Mat<S> T_word(const HeckeRep<S>& r, const Word& w) {
  Mat<S> M = identity<S>(r.dim);
  for (int j : w) M = M * r.T[j];
  return M;
}

template <class S>
Vec<S> vplus(int n) {
  Vec<S> v = Vec<S>::Zero(1 << n);
  v(0) = S(1);
  return v;
}

template <class S>
struct PrincipalSeries {
  std::vector<WeylElem> reps;
  Mat<S> V;  // columns v_w
  std::vector<S> zeta;
  double cond = 0;
};

template <class S>
std::vector<S> zeta_point(const ParamSet<S>& p) {
  std::vector<S> z(p.n);
  for (int i = 0; i < p.n; ++i) z[i] = p.psi0 * p.psin * ipow(p.kappa, p.n - 1 - 2 * i);
  return z;
}

template <class S>
PrincipalSeries<S> principal_series_basis(const SpinRep<S>& r, double cond_cap = 1e12) {
  PrincipalSeries<S> ps;
  const int n = r.n;
  ps.reps = min_coset_reps(J_set(n), n);
  ps.V.resize(r.dim, static_cast<Eigen::Index>(ps.reps.size()));
  for (size_t c = 0; c < ps.reps.size(); ++c) {
    Vec<S> v = vplus<S>(n);
    auto w = reduced_word(ps.reps[c]);
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = r.T[*it] * v;
    ps.V.col(c) = v;
  }
  ps.zeta = zeta_point(r.params);
  Eigen::JacobiSVD<Mat<S>> svd(ps.V);
  const auto& sv = svd.singularValues();
  double smax = absd(S(sv(0))), smin = absd(S(sv(sv.size() - 1)));
  ps.cond = smin == 0 ? std::numeric_limits<double>::infinity() : smax / smin;
  if (!(ps.cond < cond_cap)) throw NonGeneric("non-generic principal series point");
  return ps;
}

}  // namespace daha
