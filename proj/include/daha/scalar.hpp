#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace daha {

using cd = std::complex<double>;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<cd> {
  static constexpr const char* name = "double";
  static constexpr int digits10 = 15;
};

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
inline S cplx(double re, double im = 0.0) {
  return S(re, im);
}

template <class S>
inline double absd(const S& z) {
  using std::abs;
  return static_cast<double>(abs(z));
}

template <class S>
inline double real_d(const S& z) {
  return static_cast<double>(z.real());
}

template <class S>
inline double imag_d(const S& z) {
  return static_cast<double>(z.imag());
}

template <class S>
inline cd to_cd(const S& z) {
  return cd(real_d(z), imag_d(z));
}

template <class S>
inline S from_cd(const cd& z) {
  return S(z.real(), z.imag());
}

template <class S>
inline S ipow(S x, int k) {
  S r(1);
  if (k < 0) {
    x = S(1) / x;
    k = -k;
  }
  while (k) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

template <class S>
inline S csqrt(const S& z) {
  using std::sqrt;
  return sqrt(z);
}

template <class D>
double max_abs(const Eigen::MatrixBase<D>& a) {
  double m = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) m = std::max(m, absd(a(i, j)));
  return m;
}

// max|A-B| / max(max|A|, max|B|)
template <class DA, class DB>
double residual(const Eigen::MatrixBase<DA>& a0, const Eigen::MatrixBase<DB>& b0) {
  using S = typename DA::Scalar;
  const Mat<S> a = a0, b = b0;
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("residual: shape mismatch");
  double d = max_abs(a - b);
  double s = std::max(max_abs(a), max_abs(b));
  if (s == 0) return d;
  return d / s;
}

template <class S>
Mat<S> identity(int d) {
  return Mat<S>::Identity(d, d);
}

enum class Precision { dbl, extended };

struct ScalarPolicy {
  Precision mode = Precision::dbl;
  double tolerance = 1e-9;
};

}  // namespace daha
