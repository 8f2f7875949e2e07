#pragma once

// Scalar layer shared by the whole library: a traits bundle describing the
// active real type (double or dd) and a complex template over it.
// std::complex is specified only for float/double/long double, so the
// library carries its own minimal complex type and uses it uniformly.

#include <cmath>
#include <type_traits>

#include "mbop/dd.hpp"

namespace mbop {

template <class R>
struct real_traits;

template <>
struct real_traits<double> {
  static constexpr double eps = 2.220446049250313e-16;
  static constexpr double cond_limit = 1e12;
  // The convergence estimate is the last inter-level correction, which lags
  // the true error by one level; level_max is one past the level expected to
  // reach tolerance.
  static constexpr int quad_level_min = 6;
  static constexpr int quad_level_max = 9;
  // below this sigma_min/sigma_max a moment section cannot be solved to
  // criterion accuracy in this precision
  static constexpr double hankel_gate = 1e-10;
  static constexpr const char* name = "double";
  static double from_double(double x) { return x; }
};

template <>
struct real_traits<dd> {
  static constexpr double eps = dd_eps;
  static constexpr double cond_limit = 1e28;
  static constexpr int quad_level_min = 6;
  static constexpr int quad_level_max = 11;
  // the gate only needs to catch exact singularity here: the ratio is
  // measured by a double-precision SVD, whose floor for an exactly singular
  // section sits near n * eps
  static constexpr double hankel_gate = 1e-14;
  static constexpr const char* name = "dd";
  static dd from_double(double x) { return dd(x); }
};

template <class R>
struct cplx {
  R re{};
  R im{};

  cplx() = default;
  cplx(const R& r) : re(r) {}
  cplx(const R& r, const R& i) : re(r), im(i) {}

  // Lets double literals participate directly when R is dd.
  template <class T>
    requires(std::is_arithmetic_v<T> && !std::is_same_v<R, double>)
  cplx(T r) : re(R(double(r))) {}

  template <class T, class U>
    requires(std::is_arithmetic_v<T> && std::is_arithmetic_v<U> &&
             !std::is_same_v<R, double>)
  cplx(T r, U i) : re(R(double(r))), im(R(double(i))) {}
};

template <class R>
inline const R& real(const cplx<R>& z) {
  return z.re;
}
template <class R>
inline const R& imag(const cplx<R>& z) {
  return z.im;
}

template <class R>
inline cplx<R> conj(const cplx<R>& z) {
  return cplx<R>(z.re, -z.im);
}

template <class R>
inline cplx<R> operator-(const cplx<R>& z) {
  return cplx<R>(-z.re, -z.im);
}
template <class R>
inline cplx<R> operator+(const cplx<R>& z) {
  return z;
}

template <class R>
inline cplx<R> operator+(const cplx<R>& a, const cplx<R>& b) {
  return cplx<R>(a.re + b.re, a.im + b.im);
}
template <class R>
inline cplx<R> operator-(const cplx<R>& a, const cplx<R>& b) {
  return cplx<R>(a.re - b.re, a.im - b.im);
}
template <class R>
inline cplx<R> operator*(const cplx<R>& a, const cplx<R>& b) {
  return cplx<R>(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

// Smith's algorithm: scales by the dominant component of the divisor.
template <class R>
inline cplx<R> operator/(const cplx<R>& a, const cplx<R>& b) {
  using std::abs;
  if (abs(b.re) >= abs(b.im)) {
    R t = b.im / b.re;
    R d = b.re + b.im * t;
    return cplx<R>((a.re + a.im * t) / d, (a.im - a.re * t) / d);
  }
  R t = b.re / b.im;
  R d = b.re * t + b.im;
  return cplx<R>((a.re * t + a.im) / d, (a.im * t - a.re) / d);
}

template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator+(const cplx<R>& a, const S& b) {
  return a + cplx<R>(b);
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator+(const S& a, const cplx<R>& b) {
  return cplx<R>(a) + b;
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator-(const cplx<R>& a, const S& b) {
  return a - cplx<R>(b);
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator-(const S& a, const cplx<R>& b) {
  return cplx<R>(a) - b;
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator*(const cplx<R>& a, const S& b) {
  return a * cplx<R>(b);
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator*(const S& a, const cplx<R>& b) {
  return cplx<R>(a) * b;
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator/(const cplx<R>& a, const S& b) {
  return a / cplx<R>(b);
}
template <class R, class S>
  requires(std::is_convertible_v<S, cplx<R>> && !std::is_same_v<S, cplx<R>>)
inline cplx<R> operator/(const S& a, const cplx<R>& b) {
  return cplx<R>(a) / b;
}

template <class R>
inline cplx<R>& operator+=(cplx<R>& a, const cplx<R>& b) {
  return a = a + b;
}
template <class R>
inline cplx<R>& operator-=(cplx<R>& a, const cplx<R>& b) {
  return a = a - b;
}
template <class R>
inline cplx<R>& operator*=(cplx<R>& a, const cplx<R>& b) {
  return a = a * b;
}
template <class R>
inline cplx<R>& operator/=(cplx<R>& a, const cplx<R>& b) {
  return a = a / b;
}

template <class R>
inline bool operator==(const cplx<R>& a, const cplx<R>& b) {
  return a.re == b.re && a.im == b.im;
}
template <class R>
inline bool operator!=(const cplx<R>& a, const cplx<R>& b) {
  return !(a == b);
}

template <class R>
inline R norm2(const cplx<R>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class R>
inline R abs(const cplx<R>& z) {
  using std::abs;
  using std::sqrt;
  R ar = abs(z.re), ai = abs(z.im);
  R m = ar > ai ? ar : ai;
  if (m == R(0.0)) return R(0.0);
  R x = z.re / m, y = z.im / m;
  return m * sqrt(x * x + y * y);
}

// Cheap magnitude proxy for pivoting/ordering.
template <class R>
inline R abs1(const cplx<R>& z) {
  using std::abs;
  return abs(z.re) + abs(z.im);
}

template <class R>
inline R arg(const cplx<R>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

template <class R>
inline cplx<R> exp(const cplx<R>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  R e = exp(z.re);
  return cplx<R>(e * cos(z.im), e * sin(z.im));
}

// Principal branch: Im log in (-pi, pi].
template <class R>
inline cplx<R> log(const cplx<R>& z) {
  using std::log;
  return cplx<R>(log(abs(z)), arg(z));
}

// Principal branch square root (Re >= 0, cut on the negative real axis).
template <class R>
inline cplx<R> sqrt(const cplx<R>& z) {
  using std::abs;
  using std::sqrt;
  R r = mbop::abs(z);
  if (r == R(0.0)) return cplx<R>(R(0.0), R(0.0));
  if (z.re >= R(0.0)) {
    R w = sqrt((r + z.re) * 0.5);
    return cplx<R>(w, z.im / (w * 2.0));
  }
  R w = sqrt((r - z.re) * 0.5);  // |Im sqrt(z)|, dominant when Re z < 0
  return cplx<R>(abs(z.im) / (w * 2.0), z.im < R(0.0) ? -w : w);
}

template <class R>
inline bool isfinite(const cplx<R>& z) {
  using std::isfinite;
  return isfinite(z.re) && isfinite(z.im);
}

template <class R>
inline cplx<R> to_cplx_double(const cplx<R>& z);

inline cplx<double> to_cplx_double_impl(const cplx<double>& z) { return z; }
inline cplx<double> to_cplx_double_impl(const cplx<dd>& z) {
  return cplx<double>(to_double(z.re), to_double(z.im));
}

// Downcast used by double-only validation paths (eigengates, SVD).
template <class R>
inline cplx<double> down(const cplx<R>& z) {
  return to_cplx_double_impl(z);
}

using cd = cplx<double>;

}  // namespace mbop
