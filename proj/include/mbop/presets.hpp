#pragma once

// Named weight families used by the test suite and the CLI.  Every builder
// returns a validated weight.

#include <string>

#include "mbop/weight.hpp"

namespace mbop {

namespace detail {

template <class R>
inline Mat<R> scalar1(double v) {
  Mat<R> m(1, 1);
  m(0, 0) = cplx<R>(real_traits<R>::from_double(v));
  return m;
}

template <class R>
inline Mat<R> diag2(double a, double b) {
  Mat<R> m = Mat<R>::zero(2, 2);
  m(0, 0) = cplx<R>(real_traits<R>::from_double(a));
  m(1, 1) = cplx<R>(real_traits<R>::from_double(b));
  return m;
}

template <class R>
inline Mat<R> e12() {
  Mat<R> m = Mat<R>::zero(2, 2);
  m(0, 1) = cplx<R>(R(1.0));
  return m;
}

}  // namespace detail

// w(t) = 1
template <class R>
inline Weight<R> make_legendre() {
  Weight<R> w = Weight<R>::neutral(1, "legendre");
  validate_weight(w);
  return w;
}

// left t^alpha, right (1-t)^beta
template <class R>
inline Weight<R> make_jacobi(double alpha, double beta) {
  Weight<R> w = Weight<R>::neutral(1, "jacobi");
  w.AL = detail::scalar1<R>(alpha);
  w.BR = detail::scalar1<R>(beta);
  validate_weight(w);
  return w;
}

// t^{alpha/2}(1-t)^{beta/2} on each side
template <class R>
inline Weight<R> make_jacobi_sym(double alpha, double beta) {
  Weight<R> w = Weight<R>::neutral(1, "jacobi-sym");
  w.AL = w.AR = detail::scalar1<R>(alpha / 2);
  w.BL = w.BR = detail::scalar1<R>(beta / 2);
  validate_weight(w);
  return w;
}

// the whole algebraic factor on the left
template <class R>
inline Weight<R> make_jacobi_left(double alpha, double beta) {
  Weight<R> w = Weight<R>::neutral(1, "jacobi-left");
  w.AL = detail::scalar1<R>(alpha);
  w.BL = detail::scalar1<R>(beta);
  validate_weight(w);
  return w;
}

// t^alpha (1-t)^beta e^{c t}, all on the left
template <class R>
inline Weight<R> make_jacobi_exp(double alpha, double beta, double c) {
  Weight<R> w = Weight<R>::neutral(1, "jacobi-exp");
  w.AL = detail::scalar1<R>(alpha);
  w.BL = detail::scalar1<R>(beta);
  w.EL = detail::scalar1<R>(c);
  validate_weight(w);
  return w;
}

// left t^{diag(1,0)}, right (1-t)^{diag(0,1)}
template <class R>
inline Weight<R> make_blockdiag() {
  Weight<R> w = Weight<R>::neutral(2, "blockdiag");
  w.AL = detail::diag2<R>(1.0, 0.0);
  w.BR = detail::diag2<R>(0.0, 1.0);
  validate_weight(w);
  return w;
}

// W_L(t) = t^{E12} = I + (ln t) E12: nilpotent algebraic exponent
template <class R>
inline Weight<R> make_nilpotent() {
  Weight<R> w = Weight<R>::neutral(2, "nilpotent");
  w.AL = detail::e12<R>();
  validate_weight(w);
  return w;
}

// W_L(t) = (I + t E12) diag(t (1-t)^{3/2}, t^{1/2}) e^{-t/5}: the
// polynomial factor does not commute with the diagonal part, so the
// Pearson data acquires genuine upper-triangular structure.
template <class R>
inline Weight<R> make_noncommuting() {
  Weight<R> w = Weight<R>::neutral(2, "noncommuting");
  Mat<R> I2 = Mat<R>::identity(2);
  w.HL = MatPoly<R>(std::vector<Mat<R>>{I2, detail::e12<R>()});
  w.AL = detail::diag2<R>(1.0, 0.5);
  w.BL = detail::diag2<R>(1.5, 0.0);
  w.EL = I2 * (-0.2);
  validate_weight(w);
  return w;
}

// w(t) = t - c with c = (1 - 1/sqrt(3))/2: positive leading moments but a
// singular 2x2 moment block, so recurrence construction must stop at n = 2.
template <class R>
inline Weight<R> make_irregular() {
  using std::sqrt;
  Weight<R> w = Weight<R>::neutral(1, "irregular");
  R c = (R(1.0) - R(1.0) / sqrt(R(3.0))) * 0.5;
  Mat<R> c0(1, 1), c1(1, 1);
  c0(0, 0) = cplx<R>(-c);
  c1(0, 0) = cplx<R>(R(1.0));
  w.HL = MatPoly<R>(std::vector<Mat<R>>{c0, c1});
  validate_weight(w);
  return w;
}

// Registry with the parameter choices the verification drivers use.
template <class R>
inline Weight<R> preset_weight(const std::string& name) {
  if (name == "legendre") return make_legendre<R>();
  if (name == "jacobi") return make_jacobi<R>(0.5, 0.5);
  if (name == "jacobi-sym") return make_jacobi_sym<R>(0.5, 0.5);
  if (name == "jacobi-exp") return make_jacobi_exp<R>(0.0, 0.0, 1.0);
  if (name == "blockdiag") return make_blockdiag<R>();
  if (name == "nilpotent") return make_nilpotent<R>();
  if (name == "noncommuting") return make_noncommuting<R>();
  if (name == "irregular") return make_irregular<R>();
  fail(ErrorCode::ConfigInvalid, "unknown weight preset: " + name);
}

}  // namespace mbop
