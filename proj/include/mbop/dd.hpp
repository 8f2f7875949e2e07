#pragma once

// Double-double arithmetic: a value is the unevaluated sum hi + lo of two
// IEEE doubles with |lo| <= ulp(hi)/2, i.e. ~106 significand bits (~31-32
// decimal digits).  Built on the standard error-free transformations; the
// product transform requires a correctly rounded fma, which glibc provides
// on every target we build for.  No fast-math: the algorithms depend on
// IEEE rounding of every intermediate.

#include <cmath>
#include <limits>

namespace mbop {

namespace detail {

inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

// Requires |a| >= |b| (or a == 0); one branchless renormalization step.
inline double quick_two_sum(double a, double b, double& err) {
  double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

}  // namespace detail

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  constexpr dd(int v) : hi(double(v)), lo(0.0) {}
  constexpr dd(long v) : hi(double(v)), lo(0.0) {}
};

inline double to_double(const dd& a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }

inline bool isfinite(const dd& a) { return std::isfinite(a.hi); }

inline dd ldexp(const dd& a, int n) {
  return dd(std::ldexp(a.hi, n), std::ldexp(a.lo, n));
}

inline dd operator-(const dd& a) { return dd(-a.hi, -a.lo); }
inline dd operator+(const dd& a) { return a; }

inline dd operator+(const dd& a, const dd& b) {
  double s1, s2, t1, t2;
  s1 = detail::two_sum(a.hi, b.hi, s2);
  t1 = detail::two_sum(a.lo, b.lo, t2);
  s2 += t1;
  s1 = detail::quick_two_sum(s1, s2, s2);
  s2 += t2;
  s1 = detail::quick_two_sum(s1, s2, s2);
  return dd(s1, s2);
}

inline dd operator+(const dd& a, double b) {
  double s1, s2;
  s1 = detail::two_sum(a.hi, b, s2);
  s2 += a.lo;
  s1 = detail::quick_two_sum(s1, s2, s2);
  return dd(s1, s2);
}

inline dd operator+(double a, const dd& b) { return b + a; }

inline dd operator-(const dd& a, const dd& b) { return a + (-b); }
inline dd operator-(const dd& a, double b) { return a + (-b); }
inline dd operator-(double a, const dd& b) { return (-b) + a; }

inline dd operator*(const dd& a, const dd& b) {
  double p1, p2;
  p1 = detail::two_prod(a.hi, b.hi, p2);
  p2 += a.hi * b.lo + a.lo * b.hi;
  p1 = detail::quick_two_sum(p1, p2, p2);
  return dd(p1, p2);
}

inline dd operator*(const dd& a, double b) {
  double p1, p2;
  p1 = detail::two_prod(a.hi, b, p2);
  p2 += a.lo * b;
  p1 = detail::quick_two_sum(p1, p2, p2);
  return dd(p1, p2);
}

inline dd operator*(double a, const dd& b) { return b * a; }

inline dd sqr(const dd& a) {
  double p1, p2;
  p1 = detail::two_prod(a.hi, a.hi, p2);
  p2 += 2.0 * a.hi * a.lo + a.lo * a.lo;
  p1 = detail::quick_two_sum(p1, p2, p2);
  return dd(p1, p2);
}

// Long division: three quotient digits then renormalize.
inline dd operator/(const dd& a, const dd& b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  double s, e;
  s = detail::quick_two_sum(q1, q2, e);
  dd q(s, e);
  return q + q3;
}

inline dd operator/(const dd& a, double b) {
  double q1 = a.hi / b;
  double p1, p2;
  p1 = detail::two_prod(q1, b, p2);
  dd r = a - dd(p1, p2);
  double q2 = (r.hi + r.lo) / b;
  double s, e;
  s = detail::quick_two_sum(q1, q2, e);
  return dd(s, e);
}

inline dd operator/(double a, const dd& b) { return dd(a) / b; }

inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator+=(dd& a, double b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator-=(dd& a, double b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }
inline dd& operator*=(dd& a, double b) { return a = a * b; }
inline dd& operator/=(dd& a, const dd& b) { return a = a / b; }
inline dd& operator/=(dd& a, double b) { return a = a / b; }

inline bool operator==(const dd& a, const dd& b) {
  return a.hi == b.hi && a.lo == b.lo;
}
inline bool operator!=(const dd& a, const dd& b) { return !(a == b); }
inline bool operator<(const dd& a, const dd& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const dd& a, const dd& b) { return b < a; }
inline bool operator<=(const dd& a, const dd& b) { return !(b < a); }
inline bool operator>=(const dd& a, const dd& b) { return !(a < b); }
inline bool operator==(const dd& a, double b) { return a == dd(b); }
inline bool operator<(const dd& a, double b) { return a < dd(b); }
inline bool operator>(const dd& a, double b) { return a > dd(b); }
inline bool operator<=(const dd& a, double b) { return a <= dd(b); }
inline bool operator>=(const dd& a, double b) { return a >= dd(b); }

inline dd abs(const dd& a) { return (a.hi < 0.0) ? -a : a; }

inline dd floor(const dd& a) {
  double h = std::floor(a.hi);
  if (h != a.hi) return dd(h);
  // hi already integral: the fractional information lives in lo.
  double l = std::floor(a.lo);
  double s, e;
  s = detail::quick_two_sum(h, l, e);
  return dd(s, e);
}

inline dd sqrt(const dd& a) {
  if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
  if (a.hi < 0.0) return dd(std::numeric_limits<double>::quiet_NaN());
  // One Newton step on 1/sqrt from the double seed reaches full precision.
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  dd err = a - sqr(dd(ax));
  return dd(ax) + (err.hi * (x * 0.5));
}

inline dd pow_int(const dd& a, int n) {
  if (n == 0) return dd(1.0);
  dd base = a;
  int m = n < 0 ? -n : n;
  dd r(1.0);
  while (m > 0) {
    if (m & 1) r *= base;
    base = sqr(base);
    m >>= 1;
  }
  return n < 0 ? dd(1.0) / r : r;
}

namespace detail {

// Builds a dd from a decimal literal (digits, optional '.', optional '-').
// Keeps constants honest to the last bit without hand-maintained lo parts:
// the accumulated integer and the power-of-ten scaling are both accurate to
// a couple of dd ulps.
inline dd dd_from_decimal(const char* s) {
  dd v(0.0);
  int frac = 0;
  bool dot = false, neg = false;
  for (const char* p = s; *p; ++p) {
    if (*p == '-') {
      neg = true;
    } else if (*p == '.') {
      dot = true;
    } else {
      v = v * 10.0 + double(*p - '0');
      if (dot) ++frac;
    }
  }
  while (frac > 0) {
    int k = frac > 15 ? 15 : frac;  // 10^k exact in double for k <= 22
    double scale = 1.0;
    for (int i = 0; i < k; ++i) scale *= 10.0;
    v = v / scale;
    frac -= k;
  }
  return neg ? -v : v;
}

}  // namespace detail

inline const dd dd_pi =
    detail::dd_from_decimal("3.14159265358979323846264338327950288419716939937510582097");
inline const dd dd_two_pi = dd_pi * 2.0;
inline const dd dd_pi_half = dd_pi * 0.5;
inline const dd dd_ln2 =
    detail::dd_from_decimal("0.693147180559945309417232121458176568075500134360255254121");

// eps = 2^-104: relative resolution of the format.
inline constexpr double dd_eps = 4.93038065763132e-32;

inline dd exp(const dd& a) {
  if (a.hi <= -709.0) return dd(0.0);
  if (a.hi >= 709.0) return dd(std::numeric_limits<double>::infinity());
  if (a.hi == 0.0 && a.lo == 0.0) return dd(1.0);
  // a = m ln2 + 512 r with |r| <= ln2/1024; Taylor on expm1(r), square out.
  double m = std::floor(a.hi / 0.6931471805599453 + 0.5);
  dd r = (a - dd_ln2 * m) * (1.0 / 512.0);
  dd t = r, s = r;
  for (int k = 2; k < 24; ++k) {
    t = t * r / double(k);
    s += t;
    if (std::fabs(t.hi) < 1e-35) break;
  }
  for (int j = 0; j < 9; ++j) s = s * 2.0 + sqr(s);
  s += 1.0;
  return ldexp(s, int(m));
}

inline dd log(const dd& a) {
  if (a.hi <= 0.0) return dd(std::numeric_limits<double>::quiet_NaN());
  // Newton on exp(x) = a from the double seed; each step doubles the
  // correct bits, two steps leave margin.
  dd x(std::log(a.hi));
  x = x + a * exp(-x) - 1.0;
  x = x + a * exp(-x) - 1.0;
  return x;
}

inline dd log1p(const dd& a) {
  // Small arguments take the alternating series so the result stays
  // relatively accurate; the general log path is only absolutely accurate
  // near 1.
  if (std::fabs(a.hi) < 1e-3) {
    dd term = a, s = a;
    for (int k = 2; k < 16; ++k) {
      term = -(term * a);
      s += term / double(k);
      if (std::fabs(term.hi) / double(k) < 1e-35) break;
    }
    return s;
  }
  return log(dd(1.0) + a);
}

inline void sincos(const dd& a, dd& s, dd& c) {
  // Reduce mod 2*pi, then to |t| <= pi/4 about a quarter turn.
  double m = std::floor(to_double(a) / 6.283185307179586 + 0.5);
  dd r = a - dd_two_pi * m;
  double jd = std::floor(to_double(r) / 1.5707963267948966 + 0.5);
  int j = int(jd);
  dd t = r - dd_pi_half * jd;

  dd tt = sqr(t);
  dd st = t, term = t;
  for (int k = 3; k < 48; k += 2) {
    term = -(term * tt / double(k * (k - 1)));
    st += term;
    if (std::fabs(term.hi) < 1e-35) break;
  }
  dd ct(1.0);
  term = dd(1.0);
  for (int k = 2; k < 48; k += 2) {
    term = -(term * tt / double(k * (k - 1)));
    ct += term;
    if (std::fabs(term.hi) < 1e-35) break;
  }
  switch (((j % 4) + 4) % 4) {
    case 0: s = st; c = ct; break;
    case 1: s = ct; c = -st; break;
    case 2: s = -st; c = -ct; break;
    default: s = -ct; c = st; break;
  }
}

inline dd sin(const dd& a) {
  dd s, c;
  sincos(a, s, c);
  return s;
}

inline dd cos(const dd& a) {
  dd s, c;
  sincos(a, s, c);
  return c;
}

inline dd atan2(const dd& y, const dd& x) {
  if (x.hi == 0.0 && x.lo == 0.0 && y.hi == 0.0 && y.lo == 0.0) return dd(0.0);
  // Newton on the unit circle: rotate the double seed until (cos z, sin z)
  // matches the normalized input.  Stays inside the seed's principal range.
  dd r = sqrt(sqr(x) + sqr(y));
  dd xn = x / r, yn = y / r;
  dd z(std::atan2(to_double(y), to_double(x)));
  dd s, c;
  for (int it = 0; it < 2; ++it) {
    sincos(z, s, c);
    if (std::fabs(xn.hi) > std::fabs(yn.hi)) {
      z = z + (yn - s) / c;
    } else {
      z = z - (xn - c) / s;
    }
  }
  return z;
}

}  // namespace mbop
