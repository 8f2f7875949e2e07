#pragma once

// Tanh-sinh quadrature on (0,1) under the substitution
//   t(u) = 1/(1 + e^{-2s}),  s = (pi/2) sinh u,  dt/du = pi t(1-t) cosh u,
// with nested levels h = 2^-k so each refinement reuses previous nodes.
// Every node carries t, 1-t, ln t and ln(1-t) computed in log space, so
// integrands with algebraic/log endpoint behavior never see cancellation
// at the ends.  Cauchy transforms get a subtracted kernel near the cut.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "mbop/error.hpp"
#include "mbop/matrix.hpp"

namespace mbop {

template <class R>
inline R const_pi();
template <>
inline double const_pi<double>() {
  return 3.14159265358979323846;
}
template <>
inline dd const_pi<dd>() {
  return dd_pi;
}

template <class R>
struct QuadNode {
  R t, omt;      // t and 1-t, each accurate near its own endpoint
  R lnt, lnomt;  // ln t, ln(1-t)
  R w;           // dt/du
};

namespace detail {

template <class R>
inline QuadNode<R> make_node(double u_) {
  using std::exp;
  using std::log1p;
  R u = real_traits<R>::from_double(u_);
  R eu = exp(u);
  R sh = (eu - R(1.0) / eu) * 0.5;
  R ch = (eu + R(1.0) / eu) * 0.5;
  R s = const_pi<R>() * 0.5 * sh;
  QuadNode<R> n;
  if (u_ >= 0.0) {
    R q = exp(s * (-2.0));
    R opq = R(1.0) + q;
    n.t = R(1.0) / opq;
    n.omt = q / opq;
    n.lnt = -log1p(q);
    n.lnomt = -(s * 2.0 + log1p(q));
    n.w = const_pi<R>() * (q / (opq * opq)) * ch;
  } else {
    R q = exp(s * 2.0);
    R opq = R(1.0) + q;
    n.t = q / opq;
    n.omt = R(1.0) / opq;
    n.lnt = s * 2.0 - log1p(q);
    n.lnomt = -log1p(q);
    n.w = const_pi<R>() * (q / (opq * opq)) * ch;
  }
  return n;
}

}  // namespace detail

struct QuadOptions {
  int level_min = -1;   // -1: take the scalar type's default
  int level_max = -1;
  double tol = -1.0;    // relative step-to-step tolerance
  double u_cap = 7.5;
};

template <class R>
struct QuadResult {
  Mat<R> value;
  double est_error = 0.0;
  int level = 0;
};

// f: (const QuadNode<R>&) -> Mat<R>.  Throws QuadratureNotConverged when the
// inter-level correction does not reach tol by level_max.
template <class R, class F>
inline QuadResult<R> integrate_01(F&& f, const QuadOptions& opt = {},
                                  const char* ctx = "integrate_01") {
  int kmin = opt.level_min > 0 ? opt.level_min : real_traits<R>::quad_level_min;
  int kmax = opt.level_max > 0 ? opt.level_max : real_traits<R>::quad_level_max;
  double tol = opt.tol > 0.0 ? opt.tol
                             : (std::is_same_v<R, double> ? 1e-13 : 1e-26);
  double trunc_eps = tol * 1e-2;

  QuadNode<R> center = detail::make_node<R>(0.0);
  Mat<R> fc = f(center);
  Mat<R> acc = fc * cplx<R>(center.w);

  auto march = [&](double h, int dir, bool odd_only, Mat<R>& into) {
    int consec = 0;
    for (int j = 1;; j += odd_only ? 2 : 1) {
      double u = dir * j * h;
      if (std::fabs(u) > opt.u_cap) break;
      QuadNode<R> n = detail::make_node<R>(u);
      if (to_double(n.w) == 0.0) break;
      Mat<R> term = f(n) * cplx<R>(n.w);
      into += term;
      double tn = norm_max(term);
      double an = std::max(norm_max(into), 1e-300);
      if (tn <= trunc_eps * an && std::fabs(u) >= 2.5) {
        if (++consec >= 3) break;
      } else {
        consec = 0;
      }
    }
  };

  march(std::ldexp(1.0, -kmin), +1, false, acc);
  march(std::ldexp(1.0, -kmin), -1, false, acc);
  Mat<R> prev = acc * cplx<R>(real_traits<R>::from_double(std::ldexp(1.0, -kmin)));

  double est = -1.0;
  for (int k = kmin + 1; k <= kmax; ++k) {
    double h = std::ldexp(1.0, -k);
    Mat<R> fresh = Mat<R>::zero(prev.rows, prev.cols);
    march(h, +1, true, fresh);
    march(h, -1, true, fresh);
    Mat<R> cur = prev * 0.5 + fresh * cplx<R>(real_traits<R>::from_double(h));
    est = norm_max(cur - prev) / std::max(1.0, norm_max(cur));
    prev = cur;
    if (est <= tol) return {prev, est, k};
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, ": estimated error %.3e above tolerance %.3e",
                est, tol);
  fail(ErrorCode::QuadratureNotConverged, std::string(ctx) + buf);
}

// Distance from z to the segment [0,1] (double precision is plenty for
// branching decisions).
template <class R>
inline double dist_to_01(const cplx<R>& z) {
  double re = to_double(z.re), im = to_double(z.im);
  double dx = 0.0;
  if (re < 0.0) dx = -re;
  if (re > 1.0) dx = re - 1.0;
  return std::hypot(dx, im);
}

// log((1-z)/(-z)) with principal logs; the Cauchy transform of the constant
// 1 on (0,1).  Signed zeros in Im z are normalized so real z > 1 or z < 0
// give the real value.
template <class R>
inline cplx<R> log_ratio_01(const cplx<R>& z) {
  cplx<R> w = z;
  if (to_double(w.im) == 0.0) w.im = R(0.0);
  cplx<R> a(R(1.0) - w.re, -w.im);
  cplx<R> b(-w.re, -w.im);
  if (to_double(a.im) == 0.0) a.im = R(0.0);
  if (to_double(b.im) == 0.0) b.im = R(0.0);
  return log(a) - log(b);
}

// integral over (0,1) of g(t)/(t-z)^pow dt.  g is node-based like f above.
// pow == 1 close to the cut uses the subtraction
//   integral (g(t)-g(x))/(t-z) + g(x) log((1-z)/(-z)),   x = clamp(Re z),
// which keeps tanh-sinh effective down to |Im z| ~ 1e-3.
template <class R, class G>
inline QuadResult<R> cauchy_01(G&& g, const cplx<R>& z, int pow = 1,
                               QuadOptions opt = {},
                               const char* ctx = "cauchy_01") {
  using std::log;
  double dist = dist_to_01(z);
  const double floor_dist = 1e-3;
  if (dist < floor_dist)
    fail(ErrorCode::TooCloseToCut,
         std::string(ctx) + ": evaluation point within " +
             std::to_string(floor_dist) + " of [0,1]");
  if (pow > 1 && dist < 0.1)
    fail(ErrorCode::TooCloseToCut,
         std::string(ctx) + ": kernel power needs distance >= 0.1");

  double re = to_double(z.re);
  bool interior = re >= 0.05 && re <= 0.95;
  if (pow == 1 && dist < 0.1 && interior) {
    // Subtracted kernel.
    double x_ = std::clamp(re, 0.05, 0.95);
    QuadNode<R> xn;
    xn.t = real_traits<R>::from_double(x_);
    xn.omt = R(1.0) - xn.t;
    {
      using std::log;
      xn.lnt = log(xn.t);
      xn.lnomt = log(xn.omt);
    }
    xn.w = R(0.0);
    Mat<R> gx = g(xn);
    if (opt.level_max < 0)
      opt.level_max = real_traits<R>::quad_level_max + 2;  // narrow feature
    auto res = integrate_01<R>(
        [&](const QuadNode<R>& n) {
          cplx<R> k = cplx<R>(R(1.0)) / cplx<R>(n.t - z.re, -z.im);
          return (g(n) - gx) * k;
        },
        opt, ctx);
    res.value += gx * log_ratio_01(z);
    return res;
  }
  if (dist < 0.1 && opt.level_max < 0)
    opt.level_max = real_traits<R>::quad_level_max + 2;
  return integrate_01<R>(
      [&](const QuadNode<R>& n) {
        cplx<R> d(n.t - z.re, -z.im);
        cplx<R> k = cplx<R>(R(1.0)) / d;
        for (int p = 1; p < pow; ++p) k /= d;
        return g(n) * k;
      },
      opt, ctx);
}

// Polynomial (Neville) extrapolation of matrix samples to parameter 0.
template <class R>
inline Mat<R> extrapolate_to_zero(const std::vector<double>& eps,
                                  std::vector<Mat<R>> vals) {
  int n = int(vals.size());
  if (n == 0 || eps.size() != vals.size())
    fail(ErrorCode::InsufficientDepth, "extrapolate_to_zero: empty ladder");
  for (int m = 1; m < n; ++m) {
    for (int i = 0; i + m < n; ++i) {
      double xi = eps[i], xj = eps[i + m];
      vals[i] = (vals[i + 1] * xi - vals[i] * xj) * (1.0 / (xi - xj));
    }
  }
  return vals[0];
}

}  // namespace mbop
