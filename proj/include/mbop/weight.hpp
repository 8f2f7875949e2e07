#pragma once

// Matrix weight on (0,1) in factored Pearson form:
//   left  form  W_L(z) = H_L(z) exp(A_L ln z + B_L ln(1-z) + E_L z) W0_L
//   right form  W_R(z) = W0_R exp(A_R ln z + B_R ln(1-z) + E_R z) H_R(z)
// with H_* polynomial and the exponent blocks of each side pairwise
// commuting (validated), so the exponential factor has an exact
// logarithmic derivative.
//
// Branch conventions: ln z has its cut on [0,inf) with arg z in (0,2pi);
// ln(1-z) is the principal log of 1-z (cut z in [1,inf)).  "Above" means
// the boundary value with arg z -> 0+ and arg(1-z) -> -pi on (1,inf);
// "below" means arg z -> 2pi- and arg(1-z) -> +pi.  On (0,1) the above
// values use real logs on both factors.

#include <cmath>
#include <optional>
#include <string>

#include "mbop/eig.hpp"
#include "mbop/error.hpp"
#include "mbop/matfun.hpp"
#include "mbop/matrix.hpp"
#include "mbop/poly.hpp"
#include "mbop/quad.hpp"

namespace mbop {

template <class R>
inline R const_two_pi();
template <>
inline double const_two_pi<double>() {
  return 6.28318530717958647692;
}
template <>
inline dd const_two_pi<dd>() {
  return dd_two_pi;
}

enum class Side { above, below };

namespace detail {

// log z with cut [0,inf), arg in (0,2pi); side resolves points on the cut.
template <class R>
inline cplx<R> log_cut_pos(const cplx<R>& z, Side side) {
  using std::atan2;
  using std::log;
  if (to_double(z.im) == 0.0) {
    if (to_double(z.re) > 0.0)
      return cplx<R>(log(z.re),
                     side == Side::below ? const_two_pi<R>() : R(0.0));
    return cplx<R>(log(-z.re), const_pi<R>());
  }
  R th = atan2(z.im, z.re);
  if (to_double(th) < 0.0) th = th + const_two_pi<R>();
  return cplx<R>(log(abs(z)), th);
}

// principal log(1-z), cut z in [1,inf); side resolves points on the cut.
template <class R>
inline cplx<R> log_one_minus(const cplx<R>& z, Side side) {
  using std::atan2;
  using std::log;
  cplx<R> w(R(1.0) - z.re, -z.im);
  if (to_double(w.im) == 0.0) {
    if (to_double(w.re) > 0.0) return cplx<R>(log(w.re), R(0.0));
    return cplx<R>(log(-w.re),
                   side == Side::below ? const_pi<R>() : -const_pi<R>());
  }
  return cplx<R>(log(abs(w)), atan2(w.im, w.re));
}

template <class R>
inline bool nonzero(const Mat<R>& A) {
  return norm_max(A) > 0.0;
}

}  // namespace detail

template <class R>
struct Weight {
  int N = 1;
  std::string name = "weight";
  MatPoly<R> HL, HR;
  Mat<R> AL, BL, EL, W0L;
  Mat<R> AR, BR, ER, W0R;

  static Weight neutral(int n, std::string nm) {
    Weight w;
    w.N = n;
    w.name = std::move(nm);
    w.HL = MatPoly<R>::constant(Mat<R>::identity(n));
    w.HR = w.HL;
    w.AL = w.BL = w.EL = Mat<R>::zero(n, n);
    w.AR = w.BR = w.ER = w.AL;
    w.W0L = w.W0R = Mat<R>::identity(n);
    return w;
  }

  Mat<R> left(const cplx<R>& z, Side side = Side::above) const {
    bool at0 = to_double(z.re) == 0.0 && to_double(z.im) == 0.0;
    bool at1 = to_double(z.re) == 1.0 && to_double(z.im) == 0.0;
    Mat<R> M = Mat<R>::zero(N, N);
    if (detail::nonzero(AL)) {
      if (at0)
        fail(ErrorCode::ZeroBase,
             name + ": left factor evaluated at 0 with algebraic exponent");
      M += AL * detail::log_cut_pos(z, side);
    }
    if (detail::nonzero(BL)) {
      if (at1)
        fail(ErrorCode::ZeroBase,
             name + ": left factor evaluated at 1 with algebraic exponent");
      M += BL * detail::log_one_minus(z, side);
    }
    if (detail::nonzero(EL)) M += EL * z;
    return HL.eval(z) * mat_exp(M) * W0L;
  }

  Mat<R> right(const cplx<R>& z, Side side = Side::above) const {
    bool at0 = to_double(z.re) == 0.0 && to_double(z.im) == 0.0;
    bool at1 = to_double(z.re) == 1.0 && to_double(z.im) == 0.0;
    Mat<R> M = Mat<R>::zero(N, N);
    if (detail::nonzero(AR)) {
      if (at0)
        fail(ErrorCode::ZeroBase,
             name + ": right factor evaluated at 0 with algebraic exponent");
      M += AR * detail::log_cut_pos(z, side);
    }
    if (detail::nonzero(BR)) {
      if (at1)
        fail(ErrorCode::ZeroBase,
             name + ": right factor evaluated at 1 with algebraic exponent");
      M += BR * detail::log_one_minus(z, side);
    }
    if (detail::nonzero(ER)) M += ER * z;
    return W0R * mat_exp(M) * HR.eval(z);
  }

  // Boundary values on (0,1) with real logs supplied by the caller
  // (quadrature nodes carry them to full precision at the endpoints).
  Mat<R> left_on01(const R& t, const R& lnt, const R& lnomt) const {
    Mat<R> M = Mat<R>::zero(N, N);
    if (detail::nonzero(AL)) M += AL * cplx<R>(lnt);
    if (detail::nonzero(BL)) M += BL * cplx<R>(lnomt);
    if (detail::nonzero(EL)) M += EL * cplx<R>(t);
    return HL.eval(cplx<R>(t)) * mat_exp(M) * W0L;
  }

  Mat<R> right_on01(const R& t, const R& lnt, const R& lnomt) const {
    Mat<R> M = Mat<R>::zero(N, N);
    if (detail::nonzero(AR)) M += AR * cplx<R>(lnt);
    if (detail::nonzero(BR)) M += BR * cplx<R>(lnomt);
    if (detail::nonzero(ER)) M += ER * cplx<R>(t);
    return W0R * mat_exp(M) * HR.eval(cplx<R>(t));
  }

  Mat<R> full_on01(const R& t, const R& lnt, const R& lnomt) const {
    return left_on01(t, lnt, lnomt) * right_on01(t, lnt, lnomt);
  }

  // z(1-z) W_L'(z) W_L(z)^{-1}, exact (no logs appear: the commuting
  // exponent makes the exponential factor cancel).
  Mat<R> left_logderiv(const cplx<R>& z) const {
    Mat<R> H = HL.eval(z);
    Mat<R> Hp = HL.derivative().eval(z);
    Mat<R> Hi = inv(H);
    cplx<R> one(R(1.0));
    cplx<R> sig = z * (one - z);
    Mat<R> inner = AL * (one - z) - BL * z + EL * sig;
    return Hp * Hi * sig + H * inner * Hi;
  }

  // z(1-z) W_R(z)^{-1} W_R'(z)
  Mat<R> right_logderiv(const cplx<R>& z) const {
    Mat<R> H = HR.eval(z);
    Mat<R> Hp = HR.derivative().eval(z);
    Mat<R> Hi = inv(H);
    cplx<R> one(R(1.0));
    cplx<R> sig = z * (one - z);
    Mat<R> inner = AR * (one - z) - BR * z + ER * sig;
    return Hi * inner * H + Hi * Hp * sig;
  }

  // Pearson data: h_L, h_R as matrix polynomials of degree <= 2, recovered
  // by interpolation of the exact log-derivative (lazy, cached).
  const MatPoly<R>& pearson_left() const {
    if (!cache_hL) cache_hL = derive_pearson(true);
    return *cache_hL;
  }
  const MatPoly<R>& pearson_right() const {
    if (!cache_hR) cache_hR = derive_pearson(false);
    return *cache_hR;
  }

  bool right_trivial() const {
    return !detail::nonzero(AR) && !detail::nonzero(BR) &&
           !detail::nonzero(ER) && HR.degree() == 0 &&
           norm_max(HR.coeff(0) - Mat<R>::identity(N)) == 0.0 &&
           norm_max(W0R - Mat<R>::identity(N)) == 0.0;
  }

  // Constant jump factors.  On (0,1):
  //   below = above * C0L^{-1} (left), below = C0R^{-1} * above (right);
  // on (1,inf) both log factors jump, giving C1L / C1R.
  Mat<R> C0L() const {
    return inv(W0L) * mat_exp(AL * cplx<R>(R(0.0), -const_two_pi<R>())) * W0L;
  }
  Mat<R> C0R() const {
    return W0R * mat_exp(AR * cplx<R>(R(0.0), const_two_pi<R>())) * inv(W0R);
  }
  Mat<R> C1L() const {
    return inv(W0L) * mat_exp((AL + BL) * cplx<R>(R(0.0), -const_two_pi<R>())) *
           W0L;
  }
  Mat<R> C1R() const {
    return W0R * mat_exp((AR + BR) * cplx<R>(R(0.0), const_two_pi<R>())) *
           inv(W0R);
  }

 private:
  mutable std::optional<MatPoly<R>> cache_hL, cache_hR;

  MatPoly<R> derive_pearson(bool left_side) const {
    // Chebyshev nodes on (0.15, 0.85): away from endpoint singularities of
    // W itself and off the validation grid.
    double xs[5];
    for (int j = 0; j < 5; ++j)
      xs[j] = 0.5 + 0.35 * std::cos(M_PI * (2 * j + 1) / 10.0);
    Mat<R> V(5, 5), RHS(5, N * N);
    double scale = 1.0;
    for (int i = 0; i < 5; ++i) {
      R x = real_traits<R>::from_double(xs[i]);
      R p(1.0);
      for (int j = 0; j < 5; ++j) {
        V(i, j) = cplx<R>(p);
        p = p * x;
      }
      Mat<R> D = left_side ? left_logderiv(cplx<R>(x)) : right_logderiv(cplx<R>(x));
      scale = std::max(scale, norm_max(D));
      for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) RHS(i, r * N + c) = D(r, c);
    }
    Mat<R> C = qr_solve(V, RHS);
    std::vector<Mat<R>> coeffs(5, Mat<R>::zero(N, N));
    for (int j = 0; j < 5; ++j)
      for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) coeffs[j](r, c) = C(j, r * N + c);
    MatPoly<R> fit(std::move(coeffs));
    for (double xh : {0.35, 0.65}) {
      cplx<R> zh(real_traits<R>::from_double(xh));
      Mat<R> D = left_side ? left_logderiv(zh) : right_logderiv(zh);
      if (norm_max(fit.eval(zh) - D) > 1e-9 * scale)
        fail(ErrorCode::NotPolynomial,
             name + ": logarithmic derivative of the " +
                 (left_side ? "left" : "right") +
                 " factor is not polynomial");
    }
    fit.trim(1e-10 * scale);
    if (fit.degree() > 2)
      fail(ErrorCode::NotPolynomial,
           name + ": logarithmic derivative of the " +
               (left_side ? "left" : "right") + " factor has degree " +
               std::to_string(fit.degree()) + " > 2");
    return fit;
  }
};

template <class R>
inline void validate_weight(const Weight<R>& w) {
  if (w.N < 1) fail(ErrorCode::ConfigInvalid, w.name + ": size must be >= 1");
  auto dims = [&](const Mat<R>& M, const char* what) {
    if (M.rows != w.N || M.cols != w.N)
      fail(ErrorCode::ConfigInvalid,
           w.name + ": " + what + " has wrong dimensions");
  };
  dims(w.AL, "AL"), dims(w.BL, "BL"), dims(w.EL, "EL"), dims(w.W0L, "W0L");
  dims(w.AR, "AR"), dims(w.BR, "BR"), dims(w.ER, "ER"), dims(w.W0R, "W0R");
  if (w.HL.rows != w.N || w.HR.rows != w.N || w.HL.cols != w.N ||
      w.HR.cols != w.N)
    fail(ErrorCode::ConfigInvalid,
         w.name + ": polynomial factor has wrong dimensions");

  auto commuting = [&](const Mat<R>& X, const Mat<R>& Y, const char* what) {
    double s = std::max(1.0, norm_max(X) * norm_max(Y));
    if (norm_max(commutator(X, Y)) > 1e-12 * s)
      fail(ErrorCode::NotCommutative,
           w.name + ": exponent blocks " + what + " do not commute");
  };
  commuting(w.AL, w.BL, "AL,BL");
  commuting(w.AL, w.EL, "AL,EL");
  commuting(w.BL, w.EL, "BL,EL");
  commuting(w.AR, w.BR, "AR,BR");
  commuting(w.AR, w.ER, "AR,ER");
  commuting(w.BR, w.ER, "BR,ER");

  auto min_re_eig = [](const Mat<R>& M) {
    Mat<double> A = down(M);
    double m = 0.0;
    bool first = true;
    for (const auto& ev : eigenvalues(A)) {
      if (first || ev.re < m) m = ev.re;
      first = false;
    }
    return m;
  };
  if (min_re_eig(w.AL) + min_re_eig(w.AR) <= -1.0 + 1e-12)
    fail(ErrorCode::DegenerateParameters,
         w.name + ": algebraic exponents at 0 are not integrable");
  if (min_re_eig(w.BL) + min_re_eig(w.BR) <= -1.0 + 1e-12)
    fail(ErrorCode::DegenerateParameters,
         w.name + ": algebraic exponents at 1 are not integrable");

  for (int j = 0; j <= 200; ++j) {
    cplx<double> t(j / 200.0);
    for (const MatPoly<R>* Hp : {&w.HL, &w.HR}) {
      Mat<double> Ht = down(*Hp).eval(t);
      double dn = to_double(abs(det(Ht)));
      double sc = std::max(1.0, std::pow(norm_max(Ht), w.N));
      if (dn <= 1e-10 * sc)
        fail(ErrorCode::DegenerateParameters,
             w.name + ": polynomial factor singular on [0,1] near t = " +
                 std::to_string(j / 200.0));
    }
  }
  for (const Mat<R>* M : {&w.W0L, &w.W0R}) {
    try {
      (void)inv(*M);
    } catch (const Error&) {
      fail(ErrorCode::DegenerateParameters,
           w.name + ": constant factor not invertible");
    }
  }
}

}  // namespace mbop
