#pragma once

// Differential relations satisfied by the weighted frames.
//
// With sigma = z(1-z) and D = diag(hL, -hR) the left frame obeys the
// first-order system  sigma Y' + Y D = M Y  with M the closed-form structure
// polynomial.  Eliminating Y' once gives a second-order form whose
// coefficient matrices still multiply Y and Y' from the correct sides:
//
//   sigma Y'' + Y' (2D + (1-2z)I) + Y (D' + D^2/sigma) = (M' + M^2/sigma) Y.
//
// With H = N(M) (N the map F -> F' + F^2/sigma) the second-order relation
// splits into four scalar-style rows, one per block of the frame:
//
//   sigma P''  + P' (2hL+(1-2z)I) + P N(hL)   = H11 P  - H12 C_{n-1} P_{n-1}
//   sigma Q''  + Q' (-2hR+(1-2z)I) + Q N(-hR) = H11 Q  - H12 C_{n-1} Q_{n-1}
//   sigma PR'' + (2hR+(1-2z)I) PR' + N(hR) PR = PR H11R - PR_{n-1} C_{n-1} H21R
//   sigma QR'' + (-2hL+(1-2z)I) QR' + N(-hL) QR = QR H11R - QR_{n-1} C_{n-1} H21R
//
// P rows differentiate polynomial coefficients exactly; Q rows use
// quadrature values with 4th-order real-step differences, so their
// residuals shrink like step^4 until the quadrature floor.  For scalar
// weights t^a (1-t)^b both families reduce to hypergeometric equations with
// explicit coefficients, checked here at the coefficient level, together
// with the closed forms for the subleading coefficient and the recurrence
// gamma that follow from them.

#include <algorithm>
#include <array>

#include "mbop/rh.hpp"

namespace mbop {

// F'(z) + F(z)^2 / sigma(z); the second-order companion of a first-order
// coefficient matrix.  Rejects the parabolic points z = 0, 1.
template <class R>
inline Mat<R> riccati_map(const MatPoly<R>& F, const cplx<R>& z) {
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  if (to_double(abs(sig)) < 1e-14)
    fail(ErrorCode::BranchCut, "riccati_map: z(1-z) vanishes");
  Mat<R> f = F.eval(z);
  return F.derivative().eval(z) + (f * f) * (cplx<R>(R(1.0)) / sig);
}

namespace detail {

template <class R>
inline double rel_residual(const Mat<R>& res, std::initializer_list<double> scales) {
  double s = 1.0;
  for (double v : scales) s = std::max(s, v);
  return norm_max(res) / s;
}

}  // namespace detail

// Relative residual of sigma Y' + Y diag(hL,-hR) - M Y at a point off the cut.
template <class R>
inline double ode_first_residual_left(const Pipeline<R>& p, int n,
                                      const cplx<R>& z, QuadOptions opt = {}) {
  auto Y = eval_Y_left(p, n, z, 1, opt);
  Mat<R> M = structure_closed(p, n).eval(z);
  Mat<R> D = block_diag2(p.w.pearson_left().eval(z),
                         -p.w.pearson_right().eval(z));
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  Mat<R> a = Y[1] * sig, b = Y[0] * D, c = M * Y[0];
  return detail::rel_residual(a + b - c,
                              {norm_max(a), norm_max(b), norm_max(c)});
}

// Right frame: sigma YR' + diag(hR,-hL) YR - YR MR.
template <class R>
inline double ode_first_residual_right(const Pipeline<R>& p, int n,
                                       const cplx<R>& z, QuadOptions opt = {}) {
  auto Y = eval_Y_right(p, n, z, 1, opt);
  Mat<R> M = structure_closed_right(p, n).eval(z);
  Mat<R> D = block_diag2(p.w.pearson_right().eval(z),
                         -p.w.pearson_left().eval(z));
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  Mat<R> a = Y[1] * sig, b = D * Y[0], c = Y[0] * M;
  return detail::rel_residual(a + b - c,
                              {norm_max(a), norm_max(b), norm_max(c)});
}

// Second-order left relation; all three lower-order coefficient matrices
// multiply from the right, the companion of M from the left.
template <class R>
inline double ode_second_residual_left(const Pipeline<R>& p, int n,
                                       const cplx<R>& z, QuadOptions opt = {}) {
  auto Y = eval_Y_left(p, n, z, 2, opt);
  const MatPoly<R>&hL = p.w.pearson_left(), &hR = p.w.pearson_right();
  int N = hL.rows;
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  Mat<R> lin = Mat<R>::identity(N) * s1;
  Mat<R> A = block_diag2(hL.eval(z) * 2.0 + lin, hR.eval(z) * (-2.0) + lin);
  Mat<R> B = block_diag2(riccati_map(hL, z), riccati_map(-hR, z));
  Mat<R> NM = riccati_map(structure_closed(p, n), z);
  Mat<R> t0 = Y[2] * sig, t1 = Y[1] * A, t2 = Y[0] * B, t3 = NM * Y[0];
  return detail::rel_residual(
      t0 + t1 + t2 - t3,
      {norm_max(t0), norm_max(t1), norm_max(t2), norm_max(t3)});
}

// Second-order right relation; lower-order coefficients on the left, the
// companion of MR on the right.
template <class R>
inline double ode_second_residual_right(const Pipeline<R>& p, int n,
                                        const cplx<R>& z,
                                        QuadOptions opt = {}) {
  auto Y = eval_Y_right(p, n, z, 2, opt);
  const MatPoly<R>&hL = p.w.pearson_left(), &hR = p.w.pearson_right();
  int N = hL.rows;
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  Mat<R> lin = Mat<R>::identity(N) * s1;
  Mat<R> A = block_diag2(hR.eval(z) * 2.0 + lin, hL.eval(z) * (-2.0) + lin);
  Mat<R> B = block_diag2(riccati_map(hR, z), riccati_map(-hL, z));
  Mat<R> NM = riccati_map(structure_closed_right(p, n), z);
  Mat<R> t0 = Y[2] * sig, t1 = A * Y[1], t2 = B * Y[0], t3 = Y[0] * NM;
  return detail::rel_residual(
      t0 + t1 + t2 - t3,
      {norm_max(t0), norm_max(t1), norm_max(t2), norm_max(t3)});
}

namespace detail {

// 4th-order five-node differences with a real step;  vals = f(z + k h),
// k = -2..2.  First and second derivative estimates.
template <class R>
inline Mat<R> fd_first(const std::array<Mat<R>, 5>& v, double h) {
  return (v[0] - v[1] * 8.0 + v[3] * 8.0 - v[4]) * (1.0 / (12.0 * h));
}

template <class R>
inline Mat<R> fd_second(const std::array<Mat<R>, 5>& v, double h) {
  return (-v[0] + v[1] * 16.0 - v[2] * 30.0 + v[3] * 16.0 - v[4]) *
         (1.0 / (12.0 * h * h));
}

template <class R>
inline std::array<cplx<R>, 5> fd_nodes(const cplx<R>& z, double h) {
  cplx<R> s{R(h)};
  return {z - s * 2.0, z - s, z, z + s, z + s * 2.0};
}

}  // namespace detail

// Polynomial row of the left split: exact coefficient differentiation,
// valid anywhere away from the parabolic points z = 0, 1.
template <class R>
inline double split_residual_pleft(const Pipeline<R>& p, int n,
                                   const cplx<R>& z) {
  const int N = p.S.N;
  Mat<R> H = riccati_map(structure_closed(p, n), z);
  Mat<R> H11 = get_block(H, 0, 0, N, N), H12 = get_block(H, 0, N, N, N);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  const MatPoly<R>& P = p.S.PL[n];
  MatPoly<R> P1 = P.derivative();
  Mat<R> hL = p.w.pearson_left().eval(z);
  Mat<R> t0 = P1.derivative().eval(z) * sig;
  Mat<R> t1 = P1.eval(z) * (hL * 2.0 + Mat<R>::identity(N) * s1);
  Mat<R> t2 = P.eval(z) * riccati_map(p.w.pearson_left(), z);
  Mat<R> r0 = H11 * P.eval(z);
  Mat<R> r1 = H12 * (p.S.C[n - 1] * p.S.PL[n - 1].eval(z));
  return detail::rel_residual(t0 + t1 + t2 - r0 + r1,
                              {norm_max(t0), norm_max(t1), norm_max(t2),
                               norm_max(r0), norm_max(r1)});
}

template <class R>
inline double split_residual_pright(const Pipeline<R>& p, int n,
                                    const cplx<R>& z) {
  const int N = p.S.N;
  Mat<R> H = riccati_map(structure_closed_right(p, n), z);
  Mat<R> H11 = get_block(H, 0, 0, N, N), H21 = get_block(H, N, 0, N, N);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  const MatPoly<R>& P = p.S.PR[n];
  MatPoly<R> P1 = P.derivative();
  Mat<R> hR = p.w.pearson_right().eval(z);
  Mat<R> t0 = P1.derivative().eval(z) * sig;
  Mat<R> t1 = (hR * 2.0 + Mat<R>::identity(N) * s1) * P1.eval(z);
  Mat<R> t2 = riccati_map(p.w.pearson_right(), z) * P.eval(z);
  Mat<R> r0 = P.eval(z) * H11;
  Mat<R> r1 = (p.S.PR[n - 1].eval(z) * p.S.C[n - 1]) * H21;
  return detail::rel_residual(t0 + t1 + t2 - r0 + r1,
                              {norm_max(t0), norm_max(t1), norm_max(t2),
                               norm_max(r0), norm_max(r1)});
}

// Transform row of the left split.  Q values come from quadrature; the
// derivatives come from five-node differences with the given real step, so
// the result carries an O(step^4) bias on top of the quadrature floor.
template <class R>
inline double split_residual_qleft(const Pipeline<R>& p, int n,
                                   const cplx<R>& z, double step = 0.01,
                                   QuadOptions opt = {}) {
  const int N = p.S.N;
  Mat<R> H = riccati_map(structure_closed(p, n), z);
  Mat<R> H11 = get_block(H, 0, 0, N, N), H12 = get_block(H, 0, N, N, N);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  auto nodes = detail::fd_nodes(z, step);
  std::array<Mat<R>, 5> q;
  for (int k = 0; k < 5; ++k)
    q[k] = second_kind_left(p.w, p.S.PL[n], nodes[k], 0, opt);
  Mat<R> qm = second_kind_left(p.w, p.S.PL[n - 1], z, 0, opt);
  Mat<R> hR = p.w.pearson_right().eval(z);
  Mat<R> t0 = detail::fd_second(q, step) * sig;
  Mat<R> t1 = detail::fd_first(q, step) *
              (hR * (-2.0) + Mat<R>::identity(N) * s1);
  Mat<R> t2 = q[2] * riccati_map(-p.w.pearson_right(), z);
  Mat<R> r0 = H11 * q[2];
  Mat<R> r1 = H12 * (p.S.C[n - 1] * qm);
  return detail::rel_residual(t0 + t1 + t2 - r0 + r1,
                              {norm_max(t0), norm_max(t1), norm_max(t2),
                               norm_max(r0), norm_max(r1)});
}

template <class R>
inline double split_residual_qright(const Pipeline<R>& p, int n,
                                    const cplx<R>& z, double step = 0.01,
                                    QuadOptions opt = {}) {
  const int N = p.S.N;
  Mat<R> H = riccati_map(structure_closed_right(p, n), z);
  Mat<R> H11 = get_block(H, 0, 0, N, N), H21 = get_block(H, N, 0, N, N);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  auto nodes = detail::fd_nodes(z, step);
  std::array<Mat<R>, 5> q;
  for (int k = 0; k < 5; ++k)
    q[k] = second_kind_right(p.w, p.S.PR[n], nodes[k], 0, opt);
  Mat<R> qm = second_kind_right(p.w, p.S.PR[n - 1], z, 0, opt);
  Mat<R> hL = p.w.pearson_left().eval(z);
  Mat<R> t0 = detail::fd_second(q, step) * sig;
  Mat<R> t1 = (hL * (-2.0) + Mat<R>::identity(N) * s1) *
              detail::fd_first(q, step);
  Mat<R> t2 = riccati_map(-p.w.pearson_left(), z) * q[2];
  Mat<R> r0 = q[2] * H11;
  Mat<R> r1 = (qm * p.S.C[n - 1]) * H21;
  return detail::rel_residual(t0 + t1 + t2 - r0 + r1,
                              {norm_max(t0), norm_max(t1), norm_max(t2),
                               norm_max(r0), norm_max(r1)});
}

// All four split rows at one off-cut point: {P left, Q left, P right, Q right}.
template <class R>
inline std::array<double, 4> split_residuals(const Pipeline<R>& p, int n,
                                             const cplx<R>& z,
                                             double step = 0.01,
                                             QuadOptions opt = {}) {
  return {split_residual_pleft(p, n, z), split_residual_qleft(p, n, z, step, opt),
          split_residual_pright(p, n, z),
          split_residual_qright(p, n, z, step, opt)};
}

// Frame value and derivatives from five-node differences of plain frame
// values; the alternative to the kernel-power route inside eval_Y_left.
template <class R>
inline std::vector<Mat<R>> eval_Y_left_fd(const Pipeline<R>& p, int n,
                                          const cplx<R>& z, double step,
                                          QuadOptions opt = {}) {
  auto nodes = detail::fd_nodes(z, step);
  std::array<Mat<R>, 5> v;
  for (int k = 0; k < 5; ++k) v[k] = eval_Y_left(p, n, nodes[k], 0, opt)[0];
  return {v[2], detail::fd_first(v, step), detail::fd_second(v, step)};
}

// Second-order residual with difference-based derivatives.  The difference
// route must agree with the kernel route on Y'' or the point/step pair is
// rejected; agreement makes the residual itself scale like step^4.
template <class R>
inline double ode_second_residual_left_fd(const Pipeline<R>& p, int n,
                                          const cplx<R>& z, double step,
                                          QuadOptions opt = {}) {
  auto Yk = eval_Y_left(p, n, z, 2, opt);
  auto Y = eval_Y_left_fd(p, n, z, step, opt);
  double dis = norm_max(Y[2] - Yk[2]) / std::max(1.0, norm_max(Yk[2]));
  if (dis > 2e-2)
    fail(ErrorCode::DerivativeInconsistent,
         "ode_second_residual_left_fd: difference and kernel second "
         "derivatives disagree by " +
             std::to_string(dis) + " at step " + std::to_string(step));
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> s1 = cplx<R>(R(1.0)) - z * 2.0;
  const int N = p.S.N;
  Mat<R> lin = Mat<R>::identity(N) * s1;
  const MatPoly<R>&hL = p.w.pearson_left(), &hR = p.w.pearson_right();
  Mat<R> A = block_diag2(hL.eval(z) * 2.0 + lin, hR.eval(z) * (-2.0) + lin);
  Mat<R> B = block_diag2(riccati_map(hL, z), riccati_map(-hR, z));
  Mat<R> NM = riccati_map(structure_closed(p, n), z);
  Mat<R> t0 = Y[2] * sig, t1 = Y[1] * A, t2 = Y[0] * B, t3 = NM * Y[0];
  return detail::rel_residual(
      t0 + t1 + t2 - t3,
      {norm_max(t0), norm_max(t1), norm_max(t2), norm_max(t3)});
}

// Coefficient-level residual of the scalar-weight polynomial equation
//   sigma P'' + ((1+a) - (a+b+2) z) P' + n (a+b+n+1) P = 0.
template <class R>
inline double scalar_ode_residual(const MatPoly<R>& P, const R& a, const R& b,
                                  int n) {
  int N = P.rows;
  Mat<R> I = Mat<R>::identity(N);
  MatPoly<R> sig(std::vector<Mat<R>>{Mat<R>::zero(N, N), I, -I});
  MatPoly<R> lin(std::vector<Mat<R>>{I * cplx<R>(a + R(1.0)),
                                     I * (-cplx<R>(a + b + R(2.0)))});
  cplx<R> lam(R(double(n)) * (a + b + R(double(n + 1))));
  MatPoly<R> t0 = sig * P.derivative().derivative();
  MatPoly<R> t1 = lin * P.derivative();
  MatPoly<R> t2 = P * lam;
  double scale = std::max({1.0, coeff_norm_max(t0), coeff_norm_max(t1),
                           coeff_norm_max(t2)});
  return coeff_norm_max(t0 + t1 + t2) / scale;
}

// Pointwise residual of the transform-side scalar equation
//   sigma Q'' + ((1-a) + (a+b-2) z) Q' + (n+1) (a+b+n) Q = 0
// for the transform of row n, evaluated off the cut.
template <class R>
inline double scalar_odeq_residual(const Pipeline<R>& p, const R& a,
                                   const R& b, int n, const cplx<R>& z,
                                   QuadOptions opt = {}) {
  if (n < 0 || n > p.S.nmax)
    fail(ErrorCode::ConfigInvalid, "scalar_odeq_residual: row out of range");
  Mat<R> q0 = second_kind_left(p.w, p.S.PL[n], z, 0, opt);
  Mat<R> q1 = second_kind_left(p.w, p.S.PL[n], z, 1, opt);
  Mat<R> q2 = second_kind_left(p.w, p.S.PL[n], z, 2, opt);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  cplx<R> lc = cplx<R>(R(1.0) - a) + cplx<R>(a + b - R(2.0)) * z;
  cplx<R> lam(R(double(n + 1)) * (a + b + R(double(n))));
  Mat<R> t0 = q2 * sig, t1 = q1 * lc, t2 = q0 * lam;
  return detail::rel_residual(t0 + t1 + t2,
                              {norm_max(t0), norm_max(t1), norm_max(t2)});
}

// Subleading coefficient of the monic scalar polynomial: -n(a+n)/(a+b+2n).
template <class R>
inline R jacobi_p1(const R& a, const R& b, int n) {
  R den = a + b + R(double(2 * n));
  if (std::abs(to_double(den)) < 1e-9)
    fail(ErrorCode::DegenerateParameters, "jacobi_p1: a+b+2n vanishes");
  return -(R(double(n)) * (a + R(double(n)))) / den;
}

// Recurrence gamma from the subleading coefficient:
//   gamma_n = ((p1 + a/2 + n)^2 - a^2/4) / ((a+b+2n)^2 - 1).
template <class R>
inline R jacobi_gamma(const R& a, const R& b, int n) {
  R s = a + b + R(double(2 * n));
  R den = s * s - R(1.0);
  if (std::abs(to_double(den)) < 1e-9)
    fail(ErrorCode::DegenerateParameters, "jacobi_gamma: (a+b+2n)^2 - 1 vanishes");
  R t = jacobi_p1(a, b, n) + a / R(2.0) + R(double(n));
  return (t * t - (a * a) / R(4.0)) / den;
}

}  // namespace mbop
