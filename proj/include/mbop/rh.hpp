#pragma once

// The 2N x 2N frames built from the polynomials and their transforms,
//
//   Y_n = [[ P_n,            Q_n           ],
//          [ -C_{n-1}P_{n-1}, -C_{n-1}Q_{n-1} ]],
//
// normalized by diag(z^-n, z^n) at infinity, with exact inverse supplied by
// the right-family polynomials.  On top of the frames: the weighted frames
// Z with constant jump matrices across (0,1) and (1,oo), the one-step
// transfer matrices, and the structure matrix
//
//   M(z) = z(1-z) Y'(z) Y(z)^-1 + Y(z) diag(hL(z), -hR(z)) Y(z)^-1,
//
// which is a matrix polynomial of degree <= 2 with entries in closed form.

#include <utility>
#include <vector>

#include "mbop/blockmat.hpp"
#include "mbop/secondkind.hpp"

namespace mbop {

namespace detail {

template <class R>
inline void check_frame_index(const BiorthSystem<R>& S, int n,
                              const char* ctx) {
  if (n < 1 || n > S.nmax)
    fail(ErrorCode::ConfigInvalid,
         std::string(ctx) + ": frame index " + std::to_string(n) +
             " outside [1, " + std::to_string(S.nmax) + "]");
}

template <class R>
inline Side side_of(const cplx<R>& z) {
  return to_double(z.im) >= 0.0 ? Side::above : Side::below;
}

}  // namespace detail

// Y and its first `order` z-derivatives (order <= 2).
template <class R>
inline std::vector<Mat<R>> eval_Y_left(const Pipeline<R>& p, int n,
                                       const cplx<R>& z, int order = 0,
                                       QuadOptions opt = {}) {
  detail::check_frame_index(p.S, n, "eval_Y_left");
  const Mat<R>& C = p.S.C[n - 1];
  const MatPoly<R>* ps[2] = {&p.S.PL[n], &p.S.PL[n - 1]};
  std::vector<Mat<R>> out;
  MatPoly<R> pn = p.S.PL[n], pm = p.S.PL[n - 1];
  for (int d = 0; d <= order; ++d) {
    auto Q = second_kind_left(p.w, ps, ps + 2, z, d, opt);
    out.push_back(block2(pn.eval(z), Q[0], -(C * pm.eval(z)), -(C * Q[1])));
    pn = pn.derivative();
    pm = pm.derivative();
  }
  return out;
}

// Exact inverse of Y_n from the right family:
//   Y_n^-1 = [[ -QR_{n-1}C_{n-1}, -QR_n ], [ PR_{n-1}C_{n-1}, PR_n ]].
template <class R>
inline Mat<R> eval_Yinv_left(const Pipeline<R>& p, int n, const cplx<R>& z,
                             QuadOptions opt = {}) {
  detail::check_frame_index(p.S, n, "eval_Yinv_left");
  const Mat<R>& C = p.S.C[n - 1];
  const MatPoly<R>* ps[2] = {&p.S.PR[n - 1], &p.S.PR[n]};
  auto Q = second_kind_right(p.w, ps, ps + 2, z, 0, opt);
  return block2(-(Q[0] * C), -Q[1], p.S.PR[n - 1].eval(z) * C,
                p.S.PR[n].eval(z));
}

// Right frame J Y^-1 J^-1 (normalized from the left at infinity) and its
// derivatives.
template <class R>
inline std::vector<Mat<R>> eval_Y_right(const Pipeline<R>& p, int n,
                                        const cplx<R>& z, int order = 0,
                                        QuadOptions opt = {}) {
  detail::check_frame_index(p.S, n, "eval_Y_right");
  const Mat<R>& C = p.S.C[n - 1];
  const MatPoly<R>* ps[2] = {&p.S.PR[n], &p.S.PR[n - 1]};
  std::vector<Mat<R>> out;
  MatPoly<R> pn = p.S.PR[n], pm = p.S.PR[n - 1];
  for (int d = 0; d <= order; ++d) {
    auto Q = second_kind_right(p.w, ps, ps + 2, z, d, opt);
    out.push_back(block2(pn.eval(z), -(pm.eval(z) * C), Q[0], -(Q[1] * C)));
    pn = pn.derivative();
    pm = pm.derivative();
  }
  return out;
}

template <class R>
inline Mat<R> eval_Yinv_right(const Pipeline<R>& p, int n, const cplx<R>& z,
                              QuadOptions opt = {}) {
  detail::check_frame_index(p.S, n, "eval_Yinv_right");
  const Mat<R>& C = p.S.C[n - 1];
  const MatPoly<R>* ps[2] = {&p.S.PL[n - 1], &p.S.PL[n]};
  auto Q = second_kind_left(p.w, ps, ps + 2, z, 0, opt);
  return block2(-(C * Q[0]), C * p.S.PL[n - 1].eval(z), -Q[1],
                p.S.PL[n].eval(z));
}

// || Y diag(z^-n, z^n) - I ||, the normalization residual at infinity.
template <class R>
inline double y_asymptotic_residual_left(const Pipeline<R>& p, int n,
                                         const cplx<R>& z,
                                         QuadOptions opt = {}) {
  const int N = p.S.N;
  Mat<R> Y = eval_Y_left(p, n, z, 0, opt)[0];
  cplx<R> zn(R(1.0));
  for (int i = 0; i < n; ++i) zn = zn * z;
  Mat<R> D = block_diag2(Mat<R>::identity(N) * (cplx<R>(R(1.0)) / zn),
                         Mat<R>::identity(N) * zn);
  return norm_max(Y * D - Mat<R>::identity(2 * N));
}

template <class R>
inline double y_asymptotic_residual_right(const Pipeline<R>& p, int n,
                                          const cplx<R>& z,
                                          QuadOptions opt = {}) {
  const int N = p.S.N;
  Mat<R> Y = eval_Y_right(p, n, z, 0, opt)[0];
  cplx<R> zn(R(1.0));
  for (int i = 0; i < n; ++i) zn = zn * z;
  Mat<R> D = block_diag2(Mat<R>::identity(N) * (cplx<R>(R(1.0)) / zn),
                         Mat<R>::identity(N) * zn);
  return norm_max(D * Y - Mat<R>::identity(2 * N));
}

// One-step transfer matrices:  Y_{n+1} = T_n Y_n,  YR_{n+1} = YR_n TR_n.
template <class R>
inline MatPoly<R> transfer_left(const BiorthSystem<R>& S, int n) {
  const int N = S.N;
  Mat<R> z1 = block_diag2(Mat<R>::identity(N), Mat<R>::zero(N, N));
  Mat<R> z0 = block2(-S.betaL[n], S.Cinv[n], -S.C[n], Mat<R>::zero(N, N));
  return MatPoly<R>(std::vector<Mat<R>>{z0, z1});
}

template <class R>
inline MatPoly<R> transfer_right(const BiorthSystem<R>& S, int n) {
  const int N = S.N;
  Mat<R> z1 = block_diag2(Mat<R>::identity(N), Mat<R>::zero(N, N));
  Mat<R> z0 = block2(-S.betaR[n], -S.C[n], S.Cinv[n], Mat<R>::zero(N, N));
  return MatPoly<R>(std::vector<Mat<R>>{z0, z1});
}

// Weighted frames.  The scalar prefactor on the left weight block matches
// the interval jump of the transforms, so Z has piecewise-constant jumps.
template <class R>
inline Mat<R> eval_Z_left(const Pipeline<R>& p, int n, const cplx<R>& z,
                          QuadOptions opt = {}) {
  Side s = detail::side_of(z);
  Mat<R> Y = eval_Y_left(p, n, z, 0, opt)[0];
  cplx<R> tp(R(0.0), const_pi<R>() * 2.0);
  Mat<R> D = block_diag2(p.w.left(z, s) * tp, inv(p.w.right(z, s)));
  return Y * D;
}

template <class R>
inline Mat<R> eval_Z_right(const Pipeline<R>& p, int n, const cplx<R>& z,
                           QuadOptions opt = {}) {
  Side s = detail::side_of(z);
  Mat<R> Y = eval_Y_right(p, n, z, 0, opt)[0];
  cplx<R> tp(R(0.0), const_pi<R>() * 2.0);
  Mat<R> D = block_diag2(p.w.right(z, s), inv(p.w.left(z, s) * tp));
  return D * Y;
}

enum class JumpLine { interval, ray };

// Constant jump matrices:  Z+ = Z- G on the left,  Z+ = G Z- on the right.
template <class R>
inline Mat<R> jump_Z_left(const Weight<R>& w, JumpLine line) {
  if (line == JumpLine::interval)
    return block2(w.C0L(), w.C0L(), Mat<R>::zero(w.N, w.N), w.C0R());
  return block_diag2(w.C1L(), w.C1R());
}

template <class R>
inline Mat<R> jump_Z_right(const Weight<R>& w, JumpLine line) {
  if (line == JumpLine::interval) {
    Mat<R> r = inv(w.C0R()), l = inv(w.C0L());
    return block2(r, Mat<R>::zero(w.N, w.N), r, l);
  }
  return block_diag2(inv(w.C1R()), inv(w.C1L()));
}

// Relative jump residual, extrapolated to the line along the ladder
// eps_k = 1e-2 * 2^-k.  The smallest rung sits ~1e-3 above the cut, so the
// interval case needs the deeper quadrature levels.
template <class R>
inline double z_jump_residual_left(const Pipeline<R>& p, int n, double t,
                                   JumpLine line, QuadOptions opt = {}) {
  if (opt.level_max < 0 && line == JumpLine::interval) opt.level_max = 14;
  Mat<R> G = jump_Z_left(p.w, line);
  std::vector<double> eps;
  std::vector<Mat<R>> up, dn;
  for (int k = 0; k <= 3; ++k) {
    double e = 1e-2 * std::ldexp(1.0, -k);
    eps.push_back(e);
    cplx<R> zp(real_traits<R>::from_double(t), real_traits<R>::from_double(e));
    cplx<R> zm(real_traits<R>::from_double(t), real_traits<R>::from_double(-e));
    up.push_back(eval_Z_left(p, n, zp, opt));
    dn.push_back(eval_Z_left(p, n, zm, opt) * G);
  }
  Mat<R> plus = extrapolate_to_zero(eps, up);
  Mat<R> minus = extrapolate_to_zero(eps, dn);
  return norm_max(plus - minus) / std::max(1.0, norm_max(plus));
}

template <class R>
inline double z_jump_residual_right(const Pipeline<R>& p, int n, double t,
                                    JumpLine line, QuadOptions opt = {}) {
  if (opt.level_max < 0 && line == JumpLine::interval) opt.level_max = 14;
  Mat<R> G = jump_Z_right(p.w, line);
  std::vector<double> eps;
  std::vector<Mat<R>> up, dn;
  for (int k = 0; k <= 3; ++k) {
    double e = 1e-2 * std::ldexp(1.0, -k);
    eps.push_back(e);
    cplx<R> zp(real_traits<R>::from_double(t), real_traits<R>::from_double(e));
    cplx<R> zm(real_traits<R>::from_double(t), real_traits<R>::from_double(-e));
    up.push_back(eval_Z_right(p, n, zp, opt));
    dn.push_back(G * eval_Z_right(p, n, zm, opt));
  }
  Mat<R> plus = extrapolate_to_zero(eps, up);
  Mat<R> minus = extrapolate_to_zero(eps, dn);
  return norm_max(plus - minus) / std::max(1.0, norm_max(plus));
}

// Structure matrix by exact kernels: sigma Y' Y^-1 + Y diag(hL,-hR) Y^-1
// with the closed-form inverse.
template <class R>
inline Mat<R> structure_numeric(const Pipeline<R>& p, int n, const cplx<R>& z,
                                QuadOptions opt = {}) {
  auto Y = eval_Y_left(p, n, z, 1, opt);
  Mat<R> Yi = eval_Yinv_left(p, n, z, opt);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  Mat<R> D = block_diag2(p.w.pearson_left().eval(z),
                         -p.w.pearson_right().eval(z));
  return (Y[1] * sig) * Yi + Y[0] * D * Yi;
}

// Right-system structure matrix from the right frame's own derivative:
//   sigma YR' + diag(hR, -hL) YR = YR MR.
template <class R>
inline Mat<R> structure_numeric_right(const Pipeline<R>& p, int n,
                                      const cplx<R>& z, QuadOptions opt = {}) {
  auto Y = eval_Y_right(p, n, z, 1, opt);
  Mat<R> Yi = eval_Yinv_right(p, n, z, opt);
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  Mat<R> D = block_diag2(p.w.pearson_right().eval(z),
                         -p.w.pearson_left().eval(z));
  return Yi * (Y[1] * sig) + Yi * D * Y[0];
}

// Closed form of the structure matrix: a degree <= 2 matrix polynomial in
// the recurrence data, the subleading polynomial coefficients and the
// leading transform-tail coefficients of both families.
template <class R>
inline MatPoly<R> structure_closed(const Pipeline<R>& p, int n) {
  detail::check_frame_index(p.S, n, "structure_closed");
  const auto& S = p.S;
  const auto& mom = p.mom;
  const int N = S.N;
  const MatPoly<R>& hL = p.w.pearson_left();
  const MatPoly<R>& hR = p.w.pearson_right();
  Mat<R> h0 = hL.at(0), h1 = hL.at(1), h2 = hL.at(2);
  Mat<R> g0 = hR.at(0), g1 = hR.at(1), g2 = hR.at(2);
  Mat<R> I = Mat<R>::identity(N);

  Mat<R> a1 = S.pL(1, n), a2 = S.pL(2, n), c1 = S.pL(1, n - 1);
  Mat<R> hb1 = S.pR(1, n), hb2 = S.pR(2, n), r1 = S.pR(1, n - 1);
  Mat<R> b1 = q_coeff_left(S, mom, 1, n);
  Mat<R> d1 = q_coeff_left(S, mom, 1, n - 1);
  Mat<R> d2 = q_coeff_left(S, mom, 2, n - 1);
  Mat<R> e1 = q_coeff_right(S, mom, 1, n - 1);
  Mat<R> e2 = q_coeff_right(S, mom, 2, n - 1);
  Mat<R> f1 = q_coeff_right(S, mom, 1, n);
  const Mat<R>& Ci = S.Cinv[n];
  const Mat<R>& C = S.C[n - 1];
  double dn = double(n);

  Mat<R> m11_2 = h2;
  Mat<R> m11_1 = h1 + a1 * h2 + h2 * e1 - I * dn;
  Mat<R> m11_0 = h0 + a1 * h1 + h1 * e1 + a2 * h2 + a1 * h2 * e1 + h2 * e2 +
                 I * dn - a1 * (dn - 1.0) - e1 * dn + Ci * g2 * C;

  Mat<R> m12_1 = h2 * Ci + Ci * g2;
  Mat<R> m12_0 = (h1 + a1 * h2 + h2 * f1) * Ci +
                 Ci * (g1 + b1 * g2 + g2 * hb1) - Ci * (2.0 * dn + 1.0);

  Mat<R> m21_1 = -(C * h2 + g2 * C);
  Mat<R> m21_0 = -(C * (h1 + c1 * h2 + h2 * e1)) -
                 (g1 + d1 * g2 + g2 * r1) * C + C * (2.0 * dn - 1.0);

  Mat<R> m22_2 = -g2;
  Mat<R> m22_1 = I * dn - g1 - d1 * g2 - g2 * hb1;
  Mat<R> m22_0 = -(C * h2 * Ci) - I * dn + hb1 * dn + d1 * (dn + 1.0) - g0 -
                 d1 * g1 - g1 * hb1 - d2 * g2 - d1 * g2 * hb1 - g2 * hb2;

  std::vector<Mat<R>> cs{block2(m11_0, m12_0, m21_0, m22_0),
                         block2(m11_1, m12_1, m21_1, m22_1),
                         block2(m11_2, Mat<R>::zero(N, N), Mat<R>::zero(N, N),
                                m22_2)};
  MatPoly<R> M(std::move(cs));
  M.trim(1e-14 * std::max(1.0, coeff_norm_max(M)));
  return M;
}

// The right-system structure matrix is the J-conjugate: MR = -J M J^-1,
// coefficient by coefficient.
template <class R>
inline MatPoly<R> structure_closed_right(const Pipeline<R>& p, int n) {
  MatPoly<R> M = structure_closed(p, n);
  std::vector<Mat<R>> cs;
  for (int k = 0; k <= M.degree(); ++k) cs.push_back(-j_conjugate(M.at(k)));
  return MatPoly<R>(std::move(cs));
}

// Finite-difference route through the weighted frame: M = sigma Z' Z^-1,
// with the derivative taken 4th-order in both the real and imaginary
// directions; disagreement flags an inconsistent derivative.
template <class R>
inline Mat<R> structure_fd(const Pipeline<R>& p, int n, const cplx<R>& z,
                           double h = 1e-3, QuadOptions opt = {}) {
  auto Zat = [&](const cplx<R>& zz) { return eval_Z_left(p, n, zz, opt); };
  auto diff = [&](const cplx<R>& dir) {
    cplx<R> s = dir * real_traits<R>::from_double(h);
    Mat<R> num = (Zat(z + s) * 8.0 - Zat(z + s + s)) -
                 (Zat(z - s) * 8.0 - Zat(z - s - s));
    return num * (cplx<R>(R(1.0)) / (s * 12.0));
  };
  Mat<R> dre = diff(cplx<R>(R(1.0)));
  Mat<R> dim = diff(cplx<R>(R(0.0), R(1.0)));
  double scale = std::max(1.0, norm_max(dre));
  if (norm_max(dre - dim) > 1e-5 * scale)
    fail(ErrorCode::DerivativeInconsistent,
         "structure_fd: directional derivatives disagree (step too coarse or "
         "too close to a branch line)");
  Mat<R> dz = (dre + dim) * 0.5;
  cplx<R> sig = z * (cplx<R>(R(1.0)) - z);
  return (dz * sig) * inv(Zat(z), "structure_fd");
}

}  // namespace mbop
