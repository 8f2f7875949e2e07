#pragma once

// Monic biorthogonal matrix polynomial families from a moment table.
//
// Left family P^L_n (coefficients act from the left) and right family P^R_n
// (coefficients act from the right) satisfy
//   integral P^L_n(t) W(t) t^m dt = 0,  m < n,
//   integral t^m W(t) P^R_n(t) dt = 0,  m < n,
//   integral P^L_n(t) W(t) P^R_m(t) dt = delta_{nm} Cinv_n,
// with Cinv_n = sum_i a_i W_{i+n} invertible exactly when the block-Hankel
// sections through index n+1 are.  Recurrences:
//   z P^L_n = P^L_{n+1} + betaL_n P^L_n + gammaL_n P^L_{n-1},
//   z P^R_n = P^R_{n+1} + P^R_n betaR_n + P^R_{n-1} gammaR_n,
// gammaL_n = Cinv_n C_{n-1}, gammaR_n = C_{n-1} Cinv_n.

#include <vector>

#include "mbop/moments.hpp"

namespace mbop {

template <class R>
struct BiorthSystem {
  int N = 1;
  int nmax = 0;
  std::vector<MatPoly<R>> PL, PR;     // indices 0..nmax, monic
  std::vector<Mat<R>> Cinv, CinvR;    // left/right normalizations, 0..nmax
  std::vector<Mat<R>> C;              // C_n = Cinv_n^{-1}
  std::vector<Mat<R>> betaL, betaR;   // 0..nmax-1
  std::vector<Mat<R>> gammaL, gammaR; // valid 1..nmax; index 0 is zero

  // coefficient of z^{n-j} in P_n (zero when j > n)
  Mat<R> pL(int j, int n) const { return PL[size_t(n)].at(n - j); }
  Mat<R> pR(int j, int n) const { return PR[size_t(n)].at(n - j); }
};

template <class R>
inline BiorthSystem<R> build_biorth(const MomentTable<R>& mom, int nmax) {
  int N = mom[0].rows;
  (void)mom[2 * nmax];  // fail early with the needed index in the message
  BiorthSystem<R> S;
  S.N = N;
  S.nmax = nmax;
  Mat<R> I = Mat<R>::identity(N);
  for (int n = 0; n <= nmax; ++n) {
    if (n == 0) {
      S.PL.push_back(MatPoly<R>::constant(I));
      S.PR.push_back(MatPoly<R>::constant(I));
    } else {
      require_hankel_regular(mom, n);
      Mat<R> H = block_hankel(mom, n);
      Mat<R> RT(n * N, N), RC(n * N, N);
      for (int m = 0; m < n; ++m) {
        set_block(RT, m * N, 0, transpose(mom[n + m]));
        set_block(RC, m * N, 0, mom[n + m]);
      }
      // left: [a_0 ... a_{n-1}] H = -[W_n ... W_{2n-1}], transposed
      Mat<R> At = qr_solve(transpose(H), -RT);
      // right: H [b_0; ...; b_{n-1}] = -[W_n; ...; W_{2n-1}]
      Mat<R> B = qr_solve(H, -RC);
      std::vector<Mat<R>> ca, cb;
      for (int i = 0; i < n; ++i) {
        ca.push_back(transpose(get_block(At, i * N, 0, N, N)));
        cb.push_back(get_block(B, i * N, 0, N, N));
      }
      ca.push_back(I);
      cb.push_back(I);
      S.PL.push_back(MatPoly<R>(std::move(ca)));
      S.PR.push_back(MatPoly<R>(std::move(cb)));
    }
    Mat<R> cl = Mat<R>::zero(N, N), cr = cl;
    for (int i = 0; i <= n; ++i) {
      cl += S.PL[n].coeff(i) * mom[i + n];
      cr += mom[n + i] * S.PR[n].coeff(i);
    }
    S.Cinv.push_back(cl);
    S.CinvR.push_back(cr);
    S.C.push_back(inv(cl));
  }
  for (int n = 0; n < nmax; ++n) {
    S.betaL.push_back(S.pL(1, n) - S.pL(1, n + 1));
    S.betaR.push_back(S.pR(1, n) - S.pR(1, n + 1));
  }
  S.gammaL.push_back(Mat<R>::zero(N, N));
  S.gammaR.push_back(Mat<R>::zero(N, N));
  for (int n = 1; n <= nmax; ++n) {
    S.gammaL.push_back(S.Cinv[n] * S.C[n - 1]);
    S.gammaR.push_back(S.C[n - 1] * S.Cinv[n]);
  }
  return S;
}

// Convenience: computes a moment table just large enough for nmax
// polynomials.
template <class R>
inline BiorthSystem<R> build_biorth(const Weight<R>& w, int nmax,
                                    QuadOptions opt = {}) {
  return build_biorth(compute_moments(w, 2 * nmax, opt), nmax);
}

// Weight + moments + polynomial system, the working set of every
// verification driver.  `extra` moment indices beyond 2*nmax feed the
// second-kind series coefficients.
template <class R>
struct Pipeline {
  Weight<R> w;
  MomentTable<R> mom;
  BiorthSystem<R> S;
};

template <class R>
inline Pipeline<R> build_pipeline(Weight<R> w, int nmax, int extra = 4,
                                  QuadOptions opt = {}) {
  Pipeline<R> p{std::move(w), {}, {}};
  p.mom = compute_moments(p.w, 2 * nmax + extra, opt);
  p.S = build_biorth(p.mom, nmax);
  return p;
}

}  // namespace mbop
