#pragma once

// Nonlocal discrete relations for the recurrence data of weights whose right
// factor is the identity and whose left Pearson polynomial has degree <= 2.
//
// With h = h0 + h1 z + h2 z^2, S(m) = sum_{k<m} beta_k, SR(m) the
// C_k-conjugated sum, D(n) the strictly ordered double sum of beta products
// and G(n) = sum_{k=1}^{n-1} gamma_k, the recurrence data satisfy, for n >= 1,
//
//  (2n+1)I + h0 + h2(g_{n+1}+g_n) + (h2 b_n + h1 - (2n+1)I) b_n
//      - S(n) - C_n^-1 SR(n+1) C_n
//      = [S(n), h2] S(n+1) - [D(n) - G(n), h2] + [S(n), h1]          (r1)
//
//  b_n - b_n^2 - g_n (h2(b_n+b_{n-1}) + h1 - (2n-1)I + [h2, S(n-1)])
//      + (h2(b_n+b_{n+1}) + h1 - (2n+3)I + [h2, S(n)]) g_{n+1}
//      = C_n^-1 [b_n^R, SR(n)] C_n                                    (r2)
//
// When the h_i commute the bracketed terms vanish and the system collapses
// to scalar-style relations for xi_n = h0/2 + nI + h2 g_n + p1_n and
// mu_n = h2 b_n + h1 - (2n+1)I (with gamma_0 taken as 0):
//   -mu_n b_n = xi_n + xi_{n+1},   xi_{n+1}^2 - xi_0^2 = g_{n+1} mu_n mu_{n+1}.
// Residuals always evaluate data produced by the moment pipeline; the sums
// are recomputed from the stored sequences at every call.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "mbop/biorth.hpp"

namespace mbop {

namespace detail {

template <class R>
inline double norm_fro(const Mat<R>& A) {
  double s = 0.0;
  for (const auto& z : A.a) {
    double v = to_double(abs(z));
    s += v * v;
  }
  return std::sqrt(s);
}

template <class R>
inline Mat<R> commutator(const Mat<R>& A, const Mat<R>& B) {
  return A * B - B * A;
}

// sum_{k<m} beta_k
template <class R>
inline Mat<R> sum_beta(const BiorthSystem<R>& S, int m) {
  Mat<R> acc = Mat<R>::zero(S.N, S.N);
  for (int k = 0; k < m; ++k) acc += S.betaL[k];
  return acc;
}

// sum_{k<m} C_k beta_k C_k^-1
template <class R>
inline Mat<R> sum_beta_conj(const BiorthSystem<R>& S, int m) {
  Mat<R> acc = Mat<R>::zero(S.N, S.N);
  for (int k = 0; k < m; ++k) acc += S.C[k] * S.betaL[k] * S.Cinv[k];
  return acc;
}

// sum_{j<i<=n-1} beta_i beta_j, later index on the left
template <class R>
inline Mat<R> sum_beta_ordered(const BiorthSystem<R>& S, int n) {
  Mat<R> acc = Mat<R>::zero(S.N, S.N);
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 0; j < i; ++j) acc += S.betaL[i] * S.betaL[j];
  return acc;
}

// sum_{k=1}^{n-1} gamma_k
template <class R>
inline Mat<R> sum_gamma(const BiorthSystem<R>& S, int n) {
  Mat<R> acc = Mat<R>::zero(S.N, S.N);
  for (int k = 1; k <= n - 1; ++k) acc += S.gammaL[k];
  return acc;
}

// Recurrence rows live at indices 0 .. nmax-1.
template <class R>
inline void check_beta_depth(const BiorthSystem<R>& S, int needed,
                             const char* who) {
  if (needed >= int(S.betaL.size()))
    fail(ErrorCode::InsufficientDepth,
         std::string(who) + ": needs recurrence row " + std::to_string(needed) +
             " but the system holds rows 0.." +
             std::to_string(int(S.betaL.size()) - 1));
}

}  // namespace detail

// Frobenius norms of left-minus-right of the two displayed relations at
// index n.  The caller is responsible for the weight being one-sided; for
// two-sided weights the returned residuals are honest and simply large.
template <class R>
inline std::array<double, 2> dpiv_residuals(const BiorthSystem<R>& S,
                                            const MatPoly<R>& h, int n) {
  if (n < 1)
    fail(ErrorCode::InsufficientDepth, "dpiv_residuals: index must be >= 1");
  detail::check_beta_depth(S, n + 1, "dpiv_residuals");
  const int N = S.N;
  Mat<R> I = Mat<R>::identity(N);
  Mat<R> h0 = h.at(0), h1 = h.at(1), h2 = h.at(2);
  const Mat<R>&bn = S.betaL[n], &bm = S.betaL[n - 1], &bp = S.betaL[n + 1];
  const Mat<R>&gn = S.gammaL[n], &gp = S.gammaL[n + 1];

  Mat<R> Sn = detail::sum_beta(S, n), Sn1 = detail::sum_beta(S, n + 1);
  Mat<R> lhs1 = I * double(2 * n + 1) + h0 + h2 * (gp + gn) +
                (h2 * bn + h1 - I * double(2 * n + 1)) * bn - Sn -
                S.Cinv[n] * detail::sum_beta_conj(S, n + 1) * S.C[n];
  Mat<R> rhs1 =
      detail::commutator(Sn, h2) * Sn1 -
      detail::commutator(detail::sum_beta_ordered(S, n) - detail::sum_gamma(S, n),
                         h2) +
      detail::commutator(Sn, h1);

  Mat<R> lhs2 =
      bn - bn * bn -
      gn * (h2 * (bn + bm) + h1 - I * double(2 * n - 1) +
            detail::commutator(h2, detail::sum_beta(S, n - 1))) +
      (h2 * (bn + bp) + h1 - I * double(2 * n + 3) + detail::commutator(h2, Sn)) *
          gp;
  Mat<R> rhs2 = S.Cinv[n] *
                detail::commutator(S.betaR[n], detail::sum_beta_conj(S, n)) *
                S.C[n];

  return {detail::norm_fro(lhs1 - rhs1), detail::norm_fro(lhs2 - rhs2)};
}

// Commutative collapse: sequences xi, mu, nu and the residuals of the
// summed and squared relations.  gamma_0 enters xi_0 as zero.
template <class R>
struct CommutativeReduction {
  std::vector<Mat<R>> xi;   // 0 .. n+1
  std::vector<Mat<R>> mu;   // 0 .. n
  std::vector<Mat<R>> nu;   // 0 .. n, inverses of mu
  std::vector<double> sum_residual;     // -mu_m b_m - xi_m - xi_{m+1}, m = 0..n
  std::vector<double> square_residual;  // xi_{m+1}^2 - xi_0^2 - g_{m+1} mu_m mu_{m+1}
  std::vector<double> ratio_residual;   // nu-form of the same, empty if h2 singular
  bool ratio_applicable = false;
};

template <class R>
inline CommutativeReduction<R> commutative_reduction(const BiorthSystem<R>& S,
                                                     const MatPoly<R>& h,
                                                     int n) {
  if (n < 0)
    fail(ErrorCode::InsufficientDepth,
         "commutative_reduction: index must be >= 0");
  detail::check_beta_depth(S, n, "commutative_reduction");
  const int N = S.N;
  Mat<R> I = Mat<R>::identity(N);
  Mat<R> h0 = h.at(0), h1 = h.at(1), h2 = h.at(2);
  double hscale = std::max({1.0, norm_max(h0), norm_max(h1), norm_max(h2)});
  if (norm_max(detail::commutator(h0, h1)) > 1e-12 * hscale ||
      norm_max(detail::commutator(h0, h2)) > 1e-12 * hscale ||
      norm_max(detail::commutator(h1, h2)) > 1e-12 * hscale)
    fail(ErrorCode::NotCommutative,
         "commutative_reduction: Pearson coefficients do not commute");

  CommutativeReduction<R> out;
  for (int m = 0; m <= n + 1; ++m) {
    Mat<R> g = m == 0 ? Mat<R>::zero(N, N) : S.gammaL[m];
    out.xi.push_back(h0 * 0.5 + I * double(m) + h2 * g + S.pL(1, m));
  }
  for (int m = 0; m <= n; ++m) {
    Mat<R> mu = h2 * S.betaL[m] + h1 - I * double(2 * m + 1);
    if (norm_max(mu) < 1e-10 * hscale)
      fail(ErrorCode::SingularMu,
           "commutative_reduction: mu vanishes at m = " + std::to_string(m));
    out.mu.push_back(mu);
    try {
      out.nu.push_back(inv(mu));
    } catch (const Error&) {
      fail(ErrorCode::SingularMu,
           "commutative_reduction: mu not invertible at m = " +
               std::to_string(m));
    }
  }
  for (int m = 0; m <= n; ++m)
    out.sum_residual.push_back(detail::norm_fro(
        -(out.mu[m] * S.betaL[m]) - out.xi[m] - out.xi[m + 1]));
  Mat<R> xi0sq = out.xi[0] * out.xi[0];
  for (int m = 0; m + 1 <= n; ++m)
    out.square_residual.push_back(detail::norm_fro(
        out.xi[m + 1] * out.xi[m + 1] - xi0sq -
        S.gammaL[m + 1] * out.mu[m] * out.mu[m + 1]));

  // nu-form: nu_m nu_{m+1} = h2^-1 (xi_{m+1} - h0/2 - (m+1)I - p1_{m+1})
  //                          / (xi_{m+1}^2 - xi_0^2).
  try {
    Mat<R> h2i = inv(h2);
    for (int m = 0; m + 1 <= n; ++m) {
      Mat<R> num = h2i * (out.xi[m + 1] - h0 * 0.5 - I * double(m + 1) -
                          S.pL(1, m + 1));
      Mat<R> den = inv(out.xi[m + 1] * out.xi[m + 1] - xi0sq);
      out.ratio_residual.push_back(
          detail::norm_fro(out.nu[m] * out.nu[m + 1] - num * den));
    }
    out.ratio_applicable = true;
  } catch (const Error&) {
    out.ratio_residual.clear();
    out.ratio_applicable = false;
  }
  return out;
}

// Forward stepping of the two relations in the commuting case: r1 solved
// for gamma_{n+1}, r2 for beta_{n+1}.  Seeds come from the moment pipeline;
// the iteration itself never touches moments, so drift against the pipeline
// measures the (expected) instability of the scheme, not a structural
// failure.
template <class R>
struct ForwardIterate {
  std::vector<Mat<R>> beta;   // 0 .. n_target
  std::vector<Mat<R>> gamma;  // gamma[0] unused zero, 1 .. n_target
};

template <class R>
inline ForwardIterate<R> dpiv_forward_iterate(const MatPoly<R>& h,
                                              const Mat<R>& beta0,
                                              const Mat<R>& beta1,
                                              const Mat<R>& gamma1,
                                              int n_target) {
  const int N = beta0.rows;
  Mat<R> I = Mat<R>::identity(N);
  Mat<R> h0 = h.at(0), h1 = h.at(1), h2 = h.at(2);
  double hscale = std::max({1.0, norm_max(h0), norm_max(h1)});
  if (norm_max(h2) < 1e-12 * hscale)
    fail(ErrorCode::StepSingular,
         "dpiv_forward_iterate: quadratic coefficient vanishes");
  Mat<R> h2i;
  try {
    h2i = inv(h2);
  } catch (const Error&) {
    fail(ErrorCode::StepSingular,
         "dpiv_forward_iterate: quadratic coefficient not invertible");
  }

  ForwardIterate<R> out;
  out.beta = {beta0, beta1};
  out.gamma = {Mat<R>::zero(N, N), gamma1};
  for (int n = 1; n < n_target; ++n) {
    const Mat<R>&bn = out.beta[n], &bm = out.beta[n - 1], &gn = out.gamma[n];
    Mat<R> Sn = Mat<R>::zero(N, N), Sn1 = Mat<R>::zero(N, N);
    for (int k = 0; k < n; ++k) Sn += out.beta[k];
    Sn1 = Sn + bn;
    Mat<R> mun = h2 * bn + h1 - I * double(2 * n + 1);
    Mat<R> gp = -(h2i * (I * double(2 * n + 1) + h0 + h2 * gn + mun * bn -
                         Sn - Sn1));
    Mat<R> gpi;
    try {
      gpi = inv(gp);
    } catch (const Error&) {
      fail(ErrorCode::StepSingular,
           "dpiv_forward_iterate: step produced a singular gamma at n = " +
               std::to_string(n + 1));
    }
    Mat<R> rhs = -bn + bn * bn + gn * (h2 * (bn + bm) + h1 - I * double(2 * n - 1));
    Mat<R> bp = h2i * (rhs * gpi - h2 * bn - h1 + I * double(2 * n + 3));
    out.gamma.push_back(gp);
    out.beta.push_back(bp);
  }
  return out;
}

}  // namespace mbop
