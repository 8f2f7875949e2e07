#pragma once

// Monomial moments M_k = integral over (0,1) of t^k W(t) dt, computed in a
// single quadrature pass (all powers share the weight evaluations), plus
// block-Hankel assembly and regularity, a closed-form Beta-series oracle for
// the diagonal-exponent family, and the reflection transform.

#include <cmath>
#include <cstdio>
#include <vector>

#include "mbop/quad.hpp"
#include "mbop/weight.hpp"

namespace mbop {

template <class R>
struct MomentTable {
  std::vector<Mat<R>> M;
  double est_error = 0.0;

  int count() const { return int(M.size()); }
  const Mat<R>& operator[](int k) const {
    if (k < 0 || k >= int(M.size()))
      fail(ErrorCode::InsufficientMoments,
           "moment index " + std::to_string(k) + " requested, table holds " +
               std::to_string(M.size()));
    return M[size_t(k)];
  }
};

template <class R>
inline MomentTable<R> compute_moments(const Weight<R>& w, int kmax,
                                      QuadOptions opt = {}) {
  int N = w.N;
  auto res = integrate_01<R>(
      [&](const QuadNode<R>& n) {
        Mat<R> W = w.full_on01(n.t, n.lnt, n.lnomt);
        Mat<R> S(N, N * (kmax + 1));
        Mat<R> cur = W;
        for (int k = 0; k <= kmax; ++k) {
          set_block(S, 0, k * N, cur);
          if (k < kmax) cur = cur * cplx<R>(n.t);
        }
        return S;
      },
      opt, "moments");
  MomentTable<R> table;
  table.est_error = res.est_error;
  table.M.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k)
    table.M.push_back(get_block(res.value, 0, k * N, N, N));
  return table;
}

// n x n block-Hankel with block (i,j) = M_{i+j}.
template <class R>
inline Mat<R> block_hankel(const MomentTable<R>& t, int n) {
  int N = t[0].rows;
  Mat<R> H(n * N, n * N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) set_block(H, i * N, j * N, t[i + j]);
  return H;
}

// sigma_min / sigma_max of the n-th block-Hankel section (double precision;
// the gate is coarse at 1e-10 so the downcast costs nothing).
template <class R>
inline double hankel_regularity(const MomentTable<R>& t, int n) {
  if (n == 0) return 1.0;
  std::vector<double> s = singular_values(down(block_hankel(t, n)));
  if (s.front() == 0.0) return 0.0;
  return s.back() / s.front();
}

template <class R>
inline void require_hankel_regular(const MomentTable<R>& t, int n) {
  double r = hankel_regularity(t, n);
  if (r < real_traits<R>::hankel_gate) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", r);
    fail(ErrorCode::HankelSingular,
         "block-Hankel section n = " + std::to_string(n) +
             " is numerically singular (sigma ratio " + buf + ")");
  }
}

// Moments of t -> W(1-t): integral t^k W(1-t) dt = sum_j C(k,j)(-1)^j M_j.
template <class R>
inline std::vector<Mat<R>> reflect_moments(const MomentTable<R>& t, int kmax) {
  std::vector<Mat<R>> out;
  for (int k = 0; k <= kmax; ++k) {
    Mat<R> acc = Mat<R>::zero(t[0].rows, t[0].cols);
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      acc += t[j] * (j % 2 ? -binom : binom);
      binom = binom * double(k - j) / double(j + 1);
    }
    out.push_back(acc);
  }
  return out;
}

// ---- closed-form oracle for diagonal algebraic exponents --------------

namespace detail {

inline bool real_diagonal(const Mat<double>& A) {
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      if (A(i, j).im != 0.0) return false;
      if (i != j && A(i, j).re != 0.0) return false;
    }
  return true;
}

inline bool real_scalar(const Mat<double>& A) {
  if (!real_diagonal(A)) return false;
  for (int i = 1; i < A.rows; ++i)
    if (A(i, i).re != A(0, 0).re) return false;
  return true;
}

inline bool real_poly(const MatPoly<double>& P) {
  for (const auto& c : P.c)
    for (const auto& z : c.a)
      if (z.im != 0.0) return false;
  return true;
}

inline bool is_identity(const Mat<double>& A) {
  return norm_max(A - Mat<double>::identity(A.rows)) == 0.0;
}

// integral of t^q (1-t)^b e^{g t} dt as a Beta series.
inline double beta_exp_integral(double q, double b, double g) {
  double a0 = q + 1.0, b0 = b + 1.0;
  double B = std::exp(std::lgamma(a0) + std::lgamma(b0) - std::lgamma(a0 + b0));
  double acc = 0.0, term = B;
  for (int s = 0; s < 200; ++s) {
    acc += term;
    if (std::fabs(term) < 1e-18 * std::fabs(acc) && s > std::fabs(g)) break;
    // next: gamma^{s+1}/(s+1)! * Beta(a0+s+1, b0)
    term *= g / double(s + 1) * (a0 + s) / (a0 + b0 + s);
  }
  return acc;
}

}  // namespace detail

// The closed form applies when both algebraic exponents are real diagonal,
// the linear exponents are real scalars, the constant factors are I, and
// the polynomial factors are real.
inline bool semianalytic_supported(const Weight<double>& w) {
  using namespace detail;
  return real_diagonal(w.AL) && real_diagonal(w.AR) && real_diagonal(w.BL) &&
         real_diagonal(w.BR) && real_scalar(w.EL) && real_scalar(w.ER) &&
         is_identity(w.W0L) && is_identity(w.W0R) && real_poly(w.HL) &&
         real_poly(w.HR);
}

inline std::vector<Mat<double>> semianalytic_moments(const Weight<double>& w,
                                                     int kmax) {
  if (!semianalytic_supported(w))
    fail(ErrorCode::UnsupportedDegree,
         w.name + ": weight outside the closed-form moment family");
  int N = w.N;
  double g = w.EL(0, 0).re + w.ER(0, 0).re;
  std::vector<Mat<double>> out(kmax + 1, Mat<double>::zero(N, N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l) {
        // scalar polynomial HL(i,l) * HR(l,j)
        std::vector<double> p(size_t(std::max(0, w.HL.degree()) +
                                     std::max(0, w.HR.degree()) + 1),
                              0.0);
        for (int a = 0; a <= w.HL.degree(); ++a)
          for (int b = 0; b <= w.HR.degree(); ++b)
            p[a + b] += w.HL.coeff(a)(i, l).re * w.HR.coeff(b)(l, j).re;
        double alpha = w.AL(l, l).re + w.AR(l, l).re;
        double beta = w.BL(l, l).re + w.BR(l, l).re;
        for (int k = 0; k <= kmax; ++k) {
          double v = 0.0;
          for (size_t m = 0; m < p.size(); ++m)
            if (p[m] != 0.0)
              v += p[m] *
                   detail::beta_exp_integral(k + double(m) + alpha, beta, g);
          out[k](i, j) += cd(v);
        }
      }
  return out;
}

}  // namespace mbop
