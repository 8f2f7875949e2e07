#pragma once

// mat_exp over either scalar by scaling-and-squaring with a Taylor core;
// mat_log in double only: spectral route when the spectrum is cleanly
// separated, otherwise a trace-normalized Taylor series (which terminates
// exactly for unipotent arguments).  Principal branch throughout; any
// eigenvalue on the closed negative real axis is a BranchCut failure.

#include <vector>

#include "mbop/eig.hpp"
#include "mbop/matrix.hpp"

namespace mbop {

template <class R>
inline Mat<R> mat_exp(const Mat<R>& A) {
  int n = A.rows;
  double nrm = norm_inf(A);
  int s = 0;
  while (nrm > 0.25 && s < 80) {
    nrm *= 0.5;
    ++s;
  }
  Mat<R> B = A * (1.0 / std::ldexp(1.0, s));  // power of two: exact rescale
  Mat<R> T = Mat<R>::identity(n);
  Mat<R> term = Mat<R>::identity(n);
  for (int k = 1; k <= 64; ++k) {
    // 1/k formed in the working scalar: a double-rounded reciprocal would
    // cap the dd path at ~1e-17 relative error.
    cplx<R> invk(R(1.0) / R(double(k)));
    term = term * B * invk;
    T += term;
    if (norm_max(term) < 0.25 * real_traits<R>::eps) break;
  }
  for (int i = 0; i < s; ++i) T = T * T;
  return T;
}

inline Mat<double> mat_log(const Mat<double>& A) {
  int n = A.rows;
  std::vector<cd> lam = eigenvalues(A);
  double scale = 0.0;
  for (const cd& l : lam) scale = std::max(scale, abs(l));
  for (const cd& l : lam) {
    if (l.re <= 1e-14 * scale && std::fabs(l.im) <= 1e-13 * std::max(scale, 1.0))
      fail(ErrorCode::BranchCut,
           "mat_log: eigenvalue on the closed negative real axis");
  }
  double gap = 1e300;
  for (size_t i = 0; i < lam.size(); ++i)
    for (size_t j = i + 1; j < lam.size(); ++j)
      gap = std::min(gap, abs(lam[i] - lam[j]));
  if (n > 1 && gap > 1e-8 * std::max(scale, 1.0)) {
    Eig e = eigensystem(A);
    if (e.vector_residual < 1e-8) {
      Mat<double> V = e.vectors;
      Mat<double> Vi = inv(V, "mat_log eigenvector basis");
      Mat<double> L(n, n);
      for (int i = 0; i < n; ++i) L(i, i) = log(e.values[i]);
      return V * L * Vi;
    }
  }
  // Trace-normalized Taylor: A = c (I + S), log A = (log c) I + log(I + S).
  cd c = trace(A) / cd(double(n));
  if (abs(c) < 1e-300 || (c.re <= 0.0 && std::fabs(c.im) <= 1e-14 * abs(c)))
    fail(ErrorCode::BranchCut, "mat_log: trace normalization on the cut");
  Mat<double> S = A * (cd(1.0) / c) - Mat<double>::identity(n);
  Mat<double> out(n, n);
  Mat<double> power = S;
  double ref = std::max(1.0, norm_max(A));
  bool converged = false;
  for (int k = 1; k <= 64; ++k) {
    Mat<double> term = power * ((k % 2 == 1 ? 1.0 : -1.0) / double(k));
    out += term;
    if (norm_max(term) < 1e-18 * ref) {
      converged = true;
      break;
    }
    power = power * S;
  }
  if (!converged)
    fail(ErrorCode::UnsupportedDegree,
         "mat_log: series did not converge within degree 64");
  cd lc = log(c);
  for (int i = 0; i < n; ++i) out(i, i) += lc;
  return out;
}

}  // namespace mbop
