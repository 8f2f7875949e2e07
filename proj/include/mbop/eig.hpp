#pragma once

// Double-precision spectral routines used by validation gates: dense complex
// eigenvalues (Hessenberg + explicitly shifted QR), eigenvectors by inverse
// iteration, and singular values by one-sided Jacobi.  These gate
// construction and branch choices; the verified identities themselves never
// run through here, so double precision is all that is required.

#include <algorithm>
#include <utility>
#include <vector>

#include "mbop/matrix.hpp"

namespace mbop {

namespace detail {

// Plain Householder QR with explicit Q; n is tiny so O(n^3) per sweep is
// irrelevant.
inline void qr_explicit(const Mat<double>& A, Mat<double>& Q, Mat<double>& R) {
  int n = A.rows;
  R = A;
  std::vector<Mat<double>> vs;
  std::vector<double> betas;
  for (int k = 0; k < n; ++k) {
    double xnorm = 0.0;
    for (int i = k; i < n; ++i) xnorm += to_double(norm2(R(i, k)));
    xnorm = std::sqrt(xnorm);
    Mat<double> v(n, 1);
    if (xnorm < 1e-300) {
      vs.push_back(v);
      betas.push_back(0.0);
      continue;
    }
    cd x0 = R(k, k);
    double ax0 = abs(x0);
    cd phase = ax0 == 0.0 ? cd(1.0) : x0 / ax0;
    cd alpha = -(phase * xnorm);
    for (int i = k; i < n; ++i) v(i, 0) = R(i, k);
    v(k, 0) = x0 - alpha;
    double vnorm = 0.0;
    for (int i = k; i < n; ++i) vnorm += to_double(norm2(v(i, 0)));
    if (vnorm < 1e-300) {
      vs.push_back(Mat<double>(n, 1));
      betas.push_back(0.0);
      continue;
    }
    double beta = 2.0 / vnorm;
    for (int j = k; j < n; ++j) {
      cd dot{};
      for (int i = k; i < n; ++i) dot += conj(v(i, 0)) * R(i, j);
      dot = dot * beta;
      for (int i = k; i < n; ++i) R(i, j) -= v(i, 0) * dot;
    }
    vs.push_back(v);
    betas.push_back(beta);
  }
  Q = Mat<double>::identity(n);
  for (int k = n - 1; k >= 0; --k) {
    if (betas[k] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      cd dot{};
      for (int i = k; i < n; ++i) dot += conj(vs[k](i, 0)) * Q(i, j);
      dot = dot * betas[k];
      for (int i = k; i < n; ++i) Q(i, j) -= vs[k](i, 0) * dot;
    }
  }
}

inline Mat<double> hessenberg(Mat<double> A) {
  int n = A.rows;
  for (int k = 0; k < n - 2; ++k) {
    double xnorm = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm += to_double(norm2(A(i, k)));
    xnorm = std::sqrt(xnorm);
    if (xnorm < 1e-300) continue;
    cd x0 = A(k + 1, k);
    double ax0 = abs(x0);
    cd phase = ax0 == 0.0 ? cd(1.0) : x0 / ax0;
    cd alpha = -(phase * xnorm);
    std::vector<cd> v(n);
    for (int i = k + 1; i < n; ++i) v[i] = A(i, k);
    v[k + 1] = x0 - alpha;
    double vnorm = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm += to_double(norm2(v[i]));
    if (vnorm < 1e-300) continue;
    double beta = 2.0 / vnorm;
    // A <- H A H with H = I - beta v v^H (similarity keeps the spectrum).
    for (int j = 0; j < n; ++j) {
      cd dot{};
      for (int i = k + 1; i < n; ++i) dot += conj(v[i]) * A(i, j);
      dot = dot * beta;
      for (int i = k + 1; i < n; ++i) A(i, j) -= v[i] * dot;
    }
    for (int i = 0; i < n; ++i) {
      cd dot{};
      for (int j = k + 1; j < n; ++j) dot += A(i, j) * v[j];
      dot = dot * beta;
      for (int j = k + 1; j < n; ++j) A(i, j) -= dot * conj(v[j]);
    }
  }
  return A;
}

inline std::pair<cd, cd> eig2(const cd& a, const cd& b, const cd& c,
                              const cd& d) {
  cd m = (a + d) * 0.5;
  cd s = sqrt(m * m - (a * d - b * c));
  return {m + s, m - s};
}

}  // namespace detail

inline std::vector<cd> eigenvalues(const Mat<double>& A0) {
  int n = A0.rows;
  std::vector<cd> out;
  if (n == 0) return out;
  if (n == 1) return {A0(0, 0)};
  if (n == 2) {
    auto [l1, l2] = detail::eig2(A0(0, 0), A0(0, 1), A0(1, 0), A0(1, 1));
    return {l1, l2};
  }
  Mat<double> H = detail::hessenberg(A0);
  int m = n - 1;
  int iters = 0;
  const int max_iters = 60 * n;
  while (m > 0) {
    // Deflate converged subdiagonals.
    int found = -1;
    for (int k = m; k >= 1; --k) {
      double sub = abs(H(k, k - 1));
      double diag = abs(H(k - 1, k - 1)) + abs(H(k, k));
      if (sub <= 1e-15 * (diag + 1e-300)) {
        H(k, k - 1) = cd{};
        if (k == m) {
          found = m;
          break;
        }
      }
    }
    if (found == m) {
      out.push_back(H(m, m));
      --m;
      continue;
    }
    if (++iters > max_iters)
      fail(ErrorCode::IllConditioned, "eigenvalue iteration stalled");
    // Wilkinson shift from the trailing 2x2 of the active window.
    auto [l1, l2] = detail::eig2(H(m - 1, m - 1), H(m - 1, m), H(m, m - 1),
                                 H(m, m));
    cd mu = (abs1(l1 - H(m, m)) < abs1(l2 - H(m, m))) ? l1 : l2;
    Mat<double> W = get_block(H, 0, 0, m + 1, m + 1);
    for (int i = 0; i <= m; ++i) W(i, i) -= mu;
    Mat<double> Q, R;
    detail::qr_explicit(W, Q, R);
    Mat<double> W2 = R * Q;
    for (int i = 0; i <= m; ++i) W2(i, i) += mu;
    set_block(H, 0, 0, W2);
  }
  out.push_back(H(0, 0));
  std::reverse(out.begin(), out.end());
  return out;
}

struct Eig {
  std::vector<cd> values;
  Mat<double> vectors;       // column k pairs with values[k]
  double vector_residual = 0.0;  // max ||A v - lambda v|| over unit vectors
};

inline Eig eigensystem(const Mat<double>& A) {
  int n = A.rows;
  Eig e;
  e.values = eigenvalues(A);
  e.vectors = Mat<double>(n, n);
  double scale = std::max(norm_inf(A), 1e-300);
  for (int k = 0; k < n; ++k) {
    // Inverse iteration; the slight shift keeps the solve nonsingular while
    // leaving the wanted eigendirection hugely dominant.
    cd lam = e.values[k];
    Mat<double> B = A;
    cd shift = lam + cd(3e-13 * scale, 1e-13 * scale);
    for (int i = 0; i < n; ++i) B(i, i) -= shift;
    Mat<double> v(n, 1);
    for (int i = 0; i < n; ++i) v(i, 0) = cd(1.0 + 0.05 * i, 0.1 * (i + 1));
    detail::LU<double> f;
    try {
      f = detail::lu_factor(B, "eigensystem");
    } catch (const Error&) {
      for (int i = 0; i < n; ++i) B(i, i) -= cd(1e-12 * scale);
      f = detail::lu_factor(B, "eigensystem");
    }
    for (int it = 0; it < 3; ++it) {
      v = detail::lu_solve(f, v);
      double nv = norm_fro(v);
      if (nv < 1e-300) break;
      v = v * (1.0 / nv);
    }
    // Deterministic phase: largest entry made positive real.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (abs1(v(i, 0)) > abs1(v(imax, 0))) imax = i;
    cd piv = v(imax, 0);
    double apiv = abs(piv);
    if (apiv > 0.0) v = v * (conj(piv) / cd(apiv));
    for (int i = 0; i < n; ++i) e.vectors(i, k) = v(i, 0);
    Mat<double> r = A * v - v * lam;
    e.vector_residual = std::max(e.vector_residual, norm_fro(r) / scale);
  }
  return e;
}

// Singular values by one-sided Jacobi: rotations keep small singular values
// relatively accurate, which the Hankel-regularity gate depends on.
inline std::vector<double> singular_values(Mat<double> A) {
  int m = A.rows, n = A.cols;
  const double tol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double a = 0.0, b = 0.0;
        cd g{};
        for (int i = 0; i < m; ++i) {
          a += to_double(norm2(A(i, p)));
          b += to_double(norm2(A(i, q)));
          g += conj(A(i, p)) * A(i, q);
        }
        double ag = abs(g);
        if (ag <= tol * std::sqrt(a * b) + 1e-300) continue;
        rotated = true;
        // Annihilating tangent: t^2 - 2 zeta t - 1 = 0, smaller root.
        double zeta = (b - a) / (2.0 * ag);
        double t = (zeta >= 0.0 ? -1.0 : 1.0) /
                   (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double cth = 1.0 / std::sqrt(1.0 + t * t);
        double tau = cth * t;
        cd phase = g / cd(ag);
        for (int i = 0; i < m; ++i) {
          cd u = A(i, p), v = A(i, q);
          A(i, p) = u * cth + v * (conj(phase) * tau);
          A(i, q) = v * cth - u * (phase * tau);
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += to_double(norm2(A(i, j)));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

}  // namespace mbop
