#pragma once

// Dense complex matrices over a templated real scalar (double or dd).
// Row-major, value semantics, sized for the small dimensions this library
// works at (N <= 4 blocks, block-Hankel systems up to a few dozen rows).
// Products use Neumaier-compensated accumulation so double-precision moment
// and recurrence chains do not silently lose the last digits.

#include <string>
#include <vector>

#include "mbop/error.hpp"
#include "mbop/scalar.hpp"

namespace mbop {

template <class R>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<cplx<R>> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = cplx<R>(R(1.0));
    return m;
  }
  static Mat zero(int r, int c) { return Mat(r, c); }

  cplx<R>& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const cplx<R>& operator()(int i, int j) const {
    return a[size_t(i) * cols + j];
  }

  bool square() const { return rows == cols; }
};

namespace detail {

// Compensated accumulator (Neumaier): exact enough that a long product
// chain only loses O(eps) rather than O(n eps).
template <class R>
struct Acc {
  R s{}, c{};
  void add(const R& x) {
    using std::abs;
    R t = s + x;
    if (abs(s) >= abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  R total() const { return s + c; }
};

}  // namespace detail

template <class R>
inline Mat<R> operator+(const Mat<R>& A, const Mat<R>& B) {
  Mat<R> C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] + B.a[i];
  return C;
}

template <class R>
inline Mat<R> operator-(const Mat<R>& A, const Mat<R>& B) {
  Mat<R> C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] - B.a[i];
  return C;
}

template <class R>
inline Mat<R> operator-(const Mat<R>& A) {
  Mat<R> C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = -A.a[i];
  return C;
}

template <class R>
inline Mat<R> operator*(const Mat<R>& A, const cplx<R>& s) {
  Mat<R> C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] * s;
  return C;
}

template <class R>
inline Mat<R> operator*(const cplx<R>& s, const Mat<R>& A) {
  return A * s;
}

template <class R>
inline Mat<R> operator*(const Mat<R>& A, double s) {
  return A * cplx<R>(real_traits<R>::from_double(s));
}

template <class R>
inline Mat<R> operator*(double s, const Mat<R>& A) {
  return A * cplx<R>(real_traits<R>::from_double(s));
}

template <class R>
inline Mat<R> operator*(const Mat<R>& A, const Mat<R>& B) {
  Mat<R> C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < B.cols; ++j) {
      detail::Acc<R> re, im;
      for (int k = 0; k < A.cols; ++k) {
        const cplx<R>& x = A(i, k);
        const cplx<R>& y = B(k, j);
        re.add(x.re * y.re);
        re.add(-(x.im * y.im));
        im.add(x.re * y.im);
        im.add(x.im * y.re);
      }
      C(i, j) = cplx<R>(re.total(), im.total());
    }
  }
  return C;
}

template <class R>
inline Mat<R>& operator+=(Mat<R>& A, const Mat<R>& B) {
  return A = A + B;
}
template <class R>
inline Mat<R>& operator-=(Mat<R>& A, const Mat<R>& B) {
  return A = A - B;
}

template <class R>
inline Mat<R> transpose(const Mat<R>& A) {
  Mat<R> C(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C(j, i) = A(i, j);
  return C;
}

template <class R>
inline Mat<R> conj_transpose(const Mat<R>& A) {
  Mat<R> C(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C(j, i) = conj(A(i, j));
  return C;
}

template <class R>
inline cplx<R> trace(const Mat<R>& A) {
  cplx<R> t{};
  for (int i = 0; i < A.rows; ++i) t += A(i, i);
  return t;
}

template <class R>
inline Mat<R> commutator(const Mat<R>& A, const Mat<R>& B) {
  return A * B - B * A;
}

// Diagnostic norms return double: they feed tolerances and reports, where
// the magnitude (not 106-bit precision) is what matters.
template <class R>
inline double norm_max(const Mat<R>& A) {
  double m = 0.0;
  for (const auto& z : A.a) m = std::max(m, to_double(abs(z)));
  return m;
}

template <class R>
inline double norm_inf(const Mat<R>& A) {
  double m = 0.0;
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += to_double(abs(A(i, j)));
    m = std::max(m, s);
  }
  return m;
}

template <class R>
inline double norm_fro(const Mat<R>& A) {
  double s = 0.0;
  for (const auto& z : A.a) s += to_double(norm2(z));
  return std::sqrt(s);
}

template <class R>
inline Mat<R> get_block(const Mat<R>& A, int i0, int j0, int r, int c) {
  Mat<R> B(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) B(i, j) = A(i0 + i, j0 + j);
  return B;
}

template <class R>
inline void set_block(Mat<R>& A, int i0, int j0, const Mat<R>& B) {
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) A(i0 + i, j0 + j) = B(i, j);
}

template <class R>
inline Mat<double> down(const Mat<R>& A) {
  Mat<double> B(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) B.a[i] = down(A.a[i]);
  return B;
}

// LU with partial pivoting; shared by inv/det.  Pivoting compares the cheap
// |re|+|im| magnitude, which is within sqrt(2) of the true modulus.
namespace detail {

template <class R>
struct LU {
  Mat<R> lu;
  std::vector<int> perm;
  int sign = 1;
};

template <class R>
inline LU<R> lu_factor(Mat<R> A, const char* ctx) {
  if (!A.square()) fail(ErrorCode::Singular, std::string(ctx) + ": not square");
  int n = A.rows;
  LU<R> f;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    R best = abs1(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      R v = abs1(A(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (to_double(best) < 1e-300)
      fail(ErrorCode::Singular, std::string(ctx) + ": pivot vanished");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    for (int i = k + 1; i < n; ++i) {
      cplx<R> m = A(i, k) / A(k, k);
      A(i, k) = m;
      for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
    }
  }
  f.lu = std::move(A);
  return f;
}

template <class R>
inline Mat<R> lu_solve(const LU<R>& f, const Mat<R>& B) {
  int n = f.lu.rows;
  Mat<R> X(n, B.cols);
  for (int c = 0; c < B.cols; ++c) {
    // Pb, forward, back.
    std::vector<cplx<R>> y(n);
    for (int i = 0; i < n; ++i) y[i] = B(f.perm[i], c);
    for (int i = 1; i < n; ++i) {
      cplx<R> s = y[i];
      for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      cplx<R> s = y[i];
      for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s / f.lu(i, i);
    }
    for (int i = 0; i < n; ++i) X(i, c) = y[i];
  }
  return X;
}

}  // namespace detail

template <class R>
inline Mat<R> inv(const Mat<R>& A, const char* ctx = "inv") {
  auto f = detail::lu_factor(A, ctx);
  Mat<R> I = Mat<R>::identity(A.rows);
  Mat<R> X = detail::lu_solve(f, I);
  double cond = norm_inf(A) * norm_inf(X);
  if (cond > real_traits<R>::cond_limit)
    fail(ErrorCode::IllConditioned,
         std::string(ctx) + ": condition estimate " + std::to_string(cond));
  return X;
}

template <class R>
inline cplx<R> det(const Mat<R>& A) {
  if (A.rows == 0) return cplx<R>(R(1.0));
  detail::LU<R> f;
  try {
    f = detail::lu_factor(A, "det");
  } catch (const Error&) {
    return cplx<R>{};  // exact-zero pivot path: determinant is ~0
  }
  cplx<R> d(real_traits<R>::from_double(double(f.sign)));
  for (int i = 0; i < A.rows; ++i) d *= f.lu(i, i);
  return d;
}

// Column-pivoted Householder QR solve: A X = B with A square.  Pivoting
// keeps the block-Hankel systems honest about near-rank-deficiency.
template <class R>
inline Mat<R> qr_solve(Mat<R> A, Mat<R> B, const char* ctx = "qr_solve") {
  using std::abs;
  using std::sqrt;
  if (!A.square() || A.rows != B.rows)
    fail(ErrorCode::Singular, std::string(ctx) + ": shape mismatch");
  int n = A.rows;
  std::vector<int> colperm(n);
  for (int j = 0; j < n; ++j) colperm[j] = j;
  std::vector<R> colnorm(n);
  for (int j = 0; j < n; ++j) {
    R s{};
    for (int i = 0; i < n; ++i) s += norm2(A(i, j));
    colnorm[j] = s;
  }
  R diag_max{};
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int j = k + 1; j < n; ++j)
      if (colnorm[j] > colnorm[p]) p = j;
    if (p != k) {
      for (int i = 0; i < n; ++i) std::swap(A(i, k), A(i, p));
      std::swap(colnorm[k], colnorm[p]);
      std::swap(colperm[k], colperm[p]);
    }
    // Householder vector for column k below the diagonal.
    R xnorm{};
    for (int i = k; i < n; ++i) xnorm += norm2(A(i, k));
    xnorm = sqrt(xnorm);
    if (to_double(xnorm) < 1e-280)
      fail(ErrorCode::Singular, std::string(ctx) + ": rank deficient");
    cplx<R> x0 = A(k, k);
    R ax0 = mbop::abs(x0);
    cplx<R> phase = (to_double(ax0) == 0.0) ? cplx<R>(R(1.0)) : x0 / ax0;
    cplx<R> alpha = -(phase * xnorm);
    // v = x - alpha e_k, stored in place; beta = 2/||v||^2.
    A(k, k) = x0 - alpha;
    R vnorm{};
    for (int i = k; i < n; ++i) vnorm += norm2(A(i, k));
    if (to_double(vnorm) < 1e-280)
      fail(ErrorCode::Singular, std::string(ctx) + ": rank deficient");
    R beta = R(2.0) / vnorm;
    // Apply reflector to remaining columns of A and to B.
    for (int j = k + 1; j < n; ++j) {
      cplx<R> dot{};
      for (int i = k; i < n; ++i) dot += conj(A(i, k)) * A(i, j);
      dot = dot * beta;
      for (int i = k; i < n; ++i) A(i, j) -= A(i, k) * dot;
    }
    for (int j = 0; j < B.cols; ++j) {
      cplx<R> dot{};
      for (int i = k; i < n; ++i) dot += conj(A(i, k)) * B(i, j);
      dot = dot * beta;
      for (int i = k; i < n; ++i) B(i, j) -= A(i, k) * dot;
    }
    A(k, k) = alpha;  // diagonal of R
    if (mbop::abs(alpha) > diag_max) diag_max = mbop::abs(alpha);
    if (to_double(mbop::abs(alpha)) <
        100.0 * real_traits<R>::eps * to_double(diag_max))
      fail(ErrorCode::Singular, std::string(ctx) + ": rank deficient");
    for (int j = k + 1; j < n; ++j) colnorm[j] -= norm2(A(k, j));
  }
  // Back substitution, then undo the column permutation.
  Mat<R> X(n, B.cols);
  for (int c = 0; c < B.cols; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      cplx<R> s = B(i, c);
      for (int j = i + 1; j < n; ++j) s -= A(i, j) * X(j, c);
      X(i, c) = s / A(i, i);
    }
  }
  Mat<R> Xp(n, B.cols);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < B.cols; ++c) Xp(colperm[i], c) = X(i, c);
  return Xp;
}

}  // namespace mbop
