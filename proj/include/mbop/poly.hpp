#pragma once

// Polynomials with square-matrix coefficients in a scalar variable,
// ascending storage.  Coefficient order is preserved everywhere: products
// keep the left factor's coefficients on the left, which is what makes the
// coefficient-level identity checks meaningful for non-commuting data.

#include <vector>

#include "mbop/matrix.hpp"

namespace mbop {

template <class R>
struct MatPoly {
  int rows = 0, cols = 0;
  std::vector<Mat<R>> c;  // c[k] multiplies z^k

  MatPoly() = default;
  MatPoly(int r, int co) : rows(r), cols(co) {}
  explicit MatPoly(std::vector<Mat<R>> cc) : c(std::move(cc)) {
    if (!c.empty()) {
      rows = c[0].rows;
      cols = c[0].cols;
    }
  }
  static MatPoly constant(const Mat<R>& m) {
    MatPoly p;
    p.rows = m.rows;
    p.cols = m.cols;
    p.c.push_back(m);
    return p;
  }
  // (z - 0) I, convenience for building transfer-style entries.
  static MatPoly monomial(const Mat<R>& coeff, int power) {
    MatPoly p;
    p.rows = coeff.rows;
    p.cols = coeff.cols;
    p.c.assign(power + 1, Mat<R>::zero(coeff.rows, coeff.cols));
    p.c[power] = coeff;
    return p;
  }

  int degree() const { return int(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }

  const Mat<R>& coeff(int k) const { return c[k]; }

  // Coefficient with zero-padding past the stored degree.
  Mat<R> at(int k) const {
    if (k >= 0 && k < int(c.size())) return c[k];
    return Mat<R>::zero(rows, cols);
  }

  Mat<R> eval(const cplx<R>& z) const {
    if (c.empty()) return Mat<R>::zero(rows, cols);
    Mat<R> r = c.back();
    for (int k = int(c.size()) - 2; k >= 0; --k) r = r * z + c[k];
    return r;
  }

  MatPoly derivative() const {
    MatPoly d;
    d.rows = rows;
    d.cols = cols;
    for (size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * double(k));
    return d;
  }

  MatPoly& trim(double tol) {
    while (!c.empty() && norm_max(c.back()) <= tol) c.pop_back();
    return *this;
  }
};

template <class R>
inline MatPoly<R> operator+(const MatPoly<R>& A, const MatPoly<R>& B) {
  MatPoly<R> C;
  C.rows = A.rows ? A.rows : B.rows;
  C.cols = A.cols ? A.cols : B.cols;
  size_t n = std::max(A.c.size(), B.c.size());
  for (size_t k = 0; k < n; ++k) {
    Mat<R> m = Mat<R>::zero(C.rows, C.cols);
    if (k < A.c.size()) m += A.c[k];
    if (k < B.c.size()) m += B.c[k];
    C.c.push_back(m);
  }
  return C;
}

template <class R>
inline MatPoly<R> operator-(const MatPoly<R>& A) {
  MatPoly<R> C = A;
  for (auto& m : C.c) m = -m;
  return C;
}

template <class R>
inline MatPoly<R> operator-(const MatPoly<R>& A, const MatPoly<R>& B) {
  return A + (-B);
}

template <class R>
inline MatPoly<R> operator*(const MatPoly<R>& A, const MatPoly<R>& B) {
  MatPoly<R> C;
  C.rows = A.rows;
  C.cols = B.cols;
  if (A.c.empty() || B.c.empty()) return C;
  C.c.assign(A.c.size() + B.c.size() - 1, Mat<R>::zero(A.rows, B.cols));
  for (size_t i = 0; i < A.c.size(); ++i)
    for (size_t j = 0; j < B.c.size(); ++j) C.c[i + j] += A.c[i] * B.c[j];
  return C;
}

template <class R>
inline MatPoly<R> operator*(const Mat<R>& M, const MatPoly<R>& A) {
  MatPoly<R> C;
  C.rows = M.rows;
  C.cols = A.cols;
  for (const auto& coeff : A.c) C.c.push_back(M * coeff);
  return C;
}

template <class R>
inline MatPoly<R> operator*(const MatPoly<R>& A, const Mat<R>& M) {
  MatPoly<R> C;
  C.rows = A.rows;
  C.cols = M.cols;
  for (const auto& coeff : A.c) C.c.push_back(coeff * M);
  return C;
}

template <class R>
inline MatPoly<R> operator*(const MatPoly<R>& A, const cplx<R>& s) {
  MatPoly<R> C = A;
  for (auto& m : C.c) m = m * s;
  return C;
}

template <class R>
inline MatPoly<R> operator*(const MatPoly<R>& A, double s) {
  MatPoly<R> C = A;
  for (auto& m : C.c) m = m * s;
  return C;
}

template <class R>
inline double coeff_norm_max(const MatPoly<R>& A) {
  double m = 0.0;
  for (const auto& coeff : A.c) m = std::max(m, norm_max(coeff));
  return m;
}

template <class R>
inline MatPoly<double> down(const MatPoly<R>& A) {
  MatPoly<double> d(A.rows, A.cols);
  for (const auto& m : A.c) d.c.push_back(down(m));
  return d;
}

}  // namespace mbop
