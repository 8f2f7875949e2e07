#pragma once

// 2x2-block conveniences for the 2N x 2N frames: assembly, extraction and
// the symplectic-style involution J = [[0, -I], [I, 0]] with J^2 = -I that
// conjugates the two frame orientations into each other.

#include "mbop/matrix.hpp"

namespace mbop {

template <class R>
inline Mat<R> block2(const Mat<R>& A, const Mat<R>& B, const Mat<R>& C,
                     const Mat<R>& D) {
  int n = A.rows;
  Mat<R> M(2 * n, A.cols + B.cols);
  set_block(M, 0, 0, A);
  set_block(M, 0, A.cols, B);
  set_block(M, n, 0, C);
  set_block(M, n, A.cols, D);
  return M;
}

template <class R>
inline Mat<R> block_diag2(const Mat<R>& A, const Mat<R>& D) {
  return block2(A, Mat<R>::zero(A.rows, D.cols), Mat<R>::zero(D.rows, A.cols),
                D);
}

// blk(i,j) of a 2x2-block square matrix.
template <class R>
inline Mat<R> blk(const Mat<R>& M, int i, int j) {
  int n = M.rows / 2;
  return get_block(M, i * n, j * n, n, n);
}

template <class R>
inline Mat<R> Jmat(int n) {
  Mat<R> J(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    J(i, n + i) = cplx<R>(R(-1.0));
    J(n + i, i) = cplx<R>(R(1.0));
  }
  return J;
}

// J M J^{-1} for the J above: [[a,b],[c,d]] -> [[d,-c],[-b,a]].
template <class R>
inline Mat<R> j_conjugate(const Mat<R>& M) {
  int n = M.rows / 2;
  Mat<R> out(2 * n, 2 * n);
  set_block(out, 0, 0, blk(M, 1, 1));
  set_block(out, 0, n, -blk(M, 1, 0));
  set_block(out, n, 0, -blk(M, 0, 1));
  set_block(out, n, n, blk(M, 0, 0));
  return out;
}

}  // namespace mbop
