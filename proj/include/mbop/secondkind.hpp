#pragma once

// Second-kind functions: Cauchy transforms of the weighted polynomials,
//
//   QL_n(z) = integral_0^1 PL_n(t) W(t) / (t - z) dt ,
//   QR_n(z) = integral_0^1 W(t) PR_n(t) / (t - z) dt ,   z off [0, 1],
//
// together with their z-derivatives (kernel powers) and the coefficients of
// their large-z expansion
//
//   QL_n(z) = -Cinv_n [ z^{-n-1} + sum_{k>=1} qL_k z^{-n-1-k} ],
//   QR_n(z) = -[ z^{-n-1} + sum_{k>=1} qR_k z^{-n-1-k} ] Cinv_n ,
//
// whose coefficients come straight from the moment table.

#include <utility>
#include <vector>

#include "mbop/biorth.hpp"
#include "mbop/quad.hpp"
#include "mbop/weight.hpp"

namespace mbop {

// Stacked evaluation: one quadrature pass for any number of polynomials
// against the same weight.  deriv selects the kernel power,
//   0 -> 1/(t-z),   1 -> 1/(t-z)^2,   2 -> 2/(t-z)^3,
// i.e. the 0th/1st/2nd z-derivative of the plain transform.
template <class R, class Iter>
inline std::vector<Mat<R>> second_kind_left(const Weight<R>& w, Iter first,
                                            Iter last, const cplx<R>& z,
                                            int deriv = 0,
                                            QuadOptions opt = {}) {
  if (deriv < 0 || deriv > 2)
    throw Error(ErrorCode::UnsupportedDegree,
                "second_kind_left: kernel power " + std::to_string(deriv + 1) +
                    " not supported");
  const int N = w.N;
  std::vector<const MatPoly<R>*> ps(first, last);
  const int m = static_cast<int>(ps.size());
  auto g = [&](const QuadNode<R>& nd) {
    Mat<R> W = w.full_on01(nd.t, nd.lnt, nd.lnomt);
    Mat<R> stk(N, N * m);
    cplx<R> t(nd.t);
    for (int i = 0; i < m; ++i)
      set_block(stk, 0, i * N, ps[i]->eval(t) * W);
    return stk;
  };
  Mat<R> all = cauchy_01<R>(g, z, deriv + 1, opt, "second_kind_left").value;
  if (deriv == 2) all = all * 2.0;
  std::vector<Mat<R>> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) out.push_back(get_block(all, 0, i * N, N, N));
  return out;
}

template <class R, class Iter>
inline std::vector<Mat<R>> second_kind_right(const Weight<R>& w, Iter first,
                                             Iter last, const cplx<R>& z,
                                             int deriv = 0,
                                             QuadOptions opt = {}) {
  if (deriv < 0 || deriv > 2)
    throw Error(ErrorCode::UnsupportedDegree,
                "second_kind_right: kernel power " + std::to_string(deriv + 1) +
                    " not supported");
  const int N = w.N;
  std::vector<const MatPoly<R>*> ps(first, last);
  const int m = static_cast<int>(ps.size());
  auto g = [&](const QuadNode<R>& nd) {
    Mat<R> W = w.full_on01(nd.t, nd.lnt, nd.lnomt);
    Mat<R> stk(N, N * m);
    cplx<R> t(nd.t);
    for (int i = 0; i < m; ++i)
      set_block(stk, 0, i * N, W * ps[i]->eval(t));
    return stk;
  };
  Mat<R> all = cauchy_01<R>(g, z, deriv + 1, opt, "second_kind_right").value;
  if (deriv == 2) all = all * 2.0;
  std::vector<Mat<R>> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) out.push_back(get_block(all, 0, i * N, N, N));
  return out;
}

template <class R>
inline Mat<R> second_kind_left(const Weight<R>& w, const MatPoly<R>& p,
                               const cplx<R>& z, int deriv = 0,
                               QuadOptions opt = {}) {
  const MatPoly<R>* ps[1] = {&p};
  return second_kind_left(w, ps, ps + 1, z, deriv, opt)[0];
}

template <class R>
inline Mat<R> second_kind_right(const Weight<R>& w, const MatPoly<R>& p,
                                const cplx<R>& z, int deriv = 0,
                                QuadOptions opt = {}) {
  const MatPoly<R>* ps[1] = {&p};
  return second_kind_right(w, ps, ps + 1, z, deriv, opt)[0];
}

// Series coefficients.  k = 0 gives the identity (sanity anchor); k >= 1
// the genuine tail.  Needs moments up to index 2n + k.
template <class R>
inline Mat<R> q_coeff_left(const BiorthSystem<R>& S, const MomentTable<R>& mom,
                           int k, int n) {
  Mat<R> acc(S.N, S.N);
  for (int i = 0; i <= n; ++i)
    acc += S.PL[n].coeff(i) * mom[i + n + k];
  return S.C[n] * acc;
}

template <class R>
inline Mat<R> q_coeff_right(const BiorthSystem<R>& S,
                            const MomentTable<R>& mom, int k, int n) {
  Mat<R> acc(S.N, S.N);
  for (int i = 0; i <= n; ++i)
    acc += mom[n + k + i] * S.PR[n].coeff(i);
  return acc * S.C[n];
}

}  // namespace mbop
