#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "mbop/presets.hpp"
#include "mbop/secondkind.hpp"

using namespace mbop;

namespace {

using CD = cplx<double>;

template <class F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

double cdist(const CD& a, const CD& b) {
  return std::hypot(a.re - b.re, a.im - b.im);
}

// 4th-order central difference quotient of f along direction dir.
template <class F>
Mat<double> fd4(F&& f, const CD& z, const CD& dir, double h) {
  CD s = dir * h;
  Mat<double> num = (f(z + s) * 8.0 - f(z + s + s)) -
                    (f(z - s) * 8.0 - f(z - s - s));
  CD inv = CD(1.0) / (s * 12.0);
  return num * inv;
}

}  // namespace

TEST_CASE("transform anchors for the flat weight") {
  auto S = build_biorth(make_legendre<double>(), 2);
  const double ln2 = 0.6931471805599453;
  CD zm1(-1.0, 0.0);
  auto w = make_legendre<double>();

  Mat<double> q0 = second_kind_left(w, S.PL[0], zm1);
  CHECK(cdist(q0(0, 0), CD(ln2, 0.0)) < 1e-13);
  CHECK(cdist(q0(0, 0), log_ratio_01(zm1)) < 1e-13);

  Mat<double> q1 = second_kind_left(w, S.PL[1], zm1);
  CHECK(cdist(q1(0, 0), CD(1.0 - 1.5 * ln2, 0.0)) < 1e-13);

  // integral of 1/(t+1)^2 and 2/(t+1)^3 over (0,1): 1/2 and 3/4.
  Mat<double> d1 = second_kind_left(w, S.PL[0], zm1, 1);
  CHECK(cdist(d1(0, 0), CD(0.5, 0.0)) < 1e-13);
  Mat<double> d2 = second_kind_left(w, S.PL[0], zm1, 2);
  CHECK(cdist(d2(0, 0), CD(0.75, 0.0)) < 1e-13);

  CD zc(0.5, 0.6);
  Mat<double> q0c = second_kind_left(w, S.PL[0], zc);
  CHECK(cdist(q0c(0, 0), log_ratio_01(zc)) < 1e-12);

  // Flat-weight tail coefficient: 12 * (-1/2 * 1/3 + 1/4) = 1.
  auto mom = compute_moments(w, 6);
  Mat<double> q11 = q_coeff_left(S, mom, 1, 1);
  CHECK(cdist(q11(0, 0), CD(1.0, 0.0)) < 1e-12);
}

TEST_CASE("large-z expansion matches the moment formula") {
  // |z| = 5: far enough that fifteen tail terms reach ~1e-10 relative,
  // close enough that the transform itself is not lost to cancellation.
  for (const char* name : {"blockdiag", "noncommuting"}) {
    auto p = build_pipeline(preset_weight<double>(name), 4, 13);
    const int N = p.S.N;
    CD z(4.0, 3.0);
    CD zinv = CD(1.0) / z;
    for (int n = 0; n <= 3; ++n) {
      // k = 0 coefficient is exactly the identity on both sides.
      Mat<double> id = q_coeff_left(p.S, p.mom, 0, n);
      CHECK(norm_max(id - Mat<double>::identity(N)) < 1e-10);
      id = q_coeff_right(p.S, p.mom, 0, n);
      CHECK(norm_max(id - Mat<double>::identity(N)) < 1e-10);

      CD zpow = zinv;
      for (int j = 0; j < n; ++j) zpow = zpow * zinv;

      Mat<double> tailL = Mat<double>::identity(N);
      Mat<double> tailR = Mat<double>::identity(N);
      CD zk(1.0);
      for (int k = 1; k <= 15; ++k) {
        zk = zk * zinv;
        tailL += q_coeff_left(p.S, p.mom, k, n) * zk;
        tailR += q_coeff_right(p.S, p.mom, k, n) * zk;
      }
      Mat<double> serL = -(p.S.Cinv[n] * tailL) * zpow;
      Mat<double> serR = -(tailR * p.S.Cinv[n]) * zpow;

      Mat<double> QL = second_kind_left(p.w, p.S.PL[n], z);
      Mat<double> QR = second_kind_right(p.w, p.S.PR[n], z);
      double lead = norm_max(p.S.Cinv[n]) * std::pow(0.2, n + 1);
      CHECK(norm_max(QL - serL) < 1e-8 * lead);
      CHECK(norm_max(QR - serR) < 1e-8 * lead);
    }
  }
}

TEST_CASE("expansion reciprocity between the two families") {
  for (const char* name : {"jacobi-exp", "blockdiag", "noncommuting"}) {
    auto p = build_pipeline(preset_weight<double>(name), 6, 4);
    const auto& S = p.S;
    const auto& mom = p.mom;
    auto close = [&](const Mat<double>& a, const Mat<double>& b) {
      CHECK(norm_max(a - b) < 1e-7 * std::max(1.0, norm_max(b)));
    };
    for (int n = 1; n <= 5; ++n) {
      // Subleading polynomial coefficients against the opposite family's
      // transform tail.
      close(S.pR(1, n), -q_coeff_left(S, mom, 1, n - 1));
      close(S.pL(1, n), -q_coeff_right(S, mom, 1, n - 1));
      close(q_coeff_right(S, mom, 2, n - 1),
            S.pL(1, n) * S.pL(1, n) - S.pL(2, n) + S.gammaL[n]);
      close(q_coeff_left(S, mom, 2, n - 1),
            S.pR(1, n) * S.pR(1, n) - S.pR(2, n) + S.gammaR[n]);
    }
    // First tail coefficient accumulates the conjugated recurrence
    // diagonal; consecutive second coefficients differ by a recurrence
    // step.
    Mat<double> acc(S.N, S.N);
    for (int n = 0; n <= 5; ++n) {
      acc += S.C[n] * S.betaL[n] * S.Cinv[n];
      close(q_coeff_left(S, mom, 1, n), acc);
    }
    for (int n = 1; n <= 5; ++n) {
      Mat<double> lhs =
          q_coeff_left(S, mom, 2, n) - q_coeff_left(S, mom, 2, n - 1);
      close(lhs, S.betaR[n] * q_coeff_left(S, mom, 1, n) + S.gammaR[n + 1]);
    }
  }
}

TEST_CASE("boundary jump recovers the weighted polynomial") {
  // The smallest rung sits ~1e-3 from the cut; the subtracted kernel still
  // needs node spacing below that, hence the raised level cap.
  QuadOptions deep;
  deep.level_max = 14;
  for (const char* name : {"nilpotent", "jacobi"}) {
    auto w = preset_weight<double>(name);
    auto S = build_biorth(w, 3);
    std::vector<double> eps;
    for (int k = 0; k <= 3; ++k) eps.push_back(1e-2 * std::pow(0.5, k));
    for (double t : {0.25, 0.5, 0.75}) {
      std::vector<Mat<double>> jumps;
      for (double e : eps) {
        Mat<double> up = second_kind_left(w, S.PL[2], CD(t, e), 0, deep);
        Mat<double> dn = second_kind_left(w, S.PL[2], CD(t, -e), 0, deep);
        jumps.push_back(up - dn);
      }
      Mat<double> jump0 = extrapolate_to_zero(eps, jumps);
      CD tc(t, 0.0);
      Mat<double> rhs = S.PL[2].eval(tc) * w.left(tc, Side::above) *
                        w.right(tc, Side::above) *
                        CD(0.0, 2.0 * const_pi<double>());
      CHECK(norm_max(jump0 - rhs) < 1e-6 * std::max(1.0, norm_max(rhs)));
    }
  }
}

TEST_CASE("three-term recurrence transfers to the transforms") {
  for (const char* name : {"jacobi-exp", "noncommuting"}) {
    auto p = build_pipeline(preset_weight<double>(name), 4);
    const auto& S = p.S;
    for (CD z : {CD(-0.7, 0.0), CD(1.5, 0.8), CD(0.5, 0.6)}) {
      std::vector<const MatPoly<double>*> ps;
      for (int n = 0; n <= 4; ++n) ps.push_back(&S.PL[n]);
      auto QL = second_kind_left(p.w, ps.begin(), ps.end(), z);
      ps.clear();
      for (int n = 0; n <= 4; ++n) ps.push_back(&S.PR[n]);
      auto QR = second_kind_right(p.w, ps.begin(), ps.end(), z);
      for (int n = 1; n <= 3; ++n) {
        Mat<double> rL = QL[n] * z - QL[n + 1] - S.betaL[n] * QL[n] -
                         S.gammaL[n] * QL[n - 1];
        CHECK(norm_max(rL) < 1e-9);
        Mat<double> rR = QR[n] * z - QR[n + 1] - QR[n] * S.betaR[n] -
                         QR[n - 1] * S.gammaR[n];
        CHECK(norm_max(rR) < 1e-9);
      }
      // Degree zero carries the total mass as an inhomogeneity.
      Mat<double> r0 = QL[0] * z - QL[1] - S.betaL[0] * QL[0] + S.Cinv[0];
      CHECK(norm_max(r0) < 1e-9);
      r0 = QR[0] * z - QR[1] - QR[0] * S.betaR[0] + S.Cinv[0];
      CHECK(norm_max(r0) < 1e-9);
    }
  }
}

TEST_CASE("kernel-power derivatives agree with difference quotients") {
  auto p = build_pipeline(preset_weight<double>("noncommuting"), 3);
  const auto& P2 = p.S.PL[2];
  CD z0(-0.7, 0.0);
  auto Q = [&](const CD& z) { return second_kind_left(p.w, P2, z); };

  Mat<double> dk = second_kind_left(p.w, P2, z0, 1);
  double e1 = norm_max(fd4(Q, z0, CD(1.0, 0.0), 2e-3) - dk);
  double e2 = norm_max(fd4(Q, z0, CD(1.0, 0.0), 1e-3) - dk);
  CHECK(e1 < 1e-8);
  // Quartic shrinkage (with a quadrature-noise floor).
  CHECK(e2 < std::max(5e-12, 0.15 * e1));
  // Same limit along the imaginary direction.
  double ei = norm_max(fd4(Q, z0, CD(0.0, 1.0), 1e-3) - dk);
  CHECK(ei < 1e-9);

  auto Qp = [&](const CD& z) { return second_kind_left(p.w, P2, z, 1); };
  Mat<double> dk2 = second_kind_left(p.w, P2, z0, 2);
  CHECK(norm_max(fd4(Qp, z0, CD(1.0, 0.0), 1e-3) - dk2) < 1e-8);
}

TEST_CASE("cut proximity guards") {
  auto w = make_legendre<double>();
  auto S = build_biorth(w, 1);
  expect_code(
      [&] { second_kind_left(w, S.PL[0], CD(0.5, 1e-4)); },
      ErrorCode::TooCloseToCut);
  expect_code(
      [&] { second_kind_left(w, S.PL[0], CD(0.5, 0.05), 1); },
      ErrorCode::TooCloseToCut);
  expect_code(
      [&] { second_kind_left(w, S.PL[0], CD(-1.0, 0.0), 3); },
      ErrorCode::UnsupportedDegree);
}

TEST_CASE("double-double transforms") {
  auto w = make_legendre<dd>();
  auto S = build_biorth(w, 1);
  Mat<dd> q0 = second_kind_left(w, S.PL[0], cplx<dd>(dd(-1.0), dd(0.0)));
  dd err = abs(q0(0, 0).re - log(dd(2.0)));
  CHECK(to_double(err) < 1e-28);
  CHECK(to_double(abs(q0(0, 0).im)) < 1e-30);

  // dd and double agree on a matrix-valued transform.
  auto wd = preset_weight<double>("noncommuting");
  auto Sd = build_biorth(wd, 2);
  auto wq = preset_weight<dd>("noncommuting");
  auto Sq = build_biorth(wq, 2);
  Mat<double> a = second_kind_left(wd, Sd.PL[1], CD(-0.7, 0.0));
  Mat<dd> b = second_kind_left(wq, Sq.PL[1], cplx<dd>(dd(-0.7), dd(0.0)));
  CHECK(norm_max(a - down(b)) < 1e-12);
}
