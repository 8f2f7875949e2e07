#include <boost/multiprecision/cpp_int.hpp>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "mbop/biorth.hpp"
#include "mbop/presets.hpp"

using namespace mbop;

namespace {

using Rat = boost::multiprecision::cpp_rational;

template <class F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

// Exact scalar Hankel solve: coefficients of the monic degree-n polynomial
// orthogonal to 1, t, ..., t^{n-1} against the moment sequence m.
std::vector<Rat> monic_coeffs(const std::vector<Rat>& m, int n) {
  // Gaussian elimination on [H | -r], H(i,j) = m[i+j], r_i = m[n+i].
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A[i][j] = m[i + j];
    A[i][n] = -m[n + i];
  }
  for (int k = 0; k < n; ++k) {
    int piv = k;
    while (piv < n && A[piv][k] == 0) ++piv;
    REQUIRE(piv < n);
    std::swap(A[k], A[piv]);
    for (int i = k + 1; i < n; ++i) {
      Rat f = A[i][k] / A[k][k];
      for (int j = k; j <= n; ++j) A[i][j] -= f * A[k][j];
    }
  }
  std::vector<Rat> a(n);
  for (int k = n - 1; k >= 0; --k) {
    Rat s = A[k][n];
    for (int j = k + 1; j < n; ++j) s -= A[k][j] * a[j];
    a[k] = s / A[k][k];
  }
  return a;
}

}  // namespace

TEST_CASE("exact rational recurrence data for the flat weight") {
  // moments 1/(k+1); the recurrence coefficients must come out as
  // beta_n = 1/2 and gamma_n = n^2 / (4(4n^2-1)) exactly.
  std::vector<Rat> m;
  for (int k = 0; k <= 20; ++k) m.emplace_back(1, k + 1);
  std::vector<Rat> p1(10, Rat(0)), cinv(10, Rat(0));
  cinv[0] = m[0];
  for (int n = 1; n <= 9; ++n) {
    auto a = monic_coeffs(m, n);
    p1[n] = a[n - 1];
    Rat s = m[2 * n];
    for (int i = 0; i < n; ++i) s += a[i] * m[i + n];
    cinv[n] = s;
  }
  CHECK(cinv[1] == Rat(1, 12));
  for (int n = 0; n <= 8; ++n) CHECK(p1[n] - p1[n + 1] == Rat(1, 2));
  for (int n = 1; n <= 8; ++n)
    CHECK(cinv[n] / cinv[n - 1] == Rat(n * n, 4 * (4 * n * n - 1)));
}

TEST_CASE("pipeline recurrence matches the rational values") {
  auto S = build_biorth(make_legendre<dd>(), 8);
  for (int n = 0; n < 8; ++n) {
    dd b = S.betaL[n](0, 0).re - dd(0.5);
    CHECK(std::fabs(to_double(b)) < 1e-20);
  }
  for (int n = 1; n <= 8; ++n) {
    dd g = S.gammaL[n](0, 0).re - dd(n * n) / dd(4 * (4 * n * n - 1));
    CHECK(std::fabs(to_double(g)) < 1e-20);
  }
}

TEST_CASE("biorthogonality of the left and right families") {
  for (const char* name : {"legendre", "jacobi", "jacobi-exp", "blockdiag",
                           "nilpotent", "noncommuting"}) {
    auto w = preset_weight<double>(name);
    auto S = build_biorth(w, 5);
    INFO(name);
    CHECK(norm_max(S.Cinv[5] - S.CinvR[5]) <
          1e-11 * std::max(1.0, norm_max(S.Cinv[5])));
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n)
      for (int mdx = 0; mdx <= 5; ++mdx) {
        auto r = integrate_01<double>([&](const QuadNode<double>& q) {
          cd t(q.t);
          return S.PL[n].eval(t) * w.full_on01(q.t, q.lnt, q.lnomt) *
                 S.PR[mdx].eval(t);
        });
        Mat<double> expect = n == mdx ? S.Cinv[n]
                                      : Mat<double>::zero(w.N, w.N);
        worst = std::max(worst, norm_max(r.value - expect));
      }
    CHECK(worst < 5e-11);
  }
}

TEST_CASE("three-term recurrence closes at the coefficient level") {
  for (const char* name : {"jacobi-exp", "blockdiag", "noncommuting"}) {
    auto w = preset_weight<double>(name);
    auto S = build_biorth(w, 5);
    INFO(name);
    MatPoly<double> zI =
        MatPoly<double>::monomial(Mat<double>::identity(w.N), 1);
    for (int n = 1; n <= 4; ++n) {
      MatPoly<double> resL = zI * S.PL[n] - S.PL[n + 1] -
                             S.betaL[n] * S.PL[n] -
                             S.gammaL[n] * S.PL[n - 1];
      CHECK(coeff_norm_max(resL) < 1e-10);
      MatPoly<double> resR = zI * S.PR[n] - S.PR[n + 1] -
                             S.PR[n] * S.betaR[n] -
                             S.PR[n - 1] * S.gammaR[n];
      CHECK(coeff_norm_max(resR) < 1e-10);
    }
  }
}

TEST_CASE("right recurrence data is the similarity transform of the left") {
  auto S = build_biorth(make_noncommuting<double>(), 5);
  for (int n = 0; n < 5; ++n)
    CHECK(norm_max(S.betaR[n] - S.C[n] * S.betaL[n] * S.Cinv[n]) < 1e-10);
  for (int n = 1; n <= 5; ++n)
    CHECK(norm_max(S.gammaR[n] - S.C[n - 1] * S.gammaL[n] * S.Cinv[n - 1]) <
          1e-9);
}

TEST_CASE("subleading coefficients telescope into recurrence sums") {
  auto S = build_biorth(make_noncommuting<double>(), 5);
  int N = S.N;
  for (int n = 1; n <= 5; ++n) {
    Mat<double> sb = Mat<double>::zero(N, N);
    for (int k = 0; k < n; ++k) sb += S.betaL[k];
    CHECK(norm_max(S.pL(1, n) + sb) < 1e-10);

    // p2_L: ordered sum with the later index on the left, minus the gammas
    Mat<double> ord = Mat<double>::zero(N, N);
    for (int i = 1; i <= n - 1; ++i)
      for (int j = 0; j < i; ++j) ord += S.betaL[i] * S.betaL[j];
    for (int k = 1; k <= n - 1; ++k) ord -= S.gammaL[k];
    CHECK(norm_max(S.pL(2, n) - ord) < 1e-9);

    // p2_R: ordered sum with the earlier index on the left
    Mat<double> ordR = Mat<double>::zero(N, N);
    for (int j = 0; j <= n - 2; ++j)
      for (int k = j + 1; k <= n - 1; ++k) ordR += S.betaR[j] * S.betaR[k];
    for (int k = 1; k <= n - 1; ++k) ordR -= S.gammaR[k];
    CHECK(norm_max(S.pR(2, n) - ordR) < 1e-9);
  }
}

TEST_CASE("construction stops on a singular moment section") {
  auto mom = compute_moments(make_irregular<double>(), 4);
  auto S1 = build_biorth(mom, 1);
  CHECK(S1.PL[1].degree() == 1);
  expect_code([&] { build_biorth(mom, 2); }, ErrorCode::HankelSingular);
}

TEST_CASE("moment shortage is reported with the needed index") {
  auto mom = compute_moments(make_legendre<double>(), 4);
  try {
    build_biorth(mom, 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientMoments);
    CHECK(std::string(e.what()).find("6") != std::string::npos);
  }
}
