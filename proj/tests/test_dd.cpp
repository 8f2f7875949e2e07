#include <catch2/catch_amalgamated.hpp>

#include "mbop/dd.hpp"
#include "mbop/scalar.hpp"

using mbop::dd;
using mbop::cplx;

namespace {

// 32+ digit reference values, parsed through the same decimal reader the
// constants use (the reader itself is pinned by the pi/ln2 checks below).
const dd REF_E      = mbop::detail::dd_from_decimal("2.71828182845904523536028747135266249775724709369996");
const dd REF_SQRT2  = mbop::detail::dd_from_decimal("1.41421356237309504880168872420969807856967187537694");
const dd REF_SIN1   = mbop::detail::dd_from_decimal("0.84147098480789650665250232163029899962256306079837");
const dd REF_COS1   = mbop::detail::dd_from_decimal("0.54030230586813971740093660744297660373231042061792");
const dd REF_LOG10  = mbop::detail::dd_from_decimal("2.30258509299404568401799145468436420760110148862877");
const dd REF_EXP05  = mbop::detail::dd_from_decimal("1.64872127070012814684865078781416357165377610071015");

double rel_err(const dd& got, const dd& want) {
  double scale = std::max(1.0, std::fabs(mbop::to_double(want)));
  return std::fabs(mbop::to_double(got - want)) / scale;
}

}  // namespace

TEST_CASE("error-free transforms keep split information") {
  dd a(1.0);
  dd b(1e-25);
  dd s = a + b;
  CHECK(mbop::to_double(s - a) == 1e-25);

  // 1/3 to 106 bits: multiplying back by 3 must cancel to ~1e-32.
  dd third = dd(1.0) / dd(3.0);
  CHECK(std::fabs(mbop::to_double(third * 3.0 - 1.0)) < 1e-31);

  dd p = dd(1.0) + dd(0x1p-70);
  CHECK(mbop::to_double(p - 1.0) == 0x1p-70);
}

TEST_CASE("decimal reader hits the nearest double in hi") {
  CHECK(mbop::dd_pi.hi == 3.141592653589793);  // nearest double to pi
  CHECK(std::fabs(mbop::dd_pi.lo - 1.2246467991473532e-16) < 1e-31);
  CHECK(mbop::dd_ln2.hi == 0.6931471805599453);
}

TEST_CASE("dd elementary functions against frozen references") {
  CHECK(rel_err(mbop::exp(dd(1.0)), REF_E) < 1e-30);
  CHECK(rel_err(mbop::exp(dd(0.5)), REF_EXP05) < 1e-30);
  CHECK(rel_err(mbop::sqrt(dd(2.0)), REF_SQRT2) < 1e-31);
  CHECK(rel_err(mbop::log(dd(10.0)), REF_LOG10) < 1e-30);
  CHECK(rel_err(mbop::sin(dd(1.0)), REF_SIN1) < 1e-30);
  CHECK(rel_err(mbop::cos(dd(1.0)), REF_COS1) < 1e-30);
}

TEST_CASE("dd round trips") {
  for (double x : {0.3, 1.7, 42.0, 6.02e5, 1e-8}) {
    dd v(x);
    CHECK(rel_err(mbop::exp(mbop::log(v)), v) < 1e-30);
    CHECK(rel_err(mbop::sqrt(v) * mbop::sqrt(v), v) < 1e-30);
  }
  for (double th : {0.1, 1.0, 2.5, -2.5, 3.1}) {
    dd s, c;
    mbop::sincos(dd(th), s, c);
    CHECK(std::fabs(mbop::to_double(s * s + c * c - 1.0)) < 1e-31);
    CHECK(rel_err(mbop::atan2(s, c), dd(th)) < 1e-30);
  }
}

TEST_CASE("dd exp range reduction across scales") {
  // exp(k ln 2) = 2^k exactly up to dd roundoff.
  for (int k : {3, 30, 300}) {
    dd want = mbop::pow_int(dd(2.0), k);
    CHECK(rel_err(mbop::exp(mbop::dd_ln2 * double(k)), want) < 1e-30);
  }
  CHECK(mbop::to_double(mbop::exp(dd(-800.0))) == 0.0);
}

TEST_CASE("log1p agrees with its Taylor series for small arguments") {
  dd x(0x1p-66);
  dd series = x - mbop::sqr(x) * 0.5 + mbop::sqr(x) * x / 3.0;
  CHECK(std::fabs(mbop::to_double(mbop::log1p(x) - series)) <
        1e-30 * mbop::to_double(x));
  dd tiny(1e-40);
  CHECK(mbop::to_double(mbop::log1p(tiny)) == 1e-40);
  // Branch seam: both sides of 1e-3 agree with exp round-trip.
  for (double v : {9e-4, 2e-3, -9e-4}) {
    dd l = mbop::log1p(dd(v));
    CHECK(std::fabs(mbop::to_double(mbop::exp(l) - 1.0 - v)) < 1e-31);
  }
}

TEST_CASE("dd division and power") {
  dd a(3.7), b(-1.9);
  CHECK(rel_err((a / b) * b, a) < 1e-31);
  CHECK(rel_err(mbop::pow_int(a, 5), a * a * a * a * a) < 1e-31);
  CHECK(rel_err(mbop::pow_int(a, -3) * a * a * a, dd(1.0)) < 1e-31);
}

TEST_CASE("dd floor and comparisons") {
  CHECK(mbop::to_double(mbop::floor(dd(2.7))) == 2.0);
  CHECK(mbop::to_double(mbop::floor(dd(-2.3))) == -3.0);
  // hi integral, lo negative: floor must look at lo.
  dd v = dd(5.0) + dd(-1e-20);
  CHECK(mbop::to_double(mbop::floor(v)) == 4.0);
  CHECK(dd(1.0) + dd(1e-30) > dd(1.0));
  CHECK(dd(2.0) < dd(2.0) + dd(1e-30));
}

template <class R>
static void cplx_suite(double tol) {
  using C = cplx<R>;
  C a(R(3.0), R(4.0));
  CHECK(std::fabs(mbop::to_double(mbop::abs(a) - R(5.0))) < tol);

  C b(R(-1.5), R(0.7));
  C q = a / b;
  C back = q * b;
  CHECK(mbop::to_double(mbop::abs(back - a)) < tol * 10);

  // sqrt principal branch: Re >= 0, sqrt(-4) = 2i.
  C m4(R(-4.0), R(0.0));
  C r = mbop::sqrt(m4);
  CHECK(std::fabs(mbop::to_double(r.re)) < tol);
  CHECK(std::fabs(mbop::to_double(r.im - R(2.0))) < tol);
  C mi(R(0.0), R(1.0));
  C ri = mbop::sqrt(mi);
  CHECK(std::fabs(mbop::to_double(ri.re - ri.im)) < tol);
  CHECK(mbop::to_double(ri.re) > 0.0);

  // log principal branch: log(i) = i pi/2; exp undoes log.
  C li = mbop::log(mi);
  CHECK(std::fabs(mbop::to_double(li.re)) < tol);
  CHECK(std::fabs(mbop::to_double(li.im) - 1.5707963267948966) < 1e-12);
  C w(R(0.3), R(-2.1));
  CHECK(mbop::to_double(mbop::abs(mbop::exp(mbop::log(w)) - w)) < tol * 10);

  // exp(i pi) = -1 within the precision of the pi constant used.
  C ipi(R(0.0), mbop::real_traits<R>::from_double(3.141592653589793));
  C e = mbop::exp(ipi);
  CHECK(std::fabs(mbop::to_double(e.re) + 1.0) < 1e-12);
}

TEST_CASE("cplx arithmetic, double scalar") { cplx_suite<double>(1e-14); }
TEST_CASE("cplx arithmetic, dd scalar") { cplx_suite<dd>(1e-29); }

TEST_CASE("cplx mixed-scalar expressions compile and evaluate") {
  cplx<dd> z(1.25, -0.5);
  cplx<dd> w = z * 2.0 + 1.0;
  CHECK(mbop::to_double(w.re) == 3.5);
  CHECK(mbop::to_double(w.im) == -1.0);
  cplx<dd> v = 1.0 / z;
  CHECK(mbop::to_double(mbop::abs(v * z - cplx<dd>(1.0))) < 1e-30);
}
