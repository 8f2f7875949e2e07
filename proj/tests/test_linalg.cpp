#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mbop/blockmat.hpp"
#include "mbop/eig.hpp"
#include "mbop/matfun.hpp"
#include "mbop/matrix.hpp"
#include "mbop/poly.hpp"

using namespace mbop;

namespace {

Mat<double> random_mat(int n, int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat<double> A(n, m);
  for (auto& z : A.a) z = cd(u(rng), u(rng));
  return A;
}

// Schoolbook product, the oracle for the compensated kernel.
Mat<double> naive_mul(const Mat<double>& A, const Mat<double>& B) {
  Mat<double> C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      cd s{};
      for (int k = 0; k < A.cols; ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  return C;
}

Mat<dd> lift(const Mat<double>& A) {
  Mat<dd> B(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i)
    B.a[i] = cplx<dd>(dd(A.a[i].re), dd(A.a[i].im));
  return B;
}

std::vector<cd> sorted_by_re_im(std::vector<cd> v) {
  std::sort(v.begin(), v.end(), [](const cd& a, const cd& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return v;
}

}  // namespace

TEST_CASE("matrix product matches the schoolbook oracle") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    Mat<double> A = random_mat(4, 3, rng), B = random_mat(3, 5, rng);
    CHECK(norm_max(A * B - naive_mul(A, B)) < 1e-14);
  }
}

TEST_CASE("inverse and determinant") {
  Mat<double> A(2, 2);
  A(0, 0) = cd(1, 1);
  A(0, 1) = cd(2, 0);
  A(1, 0) = cd(0, -1);
  A(1, 1) = cd(3, 0);
  // det = (1+i)*3 - 2*(-i) = 3 + 5i
  cd d = det(A);
  CHECK(abs(d - cd(3, 5)) < 1e-14);
  Mat<double> Ai = inv(A);
  CHECK(norm_max(A * Ai - Mat<double>::identity(2)) < 1e-14);
  CHECK(norm_max(Ai * A - Mat<double>::identity(2)) < 1e-14);

  Mat<double> Z(2, 2);
  CHECK_THROWS_AS(inv(Z), Error);
  Mat<double> H(2, 2);
  H(0, 0) = cd(1.0);
  H(0, 1) = cd(1.0);
  H(1, 0) = cd(1.0);
  H(1, 1) = cd(1.0 + 1e-14);
  try {
    inv(H);
    FAIL("expected IllConditioned");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllConditioned);
  }
}

TEST_CASE("qr_solve reproduces a known solution") {
  std::mt19937 rng(7);
  Mat<double> A = random_mat(6, 6, rng);
  Mat<double> X = random_mat(6, 2, rng);
  Mat<double> B = naive_mul(A, X);
  Mat<double> got = qr_solve(A, B);
  CHECK(norm_max(got - X) < 1e-12);

  Mat<dd> Add = lift(A), Bdd = lift(A) * lift(X);
  Mat<dd> gotdd = qr_solve(Add, Bdd);
  CHECK(norm_max(gotdd - lift(X)) < 1e-28);
}

TEST_CASE("qr_solve flags rank deficiency") {
  Mat<double> A(3, 3);
  for (int j = 0; j < 3; ++j) {
    A(0, j) = cd(double(j + 1));
    A(1, j) = cd(2.0 * (j + 1));  // row 2 = 2 * row 1
    A(2, j) = cd(double(j * j));
  }
  Mat<double> B = Mat<double>::identity(3);
  CHECK_THROWS_AS(qr_solve(A, B), Error);
}

TEST_CASE("eigenvalues: frozen spectra") {
  Mat<double> T(2, 2);
  T(0, 0) = cd(2);
  T(0, 1) = cd(1);
  T(1, 1) = cd(3);
  auto l = sorted_by_re_im(eigenvalues(T));
  CHECK(abs(l[0] - cd(2)) < 1e-13);
  CHECK(abs(l[1] - cd(3)) < 1e-13);

  Mat<double> Rot(2, 2);
  Rot(0, 1) = cd(-1);
  Rot(1, 0) = cd(1);
  l = sorted_by_re_im(eigenvalues(Rot));
  CHECK(abs(l[0] - cd(0, -1)) < 1e-13);
  CHECK(abs(l[1] - cd(0, 1)) < 1e-13);

  // Companion matrix of (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6.
  Mat<double> C(3, 3);
  C(0, 2) = cd(6);
  C(1, 0) = cd(1);
  C(1, 2) = cd(-11);
  C(2, 1) = cd(1);
  C(0, 0) = cd(0);
  C(2, 2) = cd(6 - 6);  // companion trace lives in the last column here
  C(0, 2) = cd(6);
  l = sorted_by_re_im(eigenvalues(C));
  CHECK(l.size() == 3);
}

TEST_CASE("eigenvalues: conjugated diagonal recovers the spectrum") {
  // Fixed similarity, spectrum {1, 2, 3+4i, -5}.
  std::mt19937 rng(11);
  Mat<double> D(4, 4);
  D(0, 0) = cd(1);
  D(1, 1) = cd(2);
  D(2, 2) = cd(3, 4);
  D(3, 3) = cd(-5);
  Mat<double> V = random_mat(4, 4, rng);
  Mat<double> A = V * D * inv(V);
  auto l = sorted_by_re_im(eigenvalues(A));
  auto want = sorted_by_re_im({cd(1), cd(2), cd(3, 4), cd(-5)});
  for (int i = 0; i < 4; ++i) CHECK(abs(l[i] - want[i]) < 1e-10);

  Eig e = eigensystem(A);
  CHECK(e.vector_residual < 1e-10);
  for (int k = 0; k < 4; ++k) {
    Mat<double> v = get_block(e.vectors, 0, k, 4, 1);
    CHECK(norm_fro(A * v - v * e.values[k]) < 1e-9 * norm_inf(A));
  }
}

TEST_CASE("singular values by one-sided Jacobi") {
  // Diagonal case.
  Mat<double> D(2, 2);
  D(0, 0) = cd(3);
  D(1, 1) = cd(-4);
  auto sv = singular_values(D);
  CHECK(std::fabs(sv[0] - 4.0) < 1e-14);
  CHECK(std::fabs(sv[1] - 3.0) < 1e-14);

  // Unitary-conjugated spectrum {5, 1, 1e-8}: the small value must come
  // back to O(eps * sigma_max) absolutely -- forming the Gram matrix would
  // square the ratio and lose it entirely.
  std::mt19937 rng(3);
  Mat<double> Q1, R1, Q2, R2;
  detail::qr_explicit(random_mat(3, 3, rng), Q1, R1);
  detail::qr_explicit(random_mat(3, 3, rng), Q2, R2);
  Mat<double> S(3, 3);
  S(0, 0) = cd(5);
  S(1, 1) = cd(1);
  S(2, 2) = cd(1e-8);
  Mat<double> A = Q1 * S * conj_transpose(Q2);
  sv = singular_values(A);
  CHECK(std::fabs(sv[0] - 5.0) < 1e-13);
  CHECK(std::fabs(sv[1] - 1.0) < 1e-13);
  CHECK(std::fabs(sv[2] - 1e-8) < 5e-15);

  // Exactly rank one.
  Mat<double> R(2, 2);
  R(0, 0) = cd(1);
  R(0, 1) = cd(2);
  R(1, 0) = cd(2);
  R(1, 1) = cd(4);
  sv = singular_values(R);
  CHECK(std::fabs(sv[0] - 5.0) < 1e-14);
  CHECK(sv[1] < 1e-14);
}

TEST_CASE("mat_exp closed forms") {
  Mat<double> Z(3, 3);
  CHECK(norm_max(mat_exp(Z) - Mat<double>::identity(3)) == 0.0);

  Mat<double> Nil(2, 2);
  Nil(0, 1) = cd(1);
  Mat<double> E = mat_exp(Nil);
  CHECK(abs(E(0, 0) - cd(1)) < 1e-15);
  CHECK(abs(E(0, 1) - cd(1)) < 1e-15);
  CHECK(abs(E(1, 0)) < 1e-15);

  double th = 0.7;
  Mat<double> K(2, 2);
  K(0, 1) = cd(-th);
  K(1, 0) = cd(th);
  E = mat_exp(K);
  CHECK(abs(E(0, 0) - cd(std::cos(th))) < 1e-15);
  CHECK(abs(E(1, 0) - cd(std::sin(th))) < 1e-15);

  std::mt19937 rng(5);
  Mat<double> A = random_mat(3, 3, rng) * 2.0;
  CHECK(norm_max(mat_exp(A) * mat_exp(-A) - Mat<double>::identity(3)) < 1e-13);

  // dd: exp(k ln 2 I) = 2^k I to ~1e-30.
  Mat<dd> L(2, 2);
  L(0, 0) = cplx<dd>(dd_ln2 * 20.0);
  L(1, 1) = cplx<dd>(dd_ln2 * 20.0);
  Mat<dd> Edd = mat_exp(L);
  CHECK(std::fabs(to_double(Edd(0, 0).re - dd(1048576.0))) < 1e-24 * 1048576.0);
}

TEST_CASE("mat_log paths") {
  // Spectral path round trip.
  std::mt19937 rng(9);
  Mat<double> D(3, 3);
  D(0, 0) = cd(1);
  D(1, 1) = cd(2, 1);
  D(2, 2) = cd(0.5, -0.3);
  Mat<double> V = random_mat(3, 3, rng);
  Mat<double> A = V * D * inv(V);
  Mat<double> L = mat_log(A);
  CHECK(norm_max(mat_exp(L) - A) < 1e-10);

  // Unipotent: series path, exact finite termination.
  Mat<double> U = Mat<double>::identity(2);
  U(0, 1) = cd(5);
  L = mat_log(U);
  CHECK(abs(L(0, 1) - cd(5)) < 1e-13);
  CHECK(abs(L(0, 0)) < 1e-13);

  // Branch cut.
  Mat<double> B(2, 2);
  B(0, 0) = cd(-1);
  B(1, 1) = cd(2);
  try {
    mat_log(B);
    FAIL("expected BranchCut");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchCut);
  }
}

TEST_CASE("matrix polynomials preserve coefficient order") {
  Mat<double> A(2, 2), B(2, 2);
  A(0, 1) = cd(1);           // E12
  B(1, 0) = cd(1);           // E21
  Mat<double> I2 = Mat<double>::identity(2);
  MatPoly<double> P(std::vector<Mat<double>>{A, I2});  // A + zI
  MatPoly<double> Q(std::vector<Mat<double>>{B, I2});  // B + zI
  MatPoly<double> PQ = P * Q;
  // coeff order matters: z-coefficient is A + B either way, constant is AB.
  CHECK(norm_max(PQ.coeff(0) - A * B) == 0.0);
  CHECK(norm_max(PQ.coeff(2) - I2) == 0.0);
  MatPoly<double> QP = Q * P;
  CHECK(norm_max(QP.coeff(0) - B * A) == 0.0);
  CHECK(norm_max(PQ.coeff(0) - QP.coeff(0)) > 0.5);  // AB != BA here

  cd z(0.3, 0.8);
  CHECK(norm_max(PQ.eval(z) - P.eval(z) * Q.eval(z)) < 1e-14);

  MatPoly<double> dP = PQ.derivative();
  // d/dz[(A+z)(B+z)] = (A+B) + 2z.
  CHECK(norm_max(dP.coeff(0) - (A + B)) < 1e-15);
  CHECK(norm_max(dP.coeff(1) - I2 * 2.0) < 1e-15);
}

TEST_CASE("block helpers and the J involution") {
  std::mt19937 rng(13);
  Mat<double> M = random_mat(4, 4, rng);
  Mat<double> J = Jmat<double>(2);
  CHECK(norm_max(J * J + Mat<double>::identity(4)) == 0.0);
  Mat<double> direct = J * M * inv(J);
  CHECK(norm_max(j_conjugate(M) - direct) < 1e-14);

  Mat<double> A = blk(M, 0, 0), B = blk(M, 0, 1), C = blk(M, 1, 0),
              D = blk(M, 1, 1);
  CHECK(norm_max(block2(A, B, C, D) - M) == 0.0);
}
