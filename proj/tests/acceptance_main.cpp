// Acceptance gate: ten quantitative criteria, one line each, exit zero only
// when every line reads PASS.  argv[1] names the CLI binary and argv[2] the
// shipped configuration directory; only the determinism criterion uses them.
//
// Precision policy: criteria that pin "in double" evaluate the identity in
// double arithmetic on data demoted from a double-double pipeline, because
// the block-Hankel sections at depth 8 are Hilbert-conditioned and a pure
// double factorization is rejected by the regularity gate.  Everything else
// runs at the stated precision directly.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mbop/presets.hpp"
#include "mbop/report.hpp"

namespace {

using namespace mbop;
using steady = std::chrono::steady_clock;

double tick(steady::time_point t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

const std::vector<std::string> shipped = {"legendre",  "jacobi",
                                          "jacobi-exp", "blockdiag",
                                          "nilpotent",  "noncommuting"};

// Double pipelines at depth 6 (the non-commuting weight's regularity
// ceiling in double) and double-double pipelines at depth 8, built on
// first use and shared across criteria.
Pipeline<double>& pipe_d(const std::string& name) {
  static std::map<std::string, Pipeline<double>> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, build_pipeline(preset_weight<double>(name), 6))
             .first;
  return it->second;
}

Pipeline<dd>& pipe_dd(const std::string& name) {
  static std::map<std::string, Pipeline<dd>> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, build_pipeline(preset_weight<dd>(name), 8)).first;
  return it->second;
}

// 1. flat weight on [0,1]: beta_n = 1/2 (n <= 8, 1e-10) and
//    gamma_n = n^2 / (4 (4 n^2 - 1)) (1e-9), in under 5 s.
bool crit1(std::string& msg) {
  auto t0 = steady::now();
  BiorthSystem<dd> S = build_biorth(preset_weight<dd>("legendre"), 9);
  double wb = 0.0, wg = 0.0;
  Mat<double> I = Mat<double>::identity(1);
  for (int n = 0; n <= 8; ++n)
    wb = std::max(wb, norm_max(down(S.betaL[n]) - I * cplx<double>{0.5, 0.0}));
  for (int n = 1; n <= 8; ++n) {
    double g = double(n) * double(n) / (4.0 * (4.0 * double(n) * double(n) - 1.0));
    wg = std::max(wg, norm_max(down(S.gammaL[n]) - I * cplx<double>{g, 0.0}));
  }
  double t = tick(t0);
  msg = "flat-weight recurrence: max|beta-1/2|=" + fmt(wb) +
        " (tol 1e-10), max|gamma-n^2/(4(4n^2-1))|=" + fmt(wg) +
        " (tol 1e-9), " + fmt(t) + " s (limit 5)";
  return wb < 1e-10 && wg < 1e-9 && t < 5.0;
}

// 2. scalar algebraic weights t^a (1-t)^b: coefficient-level residual of
//    sigma P'' + ((1+a)-(a+b+2)z) P' + n(a+b+n+1) P for a,b in {0,1/2,1},
//    n <= 6, below 1e-9, in under 10 s.
bool crit2(std::string& msg) {
  auto t0 = steady::now();
  double worst = 0.0;
  for (double a : {0.0, 0.5, 1.0})
    for (double b : {0.0, 0.5, 1.0}) {
      BiorthSystem<dd> S = build_biorth(make_jacobi<dd>(a, b), 6);
      dd ad = real_traits<dd>::from_double(a);
      dd bd = real_traits<dd>::from_double(b);
      for (int n = 0; n <= 6; ++n)
        worst = std::max(worst, scalar_ode_residual(S.PL[n], ad, bd, n));
    }
  double t = tick(t0);
  msg = "scalar second-order equation over 9 exponent pairs, n<=6: max "
        "residual=" + fmt(worst) + " (tol 1e-9), " + fmt(t) + " s (limit 10)";
  return worst < 1e-9 && t < 10.0;
}

// 3. pairing defect max_{n,m<=8} |<P^L_n, P^R_m> - delta C_n^{-1}| < 1e-9,
//    evaluated in double on demoted depth-8 data, all six shipped weights.
bool crit3(std::string& msg) {
  double worst = 0.0;
  std::string where;
  for (const auto& name : shipped) {
    const Pipeline<dd>& p = pipe_dd(name);
    const int N = p.S.N;
    std::vector<Mat<double>> mom, PLc, PRc, Cinv;
    for (int k = 0; k <= 16; ++k) mom.push_back(down(p.mom[k]));
    std::vector<MatPoly<double>> PL, PR;
    for (int n = 0; n <= 8; ++n) {
      PL.push_back(down(p.S.PL[n]));
      PR.push_back(down(p.S.PR[n]));
      Cinv.push_back(down(p.S.Cinv[n]));
    }
    double g = 0.0;
    for (int n = 0; n <= 8; ++n)
      for (int m = 0; m <= 8; ++m) {
        Mat<double> acc = Mat<double>::zero(N, N);
        for (int j = 0; j <= n; ++j) {
          Mat<double> row = Mat<double>::zero(N, N);
          for (int k = 0; k <= m; ++k) row += mom[size_t(j + k)] * PR[size_t(m)].at(k);
          acc += PL[size_t(n)].at(j) * row;
        }
        if (n == m) acc -= Cinv[size_t(n)];
        g = std::max(g, norm_max(acc));
      }
    if (g > worst) worst = g, where = name;
  }
  msg = "pairing defect in double, n,m<=8, six weights: max=" + fmt(worst) +
        " (tol 1e-9, worst on " + where + ")";
  return worst < 1e-9;
}

// 4. constant-factor jumps of the weighted frame for the nilpotent weight:
//    extrapolated residual < 1e-5 at three interior points and one ray point.
bool crit4(std::string& msg) {
  const Pipeline<double>& p = pipe_d("nilpotent");
  const int n = 2;
  double wi = 0.0;
  for (double t : {0.25, 0.5, 0.75}) {
    wi = std::max(wi, z_jump_residual_left(p, n, t, JumpLine::interval));
    wi = std::max(wi, z_jump_residual_right(p, n, t, JumpLine::interval));
  }
  double wr = std::max(z_jump_residual_left(p, n, 1.5, JumpLine::ray),
                       z_jump_residual_right(p, n, 1.5, JumpLine::ray));
  msg = "nilpotent frame jumps at n=2: interval max=" + fmt(wi) +
        ", ray=" + fmt(wr) + " (tol 1e-5)";
  return wi < 1e-5 && wr < 1e-5;
}

// 5. closed-form structure matrix vs numeric logarithmic derivative of the
//    constant-jump frame: 1e-6 relative, n=1..5, five off-cut points.
bool crit5(std::string& msg) {
  double worst = 0.0;
  std::string where;
  for (const auto& name : shipped) {
    const Pipeline<double>& p = pipe_d(name);
    for (int n = 1; n <= 5; ++n) {
      MatPoly<double> Mc = structure_closed(p, n);
      MatPoly<double> McR = structure_closed_right(p, n);
      for (const auto& z : default_points()) {
        Mat<double> Mn = structure_numeric(p, n, z);
        Mat<double> MnR = structure_numeric_right(p, n, z);
        double rl = norm_max(Mn - Mc.eval(z)) / std::max(1.0, norm_max(Mn));
        double rr =
            norm_max(MnR - McR.eval(z)) / std::max(1.0, norm_max(MnR));
        double r = std::max(rl, rr);
        if (r > worst) worst = r, where = name + " n=" + std::to_string(n);
      }
    }
  }
  msg = "structure matrix closed vs numeric, n=1..5, 5 points, six weights: "
        "max rel=" + fmt(worst) + " (tol 1e-6, worst on " + where + ")";
  return worst < 1e-6;
}

// 6. transfer/structure compatibility at the coefficient level, n=1..5,
//    residual < 1e-9; coefficient arithmetic carried in double-double.
bool crit6(std::string& msg) {
  double worst = 0.0;
  for (const auto& name : shipped) {
    const Pipeline<dd>& p = pipe_dd(name);
    const int N = p.S.N;
    Mat<dd> E = block_diag2(Mat<dd>::identity(N), Mat<dd>::zero(N, N));
    MatPoly<dd> sigE(std::vector<Mat<dd>>{Mat<dd>::zero(2 * N, 2 * N), E, -E});
    for (int n = 1; n <= 5; ++n) {
      MatPoly<dd> T = transfer_left(p.S, n);
      MatPoly<dd> A = structure_closed(p, n + 1) * T;
      MatPoly<dd> B = T * structure_closed(p, n);
      double sc = std::max({1.0, coeff_norm_max(A), coeff_norm_max(B)});
      worst = std::max(worst, coeff_norm_max(A - B - sigE) / sc);

      MatPoly<dd> Tr = transfer_right(p.S, n);
      MatPoly<dd> Ar = Tr * structure_closed_right(p, n + 1);
      MatPoly<dd> Br = structure_closed_right(p, n) * Tr;
      double scr = std::max({1.0, coeff_norm_max(Ar), coeff_norm_max(Br)});
      worst = std::max(worst, coeff_norm_max(Ar - Br - sigE) / scr);
    }
  }
  msg = "zero-curvature coefficient residual, n=1..5, both systems, six "
        "weights: max=" + fmt(worst) + " (tol 1e-9)";
  return worst < 1e-9;
}

// 7. first- and second-order frame relations, second-kind columns included:
//    < 1e-7 / < 1e-6 at five off-cut points, n <= 4.
bool crit7(std::string& msg) {
  double w1 = 0.0, w2 = 0.0;
  for (const auto& name : shipped) {
    const Pipeline<double>& p = pipe_d(name);
    for (int n = 1; n <= 4; ++n)
      for (const auto& z : default_points()) {
        w1 = std::max(w1, ode_first_residual_left(p, n, z));
        w1 = std::max(w1, ode_first_residual_right(p, n, z));
        w2 = std::max(w2, ode_second_residual_left(p, n, z));
        w2 = std::max(w2, ode_second_residual_right(p, n, z));
      }
  }
  msg = "frame relations with second-kind columns, n<=4, 5 points, six "
        "weights: first=" + fmt(w1) + " (tol 1e-7), second=" + fmt(w2) +
        " (tol 1e-6)";
  return w1 < 1e-7 && w2 < 1e-6;
}

// 8. difference relations of the recurrence data, coefficients sourced from
//    the moment pipeline alone: r1,r2 < 1e-6 on the scalar exponential
//    weight (n <= 6) and < 1e-5 on the non-commuting N=2 weight, < 60 s.
bool crit8(std::string& msg) {
  auto t0 = steady::now();
  Pipeline<dd> pe = build_pipeline(preset_weight<dd>("jacobi-exp"), 8);
  Pipeline<dd> pn = build_pipeline(preset_weight<dd>("noncommuting"), 8);
  double re = 0.0, rn = 0.0;
  for (int n = 1; n <= 6; ++n) {
    auto a = dpiv_residuals(pe.S, pe.w.pearson_left(), n);
    re = std::max({re, a[0], a[1]});
    auto b = dpiv_residuals(pn.S, pn.w.pearson_left(), n);
    rn = std::max({rn, b[0], b[1]});
  }
  double t = tick(t0);
  msg = "difference relations, n<=6: scalar exponential max=" + fmt(re) +
        " (tol 1e-6), non-commuting max=" + fmt(rn) + " (tol 1e-5), " +
        fmt(t) + " s (limit 60)";
  return re < 1e-6 && rn < 1e-5 && t < 60.0;
}

// 9. commuting collapse on the scalar exponential weight:
//    xi_{n+1}^2 - xi_0^2 = gamma_{n+1} mu_n mu_{n+1} below 1e-7 for n <= 5.
bool crit9(std::string& msg) {
  const Pipeline<dd>& p = pipe_dd("jacobi-exp");
  auto red = commutative_reduction(p.S, p.w.pearson_left(), 6);
  double worst = 0.0;
  for (double v : red.square_residual) worst = std::max(worst, v);
  msg = "shifted-variable square relation, n<=5: max=" + fmt(worst) +
        " (tol 1e-7)";
  return worst < 1e-7;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timing(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("timing") == std::string::npos) out << line << "\n";
  return out.str();
}

// 10. two sequential `verify --which all` runs on the same configuration
//     emit byte-identical reports once the timing line is removed.
bool crit10(std::string& msg, const std::string& cli,
            const std::string& cfgdir) {
  std::string run[2];
  for (int i = 0; i < 2; ++i) {
    std::string out = "/tmp/mbop_acceptance_" + std::to_string(i) + ".txt";
    std::string cmd = "\"" + cli + "\" verify --config " + cfgdir +
                      "/legendre.json --which all > " + out + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
      msg = "verify run " + std::to_string(i + 1) + " did not exit 0";
      return false;
    }
    run[i] = strip_timing(slurp(out));
  }
  bool same = !run[0].empty() && run[0] == run[1];
  msg = std::string("two verify runs, timing line excluded: ") +
        (same ? "byte-identical" : "DIFFER") + " (" +
        std::to_string(run[0].size()) + " bytes)";
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> <config-dir>\n");
    return 1;
  }
  const std::string cli = argv[1], cfgdir = argv[2];

  int failed = 0;
  auto gate = [&](int k, bool (*fn)(std::string&)) {
    std::string msg;
    bool ok = false;
    try {
      ok = fn(msg);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("CRITERION %d %s  %s\n", k, ok ? "PASS" : "FAIL", msg.c_str());
    std::fflush(stdout);
  };

  gate(1, crit1);
  gate(2, crit2);
  gate(3, crit3);
  gate(4, crit4);
  gate(5, crit5);
  gate(6, crit6);
  gate(7, crit7);
  gate(8, crit8);
  gate(9, crit9);
  {
    std::string msg;
    bool ok = false;
    try {
      ok = crit10(msg, cli, cfgdir);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("CRITERION 10 %s  %s\n", ok ? "PASS" : "FAIL", msg.c_str());
  }

  std::printf("ACCEPTANCE: %d/10 criteria pass\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
