#pragma once

// Residual reports.  A report runs selected identity suites against one
// pipeline and records, per identity, the worst residual seen, the
// tolerance applied and a pass flag.  Every entry carries a stable anchor
// key into the identity catalog documented in README.md.
//
// Output is plain text and deterministic line by line; the only line that
// may differ between two runs of the same configuration carries the word
// "timing".  Every floating-point value is dual-encoded: exact hex-float
// next to a decimal mirror (double-double values print both components in
// the hex field, the mirror rounds to double).

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mbop/biorth.hpp"
#include "mbop/odecheck.hpp"
#include "mbop/painleve.hpp"
#include "mbop/rh.hpp"

namespace mbop {

inline constexpr const char* artifact_version = "0.1.0";

// ---------------------------------------------------------------------------
// dual float encoding

inline std::string fmt_hex(double x) {
  char b[48];
  std::snprintf(b, sizeof b, "%a", x);
  return b;
}
inline std::string fmt_dec(double x) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}
inline std::string fmt_hex(const dd& x) {
  return fmt_hex(x.hi) + " " + fmt_hex(x.lo);
}
inline std::string fmt_dec(const dd& x) { return fmt_dec(to_double(x)); }

template <class R>
inline std::string fmt_dual(const R& x) {
  return fmt_hex(x) + " (" + fmt_dec(x) + ")";
}
template <class R>
inline std::string fmt_entry(const cplx<R>& v) {
  return fmt_dual(v.re) + " + " + fmt_dual(v.im) + "i";
}
inline std::string fmt_point(const cplx<double>& z) {
  return fmt_dec(z.re) + (z.im < 0 ? "" : "+") + fmt_dec(z.im) + "i";
}

// ---------------------------------------------------------------------------
// identity catalog

// Anchor keys, one per checked identity; README.md documents what each one
// states and where it is verified.
inline const std::vector<std::string>& identity_catalog() {
  static const std::vector<std::string> keys = {
      "biorthogonality",   "three-term-left",
      "three-term-right",  "z-jump-interval",
      "z-jump-ray",        "structure-matrix",
      "zero-curvature",    "ode-first-left",
      "ode-first-right",   "ode-second-left",
      "ode-second-right",  "split-p-left",
      "split-q-left",      "split-p-right",
      "split-q-right",     "dpiv-1",
      "dpiv-2",            "dpiv-commutative-sum",
      "dpiv-commutative-square", "dpiv-commutative-ratio"};
  return keys;
}

inline const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tols = {
      {"biorthogonality", 1e-9},
      {"three-term-left", 1e-8},
      {"three-term-right", 1e-8},
      {"z-jump-interval", 1e-5},
      {"z-jump-ray", 1e-5},
      {"structure-matrix", 1e-6},
      {"zero-curvature", 1e-9},
      {"ode-first-left", 1e-7},
      {"ode-first-right", 1e-7},
      {"ode-second-left", 1e-6},
      {"ode-second-right", 1e-6},
      {"split-p-left", 1e-6},
      {"split-q-left", 1e-6},
      {"split-p-right", 1e-6},
      {"split-q-right", 1e-6},
      {"dpiv-1", 1e-5},
      {"dpiv-2", 1e-5},
      {"dpiv-commutative-sum", 1e-6},
      {"dpiv-commutative-square", 1e-6},
      {"dpiv-commutative-ratio", 1e-6}};
  return tols;
}

// ---------------------------------------------------------------------------
// report containers

struct ReportEntry {
  std::string identity;  // human-readable statement
  std::string anchor;    // catalog key
  double residual = 0.0;
  double tol = 0.0;
  bool pass = true;
  bool skipped = false;  // suite not applicable to this weight/depth
  std::vector<std::string> detail;
};

struct ResidualReport {
  std::string command;
  std::string weight;
  int N = 1;
  int nmax = 0;
  std::string precision;
  std::string config_hash;
  std::string which;         // normalized selection
  std::string points_label;  // evaluation points used by the sweeps
  std::vector<ReportEntry> entries;
  double seconds = 0.0;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

namespace detail {

inline double tol_for(const std::string& anchor,
                      const std::map<std::string, double>& overrides) {
  auto it = overrides.find(anchor);
  if (it != overrides.end()) return it->second;
  return default_tolerances().at(anchor);
}

inline ReportEntry open_entry(std::string identity, std::string anchor,
                              const std::map<std::string, double>& overrides) {
  ReportEntry e;
  e.identity = std::move(identity);
  e.tol = tol_for(anchor, overrides);
  e.anchor = std::move(anchor);
  return e;
}

inline void close_entry(ReportEntry& e, std::vector<ReportEntry>& out) {
  e.pass = e.skipped || e.residual < e.tol;
  out.push_back(std::move(e));
}

inline void skip_entry(ReportEntry& e, std::string why,
                       std::vector<ReportEntry>& out) {
  e.skipped = true;
  e.residual = 0.0;
  e.detail.push_back(std::move(why));
  close_entry(e, out);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// document writers

inline void write_header(std::ostream& os, const std::string& command,
                         const std::string& config_hash,
                         const std::string& weight, int N, int nmax,
                         const std::string& precision) {
  os << "mbop " << command << "\n";
  os << "version: " << artifact_version << "\n";
  os << "config: " << config_hash << "\n";
  os << "weight: " << weight << " (N=" << N << ")\n";
  os << "nmax: " << nmax << "\n";
  os << "precision: " << precision << "\n";
}

template <class R>
inline void print_matrix(std::ostream& os, const Mat<R>& M,
                         const std::string& label) {
  os << label << ":\n";
  for (int i = 0; i < M.rows; ++i) {
    os << "  [ ";
    for (int j = 0; j < M.cols; ++j) {
      if (j) os << " ; ";
      os << fmt_entry(M(i, j));
    }
    os << " ]\n";
  }
}

inline const char* csv_columns() {
  return "table,side,n,i,j,re_hex,re_dec,im_hex,im_dec";
}

template <class R>
inline void csv_matrix(std::ostream& os, const char* table, const char* side,
                       int n, const Mat<R>& M) {
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j)
      os << table << ',' << side << ',' << n << ',' << i << ',' << j << ','
         << fmt_hex(M(i, j).re) << ',' << fmt_dec(M(i, j).re) << ','
         << fmt_hex(M(i, j).im) << ',' << fmt_dec(M(i, j).im) << "\n";
}

template <class R>
inline void write_moments_doc(std::ostream& os, const MomentTable<R>& tab) {
  os << "\nsection: moments\n";
  os << "count: " << tab.count() << "\n";
  os << "quadrature-error-estimate: " << fmt_dec(tab.est_error) << "\n\n";
  for (int k = 0; k < tab.count(); ++k)
    print_matrix(os, tab[k], "W[" + std::to_string(k) + "]");
  os << "\ncsv: " << csv_columns() << "\n";
  for (int k = 0; k < tab.count(); ++k) csv_matrix(os, "moment", "", k, tab[k]);
}

template <class R>
inline void write_recurrence_doc(std::ostream& os, const BiorthSystem<R>& S) {
  os << "\nsection: recurrence\n\n";
  for (int n = 0; n < S.nmax; ++n)
    print_matrix(os, S.betaL[n], "beta_L[" + std::to_string(n) + "]");
  for (int n = 0; n < S.nmax; ++n)
    print_matrix(os, S.betaR[n], "beta_R[" + std::to_string(n) + "]");
  for (int n = 1; n <= S.nmax; ++n)
    print_matrix(os, S.gammaL[n], "gamma_L[" + std::to_string(n) + "]");
  for (int n = 1; n <= S.nmax; ++n)
    print_matrix(os, S.gammaR[n], "gamma_R[" + std::to_string(n) + "]");
  for (int n = 0; n <= S.nmax; ++n)
    print_matrix(os, S.C[n], "C[" + std::to_string(n) + "]");
  for (int n = 0; n <= S.nmax; ++n)
    print_matrix(os, S.Cinv[n], "C_inv[" + std::to_string(n) + "]");
  os << "\ncsv: " << csv_columns() << "\n";
  for (int n = 0; n < S.nmax; ++n) csv_matrix(os, "beta", "L", n, S.betaL[n]);
  for (int n = 0; n < S.nmax; ++n) csv_matrix(os, "beta", "R", n, S.betaR[n]);
  for (int n = 1; n <= S.nmax; ++n)
    csv_matrix(os, "gamma", "L", n, S.gammaL[n]);
  for (int n = 1; n <= S.nmax; ++n)
    csv_matrix(os, "gamma", "R", n, S.gammaR[n]);
  for (int n = 0; n <= S.nmax; ++n) csv_matrix(os, "c", "", n, S.C[n]);
  for (int n = 0; n <= S.nmax; ++n) csv_matrix(os, "c_inv", "", n, S.Cinv[n]);
}

inline void write_report(std::ostream& os, const ResidualReport& r,
                          bool with_header = true) {
  if (with_header)
    write_header(os, r.command, r.config_hash, r.weight, r.N, r.nmax,
                 r.precision);
  if (!r.which.empty()) os << "which: " << r.which << "\n";
  if (!r.points_label.empty()) os << "points: " << r.points_label << "\n";
  os << "\n";
  int failed = 0, skipped = 0;
  for (const auto& e : r.entries) {
    os << "identity: " << e.identity << "\n";
    os << "anchor: " << e.anchor << "\n";
    os << "residual: " << fmt_dual(e.residual) << "\n";
    os << "tolerance: " << fmt_dec(e.tol) << "\n";
    os << "status: " << (e.skipped ? "SKIP" : e.pass ? "PASS" : "FAIL")
       << "\n";
    for (const auto& d : e.detail) os << "  " << d << "\n";
    os << "\n";
    failed += !e.pass;
    skipped += e.skipped;
  }
  os << "result: " << (r.all_pass() ? "PASS" : "FAIL") << " ("
     << int(r.entries.size()) - skipped << " checked, " << failed
     << " failed, " << skipped << " skipped)\n";
  os << "timing: " << fmt_dec(r.seconds) << " s\n";
}

// ---------------------------------------------------------------------------
// identity suites

// Off-cut sweep points used when the configuration does not name any.
inline const std::vector<cplx<double>>& default_points() {
  static const std::vector<cplx<double>> pts = {
      {-0.7, 0.0}, {-1.5, 0.0}, {0.5, 0.6}, {1.5, 0.8}, {-0.4, -0.9}};
  return pts;
}

using ToleranceMap = std::map<std::string, double>;

template <class R>
inline void suite_biorth(const Pipeline<R>& p, const ToleranceMap& tols,
                         std::vector<ReportEntry>& out) {
  const auto& S = p.S;
  const int N = S.N;
  ReportEntry e = detail::open_entry(
      "left-right pairing equals the normalization", "biorthogonality", tols);
  int wn = 0, wm = 0;
  for (int n = 0; n <= S.nmax; ++n)
    for (int m = 0; m <= S.nmax; ++m) {
      Mat<R> acc = Mat<R>::zero(N, N);
      for (int j = 0; j <= n; ++j) {
        Mat<R> row = Mat<R>::zero(N, N);
        for (int k = 0; k <= m; ++k) row += p.mom[j + k] * S.PR[m].at(k);
        acc += S.PL[n].at(j) * row;
      }
      if (n == m) acc -= S.Cinv[n];
      double r = norm_max(acc);
      if (r > e.residual) e.residual = r, wn = n, wm = m;
    }
  e.detail.push_back("worst pair: n=" + std::to_string(wn) +
                     " m=" + std::to_string(wm));
  detail::close_entry(e, out);

  MatPoly<R> zI = MatPoly<R>::monomial(Mat<R>::identity(N), 1);
  ReportEntry el = detail::open_entry(
      "left three-term recurrence at the coefficient level", "three-term-left",
      tols);
  ReportEntry er = detail::open_entry(
      "right three-term recurrence at the coefficient level",
      "three-term-right", tols);
  for (int n = 0; n < S.nmax; ++n) {
    MatPoly<R> resL = zI * S.PL[n] - S.PL[n + 1] - S.betaL[n] * S.PL[n];
    MatPoly<R> resR = zI * S.PR[n] - S.PR[n + 1] - S.PR[n] * S.betaR[n];
    if (n > 0) {
      resL = resL - S.gammaL[n] * S.PL[n - 1];
      resR = resR - S.PR[n - 1] * S.gammaR[n];
    }
    el.residual = std::max(el.residual, coeff_norm_max(resL));
    er.residual = std::max(er.residual, coeff_norm_max(resR));
  }
  el.detail.push_back("rows 0.." + std::to_string(S.nmax - 1));
  er.detail.push_back("rows 0.." + std::to_string(S.nmax - 1));
  detail::close_entry(el, out);
  detail::close_entry(er, out);
}

template <class R>
inline void suite_jumps(const Pipeline<R>& p, const ToleranceMap& tols,
                        std::vector<ReportEntry>& out) {
  const int n = std::min(2, p.S.nmax);
  ReportEntry ei = detail::open_entry(
      "weighted-frame jump across (0,1) is the constant factor",
      "z-jump-interval", tols);
  for (double t : {0.25, 0.5, 0.75}) {
    double rl = z_jump_residual_left(p, n, t, JumpLine::interval);
    double rr = z_jump_residual_right(p, n, t, JumpLine::interval);
    ei.detail.push_back("t=" + fmt_dec(t) + ": left " + fmt_dec(rl) +
                        ", right " + fmt_dec(rr));
    ei.residual = std::max({ei.residual, rl, rr});
  }
  detail::close_entry(ei, out);

  ReportEntry er = detail::open_entry(
      "weighted-frame jump across (1,inf) is the constant factor",
      "z-jump-ray", tols);
  double rl = z_jump_residual_left(p, n, 1.5, JumpLine::ray);
  double rr = z_jump_residual_right(p, n, 1.5, JumpLine::ray);
  er.detail.push_back("t=1.5: left " + fmt_dec(rl) + ", right " + fmt_dec(rr));
  er.residual = std::max(rl, rr);
  detail::close_entry(er, out);
}

template <class R>
inline void suite_zerocurv(const Pipeline<R>& p, const ToleranceMap& tols,
                           const std::vector<cplx<double>>& pts,
                           std::vector<ReportEntry>& out) {
  const int N = p.S.N;
  ReportEntry es = detail::open_entry(
      "closed-form structure matrix matches the frame derivative",
      "structure-matrix", tols);
  for (int n = 1; n <= std::min(4, p.S.nmax); ++n) {
    MatPoly<R> Mc = structure_closed(p, n);
    MatPoly<R> McR = structure_closed_right(p, n);
    for (const auto& zd : pts) {
      cplx<R> z(real_traits<R>::from_double(zd.re),
                real_traits<R>::from_double(zd.im));
      Mat<R> Mn = structure_numeric(p, n, z);
      Mat<R> MnR = structure_numeric_right(p, n, z);
      double rl =
          norm_max(Mn - Mc.eval(z)) / std::max(1.0, norm_max(Mn));
      double rr =
          norm_max(MnR - McR.eval(z)) / std::max(1.0, norm_max(MnR));
      double worst = std::max(rl, rr);
      if (worst > es.residual) {
        es.residual = worst;
        es.detail.assign({"worst: n=" + std::to_string(n) + " at z=" +
                          fmt_point(zd)});
      }
    }
  }
  detail::close_entry(es, out);

  ReportEntry ez = detail::open_entry(
      "transfer/structure compatibility at the coefficient level",
      "zero-curvature", tols);
  if (p.S.nmax < 2) {
    detail::skip_entry(ez, "needs nmax >= 2", out);
    return;
  }
  Mat<R> E = block_diag2(Mat<R>::identity(N), Mat<R>::zero(N, N));
  MatPoly<R> sigE(
      std::vector<Mat<R>>{Mat<R>::zero(2 * N, 2 * N), E, -E});
  for (int n = 1; n <= std::min(5, p.S.nmax - 1); ++n) {
    MatPoly<R> T = transfer_left(p.S, n);
    MatPoly<R> A = structure_closed(p, n + 1) * T;
    MatPoly<R> B = T * structure_closed(p, n);
    double sc = std::max({1.0, coeff_norm_max(A), coeff_norm_max(B)});
    ez.residual = std::max(ez.residual, coeff_norm_max(A - B - sigE) / sc);

    MatPoly<R> Tr = transfer_right(p.S, n);
    MatPoly<R> Ar = Tr * structure_closed_right(p, n + 1);
    MatPoly<R> Br = structure_closed_right(p, n) * Tr;
    double scr = std::max({1.0, coeff_norm_max(Ar), coeff_norm_max(Br)});
    ez.residual = std::max(ez.residual, coeff_norm_max(Ar - Br - sigE) / scr);
  }
  ez.detail.push_back("steps n=1.." +
                      std::to_string(std::min(5, p.S.nmax - 1)) +
                      ", both systems");
  detail::close_entry(ez, out);
}

template <class R>
inline void suite_ode1(const Pipeline<R>& p, const ToleranceMap& tols,
                       const std::vector<cplx<double>>& pts,
                       std::vector<ReportEntry>& out) {
  ReportEntry el = detail::open_entry("first-order relation of the left frame",
                                      "ode-first-left", tols);
  ReportEntry er = detail::open_entry(
      "first-order relation of the right frame", "ode-first-right", tols);
  for (int n = 1; n <= std::min(4, p.S.nmax); ++n)
    for (const auto& zd : pts) {
      cplx<R> z(real_traits<R>::from_double(zd.re),
                real_traits<R>::from_double(zd.im));
      el.residual = std::max(el.residual, ode_first_residual_left(p, n, z));
      er.residual = std::max(er.residual, ode_first_residual_right(p, n, z));
    }
  el.detail.push_back("frame rows include the second-kind columns");
  er.detail.push_back("frame rows include the second-kind columns");
  detail::close_entry(el, out);
  detail::close_entry(er, out);
}

template <class R>
inline void suite_ode2(const Pipeline<R>& p, const ToleranceMap& tols,
                       const std::vector<cplx<double>>& pts,
                       std::vector<ReportEntry>& out) {
  ReportEntry el = detail::open_entry(
      "second-order relation of the left frame", "ode-second-left", tols);
  ReportEntry er = detail::open_entry(
      "second-order relation of the right frame", "ode-second-right", tols);
  for (int n = 1; n <= std::min(4, p.S.nmax); ++n)
    for (const auto& zd : pts) {
      cplx<R> z(real_traits<R>::from_double(zd.re),
                real_traits<R>::from_double(zd.im));
      el.residual = std::max(el.residual, ode_second_residual_left(p, n, z));
      er.residual = std::max(er.residual, ode_second_residual_right(p, n, z));
    }
  el.detail.push_back("frame rows include the second-kind columns");
  er.detail.push_back("frame rows include the second-kind columns");
  detail::close_entry(el, out);
  detail::close_entry(er, out);
}

template <class R>
inline void suite_split(const Pipeline<R>& p, const ToleranceMap& tols,
                        const std::vector<cplx<double>>& pts,
                        std::vector<ReportEntry>& out) {
  std::array<ReportEntry, 4> es = {
      detail::open_entry("second-order rows: polynomial block, left system",
                         "split-p-left", tols),
      detail::open_entry("second-order rows: second-kind block, left system",
                         "split-q-left", tols),
      detail::open_entry("second-order rows: polynomial block, right system",
                         "split-p-right", tols),
      detail::open_entry("second-order rows: second-kind block, right system",
                         "split-q-right", tols)};
  for (int n = 1; n <= std::min(3, p.S.nmax); ++n)
    for (const auto& zd : pts) {
      cplx<R> z(real_traits<R>::from_double(zd.re),
                real_traits<R>::from_double(zd.im));
      std::array<double, 4> r = split_residuals(p, n, z);
      for (int k = 0; k < 4; ++k)
        es[size_t(k)].residual = std::max(es[size_t(k)].residual, r[size_t(k)]);
    }
  for (auto& e : es) {
    e.detail.push_back("difference step 0.01 on the second-kind rows");
    detail::close_entry(e, out);
  }
}

template <class R>
inline void suite_dpiv(const Pipeline<R>& p, const ToleranceMap& tols,
                       std::vector<ReportEntry>& out) {
  ReportEntry e1 = detail::open_entry(
      "difference relation I for the recurrence data", "dpiv-1", tols);
  ReportEntry e2 = detail::open_entry(
      "difference relation II for the recurrence data", "dpiv-2", tols);
  if (!p.w.right_trivial()) {
    const char* why =
        "weight has two-sided factors; the relations need the whole Pearson "
        "data on the left";
    detail::skip_entry(e1, why, out);
    detail::skip_entry(e2, why, out);
    return;
  }
  const int top = std::min(p.S.nmax - 2, 6);
  if (top < 1) {
    detail::skip_entry(e1, "needs nmax >= 3", out);
    detail::skip_entry(e2, "needs nmax >= 3", out);
    return;
  }
  const MatPoly<R>& h = p.w.pearson_left();
  for (int n = 1; n <= top; ++n) {
    std::array<double, 2> r = dpiv_residuals(p.S, h, n);
    e1.detail.push_back("n=" + std::to_string(n) + ": " + fmt_dec(r[0]));
    e2.detail.push_back("n=" + std::to_string(n) + ": " + fmt_dec(r[1]));
    e1.residual = std::max(e1.residual, r[0]);
    e2.residual = std::max(e2.residual, r[1]);
  }
  detail::close_entry(e1, out);
  detail::close_entry(e2, out);

  ReportEntry cs = detail::open_entry(
      "commuting data: shifted-variable sum relation", "dpiv-commutative-sum",
      tols);
  ReportEntry cq = detail::open_entry(
      "commuting data: shifted-variable square relation",
      "dpiv-commutative-square", tols);
  ReportEntry cr = detail::open_entry(
      "commuting data: inverse-shift form of the square relation",
      "dpiv-commutative-ratio", tols);
  const int m = std::min(p.S.nmax - 1, 4);
  try {
    auto red = commutative_reduction(p.S, h, m);
    for (double v : red.sum_residual) cs.residual = std::max(cs.residual, v);
    for (double v : red.square_residual)
      cq.residual = std::max(cq.residual, v);
    cs.detail.push_back("rows 0.." + std::to_string(m));
    cq.detail.push_back("rows 1.." + std::to_string(m));
    detail::close_entry(cs, out);
    detail::close_entry(cq, out);
    if (red.ratio_applicable) {
      for (double v : red.ratio_residual)
        cr.residual = std::max(cr.residual, v);
      cr.detail.push_back("rows 1.." + std::to_string(m));
      detail::close_entry(cr, out);
    } else {
      detail::skip_entry(
          cr, "quadratic Pearson coefficient is singular; no inverse shifts",
          out);
    }
  } catch (const Error& err) {
    if (err.code() != ErrorCode::NotCommutative &&
        err.code() != ErrorCode::SingularMu)
      throw;
    detail::skip_entry(cs, err.what(), out);
    detail::skip_entry(cq, err.what(), out);
    detail::skip_entry(cr, err.what(), out);
  }
}

// ---------------------------------------------------------------------------
// assembly

// Suite names admitted on the command line, in canonical report order.
inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "biorth", "jumps", "zerocurv", "ode1", "ode2", "split", "dpiv"};
  return names;
}

// Normalizes a comma-separated selection ("all" expands); rejects unknown
// names so a typo cannot silently skip a suite.
inline std::vector<std::string> parse_which(const std::string& list) {
  std::vector<std::string> picked;
  std::string cur;
  std::vector<std::string> raw;
  for (char c : list + ",") {
    if (c == ',') {
      if (!cur.empty()) raw.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  bool all = false;
  for (const auto& tok : raw) {
    if (tok == "all") {
      all = true;
      continue;
    }
    if (std::find(suite_names().begin(), suite_names().end(), tok) ==
        suite_names().end())
      fail(ErrorCode::ConfigInvalid,
           "unknown suite '" + tok + "' (expected all, biorth, jumps, "
           "zerocurv, ode1, ode2, split or dpiv)");
    picked.push_back(tok);
  }
  if (all || raw.empty()) return suite_names();
  std::vector<std::string> ordered;
  for (const auto& name : suite_names())
    if (std::find(picked.begin(), picked.end(), name) != picked.end())
      ordered.push_back(name);
  return ordered;
}

struct ReportRequest {
  std::vector<std::string> which;      // canonical order, from parse_which
  std::vector<cplx<double>> points;    // empty -> default_points()
  ToleranceMap tolerances;
  std::string config_hash;
  std::string precision;
  std::string command;
};

template <class R>
inline ResidualReport build_report(const Pipeline<R>& p,
                                   const ReportRequest& rq) {
  ResidualReport rep;
  rep.command = rq.command;
  rep.weight = p.w.name;
  rep.N = p.w.N;
  rep.nmax = p.S.nmax;
  rep.precision = rq.precision;
  rep.config_hash = rq.config_hash;
  const auto& pts = rq.points.empty() ? default_points() : rq.points;
  for (size_t i = 0; i < rq.which.size(); ++i)
    rep.which += (i ? "," : "") + rq.which[i];
  for (size_t i = 0; i < pts.size(); ++i)
    rep.points_label += (i ? ", " : "") + fmt_point(pts[i]);
  for (const auto& suite : rq.which) {
    if (suite == "biorth") suite_biorth(p, rq.tolerances, rep.entries);
    if (suite == "jumps") suite_jumps(p, rq.tolerances, rep.entries);
    if (suite == "zerocurv")
      suite_zerocurv(p, rq.tolerances, pts, rep.entries);
    if (suite == "ode1") suite_ode1(p, rq.tolerances, pts, rep.entries);
    if (suite == "ode2") suite_ode2(p, rq.tolerances, pts, rep.entries);
    if (suite == "split") suite_split(p, rq.tolerances, pts, rep.entries);
    if (suite == "dpiv") suite_dpiv(p, rq.tolerances, rep.entries);
  }
  return rep;
}

}  // namespace mbop
