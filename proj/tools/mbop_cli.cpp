// Command-line driver.  Four verbs over one JSON configuration:
//
//   mbop moments    --config c.json [--nmax K] [--precision P] [--out F]
//   mbop recurrence --config c.json [...]
//   mbop verify     --config c.json [--which LIST] [...]
//   mbop report     --config c.json [...]
//
// moments and recurrence serialize the pipeline tables; verify runs the
// selected identity suites and sets the exit code from the verdict; report
// emits tables and the full suite in one document.
//
// Exit codes: 0 all residuals below tolerance, 1 residual failure,
// 2 configuration/usage error, 3 numerical failure.  MBOP_LOG=1 turns on
// progress notes (stderr only, so documents stay byte-comparable).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mbop/config.hpp"
#include "mbop/report.hpp"

namespace {

bool logging_on() {
  const char* v = std::getenv("MBOP_LOG");
  return v && *v;
}

void note(const std::string& msg) {
  if (logging_on()) std::cerr << "[mbop] " << msg << "\n";
}

struct Options {
  std::string config_path;
  std::string out_path;
  std::string which = "all";
  std::string precision;
  int nmax = -1;
};

void deliver(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    mbop::fail(mbop::ErrorCode::ConfigInvalid,
               "cannot write '" + out_path + "'");
  out << body;
}

template <class R>
int run_command(const mbop::RunConfig& cfg, const Options& opt) {
  using namespace mbop;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };
  Weight<R> w = realize_weight<R>(cfg.weight);
  note("weight '" + w.name + "' accepted, nmax=" + std::to_string(cfg.nmax));
  std::ostringstream body;
  int rc = 0;
  if (cfg.command == "moments") {
    MomentTable<R> tab = compute_moments(w, 2 * cfg.nmax);
    write_header(body, cfg.command, cfg.hash, w.name, w.N, cfg.nmax,
                 precision_label(cfg.precision));
    write_moments_doc(body, tab);
    body << "\ntiming: " << fmt_dec(elapsed()) << " s\n";
  } else if (cfg.command == "recurrence") {
    BiorthSystem<R> S = build_biorth(w, cfg.nmax);
    write_header(body, cfg.command, cfg.hash, w.name, w.N, cfg.nmax,
                 precision_label(cfg.precision));
    write_recurrence_doc(body, S);
    body << "\ntiming: " << fmt_dec(elapsed()) << " s\n";
  } else {
    Pipeline<R> p = build_pipeline(std::move(w), cfg.nmax);
    note("pipeline ready after " + fmt_dec(elapsed()) + " s");
    ReportRequest rq;
    rq.which = parse_which(cfg.command == "report" ? "all" : opt.which);
    rq.points = cfg.points;
    rq.tolerances = cfg.tolerances;
    rq.config_hash = cfg.hash;
    rq.precision = precision_label(cfg.precision);
    rq.command = cfg.command;
    ResidualReport rep = build_report(p, rq);
    rep.seconds = elapsed();
    if (cfg.command == "report") {
      write_header(body, cfg.command, cfg.hash, p.w.name, p.w.N, cfg.nmax,
                   precision_label(cfg.precision));
      write_moments_doc(body, p.mom);
      write_recurrence_doc(body, p.S);
      body << "\nsection: identities\n";
      write_report(body, rep, /*with_header=*/false);
    } else {
      write_report(body, rep);
    }
    rc = rep.all_pass() ? 0 : 1;
    note(rep.all_pass() ? "all selected identities pass"
                        : "residual failure");
  }
  deliver(body.str(), opt.out_path);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix biorthogonal polynomial pipelines and identity checks"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON run configuration")
        ->required();
    sub->add_option("--precision", opt.precision,
                    "override: double | double-double");
    sub->add_option("--nmax", opt.nmax, "override: pipeline depth")
        ->check(CLI::Range(1, 64));
    sub->add_option("--out", opt.out_path,
                    "write the document here instead of stdout");
  };
  add_common(app.add_subcommand("moments", "serialize the moment table"));
  add_common(
      app.add_subcommand("recurrence", "serialize the recurrence tables"));
  CLI::App* verify =
      app.add_subcommand("verify", "run identity suites, exit by verdict");
  add_common(verify);
  verify->add_option(
      "--which", opt.which,
      "comma list: biorth,jumps,zerocurv,ode1,ode2,split,dpiv or all");
  add_common(app.add_subcommand("report", "tables plus the full suite"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    mbop::RunConfig cfg = mbop::load_config(opt.config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    if (opt.nmax > 0) cfg.nmax = opt.nmax;
    if (!opt.precision.empty()) {
      if (opt.precision == "double")
        cfg.precision = mbop::Precision::double_only;
      else if (opt.precision == "double-double")
        cfg.precision = mbop::Precision::double_double;
      else
        mbop::fail(mbop::ErrorCode::ConfigInvalid,
                   "--precision must be double or double-double");
    }
    (void)mbop::parse_which(opt.which);  // reject typos before any work
    return cfg.precision == mbop::Precision::double_only
               ? run_command<double>(cfg, opt)
               : run_command<mbop::dd>(cfg, opt);
  } catch (const mbop::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == mbop::ErrorCode::ConfigInvalid ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
