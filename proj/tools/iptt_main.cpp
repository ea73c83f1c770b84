// iptt: randomized checks of norm inequalities for inner product type
// transformers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "iptt/error.hpp"
#include "iptt/harness.hpp"

namespace {

using iptt::SweepConfig;
using iptt::TrialReport;

struct Overrides {
  std::string config;
  std::vector<std::string> ids;
  int trials = 0;
  std::vector<int> dims;
  std::vector<int> atoms;
  std::vector<std::string> norms;
  std::vector<double> thetas;
  std::string seed;
  std::string format;
  std::string out;
  bool timing = false;
  int threads = 1;
};

SweepConfig build_config(const Overrides& o, SweepConfig base) {
  SweepConfig cfg = o.config.empty() ? std::move(base) : iptt::load_config_file(o.config);
  if (!o.ids.empty()) cfg.ids = o.ids;
  if (o.trials != 0) cfg.trials = o.trials;
  if (!o.dims.empty()) cfg.dims = o.dims;
  if (!o.atoms.empty()) cfg.atoms = o.atoms;
  if (!o.norms.empty()) {
    cfg.norms.clear();
    for (const auto& n : o.norms) cfg.norms.push_back(iptt::UINorm::parse(n));
  }
  if (!o.thetas.empty()) cfg.theta_grid = o.thetas;
  if (!o.seed.empty()) {
    try {
      cfg.seed = std::stoull(o.seed);
    } catch (const std::exception&) {
      throw iptt::Error(iptt::ErrorKind::ConfigInvalid, fmt::format("seed: not an integer '{}'", o.seed));
    }
  }
  if (!o.format.empty()) cfg.format = iptt::parse_format(o.format);
  if (!o.out.empty()) cfg.out_path = o.out;
  if (o.timing) cfg.timing = true;
  iptt::validate(cfg);
  return cfg;
}

void write_output(const SweepConfig& cfg, const std::vector<TrialReport>& reports) {
  const std::string text = cfg.format == iptt::ReportFormat::Json ? iptt::reports_to_json(cfg, reports)
                                                                  : iptt::reports_to_csv(reports);
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw iptt::Error(iptt::ErrorKind::ConfigInvalid, fmt::format("out_path: cannot write '{}'", cfg.out_path));
  out << text;
}

void print_summary(const std::vector<TrialReport>& reports) {
  if (reports.empty()) return;
  fmt::print(stderr, "{:<18} {:>7} {:>13} {:>13} {:>13} {:>5}  {}\n", "id", "count", "min_margin",
             "median", "min_rel", "viol", "sharpest_seed");
  for (const auto& s : iptt::summarize(reports)) {
    fmt::print(stderr, "{:<18} {:>7} {:>13.6g} {:>13.6g} {:>13.6g} {:>5}  {}\n", s.id, s.count, s.min_margin,
               s.median_margin, s.min_relative_margin, s.violations, s.sharpest_seed);
  }
}

int run(const SweepConfig& cfg, int threads) {
  const auto reports = iptt::run_sweep(cfg, threads);
  write_output(cfg, reports);
  print_summary(reports);
  return iptt::count_violations(reports) == 0 ? 0 : 1;
}

void add_sweep_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--trials", o.trials, "Trials per (id, dim)")->check(CLI::PositiveNumber);
  cmd->add_option("--dims", o.dims, "Matrix dimensions")->delimiter(',');
  cmd->add_option("--atoms", o.atoms, "Atom counts to draw from")->delimiter(',');
  cmd->add_option("--seed", o.seed, "Master seed (unsigned 64-bit)");
  cmd->add_option("--format", o.format, "json or csv");
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--config", o.config, "JSON config file; flags override its fields");
  cmd->add_flag("--timing", o.timing, "Record wall_time per report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized checks of norm inequalities for inner product type transformers"};
  app.require_subcommand(1);

  Overrides check_opts;
  auto* check = app.add_subcommand("check", "Run a seeded sweep of inequality checks");
  check->add_option("--ids", check_opts.ids, "Comma-separated inequality ids")->delimiter(',');
  check->add_option("--norms", check_opts.norms, "Norms: op, s<p>, sinf, kf<k>, rc<p>:<base>")->delimiter(',');
  check->add_option("--theta", check_opts.thetas, "Exponent grid for theta-power checks")->delimiter(',');
  add_sweep_options(check, check_opts);

  Overrides ident_opts;
  auto* identities = app.add_subcommand("identities", "Korkine, variance, Hilbert-Schmidt norm and covariance identities");
  add_sweep_options(identities, ident_opts);

  auto* sharpness = app.add_subcommand("sharpness", "Evaluate the equality witnesses");

  auto* list = app.add_subcommand("list", "List inequality ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      return run(build_config(check_opts, SweepConfig{}), check_opts.threads);
    }
    if (*identities) {
      SweepConfig base;
      base.ids = {"korkine", "variance", "hs_exact_norm", "covariance", "deviation_split"};
      base.dims = {2, 4, 8};
      const SweepConfig cfg = build_config(ident_opts, base);
      return run(cfg, ident_opts.threads);
    }
    if (*sharpness) {
      const auto reports = iptt::sharpness_witnesses();
      fmt::print("{:<18} {:<26} {:<5} {:>22} {:>22} {:>12}\n", "id", "witness", "norm", "lhs", "rhs", "margin");
      for (const auto& r : reports) {
        fmt::print("{:<18} {:<26} {:<5} {:>22.17g} {:>22.17g} {:>12.3g}\n", r.id, r.param, r.norm, r.lhs, r.rhs,
                   r.margin);
      }
      return iptt::count_violations(reports) == 0 ? 0 : 1;
    }
    if (*list) {
      for (const auto& id : iptt::known_ids()) {
        fmt::print("{}{}\n", id, iptt::is_norm_independent(id) ? "" : "  (per norm)");
      }
      return 0;
    }
  } catch (const iptt::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
