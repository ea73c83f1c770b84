#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iptt/ineqsuite.hpp"
#include "iptt/uinorms.hpp"

namespace iptt {

enum class ReportFormat { Json, Csv };

struct SweepConfig {
  std::vector<std::string> ids{"gruss_operator"};
  int trials = 100;
  std::vector<int> dims{2, 4};
  std::vector<int> atoms{1, 2, 3, 5};
  std::vector<UINorm> norms{UINorm::operator_norm(), UINorm::schatten(1), UINorm::schatten(2),
                            UINorm::kyfan(2)};
  std::uint64_t seed = 42;
  std::vector<double> theta_grid{0.5, 1.0, 2.0};
  std::vector<LandauExponents> pqr_grid{{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, {4.0 / 3.0, 1.0, 2.0}};
  std::string out_path;  // empty: standard output
  ReportFormat format = ReportFormat::Json;
  bool timing = false;   // wall_time stays 0 unless set, keeping output byte-stable
};

/// Throws ConfigInvalid naming the offending field.
void validate(const SweepConfig& cfg);

/// JSON object with the SweepConfig field names; absent fields keep defaults.
SweepConfig parse_config_json(std::string_view text);
SweepConfig load_config_file(const std::string& path);

struct TrialReport {
  std::string id;
  int trial = 0;
  std::uint64_t seed = 0;
  int dim = 0;
  std::string norm;   // "-" when the check does not take a norm
  std::string param;  // e.g. "theta=0.5", "pqr=2,2,2"; "-" when none
  std::string kind;   // "inequality" or "identity"
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double relative_margin = 0.0;
  bool violation = false;
  std::vector<std::string> hypothesis_report;
  std::vector<std::pair<std::string, double>> extras;
  double wall_time = 0.0;
};

/// Every id run_sweep understands, in canonical order.
const std::vector<std::string>& known_ids();
/// Ids whose reports do not depend on the norm list.
bool is_norm_independent(std::string_view id);

/// Relative violation tolerance: kTolIneqRel unless IPTT_TOL_OVERRIDE is set.
double violation_tolerance();

/// One (id, trial, dim) cell. Its RNG seed is derive_seed(cfg.seed, id,
/// trial, dim), so a cell reproduces on its own.
std::vector<TrialReport> run_cell(const SweepConfig& cfg, const std::string& id, int trial, int dim);

/// All cells ordered by (id, trial, dim) with norm and parameter innermost.
/// threads <= 1 runs serially; the output does not depend on `threads`.
std::vector<TrialReport> run_sweep(const SweepConfig& cfg, int threads = 1);

struct IdSummary {
  std::string id;
  std::size_t count = 0;
  double min_margin = 0.0;
  double median_margin = 0.0;
  double min_relative_margin = 0.0;
  std::size_t violations = 0;
  std::uint64_t sharpest_seed = 0;
  int sharpest_trial = 0;
};

/// Per id, in order of first appearance. Throws EmptyInput.
std::vector<IdSummary> summarize(const std::vector<TrialReport>& reports);

/// Equality witnesses (Gruss scalar step function and 1x1 operator case,
/// Landau correlation-one case, Cauchy-Schwarz F = G, zero-operator cases).
std::vector<TrialReport> sharpness_witnesses();

std::size_t count_violations(const std::vector<TrialReport>& reports);

// Canonical output: keys in fixed order, doubles with 17 significant digits.
std::string config_to_json(const SweepConfig& cfg);
std::string reports_to_json(const SweepConfig& cfg, const std::vector<TrialReport>& reports);

/// Column order: id,trial,seed,dim,norm,param,kind,lhs,rhs,margin,
/// relative_margin,violation,wall_time,hypothesis_report,extras.
std::string reports_to_csv(const std::vector<TrialReport>& reports);

std::string format_name(ReportFormat f);
ReportFormat parse_format(std::string_view text);

}  // namespace iptt
