#include "iptt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iptt/error.hpp"
#include "iptt/funcalc.hpp"
#include "iptt/random.hpp"
#include "iptt/transformer.hpp"

namespace iptt {

namespace {

constexpr double kRadius = 0.9;
constexpr double kScalarGruss = 1e-12;
constexpr int kScalarGridPerDim = 64;

const std::vector<std::string> kIds{
    "gruss_scalar",   "p1",           "c1",           "c2",         "c2_plus",        "c3",
    "hilb",           "cs_uinorm",    "cs_theta",     "landau_theta", "gruss_operator", "elementary_gruss",
    "schatten_landau", "hs_exact_norm", "minimizer",   "korkine",    "variance",       "covariance",
    "deviation_split"};

const std::vector<std::string> kNormFree{"gruss_scalar",  "hilb",     "schatten_landau", "hs_exact_norm",
                                         "korkine",       "variance", "covariance",      "deviation_split"};

[[noreturn]] void invalid(std::string_view field, const std::string& msg) {
  throw Error(ErrorKind::ConfigInvalid, fmt::format("{}: {}", field, msg));
}

std::string theta_label(double theta) { return fmt::format("theta={}", theta); }

std::string pqr_label(const LandauExponents& e) { return fmt::format("pqr={},{},{}", e.p, e.q, e.r); }

double tolerance_for(std::string_view id) {
  if (const char* env = std::getenv("IPTT_TOL_OVERRIDE"); env != nullptr && *env != '\0') {
    return violation_tolerance();
  }
  return id == "gruss_scalar" ? kScalarGruss : kTolIneqRel;
}

/// Collects the reports of one cell.
class Cell {
 public:
  Cell(const SweepConfig& cfg, std::string id, int trial, int dim)
      : cfg_(cfg), tol_(tolerance_for(id)) {
    proto_.id = std::move(id);
    proto_.trial = trial;
    proto_.dim = dim;
    proto_.seed = derive_seed(cfg.seed, proto_.id, static_cast<std::uint64_t>(trial),
                              static_cast<std::uint64_t>(dim));
  }

  std::uint64_t seed() const { return proto_.seed; }
  const SweepConfig& cfg() const { return cfg_; }

  void emit(std::string norm, std::string param, const std::function<MarginResult()>& eval) {
    const auto start = std::chrono::steady_clock::now();
    const MarginResult r = eval();
    const auto stop = std::chrono::steady_clock::now();
    TrialReport rep = proto_;
    rep.norm = std::move(norm);
    rep.param = std::move(param);
    rep.kind = r.kind == CheckKind::Identity ? "identity" : "inequality";
    rep.lhs = r.lhs;
    rep.rhs = r.rhs;
    rep.margin = r.margin;
    rep.relative_margin = r.relative_margin();
    rep.violation = !r.passed(tol_);
    rep.hypothesis_report = r.hypothesis_report;
    rep.extras = r.extras;
    if (cfg_.timing) rep.wall_time = std::chrono::duration<double>(stop - start).count();
    out_.push_back(std::move(rep));
  }

  /// One report per configured norm.
  void per_norm(std::string param, const std::function<MarginResult(const UINorm&)>& eval) {
    for (const UINorm& n : cfg_.norms) emit(n.name(), param, [&] { return eval(n); });
  }

  std::vector<TrialReport> take() { return std::move(out_); }

 private:
  const SweepConfig& cfg_;
  double tol_;
  TrialReport proto_;
  std::vector<TrialReport> out_;
};

int pick_atoms(Rng& rng, const SweepConfig& cfg) { return rng.pick(cfg.atoms); }

HerglotzFn pick_herglotz(Rng& rng, const SweepConfig& cfg) { return HerglotzFn::random(rng, pick_atoms(rng, cfg)); }

OperatorField matched(const OperatorField& weights_from, const OperatorField& ops_from) {
  return OperatorField(weights_from.weights(), ops_from.ops());
}

std::vector<double> scalar_sample(Rng& rng, int family, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  switch (family) {
    case 0:
      for (double& x : v) x = rng.uniform(lo, hi);
      break;
    case 1: {
      const auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
      for (std::size_t i = 0; i < n; ++i) v[i] = i < k ? lo : hi;
      break;
    }
    default: {
      const double power = rng.uniform(0.25, 4.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        v[i] = lo + (hi - lo) * std::pow(x, power);
      }
    }
  }
  for (double& x : v) x = std::clamp(x, lo, hi);
  return v;
}

void run_gruss_scalar(Cell& c, Rng& rng, int dim) {
  const auto n = static_cast<std::size_t>(kScalarGridPerDim * dim);
  const int family = rng.uniform_int(0, 2);
  ScalarBounds b{};
  b.f_lower = rng.uniform(-2.0, 0.0);
  b.f_upper = b.f_lower + rng.uniform(0.1, 3.0);
  b.g_lower = rng.uniform(-2.0, 0.0);
  b.g_upper = b.g_lower + rng.uniform(0.1, 3.0);
  const auto f = scalar_sample(rng, family, n, b.f_lower, b.f_upper);
  auto g = scalar_sample(rng, family, n, b.g_lower, b.g_upper);
  if (rng.uniform() < 0.5) std::reverse(g.begin(), g.end());
  c.emit("-", fmt::format("family={}", family), [&] { return eval_gruss_scalar(f, g, b); });
}

void run_p1(Cell& c, Rng& rng, int dim) {
  const HerglotzFn f = pick_herglotz(rng, c.cfg());
  const HerglotzFn g = pick_herglotz(rng, c.cfg());
  const CMatrix a = random_normal_in_disk(rng, dim, kRadius);
  const CMatrix b = random_normal_in_disk(rng, dim, kRadius);
  const CMatrix x = random_ginibre(rng, dim);
  c.per_norm("-", [&](const UINorm& n) { return eval_p1(f, g, a, b, x, n); });
}

void run_c1(Cell& c, Rng& rng, int dim) {
  const HerglotzFn f = pick_herglotz(rng, c.cfg());
  const HerglotzFn g = pick_herglotz(rng, c.cfg());
  const CMatrix u = random_unitary(rng, dim);
  std::vector<cplx> la(static_cast<std::size_t>(dim));
  std::vector<cplx> lx(static_cast<std::size_t>(dim));
  for (cplx& l : la) l = random_in_disk(rng, kRadius);
  for (cplx& l : lx) l = rng.complex_normal();
  const CMatrix a = u * diagonal(std::span<const cplx>(la)) * u.adjoint();
  const CMatrix x = u * diagonal(std::span<const cplx>(lx)) * u.adjoint();
  c.per_norm("-", [&](const UINorm& n) { return eval_c1(f, g, a, x, n); });
}

void run_c2(Cell& c, Rng& rng, int dim, bool plus) {
  const HerglotzFn f = pick_herglotz(rng, c.cfg());
  const HerglotzFn g = pick_herglotz(rng, c.cfg());
  const CMatrix a = random_normal_in_disk(rng, dim, kRadius);
  const CMatrix x = random_ginibre(rng, dim);
  c.per_norm(plus ? "sign=plus" : "sign=minus", [&](const UINorm& n) {
    return plus ? eval_c2_plus(f, g, a, x, n) : eval_c2(f, g, a, x, n);
  });
}

void run_c3(Cell& c, Rng& rng, int dim) {
  const HerglotzFn f = pick_herglotz(rng, c.cfg());
  const HerglotzFn g = pick_herglotz(rng, c.cfg());
  const CMatrix a = random_normal_in_disk(rng, dim, kRadius);
  const CMatrix b = random_normal_in_disk(rng, dim, kRadius);
  c.per_norm("-", [&](const UINorm& n) { return eval_c3(f, g, a, b, n); });
}

void run_hilb(Cell& c, Rng& rng, int dim) {
  const HerglotzFn f = pick_herglotz(rng, c.cfg());
  const HerglotzFn g = pick_herglotz(rng, c.cfg());
  const CMatrix a = random_hermitian_in_interval(rng, dim, kRadius);
  const CMatrix b = random_hermitian_in_interval(rng, dim, kRadius);
  const CMatrix x = random_ginibre(rng, dim);
  c.emit("s2", "-", [&] { return eval_hilb(f, g, a, b, x); });
}

void run_cs_uinorm(Cell& c, Rng& rng, int dim) {
  const auto na = static_cast<std::size_t>(pick_atoms(rng, c.cfg()));
  const OperatorField f = random_commuting_normal_field(rng, na, dim);
  const OperatorField g = matched(f, random_commuting_normal_field(rng, na, dim));
  const CMatrix x = random_ginibre(rng, dim);
  const IptiTransformer t(f, g);
  c.per_norm("-", [&](const UINorm& n) { return eval_cs_uinorm(t, x, n); });
}

void run_theta_pair(Cell& c, Rng& rng, int dim, bool landau) {
  const auto na = static_cast<std::size_t>(pick_atoms(rng, c.cfg()));
  const OperatorField f = random_general_field(rng, na, dim);
  const OperatorField g = matched(f, random_general_field(rng, na, dim));
  for (double theta : c.cfg().theta_grid) {
    c.per_norm(theta_label(theta), [&](const UINorm& n) {
      return landau ? eval_landau_theta(f, g, theta, n) : eval_cs_theta(f, g, theta, n);
    });
  }
}

HermitianBounds random_bounds(Rng& rng, int dim) {
  HermitianBounds b;
  b.lower = random_hermitian(rng, dim);
  b.upper = b.lower + random_psd(rng, dim);
  return b;
}

void run_gruss_operator(Cell& c, Rng& rng, int dim, bool elementary) {
  const auto na = static_cast<std::size_t>(pick_atoms(rng, c.cfg()));
  const HermitianBounds ab = random_bounds(rng, dim);
  const HermitianBounds bb = random_bounds(rng, dim);
  const OperatorField f = random_hermitian_bounded_field(rng, na, ab.lower, ab.upper);
  const OperatorField g = random_hermitian_bounded_field(rng, na, bb.lower, bb.upper);
  const CMatrix x = random_ginibre(rng, dim);
  if (elementary) {
    c.per_norm("-", [&](const UINorm& n) { return eval_elementary_gruss(f.ops(), g.ops(), ab, bb, x, n); });
  } else {
    const OperatorField gm = matched(f, g);
    c.per_norm("-", [&](const UINorm& n) { return eval_gruss_operator(f, gm, ab, bb, x, n); });
  }
}

void run_schatten_landau(Cell& c, Rng& rng, int dim) {
  const auto na = static_cast<std::size_t>(pick_atoms(rng, c.cfg()));
  const OperatorField f = random_general_field(rng, na, dim);
  const OperatorField g = matched(f, random_general_field(rng, na, dim));
  const CMatrix x = random_ginibre(rng, dim);
  for (const LandauExponents& e : c.cfg().pqr_grid) {
    c.emit(UINorm::schatten(e.p).name(), pqr_label(e), [&] { return eval_schatten_landau(f, g, e, x); });
  }
}

IptiTransformer random_transformer(Cell& c, Rng& rng, int dim) {
  const auto na = static_cast<std::size_t>(pick_atoms(rng, c.cfg()));
  const OperatorField f = random_general_field(rng, na, dim);
  return IptiTransformer(f, matched(f, random_general_field(rng, na, dim)));
}

void run_hs_exact_norm(Cell& c, Rng& rng, int dim) {
  const IptiTransformer t = random_transformer(c, rng, dim);
  c.emit("s2", "-", [&] { return eval_hs_exact_norm(t); });
}

void run_korkine(Cell& c, Rng& rng, int dim) {
  const IptiTransformer t = random_transformer(c, rng, dim);
  const CMatrix x = random_ginibre(rng, dim);
  c.emit("-", "-", [&] { return check_korkine(t, x); });
}

void run_variance(Cell& c, Rng& rng, int dim) {
  const OperatorField f = random_general_field(rng, static_cast<std::size_t>(pick_atoms(rng, c.cfg())), dim);
  c.emit("-", "-", [&] { return check_variance(f); });
}

void run_covariance(Cell& c, Rng& rng, int dim) {
  const HerglotzFn f = pick_herglotz(rng, c.cfg());
  const CMatrix a = random_normal_in_disk(rng, dim, kRadius);
  const CMatrix u = random_unitary(rng, dim);
  c.emit("-", "-", [&] { return check_covariance(f, a, u); });
}

CMatrix perturbed_mean(Rng& rng, const OperatorField& f) {
  const CMatrix delta = random_ginibre(rng, f.dim());
  return field_mean(f) + rng.uniform(0.0, 1.0) * delta;
}

void run_deviation_split(Cell& c, Rng& rng, int dim) {
  const OperatorField f = random_general_field(rng, static_cast<std::size_t>(pick_atoms(rng, c.cfg())), dim);
  const CMatrix b = perturbed_mean(rng, f);
  c.emit("-", "-", [&] { return check_deviation_split(f, b); });
}

void run_minimizer(Cell& c, Rng& rng, int dim) {
  const OperatorField f = random_general_field(rng, static_cast<std::size_t>(pick_atoms(rng, c.cfg())), dim);
  const CMatrix b = perturbed_mean(rng, f);
  for (double theta : c.cfg().theta_grid) {
    c.per_norm(theta_label(theta), [&](const UINorm& n) { return eval_minimizer(f, b, theta, n); });
  }
}

void dispatch(Cell& c, Rng& rng, std::string_view id, int dim) {
  if (id == "gruss_scalar") return run_gruss_scalar(c, rng, dim);
  if (id == "p1") return run_p1(c, rng, dim);
  if (id == "c1") return run_c1(c, rng, dim);
  if (id == "c2") return run_c2(c, rng, dim, false);
  if (id == "c2_plus") return run_c2(c, rng, dim, true);
  if (id == "c3") return run_c3(c, rng, dim);
  if (id == "hilb") return run_hilb(c, rng, dim);
  if (id == "cs_uinorm") return run_cs_uinorm(c, rng, dim);
  if (id == "cs_theta") return run_theta_pair(c, rng, dim, false);
  if (id == "landau_theta") return run_theta_pair(c, rng, dim, true);
  if (id == "gruss_operator") return run_gruss_operator(c, rng, dim, false);
  if (id == "elementary_gruss") return run_gruss_operator(c, rng, dim, true);
  if (id == "schatten_landau") return run_schatten_landau(c, rng, dim);
  if (id == "hs_exact_norm") return run_hs_exact_norm(c, rng, dim);
  if (id == "minimizer") return run_minimizer(c, rng, dim);
  if (id == "korkine") return run_korkine(c, rng, dim);
  if (id == "variance") return run_variance(c, rng, dim);
  if (id == "covariance") return run_covariance(c, rng, dim);
  if (id == "deviation_split") return run_deviation_split(c, rng, dim);
  throw Error(ErrorKind::ConfigInvalid, fmt::format("ids: unknown inequality id '{}'", id));
}

// ---- output helpers

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt::format("{:.17g}", x);
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<unsigned>(ch));
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

template <typename T, typename F>
std::string json_array(const std::vector<T>& items, F&& item) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += item(items[i]);
  }
  return out + "]";
}

std::string report_json(const TrialReport& r) {
  std::string extras = "{";
  for (std::size_t i = 0; i < r.extras.size(); ++i) {
    if (i > 0) extras += ", ";
    extras += json_string(r.extras[i].first) + ": " + json_number(r.extras[i].second);
  }
  extras += "}";
  return fmt::format(
      "{{\"id\": {}, \"trial\": {}, \"seed\": {}, \"dim\": {}, \"norm\": {}, \"param\": {}, \"kind\": {}, "
      "\"lhs\": {}, \"rhs\": {}, \"margin\": {}, \"relative_margin\": {}, \"violation\": {}, "
      "\"hypothesis_report\": {}, \"extras\": {}, \"wall_time\": {}}}",
      json_string(r.id), r.trial, r.seed, r.dim, json_string(r.norm), json_string(r.param), json_string(r.kind),
      json_number(r.lhs), json_number(r.rhs), json_number(r.margin), json_number(r.relative_margin),
      r.violation ? "true" : "false", json_array(r.hypothesis_report, json_string), extras,
      json_number(r.wall_time));
}

std::string summary_json(const IdSummary& s) {
  return fmt::format(
      "{{\"id\": {}, \"count\": {}, \"min_margin\": {}, \"median_margin\": {}, \"min_relative_margin\": {}, "
      "\"violations\": {}, \"sharpest_seed\": {}, \"sharpest_trial\": {}}}",
      json_string(s.id), s.count, json_number(s.min_margin), json_number(s.median_margin),
      json_number(s.min_relative_margin), s.violations, s.sharpest_seed, s.sharpest_trial);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

template <typename T>
T json_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    invalid(key, fmt::format("wrong type ({})", e.what()));
  }
}

}  // namespace

std::string format_name(ReportFormat f) { return f == ReportFormat::Json ? "json" : "csv"; }

ReportFormat parse_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  invalid("format", fmt::format("expected json or csv, got '{}'", text));
}

const std::vector<std::string>& known_ids() { return kIds; }

bool is_norm_independent(std::string_view id) {
  return std::find(kNormFree.begin(), kNormFree.end(), id) != kNormFree.end();
}

double violation_tolerance() {
  const char* env = std::getenv("IPTT_TOL_OVERRIDE");
  if (env == nullptr || *env == '\0') return kTolIneqRel;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(v) || v < 0.0) {
    invalid("IPTT_TOL_OVERRIDE", fmt::format("expected a nonnegative float, got '{}'", env));
  }
  return v;
}

void validate(const SweepConfig& cfg) {
  if (cfg.ids.empty()) invalid("ids", "must be nonempty");
  for (const auto& id : cfg.ids) {
    if (std::find(kIds.begin(), kIds.end(), id) == kIds.end()) invalid("ids", fmt::format("unknown id '{}'", id));
  }
  if (cfg.trials < 1) invalid("trials", fmt::format("must be >= 1, got {}", cfg.trials));
  if (cfg.dims.empty()) invalid("dims", "must be nonempty");
  for (int d : cfg.dims) {
    if (d < 1 || d > 16) invalid("dims", fmt::format("{} outside [1, 16]", d));
  }
  if (cfg.atoms.empty()) invalid("atoms", "must be nonempty");
  for (int a : cfg.atoms) {
    if (a < 1 || a > 8) invalid("atoms", fmt::format("{} outside [1, 8]", a));
  }
  if (cfg.norms.empty()) invalid("norms", "must be nonempty");
  if (cfg.theta_grid.empty()) invalid("theta_grid", "must be nonempty");
  for (double t : cfg.theta_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) invalid("theta_grid", fmt::format("{} is not a positive exponent", t));
  }
  if (cfg.pqr_grid.empty()) invalid("pqr_grid", "must be nonempty");
  for (const auto& e : cfg.pqr_grid) {
    if (!(e.p >= 1.0 && e.q >= 1.0 && e.r >= 1.0) || !std::isfinite(e.p) || !std::isfinite(e.q) ||
        !std::isfinite(e.r)) {
      invalid("pqr_grid", fmt::format("({}, {}, {}) needs finite exponents >= 1", e.p, e.q, e.r));
    }
    if (std::abs(1.0 / e.p - 1.0 / (2.0 * e.q) - 1.0 / (2.0 * e.r)) > 1e-12) {
      invalid("pqr_grid", fmt::format("({}, {}, {}) violates 1/p = 1/(2q) + 1/(2r)", e.p, e.q, e.r));
    }
  }
}

SweepConfig parse_config_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    invalid("config", fmt::format("malformed JSON ({})", e.what()));
  }
  if (!j.is_object()) invalid("config", "top level must be an object");
  SweepConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "ids") {
      cfg.ids = json_field<std::vector<std::string>>(j, "ids");
    } else if (key == "trials") {
      cfg.trials = json_field<int>(j, "trials");
    } else if (key == "dims") {
      cfg.dims = json_field<std::vector<int>>(j, "dims");
    } else if (key == "atoms") {
      cfg.atoms = json_field<std::vector<int>>(j, "atoms");
    } else if (key == "norms") {
      cfg.norms.clear();
      for (const auto& s : json_field<std::vector<std::string>>(j, "norms")) {
        try {
          cfg.norms.push_back(UINorm::parse(s));
        } catch (const Error& e) {
          invalid("norms", e.what());
        }
      }
    } else if (key == "seed") {
      if (!value.is_number_integer()) invalid("seed", "must be an integer");
      cfg.seed = value.is_number_unsigned() ? value.get<std::uint64_t>()
                                            : static_cast<std::uint64_t>(value.get<std::int64_t>());
    } else if (key == "theta_grid") {
      cfg.theta_grid = json_field<std::vector<double>>(j, "theta_grid");
    } else if (key == "pqr_grid") {
      cfg.pqr_grid.clear();
      for (const auto& t : json_field<std::vector<std::vector<double>>>(j, "pqr_grid")) {
        if (t.size() != 3) invalid("pqr_grid", "each entry must be [p, q, r]");
        cfg.pqr_grid.push_back({t[0], t[1], t[2]});
      }
    } else if (key == "out_path") {
      cfg.out_path = json_field<std::string>(j, "out_path");
    } else if (key == "format") {
      cfg.format = parse_format(json_field<std::string>(j, "format"));
    } else if (key == "timing") {
      cfg.timing = json_field<bool>(j, "timing");
    } else {
      invalid(key, "unknown field");
    }
  }
  validate(cfg);
  return cfg;
}

SweepConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("config", fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::vector<TrialReport> run_cell(const SweepConfig& cfg, const std::string& id, int trial, int dim) {
  Cell cell(cfg, id, trial, dim);
  Rng rng(cell.seed());
  try {
    dispatch(cell, rng, id, dim);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{} trial {} dim {}: {}", id, trial, dim, e.what()));
  }
  return cell.take();
}

std::vector<TrialReport> run_sweep(const SweepConfig& cfg, int threads) {
  validate(cfg);
  violation_tolerance();
  struct Task {
    const std::string* id;
    int trial;
    int dim;
  };
  std::vector<Task> tasks;
  for (const auto& id : cfg.ids)
    for (int t = 0; t < cfg.trials; ++t)
      for (int d : cfg.dims) tasks.push_back({&id, t, d});

  std::vector<std::vector<TrialReport>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = run_cell(cfg, *tasks[i].id, tasks[i].trial, tasks[i].dim);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<TrialReport> out;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  return out;
}

std::vector<IdSummary> summarize(const std::vector<TrialReport>& reports) {
  if (reports.empty()) throw Error(ErrorKind::EmptyInput, "no reports to summarize");
  std::vector<IdSummary> out;
  std::vector<std::vector<double>> margins;
  for (const TrialReport& r : reports) {
    auto it = std::find_if(out.begin(), out.end(), [&](const IdSummary& s) { return s.id == r.id; });
    std::size_t k = static_cast<std::size_t>(it - out.begin());
    if (it == out.end()) {
      IdSummary s;
      s.id = r.id;
      s.min_margin = r.margin;
      s.min_relative_margin = r.relative_margin;
      s.sharpest_seed = r.seed;
      s.sharpest_trial = r.trial;
      out.push_back(s);
      margins.emplace_back();
    }
    IdSummary& s = out[k];
    ++s.count;
    if (r.violation) ++s.violations;
    s.min_margin = std::min(s.min_margin, r.margin);
    if (r.relative_margin < s.min_relative_margin) {
      s.min_relative_margin = r.relative_margin;
      s.sharpest_seed = r.seed;
      s.sharpest_trial = r.trial;
    }
    margins[k].push_back(r.margin);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& m = margins[k];
    std::sort(m.begin(), m.end());
    const std::size_t n = m.size();
    out[k].median_margin = n % 2 == 1 ? m[n / 2] : 0.5 * (m[n / 2 - 1] + m[n / 2]);
  }
  return out;
}

std::size_t count_violations(const std::vector<TrialReport>& reports) {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const TrialReport& r) { return r.violation; }));
}

std::vector<TrialReport> sharpness_witnesses() {
  SweepConfig cfg;
  std::vector<TrialReport> out;
  int index = 0;
  auto add = [&](const std::string& id, int dim, const std::string& norm, const std::string& param,
                 const std::function<MarginResult()>& eval) {
    Cell cell(cfg, id, index++, dim);
    cell.emit(norm, param, eval);
    for (auto& r : cell.take()) {
      r.seed = 0;
      out.push_back(std::move(r));
    }
  };

  std::vector<double> step(128);
  for (std::size_t i = 0; i < step.size(); ++i) step[i] = i < step.size() / 2 ? -1.0 : 1.0;
  add("gruss_scalar", 1, "-", "witness=step", [&] { return eval_gruss_scalar(step, step, {-1, 1, -1, 1}); });

  const CMatrix one = identity(1);
  const OperatorField pm({0.5, 0.5}, {-one, one});
  const HermitianBounds unit{-one, one};
  add("gruss_operator", 1, "op", "witness=pm1", [&] {
    return eval_gruss_operator(pm, pm, unit, unit, one, UINorm::operator_norm());
  });
  add("elementary_gruss", 1, "op", "witness=pm1", [&] {
    return eval_elementary_gruss(pm.ops(), pm.ops(), unit, unit, one, UINorm::operator_norm());
  });
  add("landau_theta", 1, "op", "witness=correlation_one",
      [&] { return eval_landau_theta(pm, pm, 1.0, UINorm::operator_norm()); });

  const OperatorField general = gen_field(FieldKind::General, 3, 3, 11);
  for (double theta : cfg.theta_grid) {
    add("cs_theta", 3, "s1", "witness=F=G," + theta_label(theta),
        [&] { return eval_cs_theta(general, general, theta, UINorm::schatten(1)); });
  }

  Rng rng(5);
  const CMatrix ua = random_unitary(rng, 3);
  const CMatrix ub = random_unitary(rng, 3);
  const CMatrix x = random_ginibre(rng, 3);
  const IptiTransformer single(OperatorField({1.0}, {ua}), OperatorField({1.0}, {ub}));
  add("cs_uinorm", 3, "s2", "witness=unitary_atom",
      [&] { return eval_cs_uinorm(single, x, UINorm::schatten(2)); });

  const HerglotzFn f = HerglotzFn::random(rng, 3);
  const HerglotzFn g = HerglotzFn::random(rng, 2);
  const CMatrix zero = CMatrix::Zero(3, 3);
  const CMatrix xn = random_normal_in_disk(rng, 3, 1.0);
  add("c1", 3, "s1", "witness=A=0", [&] { return eval_c1(f, g, zero, xn, UINorm::schatten(1)); });
  add("c2", 3, "s1", "witness=A=0", [&] { return eval_c2(f, g, zero, x, UINorm::schatten(1)); });
  add("hilb", 3, "s2", "witness=A=B=0", [&] { return eval_hilb(f, g, zero, zero, x); });
  return out;
}

std::string config_to_json(const SweepConfig& cfg) {
  return fmt::format(
      "{{\"ids\": {}, \"trials\": {}, \"dims\": {}, \"atoms\": {}, \"norms\": {}, \"seed\": {}, "
      "\"theta_grid\": {}, \"pqr_grid\": {}, \"out_path\": {}, \"format\": {}, \"timing\": {}}}",
      json_array(cfg.ids, json_string), cfg.trials,
      json_array(cfg.dims, [](int d) { return std::to_string(d); }),
      json_array(cfg.atoms, [](int a) { return std::to_string(a); }),
      json_array(cfg.norms, [](const UINorm& n) { return json_string(n.name()); }), cfg.seed,
      json_array(cfg.theta_grid, json_number),
      json_array(cfg.pqr_grid,
                 [](const LandauExponents& e) {
                   return fmt::format("[{}, {}, {}]", json_number(e.p), json_number(e.q), json_number(e.r));
                 }),
      json_string(cfg.out_path), json_string(format_name(cfg.format)), cfg.timing ? "true" : "false");
}

std::string reports_to_json(const SweepConfig& cfg, const std::vector<TrialReport>& reports) {
  std::string out = "{\n  \"config\": " + config_to_json(cfg) + ",\n  \"reports\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    out += report_json(reports[i]);
  }
  out += reports.empty() ? "],\n  \"summary\": [" : "\n  ],\n  \"summary\": [";
  if (!reports.empty()) {
    const auto summary = summarize(reports);
    for (std::size_t i = 0; i < summary.size(); ++i) {
      out += i == 0 ? "\n    " : ",\n    ";
      out += summary_json(summary[i]);
    }
    out += "\n  ";
  }
  return out + "]\n}\n";
}

std::string reports_to_csv(const std::vector<TrialReport>& reports) {
  std::string out =
      "id,trial,seed,dim,norm,param,kind,lhs,rhs,margin,relative_margin,violation,wall_time,"
      "hypothesis_report,extras\n";
  for (const TrialReport& r : reports) {
    std::string hyps;
    for (std::size_t i = 0; i < r.hypothesis_report.size(); ++i) {
      if (i > 0) hyps += "; ";
      hyps += r.hypothesis_report[i];
    }
    std::string extras;
    for (std::size_t i = 0; i < r.extras.size(); ++i) {
      if (i > 0) extras += "; ";
      extras += fmt::format("{}={:.17g}", r.extras[i].first, r.extras[i].second);
    }
    out += fmt::format("{},{},{},{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{},{}\n", csv_field(r.id),
                       r.trial, r.seed, r.dim, csv_field(r.norm), csv_field(r.param), r.kind, r.lhs, r.rhs,
                       r.margin, r.relative_margin, r.violation ? 1 : 0, r.wall_time, csv_field(hyps),
                       csv_field(extras));
  }
  return out;
}

}  // namespace iptt
