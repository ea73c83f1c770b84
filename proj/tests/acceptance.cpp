#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/core.h>

#include "iptt/funcalc.hpp"
#include "iptt/harness.hpp"
#include "iptt/ineqsuite.hpp"
#include "iptt/matcore.hpp"
#include "iptt/random.hpp"
#include "iptt/transformer.hpp"
#include "iptt/uinorms.hpp"
#include "oracles.hpp"

using namespace iptt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<int> kDimsUpTo8{1, 2, 3, 4, 5, 6, 7, 8};

SweepConfig sweep_config(std::vector<std::string> ids, int trials, std::vector<int> dims, std::vector<int> atoms) {
  SweepConfig cfg;
  cfg.ids = std::move(ids);
  cfg.trials = trials;
  cfg.dims = std::move(dims);
  cfg.atoms = std::move(atoms);
  cfg.seed = 20240601;
  return cfg;
}

std::size_t cell_count(const std::vector<TrialReport>& reports, const std::string& id) {
  std::set<std::pair<int, int>> cells;
  for (const TrialReport& r : reports) {
    if (r.id == id) cells.emplace(r.trial, r.dim);
  }
  return cells.size();
}

std::size_t violations_of(const std::vector<TrialReport>& reports, const std::string& id) {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [&](const TrialReport& r) { return r.id == id && r.violation; }));
}

double max_extra(const std::vector<TrialReport>& reports, const std::string& id, const std::string& key) {
  double worst = 0.0;
  for (const TrialReport& r : reports) {
    if (r.id != id) continue;
    for (const auto& [name, value] : r.extras) {
      if (name == key) worst = std::max(worst, std::isfinite(value) ? value : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

double worst_relative_margin(const std::vector<TrialReport>& reports, const std::string& id) {
  double worst = std::numeric_limits<double>::infinity();
  for (const TrialReport& r : reports) {
    if (r.id == id) worst = std::min(worst, r.relative_margin);
  }
  return worst;
}

// 1
Outcome korkine() {
  const auto t0 = Clock::now();
  const auto reports = run_sweep(sweep_config({"korkine"}, 334, {2, 4, 8}, {1, 2, 3, 4, 5, 6}));
  const double elapsed = seconds_since(t0);
  const std::size_t cells = cell_count(reports, "korkine");
  const double worst = max_extra(reports, "korkine", "discrepancy");
  return {cells >= 1000 && worst <= 1e-10 && elapsed < 10.0,
          fmt::format("{} transformers, max relative discrepancy {:.3g}, {:.2f} s", cells, worst, elapsed)};
}

// 2
Outcome variance() {
  const auto reports = run_sweep(sweep_config({"variance"}, 250, {1, 2, 4, 8}, {1, 2, 3, 4, 5, 6}));
  const std::size_t cells = cell_count(reports, "variance");
  const double worst = max_extra(reports, "variance", "discrepancy");
  return {cells >= 1000 && worst <= 1e-10,
          fmt::format("{} fields, max relative disagreement of the three forms {:.3g}", cells, worst)};
}

// 3
Outcome gruss_scalar() {
  std::vector<double> step(1000);
  for (std::size_t i = 0; i < step.size(); ++i) step[i] = i < step.size() / 2 ? -1.0 : 1.0;
  const MarginResult sharp = eval_gruss_scalar(step, step, {-1.0, 1.0, -1.0, 1.0});

  const std::size_t n = 10000;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  const MarginResult uniform = eval_gruss_scalar(x, x, {0.0, 1.0, 0.0, 1.0});
  const double gap = std::abs(uniform.lhs - 1.0 / 12.0);

  const bool ok = std::abs(sharp.margin) <= 1e-12 && sharp.rhs == 1.0 && gap <= 1e-3;
  return {ok, fmt::format("step witness rhs {} margin {:.3g}; uniform grid lhs {:.12f} (|lhs - 1/12| = {:.3g})",
                          sharp.rhs, sharp.margin, uniform.lhs, gap)};
}

// 4
Outcome gruss_operator() {
  const auto reports = run_sweep(sweep_config({"gruss_operator"}, 1250, kDimsUpTo8, {1, 2, 3, 5}));
  const std::size_t cells = cell_count(reports, "gruss_operator");
  const std::size_t bad = violations_of(reports, "gruss_operator");
  double witness = std::numeric_limits<double>::infinity();
  for (const TrialReport& r : sharpness_witnesses()) {
    if (r.id == "gruss_operator") witness = std::min(witness, std::abs(r.margin));
  }
  return {cells >= 10000 && bad == 0 && witness <= 1e-12,
          fmt::format("{} instances x 4 norms, {} violations (worst relative margin {:.3g}); 1x1 witness margin {:.3g}",
                      cells, bad, worst_relative_margin(reports, "gruss_operator"), witness)};
}

// 5
Outcome cauchy_schwarz() {
  const auto reports = run_sweep(sweep_config({"cs_uinorm", "cs_theta"}, 1250, kDimsUpTo8, {1, 2, 3, 5}));
  const std::size_t cells_u = cell_count(reports, "cs_uinorm");
  const std::size_t cells_t = cell_count(reports, "cs_theta");
  const std::size_t bad = violations_of(reports, "cs_uinorm") + violations_of(reports, "cs_theta");

  double equality = 0.0;
  for (const TrialReport& r : sharpness_witnesses()) {
    if (r.id == "cs_uinorm" || r.id == "cs_theta") equality = std::max(equality, std::abs(r.margin));
  }
  Rng rng(515);
  const std::vector<UINorm> norms{UINorm::operator_norm(), UINorm::schatten(1), UINorm::schatten(2), UINorm::kyfan(2)};
  for (int trial = 0; trial < 200; ++trial) {
    const OperatorField f = random_general_field(rng, static_cast<std::size_t>(rng.uniform_int(1, 5)),
                                                 rng.uniform_int(1, 8));
    for (double theta : {0.5, 1.0, 2.0}) {
      for (const UINorm& n : norms) {
        const MarginResult r = eval_cs_theta(f, f, theta, n);
        equality = std::max(equality, std::abs(r.margin) / std::max(1.0, r.rhs));
      }
    }
  }
  return {cells_u >= 10000 && cells_t >= 10000 && bad == 0 && equality <= 1e-9,
          fmt::format("{} + {} instances, {} violations; max |margin| at F = G {:.3g}", cells_u, cells_t, bad,
                      equality)};
}

// 6
Outcome landau() {
  const auto reports = run_sweep(sweep_config({"landau_theta", "schatten_landau"}, 625, kDimsUpTo8, {1, 2, 3, 5}));
  const std::size_t cells_l = cell_count(reports, "landau_theta");
  const std::size_t cells_s = cell_count(reports, "schatten_landau");
  const std::size_t bad_l = violations_of(reports, "landau_theta");
  const std::size_t bad_s = violations_of(reports, "schatten_landau");
  return {cells_l >= 5000 && cells_s >= 5000 && bad_l + bad_s == 0,
          fmt::format("landau_theta {} instances / {} violations; schatten_landau {} instances x 3 exponent triples / "
                      "{} violations",
                      cells_l, bad_l, cells_s, bad_s)};
}

// 7
bool near(double a, double b) { return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)); }

Outcome herglotz_inequalities() {
  const std::vector<std::string> ids{"p1", "c1", "c3", "hilb", "c2", "c2_plus"};
  const auto reports = run_sweep(sweep_config(ids, 1250, {1, 2, 4, 8}, {1, 2, 3, 4, 5}));
  bool ok = true;
  std::string detail;
  for (const std::string& id : ids) {
    const std::size_t cells = cell_count(reports, id);
    const std::size_t bad = violations_of(reports, id);
    if (cells < 5000) ok = false;
    if (bad != 0 && id != "c2" && id != "c2_plus") ok = false;
    detail += fmt::format("{} {}/{} ", id, bad, cells);
  }
  const std::size_t minus = violations_of(reports, "c2");
  const std::size_t plus = violations_of(reports, "c2_plus");
  if (minus != 0 && plus != 0) ok = false;

  Rng rng(77);
  int zero_mismatch = 0;
  const double r2 = std::sqrt(2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.uniform_int(1, 6);
    const HerglotzFn f = HerglotzFn::random(rng, rng.uniform_int(1, 5));
    const HerglotzFn g = HerglotzFn::random(rng, rng.uniform_int(1, 5));
    const CMatrix zero = CMatrix::Zero(d, d);
    const CMatrix x = random_ginibre(rng, d);
    const CMatrix xn = random_normal_in_disk(rng, d, 2.0);
    for (const UINorm& n : {UINorm::operator_norm(), UINorm::schatten(1), UINorm::schatten(2), UINorm::kyfan(2)}) {
      const double nx = norm(n, x);
      const double ni = norm(n, identity(d));
      const MarginResult p1 = eval_p1(f, g, zero, zero, x, n);
      const double nxn = norm(n, xn);
      const MarginResult c1 = eval_c1(f, g, zero, xn, n);
      const MarginResult c2 = eval_c2(f, g, zero, x, n);
      const MarginResult c3 = eval_c3(f, g, zero, zero, n);
      if (!near(p1.lhs, 2 * nx) || !near(p1.rhs, 2 * r2 * nx)) ++zero_mismatch;
      if (!near(c1.lhs, 2 * nxn) || !near(c1.rhs, 2 * nxn) || std::abs(c1.margin) > 1e-10 * nxn) ++zero_mismatch;
      if (!near(c2.lhs, 0.0) || !near(c2.rhs, 0.0)) ++zero_mismatch;
      if (!near(c3.lhs, 2 * ni) || !near(c3.rhs, 2 * r2 * ni)) ++zero_mismatch;
    }
    const MarginResult h = eval_hilb(f, g, zero, zero, x);
    const double minus_margin = h.rhs - *h.extra("lhs_minus");
    if (!near(*h.extra("lhs_minus"), 0.0) || !near(*h.extra("lhs_plus"), 2 * x.norm()) || !near(h.rhs, 2 * x.norm()) ||
        !near(minus_margin, 2 * x.norm())) {
      ++zero_mismatch;
    }
  }
  if (zero_mismatch != 0) ok = false;
  detail += fmt::format("(violations/instances); c2 sign=minus {} violations, sign=plus {} violations; "
                        "zero-operator mismatches {}",
                        minus, plus, zero_mismatch);
  return {ok, detail};
}

// 8
Outcome functional_calculus() {
  Rng rng(88);
  double cov = 0.0, spec = 0.0, resolvent = 0.0, contour = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = rng.uniform_int(1, 8);
    const HerglotzFn f = HerglotzFn::random(rng, rng.uniform_int(1, 5));
    std::vector<cplx> lambda(static_cast<std::size_t>(d));
    for (cplx& l : lambda) l = random_in_disk(rng, 0.9);
    const CMatrix u0 = random_unitary(rng, d);
    const CMatrix a = u0 * diagonal(std::span<const cplx>(lambda)) * u0.adjoint();
    const CMatrix fa = herglotz_apply(f, a);
    const double scale = std::max(1.0, op_norm(fa));
    const CMatrix u = random_unitary(rng, d);
    cov = std::max(cov, op_norm(herglotz_apply(f, u * a * u.adjoint()) - u * fa * u.adjoint()) / scale);
    std::vector<cplx> mapped;
    for (const cplx& l : lambda) mapped.push_back(herglotz_eval(f, l));
    spec = std::max(spec, testing_util::multiset_distance(eigenvalues(fa), mapped) / scale);
    resolvent = std::max(resolvent, op_norm(herglotz_apply_resolvent(f, a) - fa) / scale);
    if (trial < 100) contour = std::max(contour, op_norm(testing_util::contour_apply(f, a) - fa) / scale);
  }
  return {cov <= 1e-9 && spec <= 1e-9 && resolvent <= 1e-9 && contour <= 1e-6,
          fmt::format("covariance {:.3g}, spectral mapping {:.3g}, resolvent form {:.3g} (1000 trials); contour "
                      "oracle {:.3g} (100 instances)",
                      cov, spec, resolvent, contour)};
}

// 9
Outcome norm_machinery() {
  const std::vector<UINorm> zoo{UINorm::operator_norm(),
                                UINorm::schatten(1),
                                UINorm::schatten(1.5),
                                UINorm::schatten(2),
                                UINorm::schatten(3),
                                UINorm::kyfan(1),
                                UINorm::kyfan(2),
                                UINorm::kyfan(3),
                                UINorm::reconvex(UINorm::schatten(1), 2),
                                UINorm::reconvex(UINorm::kyfan(2), 3)};
  Rng rng(99);
  int invariance = 0, ordering = 0, ideal = 0, rank_one = 0, duality = 0, dominance = 0;
  int dominated = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = rng.uniform_int(1, 8);
    const CMatrix a = random_ginibre(rng, d);
    const CMatrix b = random_ginibre(rng, d);
    const CMatrix x = random_ginibre(rng, d);
    const CMatrix u = random_unitary(rng, d);
    const CMatrix v = random_unitary(rng, d);
    const CVector p = random_unit_vector(rng, d) * rng.uniform(0.1, 3.0);
    const CVector q = random_unit_vector(rng, d) * rng.uniform(0.1, 3.0);
    const CMatrix rank1 = p * q.adjoint();
    const double op = norm(UINorm::operator_norm(), a);
    const double tr = norm(UINorm::schatten(1), a);
    const double opb = norm(UINorm::operator_norm(), b);
    for (const UINorm& n : zoo) {
      const double na = norm(n, a);
      if (std::abs(norm(n, u * a * v) - na) > 1e-9 * na) ++invariance;
      if (op > na * (1 + 1e-9) || na > tr * (1 + 1e-9)) ++ordering;
      const double bound = op * norm(n, x) * opb;
      if (norm(n, a * x * b) > bound * (1 + 1e-9)) ++ideal;
      const double pq = p.norm() * q.norm();
      if (std::abs(norm(n, rank1) - pq) > 1e-10 * std::max(1.0, pq)) ++rank_one;
    }

    const auto seed = static_cast<std::uint64_t>(trial);
    const double lo_op = dual_norm_operator_trace(a, DualPairing::OpFromTrace, 20, seed, false);
    const double lo_tr = dual_norm_operator_trace(a, DualPairing::TraceFromOp, 20, seed, false);
    const double cert_op = dual_norm_operator_trace(a, DualPairing::OpFromTrace, 5, seed);
    const double cert_tr = dual_norm_operator_trace(a, DualPairing::TraceFromOp, 5, seed);
    if (lo_op > op * (1 + 1e-12) || lo_tr > tr * (1 + 1e-12) || std::abs(cert_op - op) > 1e-8 * op ||
        std::abs(cert_tr - tr) > 1e-8 * tr) {
      ++duality;
    }

    const CMatrix c = trial % 2 == 0 ? CMatrix(random_unitary(rng, d) * b * (0.9 * random_unitary(rng, d)))
                                     : CMatrix(random_ginibre(rng, d));
    if (kyfan_dominates(c, b)) {
      ++dominated;
      for (double s : {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
        if (norm(UINorm::schatten(s), c) > norm(UINorm::schatten(s), b) * (1 + 1e-9)) ++dominance;
      }
    }
  }
  const int failures = invariance + ordering + ideal + rank_one + duality + dominance;
  return {failures == 0 && dominated >= 500,
          fmt::format("failures: invariance {} ordering {} ideal {} rank-one {} duality {} dominance {} "
                      "({} dominated pairs) over 1000 trials x {} norms",
                      invariance, ordering, ideal, rank_one, duality, dominance, dominated, zoo.size())};
}

// 10
Outcome minimizer() {
  Rng rng(1010);
  const std::vector<UINorm> norms{UINorm::operator_norm(), UINorm::schatten(1), UINorm::schatten(2)};
  const double tol = violation_tolerance();
  double split = 0.0;
  int failures = 0;
  long checks = 0;
  for (int field = 0; field < 500; ++field) {
    const int d = rng.uniform_int(1, 8);
    const OperatorField f = random_general_field(rng, static_cast<std::size_t>(rng.uniform_int(1, 6)), d);
    const CMatrix mean = field_mean(f);
    std::vector<CMatrix> perturbed;
    for (int k = 0; k < 50; ++k) {
      const double eps = std::pow(10.0, rng.uniform(-4.0, 0.5));
      const CMatrix delta = random_ginibre(rng, d);
      perturbed.push_back(mean + eps * delta / delta.norm());
    }
    for (const CMatrix& b : perturbed) split = std::max(split, *check_deviation_split(f, b).extra("discrepancy"));
    for (double theta : {0.5, 1.0, 2.0}) {
      for (const UINorm& n : norms) {
        for (const CMatrix& b : perturbed) {
          const MarginResult r = eval_minimizer(f, b, theta, n);
          ++checks;
          if (!r.passed(tol)) ++failures;
        }
      }
    }
  }
  return {split <= 1e-10 && failures == 0,
          fmt::format("decomposition discrepancy {:.3g}; {} minimality checks (500 fields x 3 theta x 3 norms x 50 "
                      "perturbations), {} failures",
                      split, checks, failures)};
}

// 11
Outcome determinism() {
  SweepConfig cfg = sweep_config(known_ids(), 8, {1, 2, 4}, {1, 2, 3, 5});
  const std::string first = reports_to_json(cfg, run_sweep(cfg, 1));
  const std::string second = reports_to_json(cfg, run_sweep(cfg, 1));
  const std::string parallel = reports_to_json(cfg, run_sweep(cfg, 4));
  const std::string csv_serial = reports_to_csv(run_sweep(cfg, 1));
  const std::string csv_parallel = reports_to_csv(run_sweep(cfg, 3));
  return {first == second && first == parallel && csv_serial == csv_parallel,
          fmt::format("{} ids, {} JSON bytes; serial runs equal: {}, serial vs 4 threads equal: {}, csv equal: {}",
                      cfg.ids.size(), first.size(), first == second, first == parallel, csv_serial == csv_parallel)};
}

}  // namespace

int main() {
  const std::vector<std::tuple<int, std::string, std::function<Outcome()>>> criteria{
      {1, "korkine identity", korkine},
      {2, "variance identity", variance},
      {3, "scalar gruss sharpness", gruss_scalar},
      {4, "operator gruss", gruss_operator},
      {5, "cauchy-schwarz", cauchy_schwarz},
      {6, "landau and schatten landau", landau},
      {7, "herglotz sweeps", herglotz_inequalities},
      {8, "functional calculus", functional_calculus},
      {9, "norm machinery", norm_machinery},
      {10, "minimizer", minimizer},
      {11, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& [index, name, run] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failed;
    fmt::print("{} [{}] {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail, seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
