#include "iptt/ineqsuite.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "iptt/error.hpp"
#include "iptt/random.hpp"

namespace iptt {

namespace {

constexpr double kHypTol = 1e-10;
constexpr double kExponentTol = 1e-12;

MarginResult inequality(double lhs, double rhs, std::vector<std::string> hyps) {
  MarginResult r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.hypothesis_report = std::move(hyps);
  return r;
}

/// Relative distance between the two sides of an identity; `scale` is the size
/// of the largest intermediate term, so cancellation is measured against it.
MarginResult identity_result(const CMatrix& lhs, const CMatrix& rhs, double scale, double tol,
                             std::vector<std::string> hyps) {
  MarginResult r;
  r.kind = CheckKind::Identity;
  r.identity_tol = tol;
  r.lhs = lhs.norm();
  r.rhs = rhs.norm();
  r.margin = r.rhs - r.lhs;
  const double denom = std::max({r.lhs, r.rhs, scale, tol::floor});
  r.extras.emplace_back("discrepancy", (lhs - rhs).norm() / denom);
  r.hypothesis_report = std::move(hyps);
  return r;
}

double scale_of(const CMatrix& a) { return std::max(1.0, op_norm(a)); }

std::string require_normal(const CMatrix& a, std::string_view name) {
  if (!is_normal(a, kHypTol)) throw Error(ErrorKind::NotNormal, fmt::format("{} is not normal", name));
  return fmt::format("{} normal", name);
}

std::string require_hermitian(const CMatrix& a, std::string_view name) {
  if (op_norm(a - a.adjoint()) > kHypTol * scale_of(a)) {
    throw Error(ErrorKind::HypothesisViolated, fmt::format("{} is not Hermitian", name));
  }
  return fmt::format("{} Hermitian", name);
}

double require_disk(const CMatrix& a, std::string_view name, std::vector<std::string>& hyps) {
  const double d = dist_boundary_disk(a);
  hyps.push_back(fmt::format("sigma({}) in open disk, d={:.6g}", name, d));
  return d;
}

void require_probability_field(const OperatorField& f, std::string_view name, std::vector<std::string>& hyps) {
  if (!f.flags().is_probability) throw Error(ErrorKind::NotProbability, fmt::format("{} weights do not sum to 1", name));
  hyps.push_back(fmt::format("{} probability", name));
}

void require_matched(const OperatorField& f, const OperatorField& g) {
  if (f.size() != g.size() || f.dim() != g.dim() || f.weights() != g.weights()) {
    throw Error(ErrorKind::DimensionMismatch, "fields must share length, dimension and weights");
  }
}

/// Lowner-order check lower <= a within tolerance.
void require_below(const CMatrix& lower, const CMatrix& a, std::string_view what) {
  const double scale = std::max(scale_of(lower), scale_of(a));
  if (min_hermitian_eigenvalue(a - lower) < -kHypTol * scale) {
    throw Error(ErrorKind::HypothesisViolated, fmt::format("sandwich violated: {}", what));
  }
}

CMatrix gram(const OperatorField& f) { return deviation_gram(f, CMatrix::Zero(f.dim(), f.dim())); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

std::optional<double> MarginResult::extra(std::string_view name) const {
  for (const auto& [k, v] : extras)
    if (k == name) return v;
  return std::nullopt;
}

bool MarginResult::passed(double rel_tol) const {
  if (kind == CheckKind::Identity) return extra("discrepancy").value_or(0.0) <= identity_tol;
  return margin >= -tol_ineq(rhs, rel_tol);
}

MarginResult eval_gruss_scalar(std::span<const double> f, std::span<const double> g, const ScalarBounds& b) {
  if (f.empty() || f.size() != g.size()) {
    throw Error(ErrorKind::DimensionMismatch, "f and g must be nonempty samples on the same grid");
  }
  if (!(b.f_lower <= b.f_upper) || !(b.g_lower <= b.g_upper)) {
    throw Error(ErrorKind::HypothesisViolated, "bounds must satisfy C <= D and E <= F");
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < b.f_lower || f[i] > b.f_upper || g[i] < b.g_lower || g[i] > b.g_upper) {
      throw Error(ErrorKind::HypothesisViolated, fmt::format("bounds violated at grid point {}", i));
    }
  }
  const double n = static_cast<double>(f.size());
  double sf = 0.0, sg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sf += f[i];
    sg += g[i];
  }
  const double mf = sf / n;
  const double mg = sg / n;
  double cov = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) cov += (f[i] - mf) * (g[i] - mg);
  const double lhs = std::abs(cov / n);
  const double rhs = 0.25 * (b.f_upper - b.f_lower) * (b.g_upper - b.g_lower);
  return inequality(lhs, rhs, {"C <= f <= D", "E <= g <= F"});
}

MarginResult eval_p1(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& b,
                     const CMatrix& x, const UINorm& n) {
  require_same_dim(a, b);
  require_same_dim(a, x);
  std::vector<std::string> hyps{require_normal(a, "A"), require_normal(b, "B")};
  const double da = require_disk(a, "A", hyps);
  const double db = require_disk(b, "B", hyps);
  const double lhs = norm(n, herglotz_apply(f, a) * x * herglotz_apply(g, b) + x);
  const double rhs = 2.0 * std::numbers::sqrt2 / (da * db) * norm(n, abs_op(a * x * b) + abs_op(x));
  return inequality(lhs, rhs, std::move(hyps));
}

MarginResult eval_c1(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& x,
                     const UINorm& n) {
  require_same_dim(a, x);
  std::vector<std::string> hyps;
  if (!is_normal(a, kHypTol)) throw Error(ErrorKind::HypothesisViolated, "A is not normal");
  if (!is_normal(x, kHypTol)) throw Error(ErrorKind::HypothesisViolated, "X is not normal");
  hyps.emplace_back("A normal");
  hyps.emplace_back("X normal");
  if (op_norm(a * x - x * a) > kHypTol * scale_of(a) * scale_of(x)) {
    throw Error(ErrorKind::HypothesisViolated, "X does not commute with A");
  }
  hyps.emplace_back("AX = XA");
  double da = 0.0;
  try {
    da = require_disk(a, "A", hyps);
  } catch (const Error& e) {
    throw Error(ErrorKind::HypothesisViolated, e.what());
  }
  const CMatrix ax = abs_op(x);
  const double lhs = norm(n, herglotz_apply(f, a) * x * herglotz_apply(g, a.adjoint()) + x);
  const double rhs = 2.0 / (da * da) * norm(n, a * ax * a.adjoint() + ax);
  return inequality(lhs, rhs, std::move(hyps));
}

MarginResult eval_c2(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& x,
                     const UINorm& n) {
  require_same_dim(a, x);
  std::vector<std::string> hyps{require_normal(a, "A")};
  const double da = require_disk(a, "A", hyps);
  const double lhs = norm(n, herglotz_apply(f, a) * x * herglotz_apply(g, a) - x);
  const double rhs = 2.0 * std::numbers::sqrt2 / (da * da) * norm(n, abs_op(a * x) + abs_op(x * a));
  hyps.emplace_back("sign variant: minus");
  return inequality(lhs, rhs, std::move(hyps));
}

MarginResult eval_c2_plus(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& x,
                          const UINorm& n) {
  MarginResult r = eval_p1(f, g, a, a, x, n);
  r.hypothesis_report.emplace_back("sign variant: plus (B = A)");
  return r;
}

MarginResult eval_c3(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& b,
                     const UINorm& n) {
  require_square(a);
  return eval_p1(f, g, a, b, identity(a.rows()), n);
}

MarginResult eval_hilb(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& b,
                       const CMatrix& x) {
  require_same_dim(a, b);
  require_same_dim(a, x);
  std::vector<std::string> hyps{require_hermitian(a, "A"), require_hermitian(b, "B")};
  double da = 0.0, db = 0.0;
  try {
    da = require_disk(a, "A", hyps);
    db = require_disk(b, "B", hyps);
  } catch (const Error& e) {
    throw Error(ErrorKind::HypothesisViolated, e.what());
  }
  const CMatrix fa_x = herglotz_apply(f, a) * x;
  const CMatrix x_gb = x * herglotz_apply(g, b);
  const double plus = (fa_x + x_gb).norm();
  const double minus = (fa_x - x_gb).norm();
  const CMatrix bound = (x + abs_op(a) * x) / da + (x + x * abs_op(b)) / db;
  MarginResult r = inequality(std::max(plus, minus), bound.norm(), std::move(hyps));
  r.extras = {{"lhs_plus", plus}, {"lhs_minus", minus}};
  return r;
}

MarginResult eval_cs_uinorm(const IptiTransformer& t, const CMatrix& x, const UINorm& n) {
  if (!t.left().flags().is_commuting_normal || !t.right().flags().is_commuting_normal) {
    throw Error(ErrorKind::HypothesisViolated, "both fields must consist of commuting normal operators");
  }
  const double lhs = norm(n, apply(t, x));
  const double rhs = norm(n, psd_power(gram(t.left()), 0.5) * x * psd_power(gram(t.right()), 0.5));
  return inequality(lhs, rhs, {"left field commuting normal", "right field commuting normal"});
}

MarginResult eval_cs_theta(const OperatorField& f, const OperatorField& g, double theta, const UINorm& n) {
  require_matched(f, g);
  if (!(theta > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  CMatrix cross = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) cross += f.weights()[i] * (f.ops()[i].adjoint() * g.ops()[i]);
  const double lhs = norm(n, psd_power(abs_op(cross), theta));
  const double rhs = std::sqrt(norm(n, psd_power(gram(f), theta))) * std::sqrt(norm(n, psd_power(gram(g), theta)));
  return inequality(lhs, rhs, {"matched weights"});
}

MarginResult eval_landau_theta(const OperatorField& f, const OperatorField& g, double theta, const UINorm& n) {
  require_matched(f, g);
  if (!(theta > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  std::vector<std::string> hyps;
  require_probability_field(f, "A", hyps);
  require_probability_field(g, "B", hyps);
  CMatrix cross = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) cross += f.weights()[i] * (f.ops()[i].adjoint() * g.ops()[i]);
  const CMatrix cov = cross - field_mean(f).adjoint() * field_mean(g);
  const double root = norm(n, psd_power(abs_op(cov), theta));
  const double rhs = norm(n, psd_power(field_variance(f), theta)) * norm(n, psd_power(field_variance(g), theta));
  return inequality(root * root, rhs, std::move(hyps));
}

MarginResult eval_gruss_operator(const OperatorField& f, const OperatorField& g, const HermitianBounds& a_bounds,
                                 const HermitianBounds& b_bounds, const CMatrix& x, const UINorm& n) {
  std::vector<std::string> hyps;
  if (!f.flags().is_probability || !g.flags().is_probability) {
    throw Error(ErrorKind::HypothesisViolated, "fields must carry probability weights");
  }
  hyps.emplace_back("probability weights");
  if (!f.flags().is_self_adjoint || !g.flags().is_self_adjoint) {
    throw Error(ErrorKind::HypothesisViolated, "fields must be self-adjoint");
  }
  hyps.emplace_back("self-adjoint fields");
  for (const CMatrix* m : {&a_bounds.lower, &a_bounds.upper, &b_bounds.lower, &b_bounds.upper}) {
    require_same_dim(*m, x);
    require_hermitian(*m, "bound");
  }
  for (const CMatrix& a : f.ops()) {
    require_below(a_bounds.lower, a, "C <= A_t");
    require_below(a, a_bounds.upper, "A_t <= D");
  }
  for (const CMatrix& b : g.ops()) {
    require_below(b_bounds.lower, b, "E <= B_t");
    require_below(b, b_bounds.upper, "B_t <= F");
  }
  hyps.emplace_back("C <= A_t <= D");
  hyps.emplace_back("E <= B_t <= F");
  const IptiTransformer t(f, g);
  const double lhs = norm(n, korkine_lhs(t, x));
  const double rhs = op_norm(a_bounds.upper - a_bounds.lower) * op_norm(b_bounds.upper - b_bounds.lower) / 4.0 * norm(n, x);
  return inequality(lhs, rhs, std::move(hyps));
}

MarginResult eval_elementary_gruss(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                                   const HermitianBounds& a_bounds, const HermitianBounds& b_bounds,
                                   const CMatrix& x, const UINorm& n) {
  if (a.empty() || a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "need n >= 1 matched A_i, B_i");
  const std::vector<double> w(a.size(), 1.0 / static_cast<double>(a.size()));
  return eval_gruss_operator(OperatorField(w, a), OperatorField(w, b), a_bounds, b_bounds, x, n);
}

MarginResult eval_schatten_landau(const OperatorField& f, const OperatorField& g, const LandauExponents& e,
                                  const CMatrix& x) {
  require_matched(f, g);
  if (!(e.p >= 1.0 && e.q >= 1.0 && e.r >= 1.0) ||
      std::abs(1.0 / e.p - 1.0 / (2.0 * e.q) - 1.0 / (2.0 * e.r)) > kExponentTol) {
    throw Error(ErrorKind::BadExponents, fmt::format("need p,q,r >= 1 with 1/p = 1/(2q) + 1/(2r), got ({}, {}, {})", e.p, e.q, e.r));
  }
  std::vector<std::string> hyps;
  require_probability_field(f, "A", hyps);
  require_probability_field(g, "B", hyps);
  hyps.push_back(fmt::format("1/p = 1/(2q) + 1/(2r) with p={}, q={}, r={}", e.p, e.q, e.r));

  const OperatorField ac = f.shifted(field_mean(f));
  const OperatorField bc = g.shifted(field_mean(g));
  const Eigen::Index dim = f.dim();
  const CMatrix id = identity(dim);

  // Y = (sum mu (A_t - mean)(A_t - mean)*)^{(q-1)/2}
  const CMatrix y = psd_power(gram(ac.adjoint()), (e.q - 1.0) / 2.0);
  const CMatrix left = psd_power(gram(ac.sandwiched(y, id)), 1.0 / (2.0 * e.q));
  // Z = (sum mu (B_t - mean)*(B_t - mean))^{(r-1)/2}
  const CMatrix z = psd_power(gram(bc), (e.r - 1.0) / 2.0);
  const CMatrix right = psd_power(gram(bc.adjoint().sandwiched(z, id)), 1.0 / (2.0 * e.r));

  const UINorm sp = UINorm::schatten(e.p);
  const double lhs = norm(sp, korkine_lhs(IptiTransformer(f, g), x));
  const double rhs = op_norm(left) * norm(sp, x * right);
  MarginResult r = inequality(lhs, rhs, std::move(hyps));
  r.extras.emplace_back("rhs_joint", norm(sp, left * x * right));
  return r;
}

double hs_norm_kronecker(const IptiTransformer& t) {
  const Eigen::Index d = t.dim();
  CMatrix k = CMatrix::Zero(d * d, d * d);
  const auto& w = t.left().weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    // vec(A X B) = (B^T kron A) vec(X), column-major vec
    k += w[i] * kron(t.right().ops()[i].transpose(), t.left().ops()[i]);
  }
  Eigen::JacobiSVD<CMatrix> svd(k);
  if (!svd.singularValues().allFinite()) throw Error(ErrorKind::DecompositionFailure, "Kronecker SVD failed");
  return svd.singularValues()(0);
}

double hs_norm_power_iteration(const IptiTransformer& t, std::uint64_t seed) {
  const Eigen::Index d = t.dim();
  const Eigen::Index n = d * d;
  const Eigen::Index block = std::min<Eigen::Index>(6, n);
  Rng rng(seed);

  auto gram_map = [&](const CMatrix& x) { return apply_adjoint(t, apply(t, x)); };
  auto to_vec = [&](const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), n); };
  auto to_mat = [&](const CVector& v) { return Eigen::Map<const CMatrix>(v.data(), d, d); };

  CMatrix basis(n, block);
  for (Eigen::Index j = 0; j < block; ++j) basis.col(j) = to_vec(random_ginibre(rng, d));

  double estimate = 0.0;
  int stable = 0;
  for (int iter = 0; iter < 20000; ++iter) {
    Eigen::HouseholderQR<CMatrix> qr(basis);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(n, block);
    CMatrix image(n, block);
    for (Eigen::Index j = 0; j < block; ++j) image.col(j) = to_vec(gram_map(to_mat(q.col(j))));
    // Rayleigh-Ritz on span(q)
    const CMatrix h = q.adjoint() * image;
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues()(block - 1);
    if (std::abs(top - estimate) <= 1e-15 * std::max(top, tol::floor)) {
      if (++stable >= 5) {
        estimate = top;
        break;
      }
    } else {
      stable = 0;
    }
    estimate = top;
    const double scale = image.norm();
    if (scale == 0.0) return 0.0;
    basis = image / scale;
  }
  return std::sqrt(std::max(estimate, 0.0));
}

MarginResult eval_hs_exact_norm(const IptiTransformer& t) {
  MarginResult r;
  r.kind = CheckKind::Identity;
  r.identity_tol = 1e-8;
  r.lhs = hs_norm_kronecker(t);
  r.rhs = hs_norm_power_iteration(t);
  r.margin = r.rhs - r.lhs;
  r.extras.emplace_back("discrepancy", std::abs(r.margin) / std::max(1.0, r.lhs));
  r.hypothesis_report.emplace_back("finite weighted transformer on Hilbert-Schmidt class");
  return r;
}

MarginResult check_korkine(const IptiTransformer& t, const CMatrix& x) {
  const CMatrix direct = apply(t, x);
  const CMatrix means = field_mean(t.left()) * x * field_mean(t.right());
  const CMatrix lhs = direct - means;
  const CMatrix rhs = korkine_rhs(t, x);
  return identity_result(lhs, rhs, std::max(direct.norm(), means.norm()), 1e-10, {"probability weights"});
}

MarginResult check_variance(const OperatorField& f) {
  const CMatrix moment = field_variance(f);
  const CMatrix pairwise = field_variance_pairwise(f);
  const CMatrix centered = field_variance_centered(f);
  const double scale = gram(f).norm();
  MarginResult r = identity_result(moment, pairwise, scale, 1e-10, {"probability weights"});
  const double denom = std::max({moment.norm(), centered.norm(), scale, tol::floor});
  const double d2 = (moment - centered).norm() / denom;
  const double d3 = (pairwise - centered).norm() / denom;
  const double d1 = r.extras.front().second;
  r.extras.front().second = std::max({d1, d2, d3});
  r.extras.emplace_back("moment_vs_pairwise", d1);
  r.extras.emplace_back("moment_vs_centered", d2);
  r.extras.emplace_back("pairwise_vs_centered", d3);
  return r;
}

MarginResult check_covariance(const HerglotzFn& f, const CMatrix& a, const CMatrix& u) {
  require_same_dim(a, u);
  if (!is_unitary(u)) throw Error(ErrorKind::HypothesisViolated, "U is not unitary");
  const CMatrix lhs = herglotz_apply(f, u * a * u.adjoint());
  const CMatrix rhs = u * herglotz_apply(f, a) * u.adjoint();
  return identity_result(lhs, rhs, 0.0, 1e-9, {"A normal", "sigma(A) in open disk", "U unitary"});
}

MarginResult check_deviation_split(const OperatorField& f, const CMatrix& b) {
  const CMatrix mean = field_mean(f);
  const CMatrix lhs = deviation_gram(f, b);
  const CMatrix rhs = field_variance_centered(f) + (mean - b).adjoint() * (mean - b);
  return identity_result(lhs, rhs, gram(f).norm(), 1e-10, {"probability weights"});
}

MarginResult eval_minimizer(const OperatorField& f, const CMatrix& b, double theta, const UINorm& n) {
  std::vector<std::string> hyps;
  require_probability_field(f, "A", hyps);
  if (!(theta > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  const double lhs = norm(n, psd_power(field_variance_centered(f), theta));
  const double rhs = norm(n, psd_power(deviation_gram(f, b), theta));
  MarginResult r = inequality(lhs, rhs, std::move(hyps));
  r.extras.emplace_back("split_discrepancy", *check_deviation_split(f, b).extra("discrepancy"));
  return r;
}

}  // namespace iptt
