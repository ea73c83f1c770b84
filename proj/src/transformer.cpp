#include "iptt/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "iptt/error.hpp"
#include "iptt/random.hpp"

namespace iptt {

namespace {

constexpr double kFlagTol = 1e-10;
constexpr double kMassTol = 1e-12;

FieldFlags verify_flags(const std::vector<double>& weights, const std::vector<CMatrix>& ops) {
  FieldFlags flags;
  const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
  flags.is_probability = std::abs(mass - 1.0) <= kMassTol;

  std::vector<double> norms;
  norms.reserve(ops.size());
  for (const CMatrix& a : ops) norms.push_back(op_norm(a));

  flags.is_self_adjoint = true;
  for (std::size_t t = 0; t < ops.size(); ++t) {
    if (op_norm(ops[t] - ops[t].adjoint()) > kFlagTol * std::max(1.0, norms[t])) {
      flags.is_self_adjoint = false;
      break;
    }
  }

  flags.is_commuting_normal = std::all_of(ops.begin(), ops.end(),
                                          [](const CMatrix& a) { return is_normal(a, kFlagTol); });
  for (std::size_t s = 0; s < ops.size() && flags.is_commuting_normal; ++s) {
    for (std::size_t t = s + 1; t < ops.size(); ++t) {
      const CMatrix comm = ops[s] * ops[t] - ops[t] * ops[s];
      if (op_norm(comm) > kFlagTol * std::max(1.0, norms[s] * norms[t])) {
        flags.is_commuting_normal = false;
        break;
      }
    }
  }
  return flags;
}

void require_probability(const OperatorField& f) {
  if (!f.flags().is_probability) throw Error(ErrorKind::NotProbability, "field weights do not sum to 1");
}

void require_probability(const IptiTransformer& t) {
  require_probability(t.left());
  require_probability(t.right());
}

}  // namespace

OperatorField::OperatorField(std::vector<double> weights, std::vector<CMatrix> ops)
    : weights_(std::move(weights)), ops_(std::move(ops)) {
  if (ops_.empty()) throw Error(ErrorKind::EmptyInput, "field needs at least one atom");
  if (weights_.size() != ops_.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("field needs matching nonempty weights/ops, got {}/{}", weights_.size(), ops_.size()));
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, fmt::format("weight {} must be positive", w));
  }
  for (const CMatrix& a : ops_) {
    require_square(a);
    require_same_dim(a, ops_.front());
  }
  flags_ = verify_flags(weights_, ops_);
}

OperatorField OperatorField::adjoint() const {
  std::vector<CMatrix> out;
  out.reserve(ops_.size());
  for (const CMatrix& a : ops_) out.push_back(a.adjoint());
  return {weights_, std::move(out)};
}

OperatorField OperatorField::shifted(const CMatrix& center) const {
  std::vector<CMatrix> out;
  out.reserve(ops_.size());
  for (const CMatrix& a : ops_) out.push_back(a - center);
  return {weights_, std::move(out)};
}

OperatorField OperatorField::sandwiched(const CMatrix& left, const CMatrix& right) const {
  std::vector<CMatrix> out;
  out.reserve(ops_.size());
  for (const CMatrix& a : ops_) out.push_back(left * a * right);
  return {weights_, std::move(out)};
}

IptiTransformer::IptiTransformer(OperatorField left, OperatorField right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.size() != right_.size() || left_.dim() != right_.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "transformer fields differ in length or dimension");
  }
  if (left_.weights() != right_.weights()) {
    throw Error(ErrorKind::InvalidArgument, "transformer fields must share weights");
  }
}

CMatrix apply(const IptiTransformer& t, const CMatrix& x) {
  require_square(x);
  if (x.rows() != t.dim()) {
    throw Error(ErrorKind::DimensionMismatch, fmt::format("X is {}x{}, transformer dim {}", x.rows(), x.cols(), t.dim()));
  }
  const auto& w = t.left().weights();
  const auto& a = t.left().ops();
  const auto& b = t.right().ops();
  CMatrix sum = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * (a[i] * x * b[i]);
  return sum;
}

CMatrix apply_adjoint(const IptiTransformer& t, const CMatrix& x) {
  require_square(x);
  require_same_dim(x, t.left().ops().front());
  const auto& w = t.left().weights();
  const auto& a = t.left().ops();
  const auto& b = t.right().ops();
  CMatrix sum = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * (a[i].adjoint() * x * b[i].adjoint());
  return sum;
}

CMatrix field_mean(const OperatorField& f) {
  CMatrix sum = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) sum += f.weights()[i] * f.ops()[i];
  return sum;
}

CMatrix field_variance(const OperatorField& f) {
  require_probability(f);
  const CMatrix mean = field_mean(f);
  CMatrix sum = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) sum += f.weights()[i] * (f.ops()[i].adjoint() * f.ops()[i]);
  const CMatrix v = sum - mean.adjoint() * mean;
  return (v + v.adjoint()) / 2.0;
}

CMatrix field_variance_pairwise(const OperatorField& f) {
  require_probability(f);
  CMatrix sum = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t t = 0; t < f.size(); ++t) {
      const CMatrix diff = f.ops()[s] - f.ops()[t];
      sum += (f.weights()[s] * f.weights()[t]) * (diff.adjoint() * diff);
    }
  }
  const CMatrix v = sum / 2.0;
  return (v + v.adjoint()) / 2.0;
}

CMatrix field_variance_centered(const OperatorField& f) {
  require_probability(f);
  return deviation_gram(f, field_mean(f));
}

CMatrix deviation_gram(const OperatorField& f, const CMatrix& b) {
  require_same_dim(b, f.ops().front());
  CMatrix sum = CMatrix::Zero(f.dim(), f.dim());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const CMatrix diff = f.ops()[i] - b;
    sum += f.weights()[i] * (diff.adjoint() * diff);
  }
  return (sum + sum.adjoint()) / 2.0;
}

CMatrix korkine_lhs(const IptiTransformer& t, const CMatrix& x) {
  require_probability(t);
  return apply(t, x) - field_mean(t.left()) * x * field_mean(t.right());
}

CMatrix korkine_rhs(const IptiTransformer& t, const CMatrix& x) {
  require_probability(t);
  require_same_dim(x, t.left().ops().front());
  const auto& w = t.left().weights();
  const auto& a = t.left().ops();
  const auto& b = t.right().ops();
  CMatrix sum = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t s = 0; s < w.size(); ++s) {
    for (std::size_t u = 0; u < w.size(); ++u) {
      if (s == u) continue;
      sum += (w[s] * w[u]) * ((a[s] - a[u]) * x * (b[s] - b[u]));
    }
  }
  return sum / 2.0;
}

double field_diameter(const OperatorField& f) {
  double diam = 0.0;
  for (std::size_t s = 0; s < f.size(); ++s)
    for (std::size_t t = s + 1; t < f.size(); ++t) diam = std::max(diam, op_norm(f.ops()[s] - f.ops()[t]));
  return diam;
}

double radius_infinity(const OperatorField& f) {
  auto spread = [&](const CMatrix& c) {
    double m = 0.0;
    for (const CMatrix& a : f.ops()) m = std::max(m, op_norm(a - c));
    return m;
  };

  CMatrix best = field_mean(f);
  double best_val = spread(best);
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t t = s; t < f.size(); ++t) {
      const CMatrix mid = (f.ops()[s] + f.ops()[t]) / 2.0;
      const double v = spread(mid);
      if (v < best_val) {
        best_val = v;
        best = mid;
      }
    }
  }

  const double diam = field_diameter(f);
  if (diam == 0.0) return 0.0;
  const Eigen::Index n = f.dim();
  const cplx units[2] = {{1.0, 0.0}, {0.0, 1.0}};
  for (double step = diam / 4.0; step > 1e-6 * diam; step /= 2.0) {
    for (int sweep = 0; sweep < 3; ++sweep) {
      bool improved = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
          for (const cplx& unit : units) {
            for (double sign : {1.0, -1.0}) {
              CMatrix trial = best;
              trial(i, j) += sign * step * unit;
              const double v = spread(trial);
              if (v < best_val) {
                best_val = v;
                best = std::move(trial);
                improved = true;
              }
            }
          }
        }
      }
      if (!improved) break;
    }
  }
  return best_val;
}

OperatorField random_commuting_normal_field(Rng& rng, std::size_t n_atoms, Eigen::Index dim, double radius) {
  const CMatrix u = random_unitary(rng, dim);
  std::vector<CMatrix> ops;
  ops.reserve(n_atoms);
  for (std::size_t t = 0; t < n_atoms; ++t) {
    std::vector<cplx> lambda(static_cast<std::size_t>(dim));
    for (auto& l : lambda) l = random_in_disk(rng, radius);
    ops.push_back(u * diagonal(std::span<const cplx>(lambda)) * u.adjoint());
  }
  return {random_probability(rng, n_atoms), std::move(ops)};
}

OperatorField random_hermitian_bounded_field(Rng& rng, std::size_t n_atoms, const CMatrix& lower,
                                             const CMatrix& upper) {
  require_square(lower);
  require_same_dim(lower, upper);
  const CMatrix gap = upper - lower;
  const double scale = std::max({op_norm(lower), op_norm(upper), 1.0});
  if (!is_hermitian(lower, kFlagTol) || !is_hermitian(upper, kFlagTol) ||
      min_hermitian_eigenvalue(gap) < -kFlagTol * scale) {
    throw Error(ErrorKind::BadBounds, "bounds must be Hermitian with upper - lower >= 0");
  }
  const CMatrix root = psd_power((gap + gap.adjoint()) / 2.0, 0.5);
  const Eigen::Index dim = lower.rows();
  std::vector<CMatrix> ops;
  ops.reserve(n_atoms);
  for (std::size_t t = 0; t < n_atoms; ++t) {
    const CMatrix w = random_unitary(rng, dim);
    std::vector<double> s(static_cast<std::size_t>(dim));
    for (auto& v : s) {
      const double u = rng.uniform();
      // push some eigenvalues onto the endpoints of [0, 1]
      v = u < 0.2 ? 0.0 : (u > 0.8 ? 1.0 : rng.uniform());
    }
    const CMatrix st = w * diagonal(std::span<const double>(s)) * w.adjoint();
    const CMatrix a = lower + root * st * root;
    ops.push_back((a + a.adjoint()) / 2.0);
  }
  return {random_probability(rng, n_atoms), std::move(ops)};
}

OperatorField random_general_field(Rng& rng, std::size_t n_atoms, Eigen::Index dim) {
  std::vector<CMatrix> ops;
  ops.reserve(n_atoms);
  for (std::size_t t = 0; t < n_atoms; ++t) ops.push_back(random_ginibre(rng, dim));
  return {random_probability(rng, n_atoms), std::move(ops)};
}

OperatorField gen_field(FieldKind kind, std::size_t n_atoms, Eigen::Index dim, std::uint64_t seed,
                        const CMatrix* lower, const CMatrix* upper) {
  Rng rng(seed);
  switch (kind) {
    case FieldKind::CommutingNormalDisk: return random_commuting_normal_field(rng, n_atoms, dim);
    case FieldKind::HermitianBounded: {
      const CMatrix lo = lower ? *lower : CMatrix::Zero(dim, dim);
      const CMatrix hi = upper ? *upper : identity(dim);
      return random_hermitian_bounded_field(rng, n_atoms, lo, hi);
    }
    case FieldKind::General: return random_general_field(rng, n_atoms, dim);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown field kind");
}

}  // namespace iptt
