#include "iptt/uinorms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "iptt/error.hpp"
#include "iptt/random.hpp"

namespace iptt {

namespace {

double parse_double(std::string_view text, std::string_view context) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("bad number '{}' in norm '{}'", text, context));
  }
  return v;
}

std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  return fmt::format("{}", p);
}

}  // namespace

UINorm UINorm::operator_norm() { return {Kind::Operator, std::numeric_limits<double>::infinity(), 1, nullptr}; }

UINorm UINorm::schatten(double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, fmt::format("Schatten exponent {} < 1", p));
  return {Kind::Schatten, p, 1, nullptr};
}

UINorm UINorm::kyfan(int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, fmt::format("Ky Fan index {} < 1", k));
  return {Kind::KyFan, 1.0, k, nullptr};
}

UINorm UINorm::reconvex(const UINorm& base, double p) {
  if (!(p >= 1.0) || std::isinf(p)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("reconvexization exponent {} must be finite and >= 1", p));
  }
  return {Kind::Reconvex, p, 1, std::make_shared<const UINorm>(base)};
}

const UINorm& UINorm::base() const {
  if (!base_) throw Error(ErrorKind::NotApplicable, "norm has no base");
  return *base_;
}

UINorm UINorm::parse(std::string_view text) {
  if (text == "op") return operator_norm();
  if (text.starts_with("kf")) {
    const double k = parse_double(text.substr(2), text);
    if (k != std::floor(k)) throw Error(ErrorKind::InvalidArgument, fmt::format("bad Ky Fan index in '{}'", text));
    return kyfan(static_cast<int>(k));
  }
  if (text.starts_with("rc")) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("reconvex norm '{}' needs rc<p>:<base>", text));
    }
    return reconvex(parse(text.substr(colon + 1)), parse_double(text.substr(2, colon - 2), text));
  }
  if (text.starts_with("s")) return schatten(parse_double(text.substr(1), text));
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown norm '{}'", text));
}

std::string UINorm::name() const {
  switch (kind_) {
    case Kind::Operator: return "op";
    case Kind::Schatten: return "s" + format_exponent(p_);
    case Kind::KyFan: return fmt::format("kf{}", k_);
    case Kind::Reconvex: return fmt::format("rc{}:{}", format_exponent(p_), base_->name());
  }
  return "?";
}

double UINorm::gauge(std::span<const double> s) const {
  if (s.empty()) return 0.0;
  switch (kind_) {
    case Kind::Operator: return s.front();
    case Kind::KyFan: {
      const auto k = std::min(static_cast<std::size_t>(k_), s.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += s[i];
      return sum;
    }
    case Kind::Schatten: {
      if (std::isinf(p_)) return s.front();
      const double top = s.front();
      if (top == 0.0) return 0.0;
      double sum = 0.0;
      for (double v : s) sum += std::pow(v / top, p_);
      return top * std::pow(sum, 1.0 / p_);
    }
    case Kind::Reconvex: {
      // singular values of |A|^p are s_i^p, still nonincreasing
      std::vector<double> powered(s.begin(), s.end());
      for (double& v : powered) v = std::pow(v, p_);
      return std::pow(base_->gauge(powered), 1.0 / p_);
    }
  }
  return 0.0;
}

double norm(const UINorm& n, const CMatrix& a) {
  const auto s = singular_values(a);
  return n.gauge(s);
}

double dual_norm_operator_trace(const CMatrix& a, DualPairing which, int samples, std::uint64_t seed,
                                bool include_maximizer) {
  require_square(a);
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  const Eigen::Index dim = a.rows();
  Rng rng(seed);
  double best = 0.0;
  auto consider = [&](const CMatrix& y) { best = std::max(best, std::abs((a * y).trace())); };

  for (int i = 0; i < samples; ++i) {
    const CMatrix g = random_ginibre(rng, dim);
    const double scale = which == DualPairing::OpFromTrace ? norm(UINorm::schatten(1.0), g) : op_norm(g);
    if (scale > 0.0) consider(g / scale);
  }
  if (include_maximizer) {
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix& u = svd.matrixU();
    const CMatrix& v = svd.matrixV();
    if (which == DualPairing::OpFromTrace) {
      // tr(A v1 u1*) = u1* A v1 = s1, and ||v1 u1*||_1 = 1
      consider(v.col(0) * u.col(0).adjoint());
    } else {
      // tr(A V U*) = tr(Sigma), and V U* is unitary
      consider(v * u.adjoint());
    }
  }
  return best;
}

bool kyfan_dominates(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b);
  const auto sa = singular_values(a);
  const auto sb = singular_values(b);
  double pa = 0.0;
  double pb = 0.0;
  for (std::size_t k = 0; k < sa.size(); ++k) {
    pa += sa[k];
    pb += sb[k];
    if (pa > pb + kTolDominance) return false;
  }
  return true;
}

}  // namespace iptt
