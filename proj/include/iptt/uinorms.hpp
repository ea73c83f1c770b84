#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "iptt/matcore.hpp"

namespace iptt {

/// Selector for one of the implemented unitarily invariant norms. Every norm
/// here is a symmetric gauge function of the singular values.
class UINorm {
 public:
  enum class Kind { Operator, Schatten, KyFan, Reconvex };

  static UINorm operator_norm();
  /// p >= 1; p = infinity gives the operator norm.
  static UINorm schatten(double p);
  static UINorm kyfan(int k);
  /// ||A||_{base^(p)} = || |A|^p ||_base^{1/p}, p >= 1.
  static UINorm reconvex(const UINorm& base, double p);

  /// Accepts "op", "s<p>" (e.g. s1, s2, s1.5, sinf), "kf<k>" and
  /// "rc<p>:<base>" (e.g. rc2:s1).
  static UINorm parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  const UINorm& base() const;

  /// Canonical short name; parse(name()) round-trips.
  std::string name() const;

  /// Value of the gauge function on a nonincreasing nonnegative sequence.
  double gauge(std::span<const double> singular_values) const;

 private:
  UINorm(Kind kind, double p, int k, std::shared_ptr<const UINorm> base)
      : kind_(kind), p_(p), k_(k), base_(std::move(base)) {}

  Kind kind_;
  double p_ = 1.0;
  int k_ = 1;
  std::shared_ptr<const UINorm> base_;
};

double norm(const UINorm& n, const CMatrix& a);

enum class DualPairing { OpFromTrace, TraceFromOp };

/// Lower-bound certificate for a dual norm: the largest |tr(AY)| over
/// `samples` random Y normalized in the dual norm. With `include_maximizer`
/// the analytic maximizer (rank-one top singular pair for OpFromTrace, polar
/// unitary factor for TraceFromOp) joins the candidate set, so the result is
/// the norm itself.
double dual_norm_operator_trace(const CMatrix& a, DualPairing which, int samples,
                                std::uint64_t seed, bool include_maximizer = true);

inline constexpr double kTolDominance = 1e-10;

/// True iff every Ky Fan k-norm of A is at most that of B (+ kTolDominance).
bool kyfan_dominates(const CMatrix& a, const CMatrix& b);

}  // namespace iptt
