#pragma once

#include <cstdint>
#include <vector>

#include "iptt/matcore.hpp"

namespace iptt {

class Rng;

/// Properties an OperatorField was verified to have at construction.
struct FieldFlags {
  bool is_probability = false;       // weights sum to 1 within 1e-12
  bool is_commuting_normal = false;  // every member normal, pairwise commuting
  bool is_self_adjoint = false;      // ||A_t - A_t*|| <= 1e-10 for every t
};

/// A finite family {(mu_t, A_t)}: a discrete stand-in for an operator-valued
/// function integrated against a positive measure.
class OperatorField {
 public:
  OperatorField(std::vector<double> weights, std::vector<CMatrix> ops);

  std::size_t size() const noexcept { return ops_.size(); }
  Eigen::Index dim() const noexcept { return ops_.front().rows(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<CMatrix>& ops() const noexcept { return ops_; }
  const FieldFlags& flags() const noexcept { return flags_; }

  /// {(mu_t, A_t*)}
  OperatorField adjoint() const;
  /// {(mu_t, A_t - center)}
  OperatorField shifted(const CMatrix& center) const;
  /// {(mu_t, left A_t right)}
  OperatorField sandwiched(const CMatrix& left, const CMatrix& right) const;

 private:
  std::vector<double> weights_;
  std::vector<CMatrix> ops_;
  FieldFlags flags_;
};

/// X -> sum_t mu_t A_t X B_t.
class IptiTransformer {
 public:
  /// Requires equal lengths, equal dims and identical weights.
  IptiTransformer(OperatorField left, OperatorField right);

  const OperatorField& left() const noexcept { return left_; }
  const OperatorField& right() const noexcept { return right_; }
  Eigen::Index dim() const noexcept { return left_.dim(); }

 private:
  OperatorField left_;
  OperatorField right_;
};

CMatrix apply(const IptiTransformer& t, const CMatrix& x);
/// X -> sum_t mu_t A_t* X B_t*, the adjoint under the trace inner product.
CMatrix apply_adjoint(const IptiTransformer& t, const CMatrix& x);

/// sum_t mu_t A_t
CMatrix field_mean(const OperatorField& f);

/// sum_t mu_t A_t* A_t - mean* mean. Requires a probability field.
CMatrix field_variance(const OperatorField& f);
/// 1/2 sum_{s,t} mu_s mu_t |A_s - A_t|^2
CMatrix field_variance_pairwise(const OperatorField& f);
/// sum_t mu_t |A_t - mean|^2
CMatrix field_variance_centered(const OperatorField& f);
/// sum_t mu_t |A_t - b|^2
CMatrix deviation_gram(const OperatorField& f, const CMatrix& b);

/// apply(T, X) - mean(left) X mean(right).
CMatrix korkine_lhs(const IptiTransformer& t, const CMatrix& x);
/// 1/2 sum_{s,t} mu_s mu_t (A_s - A_t) X (B_s - B_t).
CMatrix korkine_rhs(const IptiTransformer& t, const CMatrix& x);

/// max_{s,t} ||A_s - A_t||_op
double field_diameter(const OperatorField& f);
/// Smallest max_t ||A_t - C||_op found over the mean, all pairwise midpoints,
/// and a coordinate pattern search from the best of those. Always lies in
/// [diam/2, diam].
double radius_infinity(const OperatorField& f);

enum class FieldKind { CommutingNormalDisk, HermitianBounded, General };

/// Shared random eigenbasis, eigenvalues uniform in the disk of `radius`.
OperatorField random_commuting_normal_field(Rng& rng, std::size_t n_atoms, Eigen::Index dim,
                                            double radius = 0.9);
/// A_t = C + R S_t R with R = (D - C)^{1/2} and 0 <= S_t <= I, so that
/// C <= A_t <= D holds by construction. Throws BadBounds unless D - C >= 0.
OperatorField random_hermitian_bounded_field(Rng& rng, std::size_t n_atoms, const CMatrix& lower,
                                             const CMatrix& upper);
/// Ginibre members, probability weights.
OperatorField random_general_field(Rng& rng, std::size_t n_atoms, Eigen::Index dim);

/// Seeded dispatcher over the three generators. For HermitianBounded the
/// bounds default to 0 <= A_t <= I when not given.
OperatorField gen_field(FieldKind kind, std::size_t n_atoms, Eigen::Index dim, std::uint64_t seed,
                        const CMatrix* lower = nullptr, const CMatrix* upper = nullptr);

}  // namespace iptt
