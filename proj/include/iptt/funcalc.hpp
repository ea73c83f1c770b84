#pragma once

#include <span>
#include <vector>

#include "iptt/matcore.hpp"

namespace iptt {

class Rng;

/// A function analytic on the unit disk with positive real part and f(0) = 1,
/// represented by finitely many point masses of its boundary measure:
///   f(z) = sum_j w_j (e^{i a_j} + z) / (e^{i a_j} - z),  sum_j w_j = 1.
class HerglotzFn {
 public:
  struct Atom {
    double angle;   // in [0, 2 pi)
    double weight;  // > 0
  };

  /// Validates angles, positive weights and unit total mass (within 1e-12).
  explicit HerglotzFn(std::vector<Atom> atoms);

  /// Rescales positive weights to unit mass and wraps angles into [0, 2 pi).
  static HerglotzFn normalized(std::vector<Atom> atoms);
  static HerglotzFn single(double angle);
  static HerglotzFn random(Rng& rng, int n_atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

/// Pointwise value; throws OutsideDisk if |z| >= 1 - tol::disk.
cplx herglotz_eval(const HerglotzFn& f, cplx z);

/// f(A) for normal A with spectrum in the open disk, evaluated spectrally.
CMatrix herglotz_apply(const HerglotzFn& f, const CMatrix& a);

/// f(A) via the resolvent sum  sum_j w_j (e^{i a_j} - A)^{-1} (e^{i a_j} + A).
/// Needs only sigma(A) inside the disk (no normality).
CMatrix herglotz_apply_resolvent(const HerglotzFn& f, const CMatrix& a);

/// ||(z - A)^{-1}||_op, through the smallest singular value of z - A.
double resolvent_norm(const CMatrix& a, cplx z);

/// For normal A with sigma(A) inside the disk: at every e^{i alpha}, checks
/// that the resolvent norm equals 1/dist(e^{i alpha}, sigma(A)) (relative
/// 1e-9) and does not exceed 1/d_A.
bool resolvent_norm_bound_check(const CMatrix& a, std::span<const double> angles);

}  // namespace iptt
