#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iptt/funcalc.hpp"
#include "iptt/matcore.hpp"
#include "iptt/transformer.hpp"
#include "iptt/uinorms.hpp"

namespace iptt {

/// Default relative tolerance for inequalities: margin >= -1e-9 * max(1, rhs).
inline constexpr double kTolIneqRel = 1e-9;

inline double tol_ineq(double rhs, double rel = kTolIneqRel) { return rel * std::max(1.0, rhs); }

enum class CheckKind { Inequality, Identity };

/// Outcome of one evaluation. For inequalities margin = rhs - lhs. Identity
/// checks also fill lhs/rhs (the two sides' sizes) and carry their verdict
/// in the "discrepancy" extra, compared against `identity_tol`.
struct MarginResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  CheckKind kind = CheckKind::Inequality;
  double identity_tol = 0.0;
  std::vector<std::string> hypothesis_report;
  std::vector<std::pair<std::string, double>> extras;

  std::optional<double> extra(std::string_view name) const;
  double relative_margin() const { return margin / std::max(1.0, rhs); }
  bool passed(double rel_tol = kTolIneqRel) const;
};

struct ScalarBounds {
  double f_lower, f_upper, g_lower, g_upper;
};

/// |mean(fg) - mean(f) mean(g)| <= (D - C)(F - E) / 4 on a uniform grid.
MarginResult eval_gruss_scalar(std::span<const double> f, std::span<const double> g, const ScalarBounds& b);

/// |||f(A) X g(B) + X||| <= 2 sqrt2 / (d_A d_B) ||| |AXB| + |X| |||, A, B normal.
MarginResult eval_p1(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& b,
                     const CMatrix& x, const UINorm& n);

/// |||f(A) X g(A*) + X||| <= 2 / d_A^2 ||| A|X|A* + |X| |||, X normal commuting with A.
MarginResult eval_c1(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& x,
                     const UINorm& n);

/// |||f(A) X g(A) - X||| <= 2 sqrt2 / d_A^2 ||| |AX| + |XA| |||  (as printed).
MarginResult eval_c2(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& x,
                     const UINorm& n);
/// Plus-sign variant: eval_p1 with B = A.
MarginResult eval_c2_plus(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& x,
                          const UINorm& n);

/// eval_p1 at X = I.
MarginResult eval_c3(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& b,
                     const UINorm& n);

/// max_{+,-} ||f(A)X +- Xg(B)||_2 <= ||(X + |A|X)/d_A + (X + X|B|)/d_B||_2 for
/// Hermitian A, B. Extras: lhs_plus, lhs_minus.
MarginResult eval_hilb(const HerglotzFn& f, const HerglotzFn& g, const CMatrix& a, const CMatrix& b,
                       const CMatrix& x);

/// |||sum mu A_t X B_t||| <= |||(sum mu A*A)^{1/2} X (sum mu B*B)^{1/2}||| for
/// commuting normal fields.
MarginResult eval_cs_uinorm(const IptiTransformer& t, const CMatrix& x, const UINorm& n);

/// ||| |sum mu A*B|^theta ||| <= |||(sum mu A*A)^theta|||^{1/2} |||(sum mu B*B)^theta|||^{1/2}.
MarginResult eval_cs_theta(const OperatorField& f, const OperatorField& g, double theta, const UINorm& n);

/// ||| |sum mu A*B - mean(A)* mean(B)|^theta |||^2 <= |||Var(A)^theta||| |||Var(B)^theta|||.
MarginResult eval_landau_theta(const OperatorField& f, const OperatorField& g, double theta, const UINorm& n);

struct HermitianBounds {
  CMatrix lower;
  CMatrix upper;
};

/// |||sum mu A X B - mean(A) X mean(B)||| <= ||D - C|| ||F - E|| / 4 |||X|||
/// for self-adjoint fields with C <= A_t <= D and E <= B_t <= F.
MarginResult eval_gruss_operator(const OperatorField& f, const OperatorField& g, const HermitianBounds& a_bounds,
                                 const HermitianBounds& b_bounds, const CMatrix& x, const UINorm& n);

/// eval_gruss_operator with uniform weights 1/n.
MarginResult eval_elementary_gruss(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b,
                                   const HermitianBounds& a_bounds, const HermitianBounds& b_bounds,
                                   const CMatrix& x, const UINorm& n);

struct LandauExponents {
  double p, q, r;  // 1/p = 1/(2q) + 1/(2r), all >= 1
};

/// Schatten-p Landau bound. rhs = ||L||_op * ||X R||_p with
///   L = (sum mu |Y (A_t - mean A)|^2)^{1/(2q)},  Y = (sum mu |A_t* - mean A*|^2)^{(q-1)/2}
///   R = (sum mu |Z (B_t* - mean B*)|^2)^{1/(2r)}, Z = (sum mu |B_t - mean B|^2)^{(r-1)/2}
/// Extra rhs_joint = ||L X R||_p.
MarginResult eval_schatten_landau(const OperatorField& f, const OperatorField& g, const LandauExponents& e,
                                  const CMatrix& x);

/// Norm of T on the Hilbert-Schmidt class two ways: lhs from the dim^2 x dim^2
/// matrix sum mu (B_t^T kron A_t), rhs by block power iteration on T*T using
/// only apply / apply_adjoint. Identity to 1e-8.
MarginResult eval_hs_exact_norm(const IptiTransformer& t);

/// Operational norm of T on the Hilbert-Schmidt class via the Kronecker form.
double hs_norm_kronecker(const IptiTransformer& t);
/// Same quantity by subspace iteration with Rayleigh-Ritz (oracle path).
double hs_norm_power_iteration(const IptiTransformer& t, std::uint64_t seed = 0);

// Identity checks. lhs/rhs are Frobenius sizes of the two sides and the
// "discrepancy" extra is the relative Frobenius distance.

/// korkine_lhs vs korkine_rhs, tolerance 1e-10.
MarginResult check_korkine(const IptiTransformer& t, const CMatrix& x);
/// The three variance forms pairwise, tolerance 1e-10.
MarginResult check_variance(const OperatorField& f);
/// f(U A U*) vs U f(A) U*, tolerance 1e-9.
MarginResult check_covariance(const HerglotzFn& f, const CMatrix& a, const CMatrix& u);
/// sum mu |A_t - B|^2 = Var + |mean - B|^2, tolerance 1e-10.
MarginResult check_deviation_split(const OperatorField& f, const CMatrix& b);

/// ||| Var^theta ||| <= ||| (sum mu |A_t - B|^2)^theta |||: the mean minimizes.
/// Extra "split_discrepancy" is the check_deviation_split discrepancy.
MarginResult eval_minimizer(const OperatorField& f, const CMatrix& b, double theta, const UINorm& n);

}  // namespace iptt
