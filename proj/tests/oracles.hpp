#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/SVD>

#include "iptt/funcalc.hpp"
#include "iptt/matcore.hpp"

namespace testing_util {

using iptt::CMatrix;
using iptt::cplx;

/// Reference singular values from two-sided Jacobi, independent of the
/// library's one-sided route.
inline std::vector<double> jacobi_singular_values(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

/// Riesz-Dunford integral (1/2 pi i) \oint f(z) (z - A)^{-1} dz by the
/// trapezoid rule on |z| = rho, with rho between the spectrum and the circle.
inline CMatrix contour_apply(const iptt::HerglotzFn& f, const CMatrix& a, int nodes = 512) {
  double rmax = 0.0;
  for (const cplx& l : iptt::eigenvalues(a)) rmax = std::max(rmax, std::abs(l));
  const double rho = (1.0 + rmax) / 2.0;
  const Eigen::Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix sum = CMatrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const cplx z = std::polar(rho, 2.0 * std::numbers::pi * k / nodes);
    // dz / (2 pi i) = z dtheta / (2 pi); trapezoid weight 2 pi / nodes.
    sum += (iptt::herglotz_eval(f, z) * z / static_cast<double>(nodes)) * (z * id - a).partialPivLu().inverse();
  }
  return sum;
}

/// Multiset distance: max over a greedy matching of |x - y|.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const cplx& p, const cplx& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace testing_util
