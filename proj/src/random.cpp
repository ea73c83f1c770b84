#include "iptt/random.hpp"

#include <cmath>
#include <numbers>

namespace iptt {

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

CMatrix random_ginibre(Rng& rng, Eigen::Index dim) {
  CMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  return g;
}

CMatrix random_unitary(Rng& rng, Eigen::Index dim) {
  const CMatrix g = random_ginibre(rng, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    const cplx phase = mag > 0.0 ? r(j, j) / mag : cplx{1.0, 0.0};
    q.col(j) *= phase;
  }
  return q;
}

CMatrix random_hermitian(Rng& rng, Eigen::Index dim) {
  const CMatrix g = random_ginibre(rng, dim);
  return (g + g.adjoint()) / 2.0;
}

CMatrix random_psd(Rng& rng, Eigen::Index dim) {
  const CMatrix g = random_ginibre(rng, dim);
  const CMatrix p = g * g.adjoint() / static_cast<double>(dim);
  return (p + p.adjoint()) / 2.0;
}

CVector random_unit_vector(Rng& rng, Eigen::Index dim) {
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

cplx random_in_disk(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(r, phi);
}

CMatrix random_normal_in_disk(Rng& rng, Eigen::Index dim, double radius) {
  const CMatrix u = random_unitary(rng, dim);
  std::vector<cplx> lambda(static_cast<std::size_t>(dim));
  for (auto& l : lambda) l = random_in_disk(rng, radius);
  return u * diagonal(std::span<const cplx>(lambda)) * u.adjoint();
}

CMatrix random_hermitian_in_interval(Rng& rng, Eigen::Index dim, double radius) {
  const CMatrix u = random_unitary(rng, dim);
  std::vector<double> lambda(static_cast<std::size_t>(dim));
  for (auto& l : lambda) l = rng.uniform(-radius, radius);
  const CMatrix h = u * diagonal(std::span<const double>(lambda)) * u.adjoint();
  return (h + h.adjoint()) / 2.0;
}

std::vector<double> random_probability(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = rng.uniform(0.1, 1.0);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace iptt
