#include "iptt/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "iptt/error.hpp"
#include "iptt/random.hpp"

namespace iptt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMassTol = 1e-12;

Spectrum normal_spectrum_in_disk(const CMatrix& a) {
  Spectrum spec = normal_eig(a);
  dist_boundary_disk(std::span<const cplx>(spec.eigenvalues));
  return spec;
}

}  // namespace

HerglotzFn::HerglotzFn(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::InvalidArgument, "Herglotz function needs at least one atom");
  double mass = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.angle >= 0.0 && a.angle < kTwoPi)) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("atom angle {} outside [0, 2pi)", a.angle));
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("atom weight {} must be positive", a.weight));
    }
    mass += a.weight;
  }
  if (std::abs(mass - 1.0) > kMassTol) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("atom weights sum to {}, not 1", mass));
  }
}

HerglotzFn HerglotzFn::normalized(std::vector<Atom> atoms) {
  double mass = 0.0;
  for (const Atom& a : atoms) mass += a.weight;
  for (Atom& a : atoms) {
    a.weight /= mass;
    a.angle = std::fmod(a.angle, kTwoPi);
    if (a.angle < 0.0) a.angle += kTwoPi;
    if (a.angle >= kTwoPi) a.angle = 0.0;
  }
  return HerglotzFn(std::move(atoms));
}

HerglotzFn HerglotzFn::single(double angle) { return normalized({{angle, 1.0}}); }

HerglotzFn HerglotzFn::random(Rng& rng, int n_atoms) {
  std::vector<Atom> atoms(static_cast<std::size_t>(n_atoms));
  for (Atom& a : atoms) {
    a.angle = rng.uniform(0.0, kTwoPi);
    a.weight = rng.uniform(0.1, 1.0);
  }
  return normalized(std::move(atoms));
}

cplx herglotz_eval(const HerglotzFn& f, cplx z) {
  if (!(std::abs(z) < 1.0 - tol::disk)) {
    throw Error(ErrorKind::OutsideDisk, fmt::format("|z| = {} not inside the unit disk", std::abs(z)));
  }
  cplx sum = 0.0;
  for (const auto& atom : f.atoms()) {
    const cplx e = std::polar(1.0, atom.angle);
    sum += atom.weight * (e + z) / (e - z);
  }
  return sum;
}

CMatrix herglotz_apply(const HerglotzFn& f, const CMatrix& a) {
  const Spectrum spec = normal_spectrum_in_disk(a);
  std::vector<cplx> values;
  values.reserve(spec.eigenvalues.size());
  for (const cplx& l : spec.eigenvalues) values.push_back(herglotz_eval(f, l));
  const CMatrix& u = *spec.eigenvectors;
  return u * diagonal(std::span<const cplx>(values)) * u.adjoint();
}

CMatrix herglotz_apply_resolvent(const HerglotzFn& f, const CMatrix& a) {
  require_square(a);
  dist_boundary_disk(a);
  const Eigen::Index n = a.rows();
  const CMatrix id = identity(n);
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& atom : f.atoms()) {
    const cplx e = std::polar(1.0, atom.angle);
    const CMatrix shifted = e * id - a;
    sum += atom.weight * shifted.partialPivLu().solve(e * id + a);
  }
  return sum;
}

double resolvent_norm(const CMatrix& a, cplx z) {
  require_square(a);
  const auto s = singular_values(z * identity(a.rows()) - a);
  const double smin = s.back();
  if (smin <= 0.0) throw Error(ErrorKind::NotApplicable, "z lies in the spectrum");
  return 1.0 / smin;
}

bool resolvent_norm_bound_check(const CMatrix& a, std::span<const double> angles) {
  const Spectrum spec = normal_spectrum_in_disk(a);
  const double d = dist_boundary_disk(std::span<const cplx>(spec.eigenvalues));
  for (double alpha : angles) {
    const cplx z = std::polar(1.0, alpha);
    double dist = std::numeric_limits<double>::infinity();
    for (const cplx& l : spec.eigenvalues) dist = std::min(dist, std::abs(z - l));
    const double rn = resolvent_norm(a, z);
    const double growth = 1.0 / dist;
    if (std::abs(rn - growth) > 1e-9 * growth) return false;
    if (rn > (1.0 / d) * (1.0 + 1e-9)) return false;
  }
  return true;
}

}  // namespace iptt
