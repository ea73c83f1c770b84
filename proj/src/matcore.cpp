#include "iptt/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "iptt/error.hpp"

namespace iptt {

namespace {

double scale_floor(double scale) { return std::max(scale, tol::floor); }

}  // namespace

CMatrix Spectrum::reconstruct() const {
  if (!eigenvectors) {
    throw Error(ErrorKind::NotApplicable, "spectrum has no eigenvectors");
  }
  const CMatrix& u = *eigenvectors;
  return u * diagonal(std::span<const cplx>(eigenvalues)) * u.adjoint();
}

void require_square(const CMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("expected a nonempty square matrix, got {}x{}", a.rows(), a.cols()));
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  }
}

void require_same_dim(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("{}x{} vs {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  }
}

CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix diagonal(std::span<const cplx> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  CMatrix d = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = values[static_cast<std::size_t>(i)];
  return d;
}

CMatrix diagonal(std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  CMatrix d = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = values[static_cast<std::size_t>(i)];
  return d;
}

/// Right singular vectors from the Hermitian eigenproblem of A*A; singular
/// values as the column norms of AV. Column norms keep absolute accuracy of
/// order eps * ||A|| even for tiny singular values, unlike sqrt(eig(A*A)).
OneSidedSvd one_sided_svd(const CMatrix& a) {
  require_square(a);
  const double c = a.cwiseAbs().maxCoeff();
  const CMatrix scaled = c > 0.0 ? CMatrix(a / c) : a;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(scaled.adjoint() * scaled);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DecompositionFailure, "SVD eigen-iteration did not converge");
  }
  OneSidedSvd out{es.eigenvectors(), (scaled * es.eigenvectors()).colwise().norm().transpose()};
  if (c > 0.0) out.values *= c;
  if (!out.values.allFinite()) {
    throw Error(ErrorKind::DecompositionFailure, "SVD produced non-finite singular values");
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& a) {
  const OneSidedSvd svd = one_sided_svd(a);
  std::vector<double> out(svd.values.data(), svd.values.data() + svd.values.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double op_norm(const CMatrix& a) { return singular_values(a).front(); }

double frobenius_norm(const CMatrix& a) { return a.norm(); }

bool op_norm_at_most(const CMatrix& e, double bound) {
  if (e.norm() <= bound) return true;
  return op_norm(e) <= bound;
}

bool is_hermitian(const CMatrix& a, double rel_tol) {
  require_square(a);
  const double scale = scale_floor(op_norm(a));
  return op_norm_at_most(a - a.adjoint(), rel_tol * scale);
}

bool is_normal(const CMatrix& a, double rel_tol) {
  require_square(a);
  const double na = op_norm(a);
  const CMatrix comm = a.adjoint() * a - a * a.adjoint();
  return op_norm_at_most(comm, std::max(rel_tol * na * na, tol::floor));
}

bool is_unitary(const CMatrix& u, double tol) {
  require_square(u);
  return op_norm_at_most(u.adjoint() * u - identity(u.rows()), tol);
}

Spectrum normal_eig(const CMatrix& a, double rel_tol) {
  require_square(a);
  if (!is_normal(a, rel_tol)) {
    throw Error(ErrorKind::NotNormal, "||A*A - AA*|| exceeds tolerance");
  }
  const double na = op_norm(a);
  Spectrum out;
  if (op_norm_at_most(a - a.adjoint(), std::max(tol::recon * na, tol::floor))) {
    const CMatrix h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::DecompositionFailure, "self-adjoint eigensolver did not converge");
    }
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      out.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
    }
    out.eigenvectors = es.eigenvectors();
  } else {
    Eigen::ComplexSchur<CMatrix> schur(a);
    if (schur.info() != Eigen::Success) {
      throw Error(ErrorKind::DecompositionFailure, "complex Schur iteration did not converge");
    }
    const CMatrix& t = schur.matrixT();
    for (Eigen::Index i = 0; i < t.rows(); ++i) out.eigenvalues.push_back(t(i, i));
    out.eigenvectors = schur.matrixU();
  }
  if (!is_unitary(*out.eigenvectors)) {
    throw Error(ErrorKind::DecompositionFailure, "eigenvector matrix is not unitary");
  }
  if (!op_norm_at_most(a - out.reconstruct(), std::max(tol::recon * na, tol::floor))) {
    throw Error(ErrorKind::DecompositionFailure, "normal reconstruction exceeds tolerance");
  }
  return out;
}

std::vector<cplx> eigenvalues(const CMatrix& a) {
  require_square(a);
  Eigen::ComplexSchur<CMatrix> schur(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::DecompositionFailure, "complex Schur iteration did not converge");
  }
  const CMatrix& t = schur.matrixT();
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index i = 0; i < t.rows(); ++i) out.push_back(t(i, i));
  return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  require_square(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DecompositionFailure, "self-adjoint eigensolver did not converge");
  }
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double min_hermitian_eigenvalue(const CMatrix& h) { return hermitian_eigenvalues(h).front(); }

double dist_boundary_disk(std::span<const cplx> spectrum) {
  double d = 1.0;
  for (const cplx& lambda : spectrum) {
    const double r = std::abs(lambda);
    if (!(r < 1.0 - tol::disk)) {
      throw Error(ErrorKind::SpectrumNotInDisk, fmt::format("eigenvalue of modulus {}", r));
    }
    d = std::min(d, 1.0 - r);
  }
  return d;
}

double dist_boundary_disk(const CMatrix& a) {
  const auto spec = eigenvalues(a);
  return dist_boundary_disk(std::span<const cplx>(spec));
}

CMatrix abs_op(const CMatrix& a) {
  const OneSidedSvd svd = one_sided_svd(a);
  const CMatrix out = svd.right * svd.values.cast<cplx>().asDiagonal() * svd.right.adjoint();
  return (out + out.adjoint()) / 2.0;
}

CMatrix psd_power(const CMatrix& p, double s) {
  require_square(p);
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::NotApplicable, fmt::format("psd_power exponent {} must be >= 0", s));
  }
  const double scale = scale_floor(op_norm(p));
  if (!op_norm_at_most(p - p.adjoint(), tol::recon * scale)) {
    throw Error(ErrorKind::NotPSD, "matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es((p + p.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DecompositionFailure, "self-adjoint eigensolver did not converge");
  }
  Eigen::VectorXd lam = es.eigenvalues();
  Eigen::VectorXcd powered(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    double l = lam(i);
    if (l < -tol::recon * scale) {
      throw Error(ErrorKind::NotPSD, fmt::format("eigenvalue {} below zero", l));
    }
    l = std::max(l, 0.0);
    double v = 0.0;
    if (s == 0.0) {
      v = l > tol::floor * scale ? 1.0 : 0.0;
    } else if (l > 0.0) {
      v = std::pow(l, s);
    }
    powered(i) = v;
  }
  const CMatrix& u = es.eigenvectors();
  const CMatrix out = u * powered.asDiagonal() * u.adjoint();
  return (out + out.adjoint()) / 2.0;
}

}  // namespace iptt
