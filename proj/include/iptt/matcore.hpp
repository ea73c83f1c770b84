#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace iptt {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double unitary = 1e-9;
inline constexpr double recon = 1e-9;
inline constexpr double disk = 1e-12;
inline constexpr double floor = 1e-14;
}  // namespace tol

/// Eigen-decomposition of a matrix. `eigenvectors` is present only when the
/// source was diagonalized as a normal matrix; its columns are orthonormal and
/// pair with `eigenvalues` in order.
struct Spectrum {
  std::vector<cplx> eigenvalues;
  std::optional<CMatrix> eigenvectors;

  CMatrix reconstruct() const;
};

// Throws DimensionMismatch / InvalidArgument if A is not square or has a
// non-finite entry.
void require_square(const CMatrix& a);
void require_same_dim(const CMatrix& a, const CMatrix& b);

CMatrix adjoint(const CMatrix& a);
CMatrix identity(Eigen::Index dim);
CMatrix diagonal(std::span<const cplx> values);
CMatrix diagonal(std::span<const double> values);

struct OneSidedSvd {
  CMatrix right;          // right singular vectors (columns)
  Eigen::VectorXd values; // matching singular values, unsorted
};
OneSidedSvd one_sided_svd(const CMatrix& a);

/// Nonincreasing singular values, length = dim.
std::vector<double> singular_values(const CMatrix& a);
double op_norm(const CMatrix& a);
double frobenius_norm(const CMatrix& a);

bool is_hermitian(const CMatrix& a, double rel_tol);
bool is_normal(const CMatrix& a, double rel_tol);
bool is_unitary(const CMatrix& u, double tol = tol::unitary);
/// ||E||_op <= bound; skips the decomposition when ||E||_F already suffices.
bool op_norm_at_most(const CMatrix& e, double bound);

/// Unitary diagonalization of a normal matrix. Hermitian input is routed
/// through the self-adjoint solver; other normal input through complex Schur
/// (whose triangular factor is diagonal for normal matrices).
Spectrum normal_eig(const CMatrix& a, double rel_tol = tol::recon);

/// Eigenvalues of an arbitrary square matrix (Hessenberg reduction followed
/// by shifted QR). No eigenvectors.
std::vector<cplx> eigenvalues(const CMatrix& a);

/// Ascending eigenvalues of the Hermitian part (A + A*)/2.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);
double min_hermitian_eigenvalue(const CMatrix& h);

/// min over the spectrum of 1 - |lambda|; throws SpectrumNotInDisk unless
/// every eigenvalue lies inside the disk of radius 1 - tol::disk.
double dist_boundary_disk(const CMatrix& a);
double dist_boundary_disk(std::span<const cplx> spectrum);

/// |A| = (A*A)^{1/2}.
CMatrix abs_op(const CMatrix& a);

/// P^s for Hermitian positive semidefinite P and s >= 0. Eigenvalues in
/// [-tol, 0) are clipped to zero; for s = 0 the null space maps to zero.
CMatrix psd_power(const CMatrix& p, double s);

}  // namespace iptt
