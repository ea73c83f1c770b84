#include <cmath>

#include <gtest/gtest.h>

#include "iptt/matcore.hpp"
#include "iptt/random.hpp"
#include "test_support.hpp"

using namespace iptt;
using testing_util::diag;
using testing_util::mat;
using testing_util::max_abs_diff;

namespace {
const cplx I1{0.0, 1.0};
}

TEST(Adjoint, Examples) {
  EXPECT_EQ(adjoint(identity(2)), identity(2));
  EXPECT_EQ(adjoint(mat({{0, 1}, {0, 0}})), mat({{0, 0}, {1, 0}}));
  EXPECT_EQ(adjoint(mat({{I1, 0}, {0, 0}})), mat({{-I1, 0}, {0, 0}}));
}

TEST(Adjoint, Involution) {
  Rng rng(3);
  const CMatrix a = random_ginibre(rng, 5);
  EXPECT_EQ(adjoint(adjoint(a)), a);
}

TEST(SingularValues, Examples) {
  const auto s = singular_values(diag({3.0, -2.0, 1.0}));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], 3.0, 1e-14);
  EXPECT_NEAR(s[1], 2.0, 1e-14);
  EXPECT_NEAR(s[2], 1.0, 1e-14);

  Rng rng(1);
  for (double v : singular_values(random_unitary(rng, 4))) EXPECT_NEAR(v, 1.0, 1e-12);

  const auto r = singular_values(mat({{0, 2}, {0, 0}}));
  EXPECT_NEAR(r[0], 2.0, 1e-14);
  EXPECT_NEAR(r[1], 0.0, 1e-14);
}

TEST(SingularValues, MatchJacobiOracleAndAdjoint) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = rng.uniform_int(1, 16);
    CMatrix a = random_ginibre(rng, d);
    if (trial % 3 == 0 && d > 1) a.col(0) = a.col(d - 1);  // rank deficient
    const auto s = singular_values(a);
    const auto ref = testing_util::jacobi_singular_values(a);
    const auto sa = singular_values(a.adjoint());
    for (int i = 0; i < d; ++i) {
      EXPECT_NEAR(s[i], ref[i], 1e-12 * std::max(1.0, ref[0]));
      EXPECT_NEAR(s[i], sa[i], 1e-10);
      if (i > 0) {
        EXPECT_GE(s[i - 1], s[i]);
      }
      EXPECT_GE(s[i], 0.0);
    }
  }
}

TEST(OpNorm, SampledSupNeverExceeds) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = rng.uniform_int(1, 8);
    const CMatrix a = random_ginibre(rng, d);
    const double n = op_norm(a);
    double sup = 0.0;
    for (int k = 0; k < 100; ++k) sup = std::max(sup, (a * random_unit_vector(rng, d)).norm());
    EXPECT_LE(sup, n * (1.0 + 1e-8));
  }
}

TEST(RequireSquare, Errors) {
  EXPECT_IPTT_ERROR(require_square(CMatrix(2, 3)), ErrorKind::DimensionMismatch);
  EXPECT_IPTT_ERROR(require_square(CMatrix(0, 0)), ErrorKind::DimensionMismatch);
  CMatrix bad = identity(2);
  bad(0, 1) = std::nan("");
  EXPECT_IPTT_ERROR(require_square(bad), ErrorKind::InvalidArgument);
  EXPECT_IPTT_ERROR(require_same_dim(identity(2), identity(3)), ErrorKind::DimensionMismatch);
}

TEST(NormalEig, Examples) {
  const Spectrum s = normal_eig(diag({0.5, 0.25 * I1}));
  EXPECT_LT(testing_util::multiset_distance(s.eigenvalues, {0.5, 0.25 * I1}), 1e-14);
  EXPECT_LT(max_abs_diff(s.reconstruct(), diag({0.5, 0.25 * I1})), 1e-14);

  const Spectrum h = normal_eig(mat({{2, 1}, {1, 2}}));
  EXPECT_LT(testing_util::multiset_distance(h.eigenvalues, {3.0, 1.0}), 1e-13);
}

TEST(NormalEig, RoundTripRandomUnitary) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.uniform_int(1, 8);
    std::vector<cplx> lambda(static_cast<std::size_t>(d));
    for (cplx& l : lambda) l = random_in_disk(rng, 2.0);
    const CMatrix u = random_unitary(rng, d);
    const CMatrix a = u * diagonal(std::span<const cplx>(lambda)) * u.adjoint();
    const Spectrum s = normal_eig(a);
    EXPECT_LT(testing_util::multiset_distance(s.eigenvalues, lambda), 1e-10);
    EXPECT_TRUE(is_unitary(*s.eigenvectors));
    EXPECT_LE(op_norm(a - s.reconstruct()), 1e-9 * op_norm(a));
    // Unitary similarity preserves the spectrum.
    const CMatrix v = random_unitary(rng, d);
    EXPECT_LT(testing_util::multiset_distance(normal_eig(v * a * v.adjoint()).eigenvalues, lambda), 1e-10);
  }
}

TEST(NormalEig, RejectsNonNormal) {
  EXPECT_IPTT_ERROR(normal_eig(mat({{0, 1}, {0, 0}})), ErrorKind::NotNormal);
  EXPECT_FALSE(is_normal(mat({{1, 1}, {0, 2}}), 1e-9));
  EXPECT_TRUE(is_normal(mat({{0, -1}, {1, 0}}), 1e-9));
}

TEST(Eigenvalues, NonNormalSpectrum) {
  const auto ev = eigenvalues(mat({{0.5, 7}, {0, -0.25}}));
  EXPECT_LT(testing_util::multiset_distance(ev, {0.5, -0.25}), 1e-13);
}

TEST(DistBoundaryDisk, Examples) {
  EXPECT_DOUBLE_EQ(dist_boundary_disk(diag({0.5, 0.25 * I1})), 0.5);
  EXPECT_DOUBLE_EQ(dist_boundary_disk(CMatrix::Zero(3, 3)), 1.0);
  EXPECT_NEAR(dist_boundary_disk(diag({0.9, -0.9})), 0.1, 1e-15);
}

TEST(DistBoundaryDisk, Errors) {
  EXPECT_IPTT_ERROR(dist_boundary_disk(diag({1.0, 0.0})), ErrorKind::SpectrumNotInDisk);
  EXPECT_IPTT_ERROR(dist_boundary_disk(diag({0.0, 1.5 * I1})), ErrorKind::SpectrumNotInDisk);
  // Non-normal with small spectrum but large norm is fine.
  EXPECT_NEAR(dist_boundary_disk(mat({{0.5, 100}, {0, 0}})), 0.5, 1e-12);
}

TEST(AbsOp, Examples) {
  EXPECT_LT(max_abs_diff(abs_op(diag({-2.0, 3.0})), diag({2.0, 3.0})), 1e-14);
  Rng rng(2);
  EXPECT_LT(max_abs_diff(abs_op(random_unitary(rng, 5)), identity(5)), 1e-13);
  EXPECT_LT(max_abs_diff(abs_op(mat({{0, 2}, {0, 0}})), diag({0.0, 2.0})), 1e-14);
}

TEST(AbsOp, SquareAndPositivity) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.uniform_int(1, 10);
    const CMatrix a = random_ginibre(rng, d);
    const CMatrix m = abs_op(a);
    EXPECT_LT(op_norm(m * m - a.adjoint() * a), 1e-9 * std::max(1.0, op_norm(a) * op_norm(a)));
    EXPECT_GE(min_hermitian_eigenvalue(m), -1e-10 * op_norm(a));
    EXPECT_EQ(m, m.adjoint());
  }
}

TEST(PsdPower, Examples) {
  EXPECT_LT(max_abs_diff(psd_power(diag({4.0, 9.0}), 0.5), diag({2.0, 3.0})), 1e-14);
  Rng rng(4);
  const CMatrix p = random_psd(rng, 5);
  EXPECT_LT(op_norm(psd_power(p, 1.0) - p), 1e-9 * op_norm(p));
  EXPECT_IPTT_ERROR(psd_power(diag({4.0}), -1.0), ErrorKind::NotApplicable);
}

TEST(PsdPower, ZeroPowerIsSupportProjection) {
  const CMatrix z = psd_power(diag({0.0, 2.0, 1e-20}), 0.0);
  EXPECT_LT(max_abs_diff(z, diag({0.0, 1.0, 0.0})), 1e-15);
}

TEST(PsdPower, ClipsRoundOffRejectsNegative) {
  EXPECT_LT(max_abs_diff(psd_power(diag({-1e-13, 4.0}), 0.5), diag({0.0, 2.0})), 1e-15);
  EXPECT_IPTT_ERROR(psd_power(diag({-0.1, 1.0}), 0.5), ErrorKind::NotPSD);
  EXPECT_IPTT_ERROR(psd_power(mat({{1, 1}, {0, 1}}), 0.5), ErrorKind::NotPSD);
}

TEST(PsdPower, SemigroupProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix p = random_psd(rng, rng.uniform_int(1, 8));
    const CMatrix half = psd_power(p, 0.5);
    EXPECT_LT(op_norm(half * half - p), 1e-9 * std::max(1.0, op_norm(p)));
    EXPECT_LT(op_norm(psd_power(p, 2.0) - p * p), 1e-9 * std::max(1.0, op_norm(p * p)));
  }
}
