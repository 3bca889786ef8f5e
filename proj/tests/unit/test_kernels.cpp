#include "support.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ridgeless;
using ridgeless::testing::gaussian;
using ridgeless::testing::max_abs;

TEST(Kernel, ClosedFormValue) {
  Vector x(2), y(2);
  x << 0.0, 0.0;
  y << 3.0, 4.0;  // |x - y|^2 = 25
  EXPECT_DOUBLE_EQ(kernel_eval(x, y, KernelSpec(2.0)), std::exp(-25.0 / 4.0));
  EXPECT_DOUBLE_EQ(kernel_eval(x, x, KernelSpec(0.1)), 1.0);
}

TEST(Kernel, BandwidthMustBePositive) {
  EXPECT_THROW(KernelSpec(0.0), DomainError);
  EXPECT_THROW(KernelSpec(-1.0), DomainError);
  EXPECT_THROW((void)KernelSpec(INFINITY), DomainError);
}

TEST(Kernel, MatrixSymmetricUnitDiagonalPsd) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix x = gaussian(30, 4, seed);
    const Matrix k = kernel_matrix(x, KernelSpec(1.5));
    for (Index i = 0; i < 30; ++i) EXPECT_EQ(k(i, i), 1.0);
    EXPECT_EQ(max_abs(k - k.transpose()), 0.0);
    EXPECT_GT(sym_eigen(k).values.minCoeff(), -1e-12);
  }
}

TEST(Kernel, CrossMatchesPointwise) {
  const Matrix a = gaussian(5, 3, 1);
  const Matrix b = gaussian(7, 3, 2);
  const KernelSpec spec(0.7);
  const Matrix k = kernel_cross(a, b, spec);
  ASSERT_EQ(k.rows(), 5);
  ASSERT_EQ(k.cols(), 7);
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 7; ++j) {
      const double d2 = (a.row(i) - b.row(j)).squaredNorm();
      EXPECT_NEAR(k(i, j), std::exp(-d2 / 1.4), 1e-15);
    }
  }
  EXPECT_THROW(kernel_cross(a, gaussian(2, 4, 3), spec), DimensionError);
}

TEST(EffectiveDimension, DiagonalOracle) {
  Vector d(3);
  d << 4.0, 1.0, 0.0;
  // shift = lambda * n = 0.5 * 3
  EXPECT_NEAR(effective_dimension(d, 0.5), 4.0 / 5.5 + 1.0 / 2.5, 1e-15);
  EXPECT_NEAR(effective_dimension(Matrix(d.asDiagonal()), 0.5), 4.0 / 5.5 + 1.0 / 2.5, 1e-15);
  EXPECT_THROW(effective_dimension(d, 0.0), DomainError);
}

TEST(EffectiveDimension, DecreasingInLambda) {
  const Matrix k = kernel_matrix(gaussian(25, 3, 4), KernelSpec(1.0));
  double prev = 25.0;
  for (double lambda = 1e-6; lambda < 10.0; lambda *= 3.0) {
    const double v = effective_dimension(k, lambda);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(EffectiveRidge, IdentityOracle) {
  for (const auto& [n, m] : {std::pair<Index, Index>{100, 50}, {100, 99}, {100, 1}, {37, 5}}) {
    const EffectiveRidge r = effective_ridge(Matrix::Identity(n, n), m);
    const double want = static_cast<double>(n - m) / static_cast<double>(n * m);
    EXPECT_NEAR(r.lambda, want, 1e-10) << n << " " << m;
    EXPECT_DOUBLE_EQ(r.ratio, static_cast<double>(m) / static_cast<double>(n));
    EXPECT_LE(r.residual, 1e-10);
  }
}

TEST(EffectiveRidge, GaussianKernelConditionHolds) {
  const Matrix k = kernel_matrix(gaussian(40, 5, 9), KernelSpec(2.0));
  const SymEigen eig = sym_eigen(k);
  for (const Index m : {1, 5, 20, 39}) {
    const EffectiveRidge r = effective_ridge(eig, m);
    EXPECT_GT(r.lambda, 0.0);
    EXPECT_LE(std::abs(effective_dimension(eig.values, r.lambda) / 40.0 - m / 40.0), 1e-10);
  }
  EXPECT_EQ(effective_ridge(eig, 40).lambda, 0.0);
}

TEST(EffectiveRidge, MonotoneInM) {
  const SymEigen eig = sym_eigen(kernel_matrix(gaussian(30, 4, 2), KernelSpec(1.0)));
  double prev = INFINITY;
  for (Index m = 1; m < 30; m += 4) {
    const double l = effective_ridge(eig, m).lambda;
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(EffectiveRidge, Errors) {
  EXPECT_THROW(effective_ridge(Matrix::Identity(5, 5), 6), DomainError);
  EXPECT_THROW(effective_ridge(Matrix::Identity(5, 5), 0), DomainError);
  Matrix low = Matrix::Zero(5, 5);
  low.topLeftCorner(2, 2).setIdentity();
  EXPECT_THROW(effective_ridge(low, 3), InfeasibleError);
  EXPECT_EQ(effective_ridge(low, 2).lambda, 0.0);
  EXPECT_THROW(effective_ridge(Matrix(3, 4), 1), DimensionError);
}

TEST(VarianceFactor, Values) {
  EXPECT_EQ(variance_factor(2.0), 2.0);
  EXPECT_EQ(variance_factor(0.5), 2.0);
  EXPECT_EQ(variance_factor(10.0), 10.0 / 9.0);
  EXPECT_GT(variance_factor(1.01), 99.0);
  EXPECT_GT(variance_factor(0.99), 99.0);
  EXPECT_THROW(variance_factor(1.0), DomainError);
  EXPECT_THROW(variance_factor(0.0), DomainError);
}

TEST(VarianceFactor, DivergesTowardOne) {
  double prev = 0.0;
  for (double gap = 0.5; gap > 1e-6; gap /= 2.0) {
    const double above = variance_factor(1.0 + gap);
    const double below = variance_factor(1.0 - gap);
    EXPECT_GT(above, prev);
    EXPECT_GT(below, prev);
    prev = std::min(above, below);
  }
}
