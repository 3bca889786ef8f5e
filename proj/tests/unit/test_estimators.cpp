#include "support.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/estimators.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ridgeless;
using ridgeless::testing::gaussian;
using ridgeless::testing::max_abs;
using ridgeless::testing::svd_pinv;

TEST(KernelRidgeless, InterpolatesFullRankKernel) {
  const Matrix x = gaussian(40, 3, 1);
  const Matrix y = gaussian(40, 2, 2);
  const KernelModel m = fit_kernel_ridgeless(x, y, KernelSpec(1.0));
  EXPECT_LT(max_abs(predict(m, x) - y), 1e-6);
  EXPECT_EQ(m.ridge, 0.0);
}

TEST(KernelRidge, MatchesDirectSolve) {
  const Matrix x = gaussian(30, 4, 3);
  const Matrix y = gaussian(30, 1, 4);
  const KernelSpec spec(2.0);
  const double lambda = 0.05;
  Matrix a = kernel_matrix(x, spec);
  a.diagonal().array() += lambda * 30.0;
  const Matrix want = a.fullPivLu().solve(y);
  const KernelModel m = fit_kernel_ridge(x, y, spec, lambda);
  EXPECT_LT(max_abs(m.dual_coeffs - want), 1e-10);
  EXPECT_THROW(fit_kernel_ridge(x, y, spec, 0.0), DomainError);
}

TEST(RFRidgeless, MatchesSvdPseudoInverseBothRegimes) {
  const Matrix x = gaussian(25, 3, 5);
  const Matrix y = gaussian(25, 2, 6);
  for (const Index m : {5, 25, 60}) {
    const FeatureMap fm = sample_feature_map(3, m, 1.0, 7 + m);
    const Matrix phi = feature_map_apply(fm, x);
    const Matrix want = svd_pinv(phi, 1e-12) * y;
    const RFModel got = fit_rf_ridgeless(x, y, fm);
    EXPECT_LT(max_abs(got.weights - want), 1e-7 * (1.0 + max_abs(want))) << "M=" << m;
  }
}

TEST(RFRidgeless, OverparameterizedInterpolates) {
  const Matrix x = gaussian(50, 4, 9);
  const Matrix y = gaussian(50, 1, 10);
  const RFModel m = fit_rf_ridgeless(x, y, sample_feature_map(4, 200, 1.0, 3));
  EXPECT_LT((predict(m, x) - y).squaredNorm() / 50.0, 1e-12);
}

TEST(RFRidge, PrimalAndDualAgree) {
  // (phi^T phi + s I)^{-1} phi^T Y = phi^T (phi phi^T + s I)^{-1} Y
  const Matrix x = gaussian(20, 3, 11);
  const Matrix y = gaussian(20, 1, 12);
  const double lambda = 0.01;
  for (const Index m : {10, 40}) {
    const Matrix phi = feature_map_apply(sample_feature_map(3, m, 1.0, 4), x);
    Matrix primal = phi.transpose() * phi;
    primal.diagonal().array() += lambda * 20.0;
    Matrix dual = phi * phi.transpose();
    dual.diagonal().array() += lambda * 20.0;
    const Matrix w1 = primal.fullPivLu().solve(phi.transpose() * y);
    const Matrix w2 = phi.transpose() * dual.fullPivLu().solve(y);
    EXPECT_LT(max_abs(w1 - w2), 1e-10);
    EXPECT_LT(max_abs(ridge_weights(phi, y, lambda) - w1), 1e-10);
  }
}

TEST(RFRidge, ShrinksTowardRidgelessAsLambdaVanishes) {
  const Matrix x = gaussian(30, 3, 13);
  const Matrix y = gaussian(30, 1, 14);
  const Matrix phi = feature_map_apply(sample_feature_map(3, 10, 1.0, 1), x);
  const Matrix w0 = ridgeless_weights(phi, y);
  double prev = INFINITY;
  for (double lambda = 1.0; lambda > 1e-9; lambda /= 10.0) {
    const double gap = max_abs(ridge_weights(phi, y, lambda) - w0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(GradientDescent, ClosedFormMatchesIteration) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Matrix x = gaussian(20, 5, seed);
    const Matrix y = gaussian(20, 1, seed + 50);
    for (const Index m : {8, 40}) {
      const FeatureMap fm = sample_feature_map(5, m, 2.0, seed);
      const Matrix phi = feature_map_apply(fm, x);
      const double gamma = 0.5;
      Matrix w = Matrix::Zero(m, 1);
      for (Index t = 1; t <= 60; ++t) {
        w -= (gamma / 20.0) * phi.transpose() * (phi * w - y);
        const GDSolution s = gd_closed_form(x, y, fm, gamma, t);
        EXPECT_LT(max_abs(s.model.weights - w), 1e-10);
        EXPECT_TRUE(s.step_within_bound);
      }
    }
  }
}

TEST(GradientDescent, ConvergesToRidgeless) {
  const Matrix x = gaussian(15, 2, 3);
  const Matrix y = gaussian(15, 1, 4);
  const Matrix phi = feature_map_apply(sample_feature_map(2, 40, 1.0, 2), x);
  const Matrix w = gd_weights(phi, y, 1.0, 2000000);
  EXPECT_LT(max_abs(phi * w - phi * ridgeless_weights(phi, y)), 1e-6);
}

TEST(GradientDescent, ZeroStepsAndBoundFlag) {
  const Matrix phi = gaussian(10, 4, 1);
  const Matrix y = gaussian(10, 1, 2);
  EXPECT_EQ(max_abs(gd_weights(phi, y, 1.0, 0)), 0.0);
  bool ok = true;
  gd_weights(phi, y, 1e6, 3, &ok);
  EXPECT_FALSE(ok);
  EXPECT_THROW(gd_weights(phi, y, 1.0, -1), DomainError);
}

TEST(Predict, ShapeChecks) {
  const FeatureMap fm = sample_feature_map(3, 5, 1.0, 0);
  const RFModel m{Matrix::Zero(5, 1), fm};
  EXPECT_THROW(predict(m, Matrix::Zero(2, 4)), DimensionError);
  EXPECT_THROW(fit_rf_ridgeless(Matrix::Zero(3, 3), Matrix::Zero(2, 1), fm), DimensionError);
}

TEST(ModelIO, RoundTripBothKinds) {
  const Matrix x = gaussian(12, 3, 1);
  const Matrix y = gaussian(12, 2, 2);
  const Model models[] = {fit_kernel_ridge(x, y, KernelSpec(0.7), 0.003),
                          fit_rf_ridgeless(x, y, sample_feature_map(3, 9, 1.3, 42))};
  for (const Model& m : models) {
    std::stringstream buf;
    write_model(buf, m);
    const Model back = read_model(buf);
    ASSERT_EQ(back.index(), m.index());
    EXPECT_EQ(max_abs(predict(back, x) - predict(m, x)), 0.0);
  }
}

TEST(ModelIO, Errors) {
  std::stringstream empty("");
  EXPECT_THROW(read_model(empty), ParseError);
  std::stringstream bad("something else\n");
  EXPECT_THROW(read_model(bad), ParseError);
  std::stringstream truncated("ridgeless-rf-model v1\n2 1\n0.5\n");
  EXPECT_THROW(read_model(truncated), ParseError);
}
