#include "support.hpp"

#include "ridgeless/data.hpp"
#include "ridgeless/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

using namespace ridgeless;
using ridgeless::testing::gaussian;
using ridgeless::testing::max_abs;

TEST(Libsvm, ParsesSparseRows) {
  std::stringstream in(
      "# header comment\n"
      "1 1:0.5 3:-2\n"
      "\n"
      "-1 2:4   # trailing\n"
      "0\n");
  const Dataset ds = read_libsvm(in);
  ASSERT_EQ(ds.size(), 3);
  ASSERT_EQ(ds.dim(), 3);
  EXPECT_EQ(ds.y(0, 0), 1.0);
  EXPECT_EQ(ds.y(1, 0), -1.0);
  EXPECT_EQ(ds.x(0, 0), 0.5);
  EXPECT_EQ(ds.x(0, 1), 0.0);
  EXPECT_EQ(ds.x(0, 2), -2.0);
  EXPECT_EQ(ds.x(1, 1), 4.0);
  EXPECT_EQ(ds.x.row(2).squaredNorm(), 0.0);
}

TEST(Libsvm, DeclaredWidthPadsAndBounds) {
  std::stringstream in("1 2:1\n");
  EXPECT_EQ(read_libsvm(in, 5).dim(), 5);
  std::stringstream over("1 2:1\n0 6:1\n");
  try {
    read_libsvm(over, 5);
    FAIL() << "expected BoundsError";
  } catch (const BoundsError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Libsvm, MalformedLinesReportLine) {
  for (const std::string bad : {"1 0:3\n", "1 a:3\n", "1 2:\n", "x 1:2\n", "1 2:nan\n", "1 :2\n"}) {
    std::stringstream in("1 1:1\n" + bad);
    try {
      read_libsvm(in);
      FAIL() << "accepted " << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u) << bad;
    }
  }
  std::stringstream empty("# nothing\n\n");
  EXPECT_THROW(read_libsvm(empty), ParseError);
}

TEST(Libsvm, RoundTripExact) {
  Matrix x = gaussian(15, 6, 3);
  for (Index i = 0; i < 15; ++i) x(i, i % 6) = 0.0;  // sparse entries
  Dataset ds{x, gaussian(15, 1, 4), TaskKind::regression, {}};
  std::stringstream buf;
  write_libsvm(buf, ds);
  const Dataset back = read_libsvm(buf, 6);
  EXPECT_EQ(max_abs(back.x - ds.x), 0.0);
  EXPECT_EQ(max_abs(back.y - ds.y), 0.0);
}

TEST(Libsvm, LoadFromFile) {
  const auto dir = ridgeless::testing::scratch_dir("libsvm");
  {
    std::ofstream f(dir / "a.svm");
    f << "2 1:1\n3 2:1\n";
  }
  EXPECT_EQ(load_libsvm(dir / "a.svm").size(), 2);
  EXPECT_THROW(load_libsvm(dir / "missing.svm"), std::runtime_error);
}

TEST(Labels, OneHotAndDecode) {
  const std::vector<double> classes{-1.0, 2.0, 7.0};
  const Matrix y = one_hot({7.0, -1.0, 2.0, 7.0}, classes);
  EXPECT_EQ(y.rows(), 4);
  EXPECT_EQ(y(0, 2), 1.0);
  EXPECT_EQ(y.rowwise().sum().minCoeff(), 1.0);
  EXPECT_EQ(decode_labels(y, classes), (std::vector<double>{7.0, -1.0, 2.0, 7.0}));
  EXPECT_THROW(one_hot({3.0}, classes), DomainError);
  EXPECT_THROW(decode_labels(Matrix::Zero(1, 2), classes), DimensionError);
}

TEST(Labels, AsClassificationSortsClasses) {
  Dataset ds{Matrix::Zero(4, 1), Matrix(4, 1), TaskKind::regression, {}};
  ds.y << 3, 1, 3, 2;
  const Dataset c = as_classification(ds);
  EXPECT_EQ(c.task, TaskKind::classification);
  EXPECT_EQ(c.class_labels, (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(c.y(0, 2), 1.0);
  EXPECT_EQ(c.y(1, 0), 1.0);
}

TEST(Synthetic, MinmaxPrefixConsistentAndNoiseFree) {
  const Dataset small = synthetic_minmax(10, 4, 0.2, 5);
  const Dataset large = synthetic_minmax(30, 4, 0.2, 5);
  EXPECT_EQ(max_abs(large.x.topRows(10) - small.x), 0.0);
  EXPECT_EQ(max_abs(large.y.topRows(10) - small.y), 0.0);
  // Without noise the label is -|w^T x| <= 0 and the max over rows is 0 only by chance.
  const Dataset clean = synthetic_minmax(200, 3, 0.0, 9);
  EXPECT_LE(clean.y.maxCoeff(), 0.0);
}

TEST(Synthetic, MinmaxNoiseScale) {
  const Dataset a = synthetic_minmax(4000, 2, 0.0, 1);
  const Dataset b = synthetic_minmax(4000, 2, 0.5, 1);
  // Noise draws interleave with the x draws, so compare label variances.
  const double var_a = (a.y.array() - a.y.mean()).square().mean();
  const double var_b = (b.y.array() - b.y.mean()).square().mean();
  EXPECT_NEAR(var_b - var_a, 0.25, 0.1);
}

TEST(Synthetic, SlabIsBalancedOneHot) {
  const Dataset ds = synthetic_slab(4000, 5, 2);
  EXPECT_EQ(ds.task, TaskKind::classification);
  EXPECT_EQ(ds.y.cols(), 2);
  EXPECT_EQ(ds.y.rowwise().sum().minCoeff(), 1.0);
  EXPECT_NEAR(ds.y.col(1).mean(), 0.5, 0.03);
}

TEST(Split, SizesDisjointDeterministic) {
  Dataset ds{Matrix(10, 1), Matrix::Zero(10, 1), TaskKind::regression, {}};
  for (Index i = 0; i < 10; ++i) ds.x(i, 0) = static_cast<double>(i);
  const auto [train, test] = split(ds, 0.8, 3);
  EXPECT_EQ(train.size(), 8);
  EXPECT_EQ(test.size(), 2);
  std::set<double> seen;
  for (Index i = 0; i < 8; ++i) seen.insert(train.x(i, 0));
  for (Index i = 0; i < 2; ++i) seen.insert(test.x(i, 0));
  EXPECT_EQ(seen.size(), 10u);
  const auto again = split(ds, 0.8, 3);
  EXPECT_EQ(max_abs(again.first.x - train.x), 0.0);
  EXPECT_EQ(split(ds, 0.01, 0).first.size(), 1);
  EXPECT_EQ(split(ds, 0.99, 0).second.size(), 1);
  EXPECT_THROW(split(ds, 1.0, 0), DomainError);
}

TEST(Standardize, TrainStatisticsAppliedToTest) {
  Dataset train{gaussian(50, 3, 1) * 4.0, Matrix::Zero(50, 1), TaskKind::regression, {}};
  train.x.col(2).setConstant(7.0);
  Dataset test{train.x.topRows(5), Matrix::Zero(5, 1), TaskKind::regression, {}};
  standardize(train, test);
  EXPECT_LT(train.x.colwise().mean().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR((train.x.col(0).array().square()).mean(), 1.0, 1e-12);
  EXPECT_EQ(train.x.col(2).cwiseAbs().maxCoeff(), 0.0);  // constant column
  EXPECT_EQ(max_abs(test.x - train.x.topRows(5)), 0.0);
}

TEST(Metrics, MseAndAccuracy) {
  Matrix p(2, 2), t(2, 2);
  p << 1, 2, 3, 4;
  t << 1, 0, 0, 4;
  EXPECT_DOUBLE_EQ(mean_squared_error(p, t), (4.0 + 9.0) / 2.0);
  Matrix s(3, 2), y(3, 2);
  s << 0.9, 0.1, 0.2, 0.8, 0.6, 0.4;
  y << 1, 0, 1, 0, 1, 0;
  EXPECT_DOUBLE_EQ(accuracy(s, y), 2.0 / 3.0);
  EXPECT_THROW(mean_squared_error(p, Matrix::Zero(2, 1)), DimensionError);
}

TEST(DatasetCsv, Header) {
  Dataset ds{Matrix::Ones(1, 2), Matrix::Zero(1, 1), TaskKind::regression, {}};
  std::stringstream out;
  write_dataset_csv(out, ds);
  EXPECT_EQ(out.str(), "x1,x2,y1\n1,1,0\n");
}
