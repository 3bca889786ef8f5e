#pragma once

#include "ridgeless/data.hpp"
#include "ridgeless/numerics.hpp"
#include "ridgeless/training.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ridgeless {

// Minmax regression task with shared w for train and test rows.
struct SyntheticRegression {
  Index n_train = 2000;
  Index n_test = 500;
  Index dim = 10;
  double noise_sd = 0.2;
  std::uint64_t seed = 0;
};

std::pair<Dataset, Dataset> make_synthetic_regression(const SyntheticRegression& task);

// Two-class slab task, train rows followed by test rows from one draw.
std::pair<Dataset, Dataset> make_synthetic_slab(Index n_train, Index n_test, Index dim,
                                                std::uint64_t seed);

std::vector<std::uint64_t> seed_range(std::uint64_t first, Index count);

// ---------------------------------------------------------------------------
// SGD factors: Delta_t against the ridgeless RF solution per (b, gamma).

struct SgdFactorConfig {
  double bandwidth = 4.0;
  Index num_features = 200;
  std::vector<Index> batch_sizes{8, 32, 256};
  std::vector<double> learning_rates{1.0};
  Index epochs = 20;
  std::vector<std::uint64_t> seeds{0, 1, 2};
};

struct SgdFactorRow {
  Index batch_size = 0;
  double learning_rate = 0.0;
  Index epoch = 0;
  Index iteration = 0;
  double delta_t = 0.0;
  double test_mse = 0.0;
  std::uint64_t seed = 0;
  bool diverged = false;
};

struct SgdFactorResult {
  std::vector<SgdFactorRow> rows;

  // Seed-averaged Delta_t per epoch (index = epoch) for one cell.
  std::vector<double> mean_delta(Index batch_size, double learning_rate) const;
};

// One pass is ceil(n/b) iterations; rows are recorded once per epoch.
SgdFactorResult run_sgd_factor_study(const Dataset& train, const Dataset& test,
                                     const SgdFactorConfig& cfg);

// ---------------------------------------------------------------------------
// Fixed (b, gamma, T) schedules compared by final Delta_T.

struct SgdSchedule {
  Index batch_size = 1;
  double learning_rate = 1.0;
  Index iterations = 1;
};

// b=1, gamma=1/sqrt(n), T=n; b=sqrt(n), gamma=1, T=sqrt(n); b=n, gamma=1, T=sqrt(n).
std::vector<SgdSchedule> equivalent_schedules(Index n);

struct ScheduleRow {
  SgdSchedule schedule;
  std::uint64_t seed = 0;
  double delta_t = 0.0;
  double test_mse = 0.0;
  bool diverged = false;
};

std::vector<ScheduleRow> run_sgd_schedules(const Dataset& train, const Dataset& test,
                                           double bandwidth, Index num_features,
                                           const std::vector<SgdSchedule>& schedules,
                                           const std::vector<std::uint64_t>& seeds);

// ---------------------------------------------------------------------------
// Double descent: test error of RF predictors over M, with kernel baselines.

struct DoubleDescentConfig {
  double bandwidth = 4.0;
  std::vector<Index> feature_counts;
  std::vector<double> lambdas{0.0};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  bool kernel_baseline = true;
  std::uint64_t data_seed = 0;  // reported on kernel rows
};

struct DoubleDescentRow {
  std::string method;  // "rf" or "kernel"
  Index num_features = 0;  // 0 on kernel rows
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;
  double trace = 0.0;  // |phi(X)|_F^2 for rf, Tr K for kernel
  std::optional<double> effective_ridge;  // rf rows with M < n
};

struct DoubleDescentResult {
  Index n_train = 0;
  std::vector<DoubleDescentRow> rows;

  // Mean over seeds of rf test MSE at (M, lambda).
  double mean_rf_test_mse(Index num_features, double lambda) const;
  std::optional<double> kernel_test_mse(double lambda) const;
};

DoubleDescentResult run_double_descent(const Dataset& train, const Dataset& test,
                                       const DoubleDescentConfig& cfg);

// ---------------------------------------------------------------------------
// Method comparison on classification datasets.

enum class Method { kernel_ridge, kernel_ridgeless, rf, rf_sgd, rftk };

std::string to_string(Method m);
Method parse_method(const std::string& name);
std::vector<Method> all_methods();

struct NamedDataset {
  std::string name;
  Dataset data;  // classification, one-hot targets
};

struct ComparisonConfig {
  std::vector<Method> methods = all_methods();
  Index replications = 5;
  std::uint64_t seed = 0;
  double train_frac = 0.8;
  bool standardize = true;
  double bandwidth = 1.0;
  double lambda = 1e-3;  // kernel ridge only
  Index num_features = 200;
  Index batch_size = 32;
  Index epochs = 100;
  double learning_rate = 1.0;
  double trace_weight = 1e-3;
  double omega_rate = 0.1;
  Index omega_period = 1;
  LossKind loss = LossKind::squared;
  Index kernel_cap = 5000;  // skip O(n^3) methods above this training size
};

struct ComparisonRow {
  std::string dataset;
  Method method = Method::rf;
  Index replication = 0;
  std::optional<double> accuracy;  // empty when the method was skipped
};

struct ComparisonSummary {
  std::string dataset;
  Method method = Method::rf;
  double mean = 0.0;
  double sd = 0.0;
  Index count = 0;
  bool skipped = false;
};

struct ComparisonResult {
  std::vector<ComparisonRow> rows;

  std::vector<ComparisonSummary> summary() const;
};

// Replication r splits with seed + r and shares one initial feature map and
// one batch schedule across RF, RF-SGD and RFTK.
ComparisonResult run_rftk_comparison(const std::vector<NamedDataset>& datasets,
                                     const ComparisonConfig& cfg);

// ---------------------------------------------------------------------------

struct VarianceRow {
  double ratio = 0.0;
  double alpha = 0.0;  // NaN at ratio 1
};

std::vector<VarianceRow> variance_factor_curve(const std::vector<double>& ratios);

// CSV writers; column order is fixed and floats use 9 significant digits.
void write_csv(std::ostream& out, const SgdFactorResult& result);
void write_csv(std::ostream& out, const DoubleDescentResult& result);
void write_csv(std::ostream& out, const ComparisonResult& result);
void write_csv(std::ostream& out, const std::vector<VarianceRow>& rows);
void write_summary_table(std::ostream& out, const ComparisonResult& result);

}  // namespace ridgeless
