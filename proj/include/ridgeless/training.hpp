#pragma once

#include "ridgeless/estimators.hpp"
#include "ridgeless/features.hpp"
#include "ridgeless/numerics.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ridgeless {

enum class LossKind { squared, softmax_cross_entropy };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& name);

struct SGDConfig {
  Index batch_size = 1;
  double learning_rate = 0.1;
  Index iterations = 1;
  std::uint64_t seed = 0;
  // Record every k-th iteration; iteration 0 and the last one are always
  // recorded. 0 records only those two.
  Index record_every = 0;
  // Test hook: every step uses the whole training set in order instead of a
  // sampled batch, which turns the recursion into full-batch gradient descent.
  bool full_batch = false;
};

struct RFTKConfig {
  SGDConfig sgd;
  double trace_weight = 0.0;  // beta
  double omega_rate = 0.0;    // eta
  Index omega_period = 1;     // s
  LossKind loss = LossKind::squared;
};

struct TrainRecord {
  Index iteration = 0;
  double epoch = 0.0;
  double train_loss = 0.0;
  double trace_frobenius = 0.0;
  std::optional<double> test_metric;
};

struct TrainTrace {
  std::vector<TrainRecord> records;
  bool diverged = false;
  std::string diagnostic;
};

// Called at every recorded iteration with the current weights, feature map
// and phi(X_train). The returned value lands in TrainRecord::test_metric.
using TrainMonitor = std::function<std::optional<double>(
    Index iteration, const Matrix& weights, const FeatureMap& fm, const Matrix& train_features)>;

struct TrainResult {
  RFModel model;
  TrainTrace trace;
};

// Mini-batch SGD on the squared loss from W = 0:
//   W <- W - (gamma/b) sum_{i in batch} phi(x_i)^T (phi(x_i) W - y_i),
// batches drawn uniformly with replacement from a generator seeded by cfg.seed.
TrainResult sgd_train(const Matrix& x, const Matrix& y, const FeatureMap& fm,
                      const SGDConfig& cfg, const TrainMonitor& monitor = {});

// Mean absolute gap between the two models' predictions on X.
double stochastic_error(const RFModel& model, const RFModel& reference, const Matrix& x);

// (1/n) sum_i loss(f(x_i), y_i) + beta |phi(X)|_F^2 with f(x) = phi(x) W.
double rftk_loss(const Matrix& weights, const FeatureMap& fm, const Matrix& x, const Matrix& y,
                 double beta, LossKind kind);

// Exact gradients of rftk_loss. For the Omega gradient the data term is taken
// over (x_data, y_data) and the trace term over x_trace.
Matrix rftk_grad_weights(const Matrix& weights, const FeatureMap& fm, const Matrix& x,
                         const Matrix& y, LossKind kind);
Matrix rftk_grad_omega(const Matrix& weights, const FeatureMap& fm, const Matrix& x_data,
                       const Matrix& y_data, const Matrix& x_trace, double beta, LossKind kind);

// Ridgeless random features with a tunable kernel: SGD weight steps on the
// data loss, and every s-th step a gradient step on Omega against the data
// loss of the current batch plus beta times the trace over all of X.
// The returned model carries the learned feature map.
TrainResult rftk_train(const Matrix& x, const Matrix& y, const FeatureMap& initial,
                       const RFTKConfig& cfg, const TrainMonitor& monitor = {});

// CSV with columns iter,epoch,train_loss,trace_frobenius,test_metric.
void write_trace_csv(std::ostream& out, const TrainTrace& trace);

}  // namespace ridgeless
