#include "ridgeless/training.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/text_io.hpp"

#include <cmath>
#include <ostream>
#include <random>

namespace ridgeless {

namespace {

void validate(const SGDConfig& cfg) {
  if (cfg.batch_size < 1) throw DomainError("SGDConfig: batch_size must be >= 1");
  if (cfg.iterations < 1) throw DomainError("SGDConfig: iterations must be >= 1");
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw DomainError("SGDConfig: learning_rate must be finite and >= 0");
  }
  if (cfg.record_every < 0) throw DomainError("SGDConfig: record_every must be >= 0");
}

void validate(const RFTKConfig& cfg) {
  validate(cfg.sgd);
  if (cfg.omega_period < 1) throw DomainError("RFTKConfig: omega_period must be >= 1");
  if (!(cfg.trace_weight >= 0.0)) throw DomainError("RFTKConfig: trace_weight must be >= 0");
  if (!(cfg.omega_rate >= 0.0)) throw DomainError("RFTKConfig: omega_rate must be >= 0");
}

void check_training_set(const Matrix& x, const Matrix& y, const FeatureMap& fm,
                        const char* who) {
  if (x.rows() != y.rows() || x.rows() == 0) {
    throw DimensionError(std::string(who) + ": need matching, non-empty X and Y");
  }
  if (x.cols() != fm.input_dim()) {
    throw DimensionError(std::string(who) + ": X has " + std::to_string(x.cols()) +
                         " columns, feature map expects " + std::to_string(fm.input_dim()));
  }
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix p = logits;
  for (Index i = 0; i < p.rows(); ++i) {
    const double top = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - top).exp().matrix();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

// dloss/df per row: f - y for 1/2 squared error, softmax(f) - y for CE.
Matrix prediction_residual(const Matrix& outputs, const Matrix& y, LossKind kind) {
  if (kind == LossKind::squared) return outputs - y;
  return softmax_rows(outputs) - y;
}

double mean_loss(const Matrix& outputs, const Matrix& y, LossKind kind) {
  const double n = static_cast<double>(outputs.rows());
  if (kind == LossKind::squared) return (outputs - y).squaredNorm() / n;
  double total = 0.0;
  for (Index i = 0; i < outputs.rows(); ++i) {
    const double top = outputs.row(i).maxCoeff();
    const double lse = top + std::log((outputs.row(i).array() - top).exp().sum());
    total += lse * y.row(i).sum() - outputs.row(i).dot(y.row(i));
  }
  return total / n;
}

// Shared by both trainers so that RFTK with eta = beta = 0 reproduces SGD
// bit for bit.
void weight_step(Matrix& w, const Matrix& batch_features, const Matrix& batch_targets,
                 double gamma, LossKind kind) {
  const Matrix residual = prediction_residual(batch_features * w, batch_targets, kind);
  const double step = gamma / static_cast<double>(batch_features.rows());
  w.noalias() -= step * (batch_features.transpose() * residual);
}

class BatchSampler {
 public:
  BatchSampler(Index n, const SGDConfig& cfg)
      : full_(cfg.full_batch),
        rng_(cfg.seed),
        pick_(0, n - 1),
        indices_(static_cast<std::size_t>(cfg.full_batch ? n : cfg.batch_size)) {
    if (full_) {
      for (Index i = 0; i < n; ++i) indices_[static_cast<std::size_t>(i)] = i;
    }
  }

  const std::vector<Index>& next() {
    if (!full_) {
      for (auto& i : indices_) i = pick_(rng_);
    }
    return indices_;
  }

 private:
  bool full_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<Index> pick_;
  std::vector<Index> indices_;
};

struct Recorder {
  const Matrix& y;
  LossKind kind;
  Index n;
  Index batch;
  Index every;
  Index last;
  const TrainMonitor& monitor;
  TrainTrace& trace;

  bool due(Index t) const { return t == 0 || t == last || (every > 0 && t % every == 0); }

  void record(Index t, const Matrix& w, const FeatureMap& fm, const Matrix& phi) {
    TrainRecord r;
    r.iteration = t;
    r.epoch = static_cast<double>(t) * static_cast<double>(batch) / static_cast<double>(n);
    r.train_loss = mean_loss(phi * w, y, kind);
    r.trace_frobenius = phi.squaredNorm();
    if (monitor) r.test_metric = monitor(t, w, fm, phi);
    trace.records.push_back(r);
  }
};

TrainResult run_training(const Matrix& x, const Matrix& y, const FeatureMap& initial,
                         const RFTKConfig& cfg, const TrainMonitor& monitor) {
  const SGDConfig& sgd = cfg.sgd;
  const Index n = x.rows();
  FeatureMap fm = initial;
  Matrix phi = feature_map_apply(fm, x);
  Matrix w = Matrix::Zero(fm.num_features(), y.cols());
  Matrix w_prev = w;

  TrainTrace trace;
  const Index batch = sgd.full_batch ? n : sgd.batch_size;
  Recorder recorder{y, cfg.loss, n, batch, sgd.record_every, sgd.iterations, monitor, trace};
  recorder.record(0, w, fm, phi);

  const bool tune_omega = cfg.omega_rate > 0.0;
  BatchSampler sampler(n, sgd);
  for (Index t = 1; t <= sgd.iterations; ++t) {
    const auto& idx = sampler.next();
    const Matrix batch_features = phi(idx, Eigen::all);
    const Matrix batch_targets = y(idx, Eigen::all);
    w_prev = w;
    weight_step(w, batch_features, batch_targets, sgd.learning_rate, cfg.loss);
    if (!w.allFinite()) {
      w = w_prev;
      trace.diverged = true;
      trace.diagnostic = "non-finite weights at iteration " + std::to_string(t);
      break;
    }

    if (tune_omega && t % cfg.omega_period == 0) {
      const Matrix batch_inputs = x(idx, Eigen::all);
      const Matrix grad =
          rftk_grad_omega(w, fm, batch_inputs, batch_targets, x, cfg.trace_weight, cfg.loss);
      Matrix omega = fm.omega() - cfg.omega_rate * grad;
      if (!omega.allFinite()) {
        trace.diverged = true;
        trace.diagnostic = "non-finite frequencies at iteration " + std::to_string(t);
        break;
      }
      fm = fm.with_omega(std::move(omega));
      phi = feature_map_apply(fm, x);
    }

    if (recorder.due(t)) {
      recorder.record(t, w, fm, phi);
      if (!std::isfinite(trace.records.back().train_loss)) {
        trace.diverged = true;
        trace.diagnostic = "non-finite training loss at iteration " + std::to_string(t);
        break;
      }
    }
  }
  return TrainResult{RFModel{std::move(w), std::move(fm)}, std::move(trace)};
}

}  // namespace

std::string to_string(LossKind kind) {
  return kind == LossKind::squared ? "squared" : "softmax";
}

LossKind parse_loss_kind(const std::string& name) {
  if (name == "squared") return LossKind::squared;
  if (name == "softmax" || name == "softmax_cross_entropy" || name == "cross-entropy") {
    return LossKind::softmax_cross_entropy;
  }
  throw DomainError("unknown loss kind '" + name + "'");
}

TrainResult sgd_train(const Matrix& x, const Matrix& y, const FeatureMap& fm,
                      const SGDConfig& cfg, const TrainMonitor& monitor) {
  validate(cfg);
  check_training_set(x, y, fm, "sgd_train");
  RFTKConfig plain;
  plain.sgd = cfg;
  return run_training(x, y, fm, plain, monitor);
}

double stochastic_error(const RFModel& model, const RFModel& reference, const Matrix& x) {
  if (!(model.features == reference.features)) {
    throw ContractError("stochastic_error: models use different feature maps");
  }
  const Matrix phi = feature_map_apply(model.features, x);
  return (phi * (model.weights - reference.weights)).cwiseAbs().mean();
}

double rftk_loss(const Matrix& weights, const FeatureMap& fm, const Matrix& x, const Matrix& y,
                 double beta, LossKind kind) {
  check_training_set(x, y, fm, "rftk_loss");
  const Matrix phi = feature_map_apply(fm, x);
  return mean_loss(phi * weights, y, kind) + beta * phi.squaredNorm();
}

Matrix rftk_grad_weights(const Matrix& weights, const FeatureMap& fm, const Matrix& x,
                         const Matrix& y, LossKind kind) {
  check_training_set(x, y, fm, "rftk_grad_weights");
  const Matrix phi = feature_map_apply(fm, x);
  Matrix g = prediction_residual(phi * weights, y, kind);
  // Squared error (f - y)^2 carries the factor 2 that the residual omits.
  const double factor = (kind == LossKind::squared ? 2.0 : 1.0) / static_cast<double>(x.rows());
  return factor * (phi.transpose() * g);
}

Matrix rftk_grad_omega(const Matrix& weights, const FeatureMap& fm, const Matrix& x_data,
                       const Matrix& y_data, const Matrix& x_trace, double beta,
                       LossKind kind) {
  check_training_set(x_data, y_data, fm, "rftk_grad_omega");
  const Matrix z = feature_arguments(fm, x_data);
  const double amp = fm.scale() / std::sqrt(static_cast<double>(fm.num_features()));
  const Matrix phi = amp * z.array().cos().matrix();
  const Matrix g = prediction_residual(phi * weights, y_data, kind);
  const double factor =
      (kind == LossKind::squared ? 2.0 : 1.0) / static_cast<double>(x_data.rows());
  // dL/dphi = factor * g W^T, dphi/dz = -amp sin z.
  const Matrix dz =
      ((g * weights.transpose()).array() * (-amp * factor) * z.array().sin()).matrix();
  Matrix grad = x_data.transpose() * dz;
  if (beta != 0.0) grad += beta * frobenius_grad_omega(fm, x_trace);
  return grad;
}

TrainResult rftk_train(const Matrix& x, const Matrix& y, const FeatureMap& initial,
                       const RFTKConfig& cfg, const TrainMonitor& monitor) {
  validate(cfg);
  check_training_set(x, y, initial, "rftk_train");
  return run_training(x, y, initial, cfg, monitor);
}

void write_trace_csv(std::ostream& out, const TrainTrace& trace) {
  out << "iter,epoch,train_loss,trace_frobenius,test_metric\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_sig9(r.epoch) << ',' << format_sig9(r.train_loss) << ','
        << format_sig9(r.trace_frobenius) << ','
        << (r.test_metric ? format_sig9(*r.test_metric) : std::string()) << '\n';
  }
}

}  // namespace ridgeless
