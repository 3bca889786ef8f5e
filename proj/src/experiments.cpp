#include "ridgeless/experiments.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/estimators.hpp"
#include "ridgeless/features.hpp"
#include "ridgeless/kernels.hpp"
#include "ridgeless/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ridgeless {

namespace {

std::vector<Index> index_range(Index begin, Index end) {
  std::vector<Index> v(static_cast<std::size_t>(end - begin));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

std::pair<Dataset, Dataset> head_tail(const Dataset& all, Index n_train) {
  return {take_rows(all, index_range(0, n_train)), take_rows(all, index_range(n_train, all.size()))};
}

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

// Per-seed state shared by every SGD cell: features, reference predictions.
struct SgdReference {
  FeatureMap fm;
  Matrix phi_test;
  Matrix reference_train;  // f_M(X_train)
};

SgdReference make_reference(const Dataset& train, const Dataset& test, double bandwidth,
                            Index num_features, std::uint64_t seed) {
  FeatureMap fm = sample_feature_map(train.dim(), num_features, bandwidth, seed);
  const Matrix phi = feature_map_apply(fm, train.x);
  const Matrix w = ridgeless_weights(phi, train.y);
  return SgdReference{fm, feature_map_apply(fm, test.x), phi * w};
}

double eigen_kernel_mse(const SymEigen& eig, const Matrix& y, const Matrix& k_test,
                        const Matrix& y_test, double lambda, double* train_mse) {
  const Index n = y.rows();
  Matrix coeffs = eig.vectors.transpose() * y;
  const double shift = lambda * static_cast<double>(n);
  const double cutoff = default_rcond(n, n) * std::max(eig.values(0), 0.0);
  for (Index k = 0; k < eig.values.size(); ++k) {
    const double ev = eig.values(k);
    const bool keep = lambda > 0.0 ? ev + shift > 0.0 : ev > cutoff;
    coeffs.row(k) *= keep ? 1.0 / (ev + shift) : 0.0;
  }
  const Matrix dual = eig.vectors * coeffs;
  // K dual on the training points, reusing the decomposition.
  Matrix fitted_coeffs = eig.vectors.transpose() * dual;
  fitted_coeffs.array().colwise() *= eig.values.array();
  *train_mse = mean_squared_error(eig.vectors * fitted_coeffs, y);
  return mean_squared_error(k_test * dual, y_test);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::pair<Dataset, Dataset> make_synthetic_regression(const SyntheticRegression& task) {
  return head_tail(synthetic_minmax(task.n_train + task.n_test, task.dim, task.noise_sd, task.seed),
                   task.n_train);
}

std::pair<Dataset, Dataset> make_synthetic_slab(Index n_train, Index n_test, Index dim,
                                                std::uint64_t seed) {
  return head_tail(synthetic_slab(n_train + n_test, dim, seed), n_train);
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, Index count) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  std::iota(seeds.begin(), seeds.end(), first);
  return seeds;
}

// ---------------------------------------------------------------------------

std::vector<double> SgdFactorResult::mean_delta(Index batch_size, double learning_rate) const {
  std::map<Index, std::vector<double>> by_epoch;
  for (const auto& r : rows) {
    if (r.batch_size == batch_size && r.learning_rate == learning_rate) {
      by_epoch[r.epoch].push_back(r.delta_t);
    }
  }
  std::vector<double> out;
  for (const auto& [epoch, values] : by_epoch) {
    out.resize(static_cast<std::size_t>(epoch) + 1, std::numeric_limits<double>::quiet_NaN());
    out[static_cast<std::size_t>(epoch)] = mean(values);
  }
  return out;
}

SgdFactorResult run_sgd_factor_study(const Dataset& train, const Dataset& test,
                                     const SgdFactorConfig& cfg) {
  if (cfg.batch_sizes.empty() || cfg.learning_rates.empty() || cfg.seeds.empty()) {
    throw DomainError("run_sgd_factor_study: empty grid");
  }
  if (cfg.epochs < 1) throw DomainError("run_sgd_factor_study: epochs must be >= 1");
  const Index n = train.size();
  SgdFactorResult result;
  for (const auto seed : cfg.seeds) {
    const SgdReference ref = make_reference(train, test, cfg.bandwidth, cfg.num_features, seed);
    for (const Index b : cfg.batch_sizes) {
      for (const double gamma : cfg.learning_rates) {
        const Index per_epoch = ceil_div(n, b);
        SGDConfig sgd;
        sgd.batch_size = b;
        sgd.learning_rate = gamma;
        sgd.iterations = cfg.epochs * per_epoch;
        sgd.record_every = per_epoch;
        sgd.seed = seed;

        std::vector<SgdFactorRow> cell;
        auto monitor = [&](Index t, const Matrix& w, const FeatureMap&, const Matrix& phi) {
          SgdFactorRow row;
          row.batch_size = b;
          row.learning_rate = gamma;
          row.epoch = t / per_epoch;
          row.iteration = t;
          row.delta_t = (phi * w - ref.reference_train).cwiseAbs().mean();
          row.test_mse = mean_squared_error(ref.phi_test * w, test.y);
          row.seed = seed;
          cell.push_back(row);
          return std::optional<double>(row.test_mse);
        };
        const TrainResult run = sgd_train(train.x, train.y, ref.fm, sgd, monitor);
        if (run.trace.diverged) {
          SgdFactorRow row;
          row.batch_size = b;
          row.learning_rate = gamma;
          row.epoch = cell.empty() ? 0 : cell.back().epoch + 1;
          row.iteration = row.epoch * per_epoch;
          row.delta_t = std::numeric_limits<double>::quiet_NaN();
          row.test_mse = std::numeric_limits<double>::quiet_NaN();
          row.seed = seed;
          row.diverged = true;
          cell.push_back(row);
        }
        result.rows.insert(result.rows.end(), cell.begin(), cell.end());
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<SgdSchedule> equivalent_schedules(Index n) {
  const double root = std::sqrt(static_cast<double>(n));
  const auto root_count = std::max<Index>(1, static_cast<Index>(std::llround(root)));
  return {
      {1, 1.0 / root, n},
      {root_count, 1.0, root_count},
      {n, 1.0, root_count},
  };
}

std::vector<ScheduleRow> run_sgd_schedules(const Dataset& train, const Dataset& test,
                                           double bandwidth, Index num_features,
                                           const std::vector<SgdSchedule>& schedules,
                                           const std::vector<std::uint64_t>& seeds) {
  std::vector<ScheduleRow> rows;
  for (const auto seed : seeds) {
    const SgdReference ref = make_reference(train, test, bandwidth, num_features, seed);
    for (const auto& s : schedules) {
      SGDConfig sgd;
      sgd.batch_size = s.batch_size;
      sgd.learning_rate = s.learning_rate;
      sgd.iterations = s.iterations;
      sgd.seed = seed;
      const TrainResult run = sgd_train(train.x, train.y, ref.fm, sgd);
      const Matrix phi = feature_map_apply(ref.fm, train.x);
      ScheduleRow row{s, seed, 0.0, 0.0, run.trace.diverged};
      row.delta_t = (phi * run.model.weights - ref.reference_train).cwiseAbs().mean();
      row.test_mse = mean_squared_error(ref.phi_test * run.model.weights, test.y);
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

double DoubleDescentResult::mean_rf_test_mse(Index num_features, double lambda) const {
  std::vector<double> values;
  for (const auto& r : rows) {
    if (r.method == "rf" && r.num_features == num_features && r.lambda == lambda) {
      values.push_back(r.test_mse);
    }
  }
  return mean(values);
}

std::optional<double> DoubleDescentResult::kernel_test_mse(double lambda) const {
  for (const auto& r : rows) {
    if (r.method == "kernel" && r.lambda == lambda) return r.test_mse;
  }
  return std::nullopt;
}

DoubleDescentResult run_double_descent(const Dataset& train, const Dataset& test,
                                       const DoubleDescentConfig& cfg) {
  if (cfg.feature_counts.empty() || cfg.lambdas.empty() || cfg.seeds.empty()) {
    throw DomainError("run_double_descent: empty grid");
  }
  for (const double lambda : cfg.lambdas) {
    if (!(lambda >= 0.0)) throw DomainError("run_double_descent: lambda must be >= 0");
  }
  const Index n = train.size();
  std::vector<Index> counts = cfg.feature_counts;
  std::sort(counts.begin(), counts.end());
  std::vector<double> lambdas = cfg.lambdas;
  std::sort(lambdas.begin(), lambdas.end());

  DoubleDescentResult result;
  result.n_train = n;

  // One decomposition of K serves the kernel baselines and effective ridges.
  const bool any_under = counts.front() < n;
  std::optional<SymEigen> kernel_eig;
  if (cfg.kernel_baseline || any_under) {
    kernel_eig = sym_eigen(kernel_matrix(train.x, KernelSpec(cfg.bandwidth)));
  }
  if (cfg.kernel_baseline) {
    const Matrix k_test = kernel_cross(test.x, train.x, KernelSpec(cfg.bandwidth));
    for (const double lambda : lambdas) {
      DoubleDescentRow row;
      row.method = "kernel";
      row.lambda = lambda;
      row.seed = cfg.data_seed;
      row.test_mse = eigen_kernel_mse(*kernel_eig, train.y, k_test, test.y, lambda, &row.train_mse);
      row.trace = static_cast<double>(n);
      result.rows.push_back(row);
    }
  }

  for (const Index m : counts) {
    std::optional<double> eff;
    if (m < n) {
      try {
        eff = effective_ridge(*kernel_eig, m).lambda;
      } catch (const InfeasibleError&) {
        eff.reset();
      }
    }
    for (const double lambda : lambdas) {
      for (const auto seed : cfg.seeds) {
        const FeatureMap fm = sample_feature_map(train.dim(), m, cfg.bandwidth, seed);
        const Matrix phi = feature_map_apply(fm, train.x);
        const Matrix w = lambda > 0.0 ? ridge_weights(phi, train.y, lambda)
                                      : ridgeless_weights(phi, train.y);
        DoubleDescentRow row;
        row.method = "rf";
        row.num_features = m;
        row.lambda = lambda;
        row.seed = seed;
        row.train_mse = mean_squared_error(phi * w, train.y);
        row.test_mse = mean_squared_error(feature_map_apply(fm, test.x) * w, test.y);
        row.trace = phi.squaredNorm();
        row.effective_ridge = eff;
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::string to_string(Method m) {
  switch (m) {
    case Method::kernel_ridge: return "kernel-ridge";
    case Method::kernel_ridgeless: return "kernel-ridgeless";
    case Method::rf: return "rf";
    case Method::rf_sgd: return "rf-sgd";
    case Method::rftk: return "rftk";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (const Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown method '" + name + "'");
}

std::vector<Method> all_methods() {
  return {Method::kernel_ridge, Method::kernel_ridgeless, Method::rf, Method::rf_sgd,
          Method::rftk};
}

std::vector<ComparisonSummary> ComparisonResult::summary() const {
  std::vector<ComparisonSummary> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const ComparisonSummary& s) {
      return s.dataset == row.dataset && s.method == row.method;
    });
    if (it == out.end()) {
      out.push_back(ComparisonSummary{row.dataset, row.method, 0.0, 0.0, 0, false});
      it = out.end() - 1;
    }
    (void)it;
  }
  for (auto& s : out) {
    std::vector<double> acc;
    bool skipped = false;
    for (const auto& row : rows) {
      if (row.dataset != s.dataset || row.method != s.method) continue;
      if (row.accuracy) acc.push_back(*row.accuracy);
      else skipped = true;
    }
    s.count = static_cast<Index>(acc.size());
    s.skipped = skipped && acc.empty();
    if (!acc.empty()) {
      s.mean = mean(acc);
      double ss = 0.0;
      for (const double a : acc) ss += (a - s.mean) * (a - s.mean);
      s.sd = acc.size() > 1 ? std::sqrt(ss / static_cast<double>(acc.size() - 1)) : 0.0;
    }
  }
  return out;
}

ComparisonResult run_rftk_comparison(const std::vector<NamedDataset>& datasets,
                                     const ComparisonConfig& cfg) {
  if (cfg.replications < 1) throw DomainError("run_rftk_comparison: replications must be >= 1");
  ComparisonResult result;
  for (const auto& named : datasets) {
    if (named.data.task != TaskKind::classification) {
      throw DomainError("run_rftk_comparison: dataset '" + named.name + "' is not a classification task");
    }
    for (Index rep = 0; rep < cfg.replications; ++rep) {
      const std::uint64_t rep_seed = cfg.seed + static_cast<std::uint64_t>(rep);
      auto [train, test] = split(named.data, cfg.train_frac, rep_seed);
      if (cfg.standardize) standardize(train, test);
      const Index n = train.size();
      const KernelSpec spec(cfg.bandwidth);
      const FeatureMap fm =
          sample_feature_map(train.dim(), cfg.num_features, cfg.bandwidth, rep_seed + 1000);

      SGDConfig sgd;
      sgd.batch_size = cfg.batch_size;
      sgd.learning_rate = cfg.learning_rate;
      sgd.iterations = cfg.epochs * ceil_div(n, cfg.batch_size);
      sgd.seed = rep_seed + 2000;

      for (const Method method : cfg.methods) {
        ComparisonRow row{named.name, method, rep, std::nullopt};
        const bool cubic = method == Method::kernel_ridge || method == Method::kernel_ridgeless;
        if (cubic && n > cfg.kernel_cap) {
          result.rows.push_back(row);
          continue;
        }
        Matrix scores;
        switch (method) {
          case Method::kernel_ridge:
            scores = predict(fit_kernel_ridge(train.x, train.y, spec, cfg.lambda), test.x);
            break;
          case Method::kernel_ridgeless:
            scores = predict(fit_kernel_ridgeless(train.x, train.y, spec), test.x);
            break;
          case Method::rf:
            scores = predict(fit_rf_ridgeless(train.x, train.y, fm), test.x);
            break;
          case Method::rf_sgd: {
            if (cfg.loss == LossKind::squared) {
              scores = predict(sgd_train(train.x, train.y, fm, sgd).model, test.x);
            } else {
              RFTKConfig plain;
              plain.sgd = sgd;
              plain.loss = cfg.loss;
              scores = predict(rftk_train(train.x, train.y, fm, plain).model, test.x);
            }
            break;
          }
          case Method::rftk: {
            RFTKConfig rftk;
            rftk.sgd = sgd;
            rftk.trace_weight = cfg.trace_weight;
            rftk.omega_rate = cfg.omega_rate;
            rftk.omega_period = cfg.omega_period;
            rftk.loss = cfg.loss;
            scores = predict(rftk_train(train.x, train.y, fm, rftk).model, test.x);
            break;
          }
        }
        row.accuracy = scores.allFinite() ? accuracy(scores, test.y) : 0.0;
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<VarianceRow> variance_factor_curve(const std::vector<double>& ratios) {
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  std::vector<VarianceRow> rows;
  rows.reserve(sorted.size());
  for (const double r : sorted) {
    rows.push_back({r, r == 1.0 ? std::numeric_limits<double>::quiet_NaN() : variance_factor(r)});
  }
  return rows;
}

void write_csv(std::ostream& out, const SgdFactorResult& result) {
  out << "b,gamma,epoch,iter,delta_t,test_mse,seed\n";
  for (const auto& r : result.rows) {
    out << r.batch_size << ',' << format_sig9(r.learning_rate) << ',' << r.epoch << ','
        << r.iteration << ',' << format_sig9(r.delta_t) << ',' << format_sig9(r.test_mse) << ','
        << r.seed << '\n';
  }
}

void write_csv(std::ostream& out, const DoubleDescentResult& result) {
  out << "M,ratio,lambda,seed,train_mse,test_mse,method\n";
  for (const auto& r : result.rows) {
    if (r.method == "kernel") {
      out << ",,";
    } else {
      out << r.num_features << ','
          << format_sig9(static_cast<double>(r.num_features) / static_cast<double>(result.n_train))
          << ',';
    }
    out << format_sig9(r.lambda) << ',' << r.seed << ',' << format_sig9(r.train_mse) << ','
        << format_sig9(r.test_mse) << ',' << r.method << '\n';
  }
}

void write_csv(std::ostream& out, const ComparisonResult& result) {
  out << "dataset,method,replication,accuracy\n";
  for (const auto& r : result.rows) {
    out << r.dataset << ',' << to_string(r.method) << ',' << r.replication << ','
        << (r.accuracy ? format_sig9(*r.accuracy) : std::string("/")) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<VarianceRow>& rows) {
  out << "ratio,alpha\n";
  for (const auto& r : rows) out << format_sig9(r.ratio) << ',' << format_sig9(r.alpha) << '\n';
}

void write_summary_table(std::ostream& out, const ComparisonResult& result) {
  const auto summary = result.summary();
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  for (const auto& s : summary) {
    if (std::find(datasets.begin(), datasets.end(), s.dataset) == datasets.end()) {
      datasets.push_back(s.dataset);
    }
    if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) {
      methods.push_back(s.method);
    }
  }
  out << std::left << std::setw(14) << "dataset";
  for (const Method m : methods) out << std::setw(20) << to_string(m);
  out << '\n';
  for (const auto& d : datasets) {
    out << std::setw(14) << d;
    for (const Method m : methods) {
      std::string cell = "-";
      for (const auto& s : summary) {
        if (s.dataset != d || s.method != m) continue;
        if (s.skipped) {
          cell = "/";
        } else {
          std::ostringstream c;
          c << std::fixed << std::setprecision(2) << 100.0 * s.mean << " +- " << 100.0 * s.sd;
          cell = c.str();
        }
      }
      out << std::setw(20) << cell;
    }
    out << '\n';
  }
}

}  // namespace ridgeless
