#include "run_config.hpp"

#include "ridgeless/data.hpp"
#include "ridgeless/errors.hpp"
#include "ridgeless/estimators.hpp"
#include "ridgeless/experiments.hpp"
#include "ridgeless/features.hpp"
#include "ridgeless/text_io.hpp"
#include "ridgeless/training.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

namespace fs = std::filesystem;
using namespace ridgeless;
using ridgeless::cli::RunConfig;

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

// Bad combinations of otherwise valid fields; reported like CLI11 errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

bool use_standardize(const RunConfig& cfg) {
  if (cfg.standardize == "auto") return !cfg.data.empty();
  return cfg.standardize == "on";
}

Dataset load_file(const std::string& path, const std::string& task) {
  Dataset ds = load_libsvm(path);
  return task == "classification" ? as_classification(ds) : ds;
}

std::pair<Dataset, Dataset> load_split(const RunConfig& cfg) {
  std::pair<Dataset, Dataset> parts;
  if (!cfg.data.empty()) {
    parts = split(load_file(cfg.data, cfg.task), cfg.train_frac, cfg.data_seed);
  } else if (cfg.synthetic == "slab") {
    parts = make_synthetic_slab(cfg.n_train, cfg.n_test, cfg.dim, cfg.data_seed);
  } else {
    parts = make_synthetic_regression(
        SyntheticRegression{cfg.n_train, cfg.n_test, cfg.dim, cfg.noise_sd, cfg.data_seed});
  }
  if (use_standardize(cfg)) standardize(parts.first, parts.second);
  return parts;
}

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

SGDConfig sgd_config(const RunConfig& cfg, Index n) {
  SGDConfig sgd;
  sgd.batch_size = cfg.batch_size;
  sgd.learning_rate = cfg.learning_rate;
  sgd.iterations = cfg.iterations > 0 ? cfg.iterations : cfg.epochs * ceil_div(n, cfg.batch_size);
  sgd.seed = cfg.seed;
  sgd.record_every = ceil_div(n, cfg.batch_size);
  return sgd;
}

std::vector<std::uint64_t> seeds_of(const RunConfig& cfg) { return seed_range(cfg.seed, cfg.seeds); }

// ---------------------------------------------------------------------------

int cmd_fit(const RunConfig& cfg) {
  const auto [train, test] = load_split(cfg);
  const Method method = parse_method(cfg.method);
  if (method == Method::kernel_ridge && cfg.lambda <= 0.0) {
    throw UsageError("--lambda: kernel-ridge needs lambda > 0");
  }
  if ((method == Method::rf_sgd || method == Method::rftk) && cfg.lambda > 0.0) {
    throw UsageError("--lambda: " + cfg.method + " is ridgeless, lambda must be 0");
  }
  const LossKind loss = parse_loss_kind(cfg.loss);
  if (loss == LossKind::softmax_cross_entropy && train.task != TaskKind::classification) {
    throw UsageError("--loss: softmax needs a classification task");
  }

  const KernelSpec spec(cfg.bandwidth);
  std::optional<Model> model;
  std::optional<TrainTrace> trace;
  switch (method) {
    case Method::kernel_ridge:
      model = fit_kernel_ridge(train.x, train.y, spec, cfg.lambda);
      break;
    case Method::kernel_ridgeless:
      model = fit_kernel_ridgeless(train.x, train.y, spec);
      break;
    case Method::rf: {
      const FeatureMap fm = sample_feature_map(train.dim(), cfg.features, cfg.bandwidth, cfg.seed);
      model = cfg.lambda > 0.0 ? fit_rf_ridge(train.x, train.y, fm, cfg.lambda)
                               : fit_rf_ridgeless(train.x, train.y, fm);
      break;
    }
    case Method::rf_sgd:
    case Method::rftk: {
      const FeatureMap fm = sample_feature_map(train.dim(), cfg.features, cfg.bandwidth, cfg.seed);
      RFTKConfig rftk;
      rftk.sgd = sgd_config(cfg, train.size());
      rftk.loss = loss;
      if (method == Method::rftk) {
        rftk.trace_weight = cfg.trace_weight;
        rftk.omega_rate = cfg.omega_rate;
        rftk.omega_period = cfg.omega_period;
      }
      TrainResult result = method == Method::rf_sgd && loss == LossKind::squared
                               ? sgd_train(train.x, train.y, fm, rftk.sgd)
                               : rftk_train(train.x, train.y, fm, rftk);
      if (result.trace.diverged) std::cerr << "warning: " << result.trace.diagnostic << '\n';
      model = std::move(result.model);
      trace = std::move(result.trace);
      break;
    }
  }

  const Matrix train_pred = predict(*model, train.x);
  const Matrix test_pred = predict(*model, test.x);
  std::ostringstream line;
  line << "method=" << cfg.method << " n_train=" << train.size() << " n_test=" << test.size();
  if (method != Method::kernel_ridge && method != Method::kernel_ridgeless) {
    line << " features=" << cfg.features;
  }
  line << " bandwidth=" << format_sig9(cfg.bandwidth);
  if (cfg.lambda > 0.0) line << " lambda=" << format_sig9(cfg.lambda);
  line << " train_mse=" << format_sig9(mean_squared_error(train_pred, train.y))
       << " test_mse=" << format_sig9(mean_squared_error(test_pred, test.y));
  if (train.task == TaskKind::classification) {
    line << " train_accuracy=" << format_sig9(accuracy(train_pred, train.y))
         << " test_accuracy=" << format_sig9(accuracy(test_pred, test.y));
  }
  std::cout << line.str() << '\n';

  const fs::path path = cli::output_path(cfg, "model.txt");
  {
    std::ofstream out = open_output(path);
    write_model(out, *model);
  }
  std::cout << "wrote " << path.string() << '\n';
  if (trace && !cfg.trace_output.empty()) {
    std::ofstream out = open_output(cfg.trace_output);
    write_trace_csv(out, *trace);
    std::cout << "wrote " << cfg.trace_output << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

std::size_t count_rows(const std::string& csv) {
  std::size_t lines = 0;
  for (const char c : csv) lines += c == '\n' ? 1 : 0;
  return lines == 0 ? 0 : lines - 1;
}

std::vector<double> default_variance_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) {
    if (k != 10) grid.push_back(k / 10.0);
  }
  return grid;
}

std::string run_experiment(const RunConfig& cfg) {
  std::ostringstream csv;
  if (cfg.experiment == "variance-curve") {
    write_csv(csv, variance_factor_curve(cfg.ratios.empty() ? default_variance_grid() : cfg.ratios));
    return csv.str();
  }
  if (cfg.experiment == "sgd-factors") {
    const auto [train, test] = load_split(cfg);
    if (train.task != TaskKind::regression) throw UsageError("sgd-factors needs a regression task");
    SgdFactorConfig study;
    study.bandwidth = cfg.bandwidth;
    study.num_features = cfg.features;
    study.batch_sizes = cfg.batch_sizes;
    study.learning_rates = cfg.learning_rates;
    study.epochs = cfg.epochs;
    study.seeds = seeds_of(cfg);
    write_csv(csv, run_sgd_factor_study(train, test, study));
    return csv.str();
  }
  if (cfg.experiment == "double-descent") {
    const auto [train, test] = load_split(cfg);
    DoubleDescentConfig sweep;
    sweep.bandwidth = cfg.bandwidth;
    const std::vector<double> ratios =
        cfg.ratios.empty() ? std::vector<double>{0.125, 0.25, 0.5, 1.0, 2.0, 4.0} : cfg.ratios;
    for (const double r : ratios) {
      const auto m = static_cast<Index>(std::llround(r * static_cast<double>(train.size())));
      if (m < 1) throw UsageError("--ratios: " + format_sig9(r) + " gives M = 0");
      sweep.feature_counts.push_back(m);
    }
    sweep.lambdas = cfg.lambdas;
    sweep.seeds = seeds_of(cfg);
    sweep.kernel_baseline = cfg.kernel_baseline;
    sweep.data_seed = cfg.data_seed;
    write_csv(csv, run_double_descent(train, test, sweep));
    return csv.str();
  }
  // rftk-compare
  std::vector<NamedDataset> datasets;
  for (const auto& path : cfg.datasets) {
    datasets.push_back({fs::path(path).stem().string(), as_classification(load_libsvm(path))});
  }
  if (datasets.empty()) {
    datasets.push_back({"slab", synthetic_slab(cfg.n_train + cfg.n_test, cfg.dim, cfg.data_seed)});
  }
  ComparisonConfig cmp;
  if (!cfg.methods.empty()) {
    cmp.methods.clear();
    for (const auto& m : cfg.methods) cmp.methods.push_back(parse_method(m));
  }
  cmp.replications = cfg.replications;
  cmp.seed = cfg.seed;
  cmp.train_frac = cfg.train_frac;
  cmp.standardize = cfg.standardize != "off";
  cmp.bandwidth = cfg.bandwidth;
  cmp.lambda = cfg.lambda > 0.0 ? cfg.lambda : cmp.lambda;
  cmp.num_features = cfg.features;
  cmp.batch_size = cfg.batch_size;
  cmp.epochs = cfg.epochs;
  cmp.learning_rate = cfg.learning_rate;
  cmp.trace_weight = cfg.trace_weight;
  cmp.omega_rate = cfg.omega_rate;
  cmp.omega_period = cfg.omega_period;
  cmp.loss = parse_loss_kind(cfg.loss);
  cmp.kernel_cap = cfg.kernel_cap;
  const ComparisonResult result = run_rftk_comparison(datasets, cmp);
  write_summary_table(std::cout, result);
  write_csv(csv, result);
  return csv.str();
}

int cmd_experiment(const RunConfig& cfg) {
  const std::string csv = run_experiment(cfg);
  const fs::path path = cli::output_path(cfg, cfg.experiment + ".csv");
  {
    std::ofstream out = open_output(path);
    out << csv;
  }
  std::cout << "wrote " << path.string() << " (" << count_rows(csv) << " rows)\n";
  return 0;
}

// ---------------------------------------------------------------------------

void describe(std::ostream& out, const FeatureMap& fm) {
  out << "feature-map input_dim=" << fm.input_dim() << " features=" << fm.num_features()
      << " bandwidth=" << format_sig9(fm.bandwidth()) << " scale=" << format_sig9(fm.scale())
      << " seed=" << fm.seed() << " omega_frobenius=" << format_sig9(fm.omega().norm()) << '\n';
}

int cmd_inspect(const RunConfig& cfg) {
  std::ifstream in(cfg.input);
  if (!in) throw std::runtime_error("cannot open " + cfg.input);
  std::string first;
  std::getline(in, first);
  in.seekg(0);
  if (first.rfind("ridgeless-feature-map", 0) == 0) {
    describe(std::cout, read_feature_map(in));
    return 0;
  }
  const Model model = read_model(in);
  if (const auto* k = std::get_if<KernelModel>(&model)) {
    std::cout << "kernel-model train_rows=" << k->train_inputs.rows()
              << " input_dim=" << k->train_inputs.cols() << " outputs=" << k->dual_coeffs.cols()
              << " bandwidth=" << format_sig9(k->spec.bandwidth())
              << " lambda=" << format_sig9(k->ridge) << '\n';
  } else {
    const auto& rf = std::get<RFModel>(model);
    std::cout << "rf-model features=" << rf.weights.rows() << " outputs=" << rf.weights.cols()
              << " weight_norm=" << format_sig9(rf.weights.norm()) << '\n';
    describe(std::cout, rf.features);
  }
  return 0;
}

// ---------------------------------------------------------------------------

void print_usage(std::ostream& out) {
  out << "usage: ridgeless <command> [options]\n"
         "commands:\n"
         "  fit         train one model and write it to a file\n"
         "  experiment  run sgd-factors | double-descent | rftk-compare | variance-curve\n"
         "  inspect     summarize a model or feature-map file\n"
         "Every option can also be set in a file passed with --config (key = value).\n"
         "Run `ridgeless <command> --help` for the options of a command.\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(std::cerr);
    return kUsageError;
  }
  const std::string_view command = argv[1];
  if (command == "--help" || command == "-h" || command == "help") {
    print_usage(std::cout);
    return 0;
  }

  RunConfig cfg;
  cfg.command = command;
  CLI::App app("ridgeless " + cfg.command, "ridgeless " + cfg.command);
  app.set_config("--config", "", "flat key = value file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  int (*run)(const RunConfig&) = nullptr;
  if (command == "fit") {
    cli::add_fit_options(app, cfg);
    run = cmd_fit;
  } else if (command == "experiment") {
    cli::add_experiment_options(app, cfg);
    run = cmd_experiment;
  } else if (command == "inspect") {
    cli::add_inspect_options(app, cfg);
    run = cmd_inspect;
  } else {
    std::cerr << "error: unknown command '" << command << "'\n";
    print_usage(std::cerr);
    return kUsageError;
  }

  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
