#include "run_config.hpp"

#include <cstdlib>

namespace ridgeless::cli {

namespace {

const CLI::Range kUnit(0.0, 1.0);

void add_data_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--data", cfg.data, "libsvm file; a synthetic task is used when absent")
      ->check(CLI::ExistingFile);
  app.add_option("--task", cfg.task, "target kind of a libsvm file")
      ->check(CLI::IsMember({"regression", "classification"}));
  app.add_option("--synthetic", cfg.synthetic, "synthetic task")
      ->check(CLI::IsMember({"minmax", "slab"}));
  app.add_option("--n_train", cfg.n_train, "synthetic training rows")->check(CLI::PositiveNumber);
  app.add_option("--n_test", cfg.n_test, "synthetic test rows")->check(CLI::PositiveNumber);
  app.add_option("--dim", cfg.dim, "synthetic input dimension")->check(CLI::PositiveNumber);
  app.add_option("--noise_sd", cfg.noise_sd, "label noise standard deviation (minmax)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--data_seed", cfg.data_seed, "seed of the synthetic draw or the split");
  app.add_option("--train_frac", cfg.train_frac, "training share when splitting a file")
      ->check(kUnit);
  app.add_option("--standardize", cfg.standardize, "per-column standardization")
      ->check(CLI::IsMember({"auto", "on", "off"}));
}

void add_feature_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--bandwidth", cfg.bandwidth, "kernel sigma^2")->check(CLI::PositiveNumber);
  app.add_option("--features", cfg.features, "number of random features M")
      ->check(CLI::PositiveNumber);
}

void add_training_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--batch_size", cfg.batch_size)->check(CLI::PositiveNumber);
  app.add_option("--learning_rate", cfg.learning_rate)->check(CLI::NonNegativeNumber);
  app.add_option("--iterations", cfg.iterations, "SGD steps; 0 derives them from epochs")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--epochs", cfg.epochs, "passes of ceil(n/b) steps")->check(CLI::PositiveNumber);
  app.add_option("--trace_weight", cfg.trace_weight, "beta")->check(CLI::NonNegativeNumber);
  app.add_option("--omega_rate", cfg.omega_rate, "eta")->check(CLI::NonNegativeNumber);
  app.add_option("--omega_period", cfg.omega_period, "s")->check(CLI::PositiveNumber);
  app.add_option("--loss", cfg.loss)->check(CLI::IsMember({"squared", "softmax"}));
}

void add_output_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--output,-o", cfg.output, "output file");
}

}  // namespace

void add_fit_options(CLI::App& app, RunConfig& cfg) {
  add_data_options(app, cfg);
  add_feature_options(app, cfg);
  add_training_options(app, cfg);
  app.add_option("--method", cfg.method)
      ->check(CLI::IsMember({"kernel-ridge", "kernel-ridgeless", "rf", "rf-sgd", "rftk"}));
  app.add_option("--lambda", cfg.lambda, "ridge; 0 is ridgeless")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "feature and batch seed");
  add_output_options(app, cfg);
  app.add_option("--trace_output", cfg.trace_output, "training trace CSV (rf-sgd, rftk)");
}

void add_experiment_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("experiment,--experiment", cfg.experiment, "experiment name")
      ->required()
      ->check(CLI::IsMember({"sgd-factors", "double-descent", "rftk-compare", "variance-curve"}));
  add_data_options(app, cfg);
  add_feature_options(app, cfg);
  add_training_options(app, cfg);
  app.add_option("--lambda", cfg.lambda, "kernel ridge lambda (rftk-compare)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "first seed");
  app.add_option("--seeds", cfg.seeds, "number of seeds")->check(CLI::PositiveNumber);
  app.add_option("--ratios", cfg.ratios, "M/n grid")->check(CLI::PositiveNumber);
  app.add_option("--lambdas", cfg.lambdas, "ridge grid")->check(CLI::NonNegativeNumber);
  app.add_option("--batch_sizes", cfg.batch_sizes)->check(CLI::PositiveNumber);
  app.add_option("--learning_rates", cfg.learning_rates)->check(CLI::NonNegativeNumber);
  app.add_option("--datasets", cfg.datasets, "libsvm files for rftk-compare")
      ->check(CLI::ExistingFile);
  app.add_option("--methods", cfg.methods)
      ->check(CLI::IsMember({"kernel-ridge", "kernel-ridgeless", "rf", "rf-sgd", "rftk"}));
  app.add_option("--replications", cfg.replications)->check(CLI::PositiveNumber);
  app.add_option("--kernel_cap", cfg.kernel_cap, "largest n for the cubic-cost kernel methods")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--kernel_baseline", cfg.kernel_baseline);
  add_output_options(app, cfg);
}

void add_inspect_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("input,--input", cfg.input, "model or feature-map file")
      ->required()
      ->check(CLI::ExistingFile);
}

std::filesystem::path default_output_dir() {
  const char* env = std::getenv("RIDGELESS_OUTPUT_DIR");
  if (env != nullptr && *env != '\0') return env;
  return ".";
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& fallback_name) {
  if (!cfg.output.empty()) return cfg.output;
  return default_output_dir() / fallback_name;
}

}  // namespace ridgeless::cli
