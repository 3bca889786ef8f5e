#pragma once

#include "ridgeless/numerics.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ridgeless::cli {

// Every key a subcommand understands. Option names double as config-file
// keys, so a config is a flat list of `key = value` lines.
struct RunConfig {
  std::string command;

  // data source: a libsvm file, or a synthetic task when empty
  std::string data;
  std::string task = "regression";  // regression | classification (libsvm only)
  std::string synthetic = "minmax";  // minmax | slab
  Index n_train = 2000;
  Index n_test = 500;
  Index dim = 10;
  double noise_sd = 0.2;
  std::uint64_t data_seed = 0;
  double train_frac = 0.8;
  std::string standardize = "auto";  // auto | on | off; auto = on for files

  // model and training
  std::string method = "rf";
  double bandwidth = 4.0;
  Index features = 200;
  double lambda = 0.0;
  Index batch_size = 32;
  double learning_rate = 1.0;
  Index iterations = 0;  // 0: derive from epochs
  Index epochs = 20;
  double trace_weight = 1e-3;
  double omega_rate = 0.1;
  Index omega_period = 1;
  std::string loss = "squared";
  std::uint64_t seed = 0;
  Index seeds = 5;

  // experiment grids
  std::string experiment;
  std::vector<double> ratios;
  std::vector<double> lambdas{0.0};
  std::vector<Index> batch_sizes{8, 32, 256};
  std::vector<double> learning_rates{1.0};
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  Index replications = 5;
  Index kernel_cap = 5000;
  bool kernel_baseline = true;

  std::string output;
  std::string trace_output;
  std::string input;
};

void add_fit_options(CLI::App& app, RunConfig& cfg);
void add_experiment_options(CLI::App& app, RunConfig& cfg);
void add_inspect_options(CLI::App& app, RunConfig& cfg);

// $RIDGELESS_OUTPUT_DIR when set, else the working directory.
std::filesystem::path default_output_dir();

// `output` when given, else default_output_dir() / fallback_name.
std::filesystem::path output_path(const RunConfig& cfg, const std::string& fallback_name);

}  // namespace ridgeless::cli
