#pragma once

#include "ridgeless/features.hpp"
#include "ridgeless/kernels.hpp"
#include "ridgeless/numerics.hpp"

#include <iosfwd>
#include <optional>
#include <variant>

namespace ridgeless {

struct KernelModel {
  Matrix dual_coeffs;   // n x c
  Matrix train_inputs;  // n x d
  KernelSpec spec;
  double ridge = 0.0;
};

struct RFModel {
  Matrix weights;  // M x c
  FeatureMap features;
};

using Model = std::variant<KernelModel, RFModel>;

// K(X,X)^+ Y.
KernelModel fit_kernel_ridgeless(const Matrix& x, const Matrix& y, const KernelSpec& spec,
                                 std::optional<double> rcond = std::nullopt);

// (K + lambda n I)^{-1} Y, lambda > 0.
KernelModel fit_kernel_ridge(const Matrix& x, const Matrix& y, const KernelSpec& spec,
                             double lambda);

// Minimum-norm least squares in feature space, (phi^T phi)^+ phi^T Y. The
// solve runs on whichever of phi^T phi and phi phi^T is smaller.
RFModel fit_rf_ridgeless(const Matrix& x, const Matrix& y, const FeatureMap& fm,
                         std::optional<double> rcond = std::nullopt);

// (phi^T phi + lambda n I)^{-1} phi^T Y, lambda > 0.
RFModel fit_rf_ridge(const Matrix& x, const Matrix& y, const FeatureMap& fm, double lambda);

// The same solves on a precomputed feature matrix phi (n x M).
Matrix ridgeless_weights(const Matrix& phi, const Matrix& y,
                         std::optional<double> rcond = std::nullopt);
Matrix ridge_weights(const Matrix& phi, const Matrix& y, double lambda);

struct GDSolution {
  RFModel model;
  // false when gamma >= n / lambda_max(phi^T phi)
  bool step_within_bound = true;
};

// Full-batch gradient descent from W = 0 after t steps of
// W <- W - (gamma/n) phi^T (phi W - Y), evaluated in closed form as
// sum_{l<t} (I - (gamma/n) phi^T phi)^l (gamma/n) phi^T Y.
GDSolution gd_closed_form(const Matrix& x, const Matrix& y, const FeatureMap& fm, double gamma,
                          Index t);
Matrix gd_weights(const Matrix& phi, const Matrix& y, double gamma, Index t,
                  bool* step_within_bound = nullptr);

Matrix predict(const KernelModel& model, const Matrix& x);
Matrix predict(const RFModel& model, const Matrix& x);
Matrix predict(const Model& model, const Matrix& x);

void write_model(std::ostream& out, const KernelModel& model);
void write_model(std::ostream& out, const RFModel& model);
void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);

}  // namespace ridgeless
