#include "ridgeless/features.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/text_io.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace ridgeless {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr const char* kFeatureMapHeader = "ridgeless-feature-map v1";

void check_input(const FeatureMap& fm, const Matrix& x, const char* who) {
  if (x.cols() != fm.input_dim()) {
    throw DimensionError(std::string(who) + ": input has " + std::to_string(x.cols()) +
                         " columns, feature map expects " + std::to_string(fm.input_dim()));
  }
}

}  // namespace

FeatureMap::FeatureMap(Matrix omega, Vector phases, double bandwidth, double scale,
                       std::uint64_t seed)
    : omega_(std::move(omega)),
      phases_(std::move(phases)),
      bandwidth_(bandwidth),
      scale_(scale),
      seed_(seed) {
  if (omega_.cols() < 1 || omega_.rows() < 1) {
    throw DimensionError("FeatureMap: need d >= 1 and M >= 1");
  }
  if (phases_.size() != omega_.cols()) {
    throw DimensionError("FeatureMap: " + std::to_string(phases_.size()) + " phases for " +
                         std::to_string(omega_.cols()) + " features");
  }
  require_finite(omega_, "FeatureMap omega");
  for (Index j = 0; j < phases_.size(); ++j) {
    if (!(phases_(j) >= 0.0 && phases_(j) < kTwoPi)) {
      throw DomainError("FeatureMap: phase " + std::to_string(j) + " outside [0, 2pi)");
    }
  }
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw DomainError("FeatureMap: bandwidth must be positive");
  }
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw DomainError("FeatureMap: scale must be positive");
  }
}

FeatureMap FeatureMap::with_omega(Matrix omega) const {
  if (omega.rows() != omega_.rows() || omega.cols() != omega_.cols()) {
    throw DimensionError("FeatureMap::with_omega: shape change");
  }
  return FeatureMap(std::move(omega), phases_, bandwidth_, scale_, seed_);
}

FeatureMap sample_feature_map(Index input_dim, Index num_features, double bandwidth,
                              std::uint64_t seed, double scale) {
  if (input_dim < 1 || num_features < 1) {
    throw DimensionError("sample_feature_map: need d >= 1 and M >= 1");
  }
  if (!(bandwidth > 0.0)) throw DomainError("sample_feature_map: bandwidth must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(bandwidth));
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);

  // Column-by-column so that a prefix of features does not depend on M.
  Matrix omega(input_dim, num_features);
  Vector phases(num_features);
  for (Index j = 0; j < num_features; ++j) {
    for (Index k = 0; k < input_dim; ++k) omega(k, j) = normal(rng);
    double b = uniform(rng);
    if (b >= kTwoPi) b = 0.0;
    phases(j) = b;
  }
  return FeatureMap(std::move(omega), std::move(phases), bandwidth, scale, seed);
}

Matrix feature_arguments(const FeatureMap& fm, const Matrix& x) {
  check_input(fm, x, "feature_map_apply");
  const Index n = x.rows();
  const Index d = x.cols();
  const Index m = fm.num_features();
  const Matrix xt = x.transpose();
  const Matrix& omega = fm.omega();
  Matrix z(n, m);
  for (Index j = 0; j < m; ++j) {
    const double* w = omega.col(j).data();
    const double b = fm.phases()(j);
    for (Index i = 0; i < n; ++i) {
      const double* xi = xt.col(i).data();
      double s = 0.0;
      for (Index k = 0; k < d; ++k) s += w[k] * xi[k];
      z(i, j) = s + b;
    }
  }
  return z;
}

Matrix feature_map_apply(const FeatureMap& fm, const Matrix& x) {
  Matrix z = feature_arguments(fm, x);
  const double amp = fm.scale() / std::sqrt(static_cast<double>(fm.num_features()));
  return amp * z.array().cos().matrix();
}

double kernel_approx_error(const FeatureMap& fm, const Matrix& x, const KernelSpec& spec) {
  if (fm.bandwidth() != spec.bandwidth()) {
    throw ContractError("kernel_approx_error: feature map and kernel bandwidths differ");
  }
  const Matrix phi = feature_map_apply(fm, x);
  const Matrix approx = phi * phi.transpose();
  const Matrix exact = kernel_matrix(x, spec);
  return (approx - exact).cwiseAbs().maxCoeff();
}

double trace_estimate(const FeatureMap& fm, const Matrix& x) {
  return feature_map_apply(fm, x).squaredNorm();
}

Matrix frobenius_grad_omega(const FeatureMap& fm, const Matrix& x) {
  const Matrix z = feature_arguments(fm, x);
  const double coeff = -fm.scale() * fm.scale() / static_cast<double>(fm.num_features());
  const Matrix s = (2.0 * z.array()).sin().matrix();
  return coeff * (x.transpose() * s);
}

void write_feature_map(std::ostream& out, const FeatureMap& fm) {
  out << kFeatureMapHeader << '\n';
  out << fm.input_dim() << ' ' << fm.num_features() << '\n';
  out << format_exact(fm.bandwidth()) << ' ' << format_exact(fm.scale()) << ' ' << fm.seed()
      << '\n';
  write_matrix_rows(out, fm.omega());
  write_matrix_rows(out, fm.phases().transpose());
}

FeatureMap read_feature_map(std::istream& in) {
  LineReader reader(in);
  reader.expect_header(kFeatureMapHeader);
  const auto dims = reader.expect_tokens(2);
  const Index d = parse_count(dims[0], reader.line());
  const Index m = parse_count(dims[1], reader.line());
  const auto params = reader.expect_tokens(3);
  const double bandwidth = parse_double(params[0], reader.line());
  const double scale = parse_double(params[1], reader.line());
  const std::uint64_t seed = parse_u64(params[2], reader.line());
  Matrix omega = reader.read_matrix(d, m);
  const Matrix phases = reader.read_matrix(1, m);
  return FeatureMap(std::move(omega), phases.row(0).transpose(), bandwidth, scale, seed);
}

}  // namespace ridgeless
