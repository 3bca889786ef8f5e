#pragma once

#include "ridgeless/kernels.hpp"
#include "ridgeless/numerics.hpp"

#include <cstdint>
#include <iosfwd>
#include <numbers>

namespace ridgeless {

// Multiplier that makes <phi(x), phi(x')> an unbiased estimate of k(x, x').
inline constexpr double kUnbiasedScale = std::numbers::sqrt2;

// Random Fourier features phi_j(x) = (scale / sqrt(M)) cos(omega_j^T x + b_j).
class FeatureMap {
 public:
  // omega is d x M, phases has length M with entries in [0, 2pi).
  FeatureMap(Matrix omega, Vector phases, double bandwidth, double scale, std::uint64_t seed);

  const Matrix& omega() const noexcept { return omega_; }
  const Vector& phases() const noexcept { return phases_; }
  double bandwidth() const noexcept { return bandwidth_; }
  double scale() const noexcept { return scale_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Index input_dim() const noexcept { return omega_.rows(); }
  Index num_features() const noexcept { return omega_.cols(); }

  // Same phases, bandwidth, scale and seed with a new frequency matrix.
  FeatureMap with_omega(Matrix omega) const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  Matrix omega_;
  Vector phases_;
  double bandwidth_;
  double scale_;
  std::uint64_t seed_;
};

// omega_j ~ N(0, I / bandwidth), b_j ~ U[0, 2pi).
FeatureMap sample_feature_map(Index input_dim, Index num_features, double bandwidth,
                              std::uint64_t seed, double scale = kUnbiasedScale);

// phi(X), n x M. Each entry is accumulated over the input dimension in a fixed
// order, so any row partition of X yields bit-identical rows.
Matrix feature_map_apply(const FeatureMap& fm, const Matrix& x);

// The pre-activation X Omega + 1 b^T, with the same accumulation order.
Matrix feature_arguments(const FeatureMap& fm, const Matrix& x);

// max_{i,j} |<phi(x_i), phi(x_j)> - k(x_i, x_j)|.
double kernel_approx_error(const FeatureMap& fm, const Matrix& x, const KernelSpec& spec);

// |phi(X)|_F^2, the random-feature estimate of Tr K.
double trace_estimate(const FeatureMap& fm, const Matrix& x);

// d |phi(X)|_F^2 / d Omega; column j is
// -(scale^2 / M) sum_i sin(2 (omega_j^T x_i + b_j)) x_i.
Matrix frobenius_grad_omega(const FeatureMap& fm, const Matrix& x);

// Text record: header, dimensions, bandwidth/scale/seed, Omega row-major, phases.
void write_feature_map(std::ostream& out, const FeatureMap& fm);
FeatureMap read_feature_map(std::istream& in);

}  // namespace ridgeless
