#pragma once

#include "ridgeless/numerics.hpp"

namespace ridgeless {

// Gaussian kernel k(x, x') = exp(-|x - x'|^2 / (2 * bandwidth)).
//
// Other shift-invariant kernels can be added behind the same interface; an
// implementation must be symmetric in its arguments and produce PSD matrices.
class KernelSpec {
 public:
  explicit KernelSpec(double bandwidth);

  double bandwidth() const noexcept { return bandwidth_; }

 private:
  double bandwidth_;
};

double kernel_eval(const Vector& x, const Vector& y, const KernelSpec& spec);

// K(X, X), n x n with unit diagonal.
Matrix kernel_matrix(const Matrix& x, const KernelSpec& spec);

// K(A, B), rows of A against rows of B.
Matrix kernel_cross(const Matrix& a, const Matrix& b, const KernelSpec& spec);

// Tr[K (K + lambda n I)^{-1}] = sum_i d_i / (d_i + lambda n).
double effective_dimension(const Matrix& k, double lambda);
double effective_dimension(const Vector& eigenvalues, double lambda);

struct EffectiveRidge {
  double lambda = 0.0;
  double ratio = 0.0;     // M / n
  double residual = 0.0;  // |N(lambda)/n - M/n|
};

// The ridge lambda >= 0 with effective dimension equal to `num_features`.
EffectiveRidge effective_ridge(const Matrix& k, Index num_features, double tol = 1e-10);
EffectiveRidge effective_ridge(const SymEigen& eig, Index num_features, double tol = 1e-10);

// alpha = r/(r-1) for r > 1, 1/(1-r) for r < 1.
double variance_factor(double ratio);

}  // namespace ridgeless
