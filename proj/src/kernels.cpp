#include "ridgeless/kernels.hpp"

#include "ridgeless/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ridgeless {

namespace {

// Points are columns of the transposed inputs so each one is contiguous.
double squared_distance(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

}  // namespace

KernelSpec::KernelSpec(double bandwidth) : bandwidth_(bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("KernelSpec: bandwidth must be positive and finite");
  }
}

double kernel_eval(const Vector& x, const Vector& y, const KernelSpec& spec) {
  if (x.size() != y.size()) {
    throw DimensionError("kernel_eval: dimensions " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  }
  return std::exp(-squared_distance(x.data(), y.data(), x.size()) / (2.0 * spec.bandwidth()));
}

Matrix kernel_matrix(const Matrix& x, const KernelSpec& spec) {
  const Index n = x.rows();
  if (n == 0) throw DimensionError("kernel_matrix: empty input");
  const Index d = x.cols();
  const Matrix xt = x.transpose();
  const double scale = -1.0 / (2.0 * spec.bandwidth());
  Matrix k(n, n);
  for (Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) {
      const double v = std::exp(scale * squared_distance(xt.col(i).data(), xt.col(j).data(), d));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Matrix kernel_cross(const Matrix& a, const Matrix& b, const KernelSpec& spec) {
  if (a.cols() != b.cols()) {
    throw DimensionError("kernel_cross: inputs have " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.cols()) + " features");
  }
  const Index d = a.cols();
  const Matrix at = a.transpose();
  const Matrix bt = b.transpose();
  const double scale = -1.0 / (2.0 * spec.bandwidth());
  Matrix k(a.rows(), b.rows());
  for (Index j = 0; j < b.rows(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      k(i, j) = std::exp(scale * squared_distance(at.col(i).data(), bt.col(j).data(), d));
    }
  }
  return k;
}

double effective_dimension(const Vector& eigenvalues, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("effective_dimension: lambda must be positive");
  const double shift = lambda * static_cast<double>(eigenvalues.size());
  double total = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double d = std::max(eigenvalues(i), 0.0);
    total += d / (d + shift);
  }
  return total;
}

double effective_dimension(const Matrix& k, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("effective_dimension: lambda must be positive");
  return effective_dimension(sym_eigen(k).values, lambda);
}

EffectiveRidge effective_ridge(const SymEigen& eig, Index num_features, double tol) {
  const Index n = eig.values.size();
  if (num_features < 1) throw DomainError("effective_ridge: need at least one feature");
  if (num_features > n) {
    throw DomainError("effective_ridge: M=" + std::to_string(num_features) + " exceeds n=" +
                      std::to_string(n) + "; no effective ridge in the overparameterized regime");
  }
  const double nd = static_cast<double>(n);
  const double target = static_cast<double>(num_features);
  const Index rank = numerical_rank(eig, default_rcond(n, n));
  if (rank < num_features) {
    throw InfeasibleError("effective_ridge: kernel rank " + std::to_string(rank) +
                          " is below M=" + std::to_string(num_features));
  }
  EffectiveRidge out;
  out.ratio = target / nd;
  if (rank == num_features) return out;  // lambda = 0 meets the condition exactly

  // Scaled by 1/n so the residual is |N(lambda)/n - M/n|.
  auto condition = [&](double lambda) {
    return (effective_dimension(eig.values, lambda) - target) / nd;
  };
  double lo = tol / nd;
  double hi = std::max(eig.values(0), tol) * nd;
  while (condition(lo) <= 0.0 && lo > 1e-300) lo *= 0.01;
  while (condition(hi) >= 0.0 && hi < 1e300) hi *= 10.0;

  // Bisect to machine resolution; the residual tolerance is checked afterwards.
  const Root root = bisect_root(condition, lo, hi, 0.0, 4000);
  out.lambda = root.x;
  out.residual = std::abs(condition(root.x));
  if (out.residual > tol) {
    throw ConvergenceError("effective_ridge: residual " + std::to_string(out.residual) +
                               " above tolerance",
                           root.iterations);
  }
  return out;
}

EffectiveRidge effective_ridge(const Matrix& k, Index num_features, double tol) {
  if (k.rows() != k.cols()) throw DimensionError("effective_ridge: kernel matrix is not square");
  if (num_features > k.rows()) {
    throw DomainError("effective_ridge: M=" + std::to_string(num_features) + " exceeds n=" +
                      std::to_string(k.rows()));
  }
  return effective_ridge(sym_eigen(k), num_features, tol);
}

double variance_factor(double ratio) {
  if (!(ratio > 0.0)) throw DomainError("variance_factor: ratio must be positive");
  if (ratio == 1.0) throw DomainError("variance_factor: singular at M/n = 1");
  return ratio > 1.0 ? ratio / (ratio - 1.0) : 1.0 / (1.0 - ratio);
}

}  // namespace ridgeless
