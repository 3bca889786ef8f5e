#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string_view>

namespace ridgeless {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Builds a matrix from row-major entries, rejecting NaN/Inf.
Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major);

// Throws DomainError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // column k pairs with values(k)
};

// Eigendecomposition of the symmetric part (A + A^T)/2.
SymEigen sym_eigen(const Matrix& a);

// Cutoff scale used when no rcond is given: 1e-12 * max(n, m).
double default_rcond(Index n, Index m);

// A^+ B for symmetric PSD A. Eigenvalues <= rcond * lambda_max are dropped.
Matrix pseudo_inverse_apply(const Matrix& a, const Matrix& b, double rcond);
Matrix pseudo_inverse_apply(const SymEigen& eig, const Matrix& b, double rcond);

// Number of eigenvalues strictly above rcond * lambda_max.
Index numerical_rank(const SymEigen& eig, double rcond);

struct Root {
  double x = 0.0;
  int iterations = 0;
};

// Bisection on a monotone f with f(lo), f(hi) of opposite sign. Stops when
// |f(x)| <= tol, when the bracket is no wider than tol, or when the bracket
// has collapsed to adjacent doubles.
Root bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iter);

}  // namespace ridgeless
