#include "ridgeless/numerics.hpp"

#include "ridgeless/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ridgeless {

Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major) {
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != row_major.size()) {
    throw DimensionError("make_matrix: " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " does not match " + std::to_string(row_major.size()) + " entries");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
  }
  require_finite(m, "make_matrix");
  return m;
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

SymEigen sym_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("sym_eigen: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  const Index n = a.rows();
  if (n == 0) return {Vector(0), Matrix(0, 0)};

  Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    // Eigen's tridiagonal QL caps the sweep count at 30 per eigenvalue.
    throw NumericalError("sym_eigen: QL iteration did not converge", static_cast<int>(30 * n));
  }
  // Eigen returns ascending order.
  SymEigen out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  return out;
}

double default_rcond(Index n, Index m) { return 1e-12 * static_cast<double>(std::max(n, m)); }

Index numerical_rank(const SymEigen& eig, double rcond) {
  if (eig.values.size() == 0) return 0;
  const double cutoff = rcond * std::max(eig.values(0), 0.0);
  Index rank = 0;
  for (Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > cutoff) ++rank;
  }
  return rank;
}

Matrix pseudo_inverse_apply(const SymEigen& eig, const Matrix& b, double rcond) {
  const Index n = eig.values.size();
  if (b.rows() != n) {
    throw DimensionError("pseudo_inverse_apply: rhs has " + std::to_string(b.rows()) +
                         " rows, expected " + std::to_string(n));
  }
  if (rcond < 0.0) throw DomainError("pseudo_inverse_apply: rcond must be >= 0");
  const Index rank = numerical_rank(eig, rcond);
  if (rank == 0) return Matrix::Zero(n, b.cols());
  // Eigenvalues are sorted, so the kept ones are the leading `rank` columns.
  const auto v = eig.vectors.leftCols(rank);
  Matrix coeffs = v.transpose() * b;
  coeffs.array().colwise() /= eig.values.head(rank).array();
  return v * coeffs;
}

Matrix pseudo_inverse_apply(const Matrix& a, const Matrix& b, double rcond) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw DimensionError("pseudo_inverse_apply: A is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", B has " + std::to_string(b.rows()) +
                         " rows");
  }
  return pseudo_inverse_apply(sym_eigen(a), b, rcond);
}

Root bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iter) {
  if (!(lo < hi)) throw BracketError("bisect_root: need lo < hi");
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0};
  if (f_hi == 0.0) return {hi, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw BracketError("bisect_root: f(lo)=" + std::to_string(f_lo) +
                       " and f(hi)=" + std::to_string(f_hi) + " have the same sign");
  }

  for (int it = 1; it <= max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return {mid, it};
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol) return {mid, it};
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol) return {lo + 0.5 * (hi - lo), it};
  }
  throw ConvergenceError("bisect_root: no convergence after " + std::to_string(max_iter) +
                             " iterations",
                         max_iter);
}

}  // namespace ridgeless
