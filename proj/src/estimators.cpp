#include "ridgeless/estimators.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/text_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace ridgeless {

namespace {

constexpr const char* kKernelHeader = "ridgeless-kernel-model v1";
constexpr const char* kRFHeader = "ridgeless-rf-model v1";

void check_rows(const Matrix& x, const Matrix& y, const char* who) {
  if (x.rows() != y.rows()) {
    throw DimensionError(std::string(who) + ": " + std::to_string(x.rows()) + " inputs but " +
                         std::to_string(y.rows()) + " targets");
  }
  if (x.rows() == 0) throw DimensionError(std::string(who) + ": empty training set");
}

Matrix gram(const Matrix& a) {
  Matrix g = Matrix::Zero(a.cols(), a.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  return g.selfadjointView<Eigen::Lower>();
}

Matrix outer_gram(const Matrix& a) {
  Matrix g = Matrix::Zero(a.rows(), a.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(a);
  return g.selfadjointView<Eigen::Lower>();
}

Matrix spd_solve(const Matrix& a, const Matrix& b, const char* who) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(who) + ": Cholesky factorization failed");
  }
  return llt.solve(b);
}

// (gamma/n) * sum_{l<t} (1 - gamma*ev/n)^l, well defined at ev = 0.
double gd_filter(double ev, double step, Index t) {
  const double x = step * ev;
  const double td = static_cast<double>(t);
  if (x == 0.0) return step * td;
  if (x < 1.0) return step * -std::expm1(td * std::log1p(-x)) / x;
  return step * (1.0 - std::pow(1.0 - x, td)) / x;
}

}  // namespace

KernelModel fit_kernel_ridgeless(const Matrix& x, const Matrix& y, const KernelSpec& spec,
                                 std::optional<double> rcond) {
  check_rows(x, y, "fit_kernel_ridgeless");
  const Matrix k = kernel_matrix(x, spec);
  const double rc = rcond.value_or(default_rcond(x.rows(), x.rows()));
  return KernelModel{pseudo_inverse_apply(k, y, rc), x, spec, 0.0};
}

KernelModel fit_kernel_ridge(const Matrix& x, const Matrix& y, const KernelSpec& spec,
                             double lambda) {
  check_rows(x, y, "fit_kernel_ridge");
  if (!(lambda > 0.0)) {
    throw DomainError("fit_kernel_ridge: lambda must be positive; use fit_kernel_ridgeless");
  }
  Matrix k = kernel_matrix(x, spec);
  k.diagonal().array() += lambda * static_cast<double>(x.rows());
  return KernelModel{spd_solve(k, y, "fit_kernel_ridge"), x, spec, lambda};
}

Matrix ridgeless_weights(const Matrix& phi, const Matrix& y, std::optional<double> rcond) {
  if (phi.rows() != y.rows()) throw DimensionError("ridgeless_weights: row mismatch");
  const Index n = phi.rows();
  const Index m = phi.cols();
  const double rc = rcond.value_or(default_rcond(n, m));
  if (m <= n) {
    return pseudo_inverse_apply(sym_eigen(gram(phi)), phi.transpose() * y, rc);
  }
  // (Z^T Z)^+ Z^T = Z^T (Z Z^T)^+
  return phi.transpose() * pseudo_inverse_apply(sym_eigen(outer_gram(phi)), y, rc);
}

Matrix ridge_weights(const Matrix& phi, const Matrix& y, double lambda) {
  if (phi.rows() != y.rows()) throw DimensionError("ridge_weights: row mismatch");
  if (!(lambda > 0.0)) throw DomainError("ridge_weights: lambda must be positive");
  const Index n = phi.rows();
  const double shift = lambda * static_cast<double>(n);
  if (phi.cols() <= n) {
    Matrix g = gram(phi);
    g.diagonal().array() += shift;
    return spd_solve(g, phi.transpose() * y, "ridge_weights");
  }
  Matrix k = outer_gram(phi);
  k.diagonal().array() += shift;
  return phi.transpose() * spd_solve(k, y, "ridge_weights");
}

RFModel fit_rf_ridgeless(const Matrix& x, const Matrix& y, const FeatureMap& fm,
                         std::optional<double> rcond) {
  check_rows(x, y, "fit_rf_ridgeless");
  return RFModel{ridgeless_weights(feature_map_apply(fm, x), y, rcond), fm};
}

RFModel fit_rf_ridge(const Matrix& x, const Matrix& y, const FeatureMap& fm, double lambda) {
  check_rows(x, y, "fit_rf_ridge");
  return RFModel{ridge_weights(feature_map_apply(fm, x), y, lambda), fm};
}

Matrix gd_weights(const Matrix& phi, const Matrix& y, double gamma, Index t,
                  bool* step_within_bound) {
  if (phi.rows() != y.rows()) throw DimensionError("gd_weights: row mismatch");
  if (t < 0) throw DomainError("gd_weights: negative step count");
  const Index n = phi.rows();
  const Index m = phi.cols();
  const double step = gamma / static_cast<double>(n);
  if (t == 0) {
    if (step_within_bound) *step_within_bound = true;
    return Matrix::Zero(m, y.cols());
  }
  // phi^T (I - a phi phi^T)^l = (I - a phi^T phi)^l phi^T, so either Gram works.
  const bool feature_side = m <= n;
  const SymEigen eig = sym_eigen(feature_side ? gram(phi) : outer_gram(phi));
  if (step_within_bound) *step_within_bound = gamma * eig.values(0) < static_cast<double>(n);

  Vector filter(eig.values.size());
  for (Index k = 0; k < filter.size(); ++k) filter(k) = gd_filter(eig.values(k), step, t);

  const Matrix rhs = feature_side ? Matrix(phi.transpose() * y) : y;
  Matrix coeffs = eig.vectors.transpose() * rhs;
  coeffs.array().colwise() *= filter.array();
  Matrix w = eig.vectors * coeffs;
  if (!feature_side) w = phi.transpose() * w;
  return w;
}

GDSolution gd_closed_form(const Matrix& x, const Matrix& y, const FeatureMap& fm, double gamma,
                          Index t) {
  check_rows(x, y, "gd_closed_form");
  bool ok = true;
  Matrix w = gd_weights(feature_map_apply(fm, x), y, gamma, t, &ok);
  return GDSolution{RFModel{std::move(w), fm}, ok};
}

Matrix predict(const KernelModel& model, const Matrix& x) {
  if (x.cols() != model.train_inputs.cols()) {
    throw DimensionError("predict: input has " + std::to_string(x.cols()) +
                         " features, model expects " +
                         std::to_string(model.train_inputs.cols()));
  }
  return kernel_cross(x, model.train_inputs, model.spec) * model.dual_coeffs;
}

Matrix predict(const RFModel& model, const Matrix& x) {
  if (model.weights.rows() != model.features.num_features()) {
    throw DimensionError("predict: weight rows do not match feature count");
  }
  return feature_map_apply(model.features, x) * model.weights;
}

Matrix predict(const Model& model, const Matrix& x) {
  return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

void write_model(std::ostream& out, const KernelModel& model) {
  out << kKernelHeader << '\n';
  out << model.train_inputs.rows() << ' ' << model.train_inputs.cols() << ' '
      << model.dual_coeffs.cols() << '\n';
  out << format_exact(model.spec.bandwidth()) << ' ' << format_exact(model.ridge) << '\n';
  write_matrix_rows(out, model.train_inputs);
  write_matrix_rows(out, model.dual_coeffs);
}

void write_model(std::ostream& out, const RFModel& model) {
  out << kRFHeader << '\n';
  out << model.weights.rows() << ' ' << model.weights.cols() << '\n';
  write_matrix_rows(out, model.weights);
  write_feature_map(out, model.features);
}

void write_model(std::ostream& out, const Model& model) {
  std::visit([&](const auto& m) { write_model(out, m); }, model);
}

Model read_model(std::istream& in) {
  std::string first;
  std::size_t skipped = 0;
  while (first.empty() && std::getline(in, first)) {
    ++skipped;
    if (!first.empty() && first.back() == '\r') first.pop_back();
  }
  if (first.empty()) throw ParseError("empty model file", skipped + 1);

  LineReader reader(in);
  auto at = [&] { return reader.line() + skipped; };
  if (first == kKernelHeader) {
    const auto dims = reader.expect_tokens(3);
    const Index n = parse_count(dims[0], at());
    const Index d = parse_count(dims[1], at());
    const Index c = parse_count(dims[2], at());
    const auto params = reader.expect_tokens(2);
    const double bandwidth = parse_double(params[0], at());
    const double ridge = parse_double(params[1], at());
    Matrix inputs = reader.read_matrix(n, d);
    Matrix dual = reader.read_matrix(n, c);
    return KernelModel{std::move(dual), std::move(inputs), KernelSpec(bandwidth), ridge};
  }
  if (first == kRFHeader) {
    const auto dims = reader.expect_tokens(2);
    const Index m = parse_count(dims[0], at());
    const Index c = parse_count(dims[1], at());
    Matrix w = reader.read_matrix(m, c);
    FeatureMap fm = read_feature_map(in);
    if (fm.num_features() != m) throw ContractError("read_model: weights/feature map mismatch");
    return RFModel{std::move(w), std::move(fm)};
  }
  throw ParseError("unrecognized model header '" + first + "'", skipped);
}

}  // namespace ridgeless
