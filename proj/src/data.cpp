#include "ridgeless/data.hpp"

#include "ridgeless/errors.hpp"
#include "ridgeless/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

namespace ridgeless {

namespace {

struct SparseRow {
  double label;
  std::vector<std::pair<Index, double>> entries;  // 0-based
};

// Column index of the row maximum; ties go to the lowest index.
Index argmax_row(const Matrix& m, Index i) {
  Index best = 0;
  for (Index j = 1; j < m.cols(); ++j) {
    if (m(i, j) > m(i, best)) best = j;
  }
  return best;
}

}  // namespace

Dataset read_libsvm(std::istream& in, std::optional<Index> n_features) {
  std::vector<SparseRow> rows;
  Index max_index = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    const auto tokens = split_whitespace(text);
    if (tokens.empty()) continue;

    SparseRow row{parse_double(tokens[0], line), {}};
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto tok = tokens[k];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
        throw ParseError("malformed feature '" + std::string(tok) + "'", line);
      }
      const Index index = parse_count(tok.substr(0, colon), line);
      if (index < 1) throw ParseError("feature indices are 1-based", line);
      if (n_features && index > *n_features) {
        throw BoundsError("feature index " + std::to_string(index) + " exceeds n_features=" +
                              std::to_string(*n_features),
                          line);
      }
      row.entries.emplace_back(index - 1, parse_double(tok.substr(colon + 1), line));
      max_index = std::max(max_index, index);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty dataset", line);

  const Index d = n_features.value_or(max_index);
  Dataset ds;
  ds.x = Matrix::Zero(static_cast<Index>(rows.size()), d);
  ds.y = Matrix(static_cast<Index>(rows.size()), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Index>(i);
    ds.y(r, 0) = rows[i].label;
    for (const auto& [j, v] : rows[i].entries) ds.x(r, j) = v;
  }
  return ds;
}

Dataset load_libsvm(const std::filesystem::path& path, std::optional<Index> n_features) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_libsvm: cannot open " + path.string());
  return read_libsvm(in, n_features);
}

void write_libsvm(std::ostream& out, const Dataset& ds) {
  if (ds.y.cols() < 1 || ds.y.rows() != ds.x.rows()) {
    throw DimensionError("write_libsvm: need one label per row");
  }
  for (Index i = 0; i < ds.x.rows(); ++i) {
    out << format_exact(ds.y(i, 0));
    for (Index j = 0; j < ds.x.cols(); ++j) {
      if (ds.x(i, j) != 0.0) out << ' ' << (j + 1) << ':' << format_exact(ds.x(i, j));
    }
    out << '\n';
  }
}

Matrix one_hot(const std::vector<double>& labels, const std::vector<double>& classes) {
  Matrix y = Matrix::Zero(static_cast<Index>(labels.size()), static_cast<Index>(classes.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::find(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end()) {
      throw DomainError("one_hot: unknown label " + format_sig9(labels[i]) + " at row " +
                        std::to_string(i));
    }
    y(static_cast<Index>(i), static_cast<Index>(it - classes.begin())) = 1.0;
  }
  return y;
}

std::vector<double> decode_labels(const Matrix& scores, const std::vector<double>& classes) {
  if (scores.cols() != static_cast<Index>(classes.size())) {
    throw DimensionError("decode_labels: score columns do not match class count");
  }
  std::vector<double> labels(static_cast<std::size_t>(scores.rows()));
  for (Index i = 0; i < scores.rows(); ++i) {
    labels[static_cast<std::size_t>(i)] = classes[static_cast<std::size_t>(argmax_row(scores, i))];
  }
  return labels;
}

Dataset as_classification(const Dataset& ds) {
  if (ds.y.cols() != 1) throw DimensionError("as_classification: expected one label column");
  std::vector<double> labels(ds.y.data(), ds.y.data() + ds.y.rows());
  std::vector<double> classes = labels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return Dataset{ds.x, one_hot(labels, classes), TaskKind::classification, classes};
}

Dataset synthetic_minmax(Index n, Index d, double noise_sd, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DomainError("synthetic_minmax: need n, d >= 1");
  if (!(noise_sd >= 0.0)) throw DomainError("synthetic_minmax: noise_sd must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(d);
  for (Index k = 0; k < d; ++k) w(k) = normal(rng);

  Dataset ds{Matrix(n, d), Matrix(n, 1), TaskKind::regression, {}};
  for (Index i = 0; i < n; ++i) {
    double proj = 0.0;
    for (Index k = 0; k < d; ++k) {
      ds.x(i, k) = normal(rng);
      proj += w(k) * ds.x(i, k);
    }
    const double eps = noise_sd * normal(rng);
    ds.y(i, 0) = std::min(-proj, proj) + eps;
  }
  return ds;
}

Dataset synthetic_slab(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DomainError("synthetic_slab: need n, d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(d);
  for (Index k = 0; k < d; ++k) w(k) = normal(rng);
  // Median of |N(0, 1)|.
  const double threshold = 0.6744897501960817 * w.norm();

  Dataset ds{Matrix(n, d), Matrix::Zero(n, 2), TaskKind::classification, {0.0, 1.0}};
  for (Index i = 0; i < n; ++i) {
    double proj = 0.0;
    for (Index k = 0; k < d; ++k) {
      ds.x(i, k) = normal(rng);
      proj += w(k) * ds.x(i, k);
    }
    ds.y(i, std::abs(proj) < threshold ? 1 : 0) = 1.0;
  }
  return ds;
}

Dataset take_rows(const Dataset& ds, const std::vector<Index>& rows) {
  return Dataset{ds.x(rows, Eigen::all), ds.y(rows, Eigen::all),
                 ds.task, ds.class_labels};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw DomainError("split: train_frac must lie in (0, 1)");
  }
  const Index n = ds.size();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  auto n_train = static_cast<Index>(std::llround(train_frac * static_cast<double>(n)));
  if (n >= 2) n_train = std::clamp<Index>(n_train, 1, n - 1);
  const std::vector<Index> train(perm.begin(), perm.begin() + n_train);
  const std::vector<Index> test(perm.begin() + n_train, perm.end());
  return {take_rows(ds, train), take_rows(ds, test)};
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw DimensionError("Standardizer: column count mismatch");
  return ((x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array())
      .matrix();
}

Standardizer fit_standardizer(const Matrix& x) {
  if (x.rows() == 0) throw DimensionError("fit_standardizer: empty input");
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  s.scale = Vector::Ones(x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().mean();
    if (var > 0.0) s.scale(j) = std::sqrt(var);
  }
  return s;
}

void standardize(Dataset& train, Dataset& test) {
  const Standardizer s = fit_standardizer(train.x);
  train.x = s.apply(train.x);
  test.x = s.apply(test.x);
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  for (Index j = 0; j < ds.x.cols(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
  for (Index j = 0; j < ds.y.cols(); ++j) out << ",y" << (j + 1);
  out << '\n';
  for (Index i = 0; i < ds.x.rows(); ++i) {
    for (Index j = 0; j < ds.x.cols(); ++j) out << (j ? "," : "") << format_sig9(ds.x(i, j));
    for (Index j = 0; j < ds.y.cols(); ++j) out << ',' << format_sig9(ds.y(i, j));
    out << '\n';
  }
}

double mean_squared_error(const Matrix& predictions, const Matrix& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw DimensionError("mean_squared_error: shape mismatch");
  }
  return (predictions - targets).squaredNorm() / static_cast<double>(predictions.rows());
}

double accuracy(const Matrix& scores, const Matrix& one_hot_targets) {
  if (scores.rows() != one_hot_targets.rows() || scores.cols() != one_hot_targets.cols()) {
    throw DimensionError("accuracy: shape mismatch");
  }
  if (scores.rows() == 0) return 0.0;
  Index hits = 0;
  for (Index i = 0; i < scores.rows(); ++i) {
    if (argmax_row(scores, i) == argmax_row(one_hot_targets, i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.rows());
}

}  // namespace ridgeless
