#pragma once

#include "ridgeless/numerics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace ridgeless {

enum class TaskKind { regression, classification };

struct Dataset {
  Matrix x;  // n x d
  Matrix y;  // n x c; one-hot rows for classification
  TaskKind task = TaskKind::regression;
  std::vector<double> class_labels;  // classification only, column order of y

  Index size() const noexcept { return x.rows(); }
  Index dim() const noexcept { return x.cols(); }
};

// Sparse "label idx:val ..." text with 1-based indices. Absent entries are 0,
// labels are kept raw as a single target column. `#` starts a comment.
Dataset read_libsvm(std::istream& in, std::optional<Index> n_features = std::nullopt);
Dataset load_libsvm(const std::filesystem::path& path,
                    std::optional<Index> n_features = std::nullopt);
// Writes nonzero entries of X with label y(i, 0).
void write_libsvm(std::ostream& out, const Dataset& ds);

Matrix one_hot(const std::vector<double>& labels, const std::vector<double>& classes);
// Column index of each row's maximum mapped through `classes`.
std::vector<double> decode_labels(const Matrix& scores, const std::vector<double>& classes);
// Sorted distinct values of y(:, 0) become classes; Y becomes one-hot.
Dataset as_classification(const Dataset& ds);

// x ~ N(0, I_d), w ~ N(0, I_d) once per seed, y = min(-w^T x, w^T x) + eps with
// eps ~ N(0, noise_sd^2). Rows are generated one at a time, so the first k
// rows do not depend on n.
Dataset synthetic_minmax(Index n, Index d, double noise_sd, std::uint64_t seed);

// Two-class slab problem: x ~ N(0, I_d), label 1 when |w^T x| < 0.6745 |w|
// (the median of |w^T x|), else 0. Returned one-hot with classes {0, 1}.
Dataset synthetic_slab(Index n, Index d, std::uint64_t seed);

Dataset take_rows(const Dataset& ds, const std::vector<Index>& rows);

// Seeded uniform permutation; the first round(train_frac * n) rows train.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_frac, std::uint64_t seed);

struct Standardizer {
  Vector mean;
  Vector scale;  // 1 for constant columns

  Matrix apply(const Matrix& x) const;
};

Standardizer fit_standardizer(const Matrix& x);

// Fits on train and applies to both.
void standardize(Dataset& train, Dataset& test);

// Columns x1..xd, y1..yc.
void write_dataset_csv(std::ostream& out, const Dataset& ds);

double mean_squared_error(const Matrix& predictions, const Matrix& targets);
// Fraction of rows whose argmax matches the one-hot target's argmax.
double accuracy(const Matrix& scores, const Matrix& one_hot_targets);

}  // namespace ridgeless
