#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otsense {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense matrix of finite reals with one label per column.
///
/// Rows are realizations, columns are variables. The only way to obtain one is
/// through create(), which enforces: all entries finite, at least two rows and
/// one column, unique names.
class SampleMatrix {
 public:
  /// Validates and wraps `values`. Empty `names` are replaced by
  /// `<prefix>1..<prefix>c`.
  static SampleMatrix create(Matrix values, std::vector<std::string> names = {},
                             std::string_view default_prefix = "X");

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }

  /// Column `j` copied into a contiguous vector.
  std::vector<double> column(Index j) const;

  /// New matrix made of the given rows (repeats allowed), names kept.
  SampleMatrix select_rows(std::span<const Index> rows) const;

  /// New matrix made of the given columns.
  SampleMatrix select_cols(std::span<const Index> cols) const;

  /// Position of a column by name, or -1.
  Index find(std::string_view name) const noexcept;

 private:
  SampleMatrix(Matrix values, std::vector<std::string> names)
      : values_(std::move(values)), names_(std::move(names)) {}

  Matrix values_;
  std::vector<std::string> names_;
};

/// Paired input (N x d) and output (N x k) samples; row j of y is the model
/// response to row j of x.
class SensitivityDataset {
 public:
  static SensitivityDataset create(SampleMatrix x, SampleMatrix y);

  const SampleMatrix& x() const noexcept { return x_; }
  const SampleMatrix& y() const noexcept { return y_; }
  Index n() const noexcept { return x_.rows(); }
  Index d() const noexcept { return x_.cols(); }
  Index k() const noexcept { return y_.cols(); }

  /// Joint row resample of x and y (used by the bootstrap).
  SensitivityDataset select_rows(std::span<const Index> rows) const;

 private:
  SensitivityDataset(SampleMatrix x, SampleMatrix y) : x_(std::move(x)), y_(std::move(y)) {}

  SampleMatrix x_;
  SampleMatrix y_;
};

/// Builds a dataset from raw matrices, checking every invariant.
SensitivityDataset validate_dataset(Matrix x, Matrix y, std::vector<std::string> x_names = {},
                                    std::vector<std::string> y_names = {});

}  // namespace otsense
