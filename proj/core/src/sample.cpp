#include "otsense/sample.hpp"

#include "otsense/error.hpp"

#include <cmath>
#include <unordered_set>

namespace otsense {

SampleMatrix SampleMatrix::create(Matrix values, std::vector<std::string> names,
                                  std::string_view default_prefix) {
  if (values.cols() < 1) throw DataError("sample matrix needs at least one column");
  if (values.rows() < 2) throw DataError("sample matrix needs at least two rows (N >= 2)");
  for (Index j = 0; j < values.cols(); ++j) {
    for (Index i = 0; i < values.rows(); ++i) {
      if (!std::isfinite(values(i, j))) {
        throw DataError("non-finite value at (" + std::to_string(i) + ", " + std::to_string(j) +
                        ")");
      }
    }
  }
  if (names.empty()) {
    names.reserve(static_cast<std::size_t>(values.cols()));
    for (Index j = 0; j < values.cols(); ++j) {
      names.push_back(std::string(default_prefix) + std::to_string(j + 1));
    }
  }
  if (static_cast<Index>(names.size()) != values.cols()) {
    throw DataError("expected " + std::to_string(values.cols()) + " column names, got " +
                    std::to_string(names.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw DataError("duplicate column name '" + n + "'");
  }
  return SampleMatrix(std::move(values), std::move(names));
}

std::vector<double> SampleMatrix::column(Index j) const {
  std::vector<double> out(static_cast<std::size_t>(rows()));
  for (Index i = 0; i < rows(); ++i) out[static_cast<std::size_t>(i)] = values_(i, j);
  return out;
}

SampleMatrix SampleMatrix::select_rows(std::span<const Index> rows) const {
  Matrix out(static_cast<Index>(rows.size()), cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = values_.row(rows[r]);
  return SampleMatrix(std::move(out), names_);
}

SampleMatrix SampleMatrix::select_cols(std::span<const Index> cols) const {
  Matrix out(rows(), static_cast<Index>(cols.size()));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.col(static_cast<Index>(c)) = values_.col(cols[c]);
    names.push_back(names_[static_cast<std::size_t>(cols[c])]);
  }
  return create(std::move(out), std::move(names));
}

Index SampleMatrix::find(std::string_view name) const noexcept {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return static_cast<Index>(j);
  }
  return -1;
}

SensitivityDataset SensitivityDataset::create(SampleMatrix x, SampleMatrix y) {
  if (x.rows() != y.rows()) {
    throw DataError("row mismatch: x has " + std::to_string(x.rows()) + " rows, y has " +
                    std::to_string(y.rows()));
  }
  return SensitivityDataset(std::move(x), std::move(y));
}

SensitivityDataset SensitivityDataset::select_rows(std::span<const Index> rows) const {
  return SensitivityDataset(x_.select_rows(rows), y_.select_rows(rows));
}

SensitivityDataset validate_dataset(Matrix x, Matrix y, std::vector<std::string> x_names,
                                    std::vector<std::string> y_names) {
  if (x.rows() != y.rows()) {
    throw DataError("row mismatch: x has " + std::to_string(x.rows()) + " rows, y has " +
                    std::to_string(y.rows()));
  }
  auto xs = SampleMatrix::create(std::move(x), std::move(x_names), "X");
  auto ys = SampleMatrix::create(std::move(y), std::move(y_names), "Y");
  return SensitivityDataset::create(std::move(xs), std::move(ys));
}

}  // namespace otsense
