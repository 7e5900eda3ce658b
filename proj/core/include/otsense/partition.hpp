#pragma once

#include "otsense/sample.hpp"

#include <span>
#include <vector>

namespace otsense {

/// Equal-frequency partition of one input column into H contiguous classes.
///
/// Rows are ranked by value (ties broken by row index); the sorted sequence is
/// cut into H runs whose sizes differ by at most one, the first N mod H runs
/// taking the extra row. Class labels are 0-based internally; label() reports
/// them 1-based.
class Partitioning {
 public:
  Index input_index() const noexcept { return input_index_; }
  int class_count() const noexcept { return static_cast<int>(members_.size()); }
  Index size() const noexcept { return static_cast<Index>(class_of_row_.size()); }

  /// 0-based class of row `r`.
  int class_of(Index r) const { return class_of_row_[static_cast<std::size_t>(r)]; }
  /// 1-based class label of row `r`.
  int label(Index r) const { return class_of(r) + 1; }

  /// Rows of class `h` (0-based), in ascending x order.
  std::span<const Index> members(int h) const { return members_[static_cast<std::size_t>(h)]; }
  /// Mean raw input value per class.
  const std::vector<double>& representatives() const noexcept { return representatives_; }

 private:
  friend Partitioning build_partition(std::span<const double>, int, Index);

  Index input_index_ = 0;
  std::vector<int> class_of_row_;
  std::vector<std::vector<Index>> members_;
  std::vector<double> representatives_;
};

/// Partitions one column into `classes` equal-frequency classes.
/// Throws std::invalid_argument when classes < 2 or classes > N, and
/// DegenerateInputError when the column is constant.
Partitioning build_partition(std::span<const double> x_col, int classes, Index input_index = 0);

/// One partition per column of x. The error for a constant column names it.
std::vector<Partitioning> partition_all(const SampleMatrix& x, int classes);

/// max(2, floor(N / 100)) capped at 50 (and at N).
int default_partition_count(Index n) noexcept;

}  // namespace otsense
