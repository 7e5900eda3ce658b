#include "otsense/partition.hpp"

#include "otsense/error.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace otsense {

Partitioning build_partition(std::span<const double> x_col, int classes, Index input_index) {
  const auto n = static_cast<Index>(x_col.size());
  if (classes < 2) throw std::invalid_argument("partition count M must be >= 2");
  if (classes > n) {
    throw std::invalid_argument("partition count M=" + std::to_string(classes) +
                                " exceeds sample size N=" + std::to_string(n));
  }
  const auto [lo, hi] = std::minmax_element(x_col.begin(), x_col.end());
  if (*lo == *hi) throw DegenerateInputError("degenerate input: constant column");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return x_col[static_cast<std::size_t>(a)] < x_col[static_cast<std::size_t>(b)];
  });

  Partitioning p;
  p.input_index_ = input_index;
  p.class_of_row_.assign(static_cast<std::size_t>(n), 0);
  p.members_.resize(static_cast<std::size_t>(classes));
  p.representatives_.assign(static_cast<std::size_t>(classes), 0.0);

  const Index base = n / classes;
  const Index extra = n % classes;
  Index pos = 0;
  for (int h = 0; h < classes; ++h) {
    const Index len = base + (h < extra ? 1 : 0);
    auto& m = p.members_[static_cast<std::size_t>(h)];
    m.assign(order.begin() + pos, order.begin() + pos + len);
    double sum = 0.0;
    for (Index r : m) {
      p.class_of_row_[static_cast<std::size_t>(r)] = h;
      sum += x_col[static_cast<std::size_t>(r)];
    }
    p.representatives_[static_cast<std::size_t>(h)] = sum / static_cast<double>(len);
    pos += len;
  }
  return p;
}

std::vector<Partitioning> partition_all(const SampleMatrix& x, int classes) {
  std::vector<Partitioning> out;
  out.reserve(static_cast<std::size_t>(x.cols()));
  for (Index j = 0; j < x.cols(); ++j) {
    const auto col = x.column(j);
    try {
      out.push_back(build_partition(col, classes, j));
    } catch (const DegenerateInputError& e) {
      throw DegenerateInputError(std::string(e.what()) + " '" +
                                 x.names()[static_cast<std::size_t>(j)] + "'");
    }
  }
  return out;
}

int default_partition_count(Index n) noexcept {
  Index m = std::clamp<Index>(n / 100, 2, 50);
  return static_cast<int>(std::min(m, n));
}

}  // namespace otsense
