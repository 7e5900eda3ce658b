#pragma once

#include "otsense/sample.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace testing {

using otsense::Matrix;
using otsense::Vector;

inline Matrix uniform_matrix(int rows, int cols, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

inline Matrix normal_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

/// min over permutations of (1/n) sum_i C(i, sigma(i)).
inline double assignment_by_enumeration(const Matrix& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c(i, p[static_cast<std::size_t>(i)]);
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best / n;
}

inline Matrix sq_dist(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) c(i, j) = (a.row(i) - b.row(j)).squaredNorm();
  return c;
}

}  // namespace testing
