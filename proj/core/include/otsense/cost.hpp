#pragma once

#include "otsense/sample.hpp"

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace otsense {

/// Pairwise cost c(y, y') between output realizations.
///
/// Built-in kinds satisfy c(y, y) = 0 and c >= 0. A custom kind receives two
/// row blocks (n x k and m x k) and must return an n x m matrix of finite,
/// nonnegative values; cost_matrix() checks that.
class GroundCost {
 public:
  using Callback = std::function<Matrix(const Matrix& a, const Matrix& b)>;

  struct SqEuclidean {};
  /// (sum_j |a_j - b_j|^p)^(q/p)
  struct MinkowskiPower {
    double p = 2.0;
    double q = 2.0;
  };
  struct Custom {
    Callback fn;
    std::string name;
  };

  static GroundCost sq_euclidean() { return GroundCost(SqEuclidean{}); }
  static GroundCost minkowski_power(double p, double q);
  static GroundCost custom(Callback fn, std::string name = "custom");

  bool is_sq_euclidean() const noexcept;
  bool is_builtin() const noexcept { return !std::holds_alternative<Custom>(kind_); }
  std::string name() const;
  const auto& kind() const noexcept { return kind_; }

  /// Cost between two rows, built-in kinds only.
  double pair(const Eigen::Ref<const Eigen::RowVectorXd>& a,
              const Eigen::Ref<const Eigen::RowVectorXd>& b) const;

 private:
  explicit GroundCost(std::variant<SqEuclidean, MinkowskiPower, Custom> k) : kind_(std::move(k)) {}

  std::variant<SqEuclidean, MinkowskiPower, Custom> kind_;
};

/// Materialized cost block between two sets of y rows.
struct CostMatrix {
  Matrix entries;
  std::vector<Index> row_points;
  std::vector<Index> col_points;
};

/// entries(a, b) = c(y[rows_a[a]], y[rows_b[b]]).
CostMatrix cost_matrix(std::span<const Index> rows_a, std::span<const Index> rows_b,
                       const SampleMatrix& y, const GroundCost& cost);

/// All N x N pairwise costs (symmetric for built-in kinds).
Matrix pairwise_costs(const SampleMatrix& y, const GroundCost& cost, unsigned threads = 1);

/// How the U-statistic for E[c(Y, Y')] is evaluated.
enum class UStatisticMode {
  automatic,  ///< all pairs up to N = 5000, a seeded 5000-row subsample above
  exact,      ///< always all N(N-1)/2 pairs
};

/// Unbiased estimate (2 / (N(N-1))) sum_{i<j} c(y_i, y_j) of E[c(Y, Y')].
/// For squared-Euclidean cost this is evaluated through the identity
/// 2 tr(S) with S the (N-1)-normalized sample covariance, for any N.
/// Throws DataError("zero bound") when the estimate is 0.
double upper_bound(const SampleMatrix& y, const GroundCost& cost,
                   UStatisticMode mode = UStatisticMode::automatic, unsigned threads = 1);

/// Same U-statistic read off a precomputed pairwise matrix.
double upper_bound_from_pairwise(const Matrix& pairwise);

}  // namespace otsense
