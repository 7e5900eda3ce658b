#pragma once

#include <Eigen/Core>

namespace otsense::detail {

/// Exact OT cost between uniform weights on the rows and on the columns of
/// `cost`. Runs the network simplex on integer masses (m per row, n per
/// column) so the basis arithmetic is exact.
double exact_uniform_cost(const Eigen::Ref<const Eigen::MatrixXd>& cost);

}  // namespace otsense::detail
