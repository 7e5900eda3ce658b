#pragma once

#include "otsense/cost.hpp"
#include "otsense/sample.hpp"

#include <optional>
#include <span>

namespace otsense {

/// Coupling between two discrete distributions.
struct TransportPlan {
  Matrix coupling;
  Vector row_marginal;
  Vector col_marginal;
};

/// Result of one OT solve.
///
/// `cost` is the transport cost <plan, C>. Entropic solvers also fill
/// `regularized_cost` = <plan, C> + eps * KL(plan | a x b), the objective they
/// minimize. The exact solver fills the dual potentials (u_i + v_j <= C_ij).
struct SolveOutcome {
  double cost = 0.0;
  std::optional<TransportPlan> plan;
  int iterations = 0;
  double marginal_err = 0.0;
  bool converged = true;
  std::optional<double> regularized_cost;
  Vector dual_row;
  Vector dual_col;
};

/// Options for the Sinkhorn solvers.
struct EntropicOptions {
  double epsilon = 0.01;
  int num_iterations = 1000;
  /// Stop once max(L1 row error, L1 column error) <= max_err (checked every
  /// 10 iterations).
  double max_err = 1e-9;
  bool keep_plan = true;
};

/// Minimum of <r, C> over couplings with marginals (a, b), by network simplex.
/// a and b must be nonnegative and sum to 1 within 1e-12 (std::invalid_argument
/// otherwise). The returned plan is an optimal basic solution.
SolveOutcome solve_exact(const Matrix& cost, const Vector& a, const Vector& b, bool keep_plan = true);
SolveOutcome solve_exact(const CostMatrix& cost, const Vector& a, const Vector& b,
                         bool keep_plan = true);

/// Sinkhorn-Knopp scaling on exp(-C/eps). Throws NumericalError when the
/// kernel underflows (all-zero row or column, or non-finite scalings);
/// solve_sinkhorn_stable or a larger epsilon is the remedy.
SolveOutcome solve_sinkhorn(const Matrix& cost, const Vector& a, const Vector& b,
                            const EntropicOptions& opt);

/// Same fixed-point iteration carried out on dual potentials with
/// log-sum-exp updates; immune to kernel underflow. Running out of
/// iterations sets converged = false and still returns the last iterate.
SolveOutcome solve_sinkhorn_stable(const Matrix& cost, const Vector& a, const Vector& b,
                                   const EntropicOptions& opt);

/// Exact 1-D OT cost with |.|^p ground cost between the uniform empirical
/// measures on `marginal` (N points) and `conditional` (N_h points):
/// the integral over t in (0,1) of |F^-1(t) - G^-1(t)|^p for the two
/// step quantile functions. When N_h divides N this is
/// (1/N) sum_j |marginal[j] - conditional[ceil(j N_h / N)]|^p.
/// Both inputs must be sorted ascending and non-empty.
double solve_1d(std::span<const double> marginal, std::span<const double> conditional, double p);

/// Q diag(sqrt(max(lambda, 0))) Q^T for a symmetric PSD matrix. Slightly
/// negative eigenvalues (above -1e-10 * lambda_max) are clamped to zero;
/// anything more negative, or asymmetry beyond 1e-10, throws NumericalError.
Matrix matrix_sqrt_psd(const Matrix& s);

struct BuresCost {
  double total = 0.0;
  double advective = 0.0;  ///< ||m_a - m_b||^2
  double diffusive = 0.0;  ///< Tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2)
};

/// Squared Wasserstein-Bures distance between (m_a, S_a) and (m_b, S_b).
BuresCost bures_cost(const Vector& m_a, const Matrix& s_a, const Vector& m_b, const Matrix& s_b);

}  // namespace otsense
