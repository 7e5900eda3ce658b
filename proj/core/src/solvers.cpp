#include "otsense/solvers.hpp"

#include "network_simplex.hpp"
#include "otsense/error.hpp"
#include "solvers_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace otsense {

namespace {

void check_marginals(const Matrix& cost, const Vector& a, const Vector& b) {
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw std::invalid_argument("marginal sizes do not match the cost matrix");
  }
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("empty marginal");
  if ((a.array() < 0.0).any() || (b.array() < 0.0).any()) {
    throw std::invalid_argument("marginals must be nonnegative");
  }
  const double sa = a.sum();
  const double sb = b.sum();
  if (std::abs(sa - 1.0) > 1e-12 || std::abs(sb - 1.0) > 1e-12) {
    throw std::invalid_argument("infeasible marginals: sums are " + std::to_string(sa) + " and " +
                                std::to_string(sb) + ", expected 1");
  }
  if (!cost.allFinite()) throw std::invalid_argument("cost matrix has non-finite entries");
}

void check_entropic(const EntropicOptions& opt) {
  if (!(opt.epsilon > 0.0) || !std::isfinite(opt.epsilon)) {
    throw std::invalid_argument("epsilon must be > 0");
  }
  if (opt.num_iterations < 1) throw std::invalid_argument("num_iterations must be >= 1");
  if (!(opt.max_err > 0.0)) throw std::invalid_argument("max_err must be > 0");
}

double kl_term(const Matrix& plan, const Vector& a, const Vector& b) {
  double kl = 0.0;
  for (Index j = 0; j < plan.cols(); ++j) {
    for (Index i = 0; i < plan.rows(); ++i) {
      const double p = plan(i, j);
      if (p > 0.0) kl += p * std::log(p / (a[i] * b[j]));
    }
  }
  return kl;
}

double marginal_error(const Matrix& plan, const Vector& a, const Vector& b) {
  const double row = (plan.rowwise().sum() - a).cwiseAbs().sum();
  const double col = (plan.colwise().sum().transpose() - b).cwiseAbs().sum();
  return std::max(row, col);
}

SolveOutcome finish_entropic(Matrix plan, const Matrix& cost, const Vector& a, const Vector& b,
                             const EntropicOptions& opt, int iterations, double err, bool converged) {
  SolveOutcome out;
  out.cost = std::max(0.0, (plan.array() * cost.array()).sum());
  out.regularized_cost = out.cost + opt.epsilon * kl_term(plan, a, b);
  out.iterations = iterations;
  out.marginal_err = err;
  out.converged = converged;
  if (opt.keep_plan) out.plan = TransportPlan{std::move(plan), a, b};
  return out;
}

}  // namespace

namespace detail {

double exact_uniform_cost(const Eigen::Ref<const Eigen::MatrixXd>& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  std::vector<double> supply(n, static_cast<double>(m));
  std::vector<double> demand(m, static_cast<double>(n));
  NetworkSimplex ns(cost, supply, demand);
  if (ns.run() != NetworkSimplex::Status::optimal) {
    throw NumericalError("network simplex failed on a uniform transport problem");
  }
  return std::max(0.0, ns.total_cost() / (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace detail

SolveOutcome solve_exact(const Matrix& cost, const Vector& a, const Vector& b, bool keep_plan) {
  check_marginals(cost, a, b);
  std::vector<double> supply(a.data(), a.data() + a.size());
  std::vector<double> demand(b.data(), b.data() + b.size());
  detail::NetworkSimplex ns(cost, supply, demand);
  const auto status = ns.run();
  if (status != detail::NetworkSimplex::Status::optimal) {
    throw NumericalError("network simplex did not reach an optimal basis");
  }
  SolveOutcome out;
  out.iterations = static_cast<int>(std::min<std::int64_t>(ns.pivots(), std::numeric_limits<int>::max()));
  out.cost = std::max(0.0, ns.total_cost());
  ns.duals(out.dual_row, out.dual_col);
  if (keep_plan) {
    TransportPlan plan{Matrix::Zero(cost.rows(), cost.cols()), a, b};
    for (const auto& f : ns.flows()) plan.coupling(f.row, f.col) = f.amount;
    out.marginal_err = marginal_error(plan.coupling, a, b);
    out.plan = std::move(plan);
  }
  return out;
}

SolveOutcome solve_exact(const CostMatrix& cost, const Vector& a, const Vector& b, bool keep_plan) {
  return solve_exact(cost.entries, a, b, keep_plan);
}

SolveOutcome solve_sinkhorn(const Matrix& cost, const Vector& a, const Vector& b,
                            const EntropicOptions& opt) {
  check_marginals(cost, a, b);
  check_entropic(opt);

  const double eps = opt.epsilon;
  const Matrix kernel = cost.unaryExpr([eps](double c) { return std::exp(-c / eps); });
  constexpr double tiny = std::numeric_limits<double>::min();
  if ((kernel.rowwise().maxCoeff().array() < tiny).any() ||
      (kernel.colwise().maxCoeff().array() < tiny).any()) {
    throw NumericalError("sinkhorn: Gibbs kernel underflows (all-zero row or column); use "
                         "sinkhorn-stable or a larger epsilon");
  }

  Vector u = Vector::Ones(a.size());
  Vector v = Vector::Ones(b.size());
  Vector kv(a.size()), ktu(b.size());
  double err = std::numeric_limits<double>::infinity();
  bool converged = false;
  int it = 0;
  while (it < opt.num_iterations) {
    ++it;
    ktu.noalias() = kernel.transpose() * u;
    v = b.array() / ktu.array();
    kv.noalias() = kernel * v;
    u = a.array() / kv.array();
    if (!u.allFinite() || !v.allFinite()) {
      throw NumericalError("sinkhorn: scaling vectors overflowed; use sinkhorn-stable or a larger "
                           "epsilon");
    }
    if (it % 10 == 0 || it == opt.num_iterations) {
      ktu.noalias() = kernel.transpose() * u;
      const double col = (v.array() * ktu.array() - b.array()).abs().sum();
      kv.noalias() = kernel * v;
      const double row = (u.array() * kv.array() - a.array()).abs().sum();
      err = std::max(row, col);
      if (err <= opt.max_err) {
        converged = true;
        break;
      }
    }
  }
  Matrix plan = u.asDiagonal() * kernel * v.asDiagonal();
  if (!plan.allFinite()) throw NumericalError("sinkhorn: non-finite transport plan");
  return finish_entropic(std::move(plan), cost, a, b, opt, it, err, converged);
}

SolveOutcome solve_sinkhorn_stable(const Matrix& cost, const Vector& a, const Vector& b,
                                   const EntropicOptions& opt) {
  check_marginals(cost, a, b);
  check_entropic(opt);

  const Index n = cost.rows();
  const Index m = cost.cols();
  const double eps = opt.epsilon;
  const Matrix cost_t = cost.transpose();
  const Vector log_a = a.array().log();
  const Vector log_b = b.array().log();

  Vector f = Vector::Zero(n);
  Vector g = Vector::Zero(m);

  // softmin over i of (f_i - C_ij) for column j, returned as eps * log sum exp.
  auto lse_col = [&](Index j, const Vector& pot, const Matrix& c) {
    const auto col = c.col(j);
    double mx = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < col.size(); ++i) mx = std::max(mx, pot[i] - col[i]);
    double s = 0.0;
    for (Index i = 0; i < col.size(); ++i) s += std::exp((pot[i] - col[i] - mx) / eps);
    return mx + eps * std::log(s);
  };

  auto errors = [&] {
    double row = 0.0, col = 0.0;
    for (Index i = 0; i < n; ++i) row += std::abs(std::exp((f[i] + lse_col(i, g, cost_t)) / eps) - a[i]);
    for (Index j = 0; j < m; ++j) col += std::abs(std::exp((g[j] + lse_col(j, f, cost)) / eps) - b[j]);
    return std::max(row, col);
  };

  double err = std::numeric_limits<double>::infinity();
  bool converged = false;
  int it = 0;
  while (it < opt.num_iterations) {
    ++it;
    for (Index j = 0; j < m; ++j) {
      // log b_j = -inf for zero mass; the column then carries nothing.
      g[j] = std::isfinite(log_b[j]) ? eps * log_b[j] - lse_col(j, f, cost)
                                     : -std::numeric_limits<double>::infinity();
    }
    for (Index i = 0; i < n; ++i) {
      f[i] = std::isfinite(log_a[i]) ? eps * log_a[i] - lse_col(i, g, cost_t)
                                     : -std::numeric_limits<double>::infinity();
    }
    if (it % 10 == 0 || it == opt.num_iterations) {
      err = errors();
      if (err <= opt.max_err) {
        converged = true;
        break;
      }
    }
  }

  Matrix plan(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) plan(i, j) = std::exp((f[i] + g[j] - cost(i, j)) / eps);
  }
  if (!plan.allFinite()) throw NumericalError("sinkhorn-stable: non-finite transport plan");
  return finish_entropic(std::move(plan), cost, a, b, opt, it, err, converged);
}

double solve_1d(std::span<const double> marginal, std::span<const double> conditional, double p) {
  if (marginal.empty() || conditional.empty()) throw std::invalid_argument("solve_1d: empty input");
  if (!(p >= 1.0)) throw std::invalid_argument("solve_1d: order p must be >= 1");
  if (!std::is_sorted(marginal.begin(), marginal.end()) ||
      !std::is_sorted(conditional.begin(), conditional.end())) {
    throw std::invalid_argument("solve_1d: inputs must be sorted ascending");
  }
  // Breakpoints in units of 1 / (N * N_h): marginal steps every N_h, conditional every N.
  const auto n = static_cast<std::int64_t>(marginal.size());
  const auto nh = static_cast<std::int64_t>(conditional.size());
  auto power = [p](double d) { return p == 2.0 ? d * d : (p == 1.0 ? d : std::pow(d, p)); };

  std::size_t i = 0, j = 0;
  std::int64_t t = 0;
  double acc = 0.0;
  while (i < marginal.size() && j < conditional.size()) {
    const std::int64_t next_i = (static_cast<std::int64_t>(i) + 1) * nh;
    const std::int64_t next_j = (static_cast<std::int64_t>(j) + 1) * n;
    const std::int64_t next = std::min(next_i, next_j);
    acc += static_cast<double>(next - t) * power(std::abs(marginal[i] - conditional[j]));
    t = next;
    if (next_i == next) ++i;
    if (next_j == next) ++j;
  }
  return acc / (static_cast<double>(n) * static_cast<double>(nh));
}

}  // namespace otsense
