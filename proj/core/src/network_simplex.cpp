#include "network_simplex.hpp"

#include "otsense/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace otsense::detail {

namespace {
constexpr signed char kUpper = -1;
constexpr signed char kTree = 0;
constexpr signed char kLower = 1;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

NetworkSimplex::NetworkSimplex(const Eigen::Ref<const Eigen::MatrixXd>& cost,
                               std::span<const double> supply, std::span<const double> demand)
    : n_(static_cast<int>(cost.rows())), m_(static_cast<int>(cost.cols())) {
  node_num_ = n_ + m_;
  arc_num_ = n_ * m_;
  root_ = node_num_;
  const int all_arcs = arc_num_ + node_num_;

  cost_.resize(static_cast<std::size_t>(all_arcs));
  source_.resize(static_cast<std::size_t>(all_arcs));
  target_.resize(static_cast<std::size_t>(all_arcs));
  flow_.assign(static_cast<std::size_t>(all_arcs), 0.0);
  state_.assign(static_cast<std::size_t>(all_arcs), kLower);

  double max_cost = 0.0;
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < n_; ++i) {
      const int e = j * n_ + i;
      const double c = cost(i, j);
      cost_[static_cast<std::size_t>(e)] = c;
      source_[static_cast<std::size_t>(e)] = i;
      target_[static_cast<std::size_t>(e)] = n_ + j;
      max_cost = std::max(max_cost, std::abs(c));
    }
  }

  supply_.assign(static_cast<std::size_t>(node_num_ + 1), 0.0);
  double total = 0.0;
  for (int i = 0; i < n_; ++i) {
    supply_[static_cast<std::size_t>(i)] = supply[static_cast<std::size_t>(i)];
    total += supply[static_cast<std::size_t>(i)];
  }
  for (int j = 0; j < m_; ++j) supply_[static_cast<std::size_t>(n_ + j)] = -demand[static_cast<std::size_t>(j)];

  const double art_cost = (max_cost + 1.0) * node_num_;
  price_tol_ = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, max_cost);
  flow_tol_ = 1e-11 * std::max(1.0, total);

  block_size_ = std::max(static_cast<int>(std::sqrt(static_cast<double>(arc_num_))), 10);

  const auto nodes = static_cast<std::size_t>(node_num_ + 1);
  pi_.assign(nodes, 0.0);
  parent_.assign(nodes, -1);
  pred_.assign(nodes, -1);
  thread_.assign(nodes, 0);
  rev_thread_.assign(nodes, 0);
  succ_num_.assign(nodes, 0);
  last_succ_.assign(nodes, 0);
  forward_.assign(nodes, 0);

  parent_[static_cast<std::size_t>(root_)] = -1;
  pred_[static_cast<std::size_t>(root_)] = -1;
  thread_[static_cast<std::size_t>(root_)] = 0;
  rev_thread_[0] = root_;
  succ_num_[static_cast<std::size_t>(root_)] = node_num_ + 1;
  last_succ_[static_cast<std::size_t>(root_)] = root_ - 1;
  pi_[static_cast<std::size_t>(root_)] = 0.0;

  for (int u = 0, e = arc_num_; u != node_num_; ++u, ++e) {
    const auto us = static_cast<std::size_t>(u);
    const auto es = static_cast<std::size_t>(e);
    parent_[us] = root_;
    pred_[us] = e;
    thread_[us] = u + 1;
    rev_thread_[us + 1] = u;
    succ_num_[us] = 1;
    last_succ_[us] = u;
    state_[es] = kTree;
    if (supply_[us] >= 0.0) {
      forward_[us] = 1;
      pi_[us] = 0.0;
      source_[es] = u;
      target_[es] = root_;
      flow_[es] = supply_[us];
      cost_[es] = 0.0;
    } else {
      forward_[us] = 0;
      pi_[us] = art_cost;
      source_[es] = root_;
      target_[es] = u;
      flow_[es] = -supply_[us];
      cost_[es] = art_cost;
    }
  }
}

bool NetworkSimplex::find_entering_arc() {
  double min = -price_tol_;
  bool found = false;
  int cnt = block_size_;
  int e = next_arc_;
  for (; e != arc_num_; ++e) {
    const auto es = static_cast<std::size_t>(e);
    const double c = state_[es] * (cost_[es] + pi_[static_cast<std::size_t>(source_[es])] -
                                   pi_[static_cast<std::size_t>(target_[es])]);
    if (c < min) {
      min = c;
      in_arc_ = e;
      found = true;
    }
    if (--cnt == 0) {
      if (found) {
        next_arc_ = e + 1 == arc_num_ ? 0 : e + 1;
        return true;
      }
      cnt = block_size_;
    }
  }
  for (e = 0; e != next_arc_; ++e) {
    const auto es = static_cast<std::size_t>(e);
    const double c = state_[es] * (cost_[es] + pi_[static_cast<std::size_t>(source_[es])] -
                                   pi_[static_cast<std::size_t>(target_[es])]);
    if (c < min) {
      min = c;
      in_arc_ = e;
      found = true;
    }
    if (--cnt == 0) {
      if (found) {
        next_arc_ = e + 1;
        return true;
      }
      cnt = block_size_;
    }
  }
  if (!found) return false;
  next_arc_ = e == arc_num_ ? 0 : e;
  return true;
}

void NetworkSimplex::find_join_node() {
  int u = source_[static_cast<std::size_t>(in_arc_)];
  int v = target_[static_cast<std::size_t>(in_arc_)];
  while (u != v) {
    if (succ_num_[static_cast<std::size_t>(u)] < succ_num_[static_cast<std::size_t>(v)]) {
      u = parent_[static_cast<std::size_t>(u)];
    } else {
      v = parent_[static_cast<std::size_t>(v)];
    }
  }
  join_ = u;
}

bool NetworkSimplex::find_leaving_arc() {
  const auto in = static_cast<std::size_t>(in_arc_);
  int first, second;
  if (state_[in] == kLower) {
    first = source_[in];
    second = target_[in];
  } else {
    first = target_[in];
    second = source_[in];
  }
  delta_ = kInf;
  int result = 0;
  for (int u = first; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
    const auto us = static_cast<std::size_t>(u);
    const double d = forward_[us] ? flow_[static_cast<std::size_t>(pred_[us])] : kInf;
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
    const auto us = static_cast<std::size_t>(u);
    const double d = forward_[us] ? kInf : flow_[static_cast<std::size_t>(pred_[us])];
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow() {
  const auto in = static_cast<std::size_t>(in_arc_);
  if (delta_ > 0.0) {
    const double val = state_[in] * delta_;
    flow_[in] += val;
    for (int u = source_[in]; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
      const auto us = static_cast<std::size_t>(u);
      flow_[static_cast<std::size_t>(pred_[us])] += forward_[us] ? -val : val;
    }
    for (int u = target_[in]; u != join_; u = parent_[static_cast<std::size_t>(u)]) {
      const auto us = static_cast<std::size_t>(u);
      flow_[static_cast<std::size_t>(pred_[us])] += forward_[us] ? val : -val;
    }
  }
  state_[in] = kTree;
  const auto out = static_cast<std::size_t>(pred_[static_cast<std::size_t>(u_out_)]);
  state_[out] = kLower;
  flow_[out] = 0.0;
}

void NetworkSimplex::update_tree_structure() {
  auto P = [this](int x) -> int& { return parent_[static_cast<std::size_t>(x)]; };
  auto T = [this](int x) -> int& { return thread_[static_cast<std::size_t>(x)]; };
  auto RT = [this](int x) -> int& { return rev_thread_[static_cast<std::size_t>(x)]; };
  auto SN = [this](int x) -> int& { return succ_num_[static_cast<std::size_t>(x)]; };
  auto LS = [this](int x) -> int& { return last_succ_[static_cast<std::size_t>(x)]; };

  const int old_rev_thread = RT(u_out_);
  const int old_succ_num = SN(u_out_);
  const int old_last_succ = LS(u_out_);
  const int v_out = P(u_out_);

  int u = LS(u_in_);
  int right = T(u);
  int last;
  if (old_rev_thread == v_in_) {
    last = T(LS(u_out_));
  } else {
    last = T(v_in_);
  }

  // Re-hang the stem u_in .. u_out under v_in, fixing thread order.
  int stem = u_in_;
  T(v_in_) = stem;
  dirty_revs_.clear();
  dirty_revs_.push_back(v_in_);
  int par_stem = v_in_;
  while (stem != u_out_) {
    const int new_stem = P(stem);
    T(u) = new_stem;
    dirty_revs_.push_back(u);

    const int w = RT(stem);
    T(w) = right;
    RT(right) = w;

    P(stem) = par_stem;
    par_stem = stem;
    stem = new_stem;

    u = LS(stem) == LS(par_stem) ? RT(par_stem) : LS(stem);
    right = T(u);
  }
  P(u_out_) = par_stem;
  T(u) = last;
  RT(last) = u;
  LS(u_out_) = u;

  if (old_rev_thread != v_in_) {
    T(old_rev_thread) = right;
    RT(right) = old_rev_thread;
  }
  for (int x : dirty_revs_) RT(T(x)) = x;

  // pred / forward / succ_num / last_succ along the reversed stem.
  int tmp_sc = 0;
  const int tmp_ls = LS(u_out_);
  u = u_out_;
  while (u != u_in_) {
    const int w = P(u);
    pred_[static_cast<std::size_t>(u)] = pred_[static_cast<std::size_t>(w)];
    forward_[static_cast<std::size_t>(u)] = !forward_[static_cast<std::size_t>(w)];
    tmp_sc += SN(u) - SN(w);
    SN(u) = tmp_sc;
    LS(w) = tmp_ls;
    u = w;
  }
  pred_[static_cast<std::size_t>(u_in_)] = in_arc_;
  forward_[static_cast<std::size_t>(u_in_)] = (u_in_ == source_[static_cast<std::size_t>(in_arc_)]);
  SN(u_in_) = old_succ_num;

  int up_limit_in = -1;
  int up_limit_out = -1;
  if (LS(join_) == v_in_) {
    up_limit_out = join_;
  } else {
    up_limit_in = join_;
  }

  for (u = v_in_; u != up_limit_in && LS(u) == v_in_; u = P(u)) LS(u) = LS(u_out_);

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (u = v_out; u != up_limit_out && LS(u) == old_last_succ; u = P(u)) LS(u) = old_rev_thread;
  } else {
    for (u = v_out; u != up_limit_out && LS(u) == old_last_succ; u = P(u)) LS(u) = LS(u_out_);
  }

  for (u = v_in_; u != join_; u = P(u)) SN(u) += old_succ_num;
  for (u = v_out; u != join_; u = P(u)) SN(u) -= old_succ_num;
}

void NetworkSimplex::update_potential() {
  const auto ui = static_cast<std::size_t>(u_in_);
  const auto vi = static_cast<std::size_t>(v_in_);
  const double c = cost_[static_cast<std::size_t>(pred_[ui])];
  const double sigma = forward_[ui] ? pi_[vi] - pi_[ui] - c : pi_[vi] - pi_[ui] + c;
  const int end = thread_[static_cast<std::size_t>(last_succ_[ui])];
  for (int u = u_in_; u != end; u = thread_[static_cast<std::size_t>(u)]) {
    pi_[static_cast<std::size_t>(u)] += sigma;
  }
}

NetworkSimplex::Status NetworkSimplex::run(std::int64_t max_pivots) {
  while (find_entering_arc()) {
    if (max_pivots >= 0 && pivots_ >= max_pivots) return Status::iteration_limit;
    find_join_node();
    if (!find_leaving_arc()) throw NumericalError("network simplex: unbounded pivot");
    change_flow();
    update_tree_structure();
    update_potential();
    ++pivots_;
  }
  for (int e = arc_num_; e != arc_num_ + node_num_; ++e) {
    if (flow_[static_cast<std::size_t>(e)] > flow_tol_) return Status::infeasible;
  }
  return Status::optimal;
}

double NetworkSimplex::total_cost() const {
  double c = 0.0;
  for (int e = 0; e != arc_num_; ++e) {
    const auto es = static_cast<std::size_t>(e);
    if (flow_[es] != 0.0) c += flow_[es] * cost_[es];
  }
  return c;
}

std::vector<NetworkSimplex::Flow> NetworkSimplex::flows() const {
  std::vector<Flow> out;
  for (int e = 0; e != arc_num_; ++e) {
    const auto es = static_cast<std::size_t>(e);
    if (flow_[es] > 0.0) out.push_back({source_[es], target_[es] - n_, flow_[es]});
  }
  return out;
}

void NetworkSimplex::duals(Eigen::VectorXd& u, Eigen::VectorXd& v) const {
  u.resize(n_);
  v.resize(m_);
  for (int i = 0; i < n_; ++i) u[i] = -pi_[static_cast<std::size_t>(i)];
  for (int j = 0; j < m_; ++j) v[j] = pi_[static_cast<std::size_t>(n_ + j)];
}

}  // namespace otsense::detail
