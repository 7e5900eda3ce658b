#pragma once

// Primal network simplex for the dense transportation problem
//   min sum_ij c_ij f_ij  s.t.  sum_j f_ij = supply_i, sum_i f_ij = demand_j, f >= 0.
//
// Spanning-tree basis with an artificial root; trees are kept strongly
// feasible (leaving arc = last blocking arc met when walking the cycle from
// the join node), which rules out cycling under degeneracy. Entering arcs are
// priced in blocks of ~sqrt(#arcs).

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace otsense::detail {

class NetworkSimplex {
 public:
  enum class Status { optimal, infeasible, iteration_limit };

  struct Flow {
    int row;
    int col;
    double amount;
  };

  NetworkSimplex(const Eigen::Ref<const Eigen::MatrixXd>& cost, std::span<const double> supply,
                 std::span<const double> demand);

  Status run(std::int64_t max_pivots = -1);

  double total_cost() const;
  /// Nonzero flows on real arcs.
  std::vector<Flow> flows() const;
  /// Dual potentials u (rows), v (cols) with u_i + v_j <= c_ij, tight on the tree.
  void duals(Eigen::VectorXd& u, Eigen::VectorXd& v) const;
  std::int64_t pivots() const noexcept { return pivots_; }

 private:
  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  int n_ = 0;
  int m_ = 0;
  int node_num_ = 0;
  int arc_num_ = 0;
  int root_ = 0;

  std::vector<double> cost_;
  std::vector<int> source_;
  std::vector<int> target_;
  std::vector<double> flow_;
  std::vector<signed char> state_;
  std::vector<double> supply_;

  std::vector<double> pi_;
  std::vector<int> parent_;
  std::vector<int> pred_;
  std::vector<int> thread_;
  std::vector<int> rev_thread_;
  std::vector<int> succ_num_;
  std::vector<int> last_succ_;
  std::vector<char> forward_;
  std::vector<int> dirty_revs_;

  int block_size_ = 0;
  int next_arc_ = 0;
  double price_tol_ = 0.0;
  double flow_tol_ = 0.0;

  int in_arc_ = -1;
  int join_ = -1;
  int u_in_ = -1, v_in_ = -1, u_out_ = -1;
  double delta_ = 0.0;
  std::int64_t pivots_ = 0;
};

}  // namespace otsense::detail
