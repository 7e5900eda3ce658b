#pragma once

#include "otsense/cost.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace otsense {

enum class SolverKind { one_d, wass_bures, exact, sinkhorn, sinkhorn_stable };

std::string_view to_string(SolverKind kind) noexcept;
/// Accepts "1d", "wass-bures", "exact", "sinkhorn", "sinkhorn-stable".
SolverKind parse_solver(std::string_view name);

bool is_entropic(SolverKind kind) noexcept;

struct SolverConfig {
  SolverKind solver = SolverKind::exact;
  /// Entropic regularization. Unset means 0.01 * mean of the (scaled) cost matrix.
  std::optional<double> epsilon;
  int num_iterations = 1000;
  double max_err = 1e-9;
  /// Order of the |.|^p cost for the 1-D solver.
  double p = 2.0;
  /// Entropic solvers divide the cost matrix by its largest entry, which makes
  /// epsilon dimensionless.
  bool scale_cost = true;

  void validate() const;
};

struct Components {
  double advective = 0.0;
  double diffusive = 0.0;
  double residual = 0.0;
};

struct InputIndex {
  std::string name;
  double index = 0.0;
  std::optional<Components> components;
  /// Per-class separations, each divided by the bound.
  std::vector<double> separations;
  /// Per-class mean input value.
  std::vector<double> representatives;
};

enum class CiType { normal, basic, percentile };

std::string_view to_string(CiType type) noexcept;
CiType parse_ci_type(std::string_view name);

struct BootstrapEntry {
  std::string input;
  std::string component;
  double original = 0.0;
  double bias = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct BootstrapResult {
  int replicates = 0;
  CiType type = CiType::normal;
  double confidence = 0.95;
  std::vector<BootstrapEntry> entries;

  /// Entry for (input, component) or nullptr.
  const BootstrapEntry* find(std::string_view input, std::string_view component) const;
};

struct IndexEstimate {
  std::string method;
  double bound = 0.0;
  std::vector<InputIndex> inputs;
  /// False when some entropic solve stopped at its iteration cap.
  bool converged = true;
  std::optional<BootstrapResult> bootstrap;

  const InputIndex* find(std::string_view name) const;
};

}  // namespace otsense
