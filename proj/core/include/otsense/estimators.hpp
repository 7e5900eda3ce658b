#pragma once

#include "otsense/cost.hpp"
#include "otsense/estimate.hpp"
#include "otsense/sample.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otsense {

struct EstimatorOptions {
  /// Weight class h by N_h / N instead of the plain 1/H average.
  bool weighted = false;
  /// Worker cap, 0 = default_thread_count().
  unsigned threads = 0;
  UStatisticMode bound_mode = UStatisticMode::automatic;
};

/// Given-data OT indices: for each input and class, the OT cost between the
/// full output sample (weights 1/N) and the class subsample (weights 1/N_h),
/// averaged over classes and divided by upper_bound(y, cost).
/// `cfg.solver` must be exact, sinkhorn or sinkhorn-stable. With exact and a
/// squared-Euclidean cost the Wasserstein-Bures components are attached and
/// residual = max(0, index - advective - diffusive).
IndexEstimate ot_indices(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                         const SolverConfig& cfg, const EstimatorOptions& opts = {});

/// Quantile-based indices for a single output column, cost |.|^p.
IndexEstimate ot_indices_1d(const SensitivityDataset& ds, int partitions, double p = 2.0,
                            const EstimatorOptions& opts = {});

/// Wasserstein-Bures indices from empirical means and covariances, split into
/// advective (mean) and diffusive (covariance) parts. Every class needs more
/// rows than there are output columns.
IndexEstimate ot_indices_wb(const SensitivityDataset& ds, int partitions,
                            const EstimatorOptions& opts = {});

/// One-dimensional indices for every (output, input) pair.
struct SensitivityMap {
  Matrix values;  ///< rows = outputs, columns = inputs
  std::vector<std::string> outputs;
  std::vector<std::string> inputs;
};

SensitivityMap ot_indices_smap(const SensitivityDataset& ds, int partitions,
                               const EstimatorOptions& opts = {});

/// Dispatches on cfg.solver (1d, wass-bures, or the general solvers).
IndexEstimate estimate_indices(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                               const SolverConfig& cfg, const EstimatorOptions& opts = {});

enum class DummyDistribution { standard_normal, uniform };

/// Index of a synthetic input drawn independently of y: the estimator's noise
/// floor. The pseudo-input is named "rnorm" or "runif".
IndexEstimate irrelevance_threshold(const SampleMatrix& y, int partitions, DummyDistribution dummy,
                                    const GroundCost& cost, const SolverConfig& cfg,
                                    std::uint64_t seed, const EstimatorOptions& opts = {});

/// K_eps(P^N, P^N) / bound: the entropic index an input independent of y
/// attains in the population limit. O(N^2) memory.
double entropic_self_index(const SampleMatrix& y, const GroundCost& cost, const SolverConfig& cfg,
                           const EstimatorOptions& opts = {});

struct SeparationRow {
  std::string input;
  int partition = 0;  ///< 1-based
  double x = 0.0;     ///< class representative
  double value = 0.0; ///< separation / bound
};

std::vector<SeparationRow> local_separations(const IndexEstimate& est);

}  // namespace otsense
