#pragma once

#include "otsense/estimate.hpp"
#include "otsense/estimators.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace otsense {

struct BootstrapOptions {
  int replicates = 1000;
  double confidence = 0.95;
  CiType type = CiType::normal;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Standard normal inverse CDF (Acklam's rational approximation refined by
/// one Halley step; absolute error well below 1e-9 on (0, 1)).
double normal_quantile(double p);

/// Type-7 empirical quantile (linear interpolation between order statistics).
double quantile_type7(std::vector<double> values, double prob);

/// Interval for one statistic from its original value and replicates.
///   normal:     original - bias -/+ z sd
///   basic:      (2 original - q_hi, 2 original - q_lo)
///   percentile: (q_lo, q_hi)
/// with bias = mean(replicates) - original and q the type-7 quantiles at
/// (1 -/+ confidence) / 2.
BootstrapEntry confidence_interval(double original, std::span<const double> replicates, CiType type,
                                   double confidence);

/// Statistic evaluated on a row resample; may throw DegenerateInputError to
/// request a redraw.
using RowStatistic = std::function<std::vector<double>(std::span<const Index> rows)>;

struct ReplicateSet {
  std::vector<double> original;
  /// replicates x statistics, in replicate order.
  Matrix values;
  int redraws = 0;
};

/// Evaluates `statistic` on the identity rows and on `replicates` resamples
/// with replacement. Replicate r draws its rows from substream(seed, r,
/// attempt), so results do not depend on `threads`. At most 10 * replicates
/// redraws in total before a DataError.
ReplicateSet bootstrap_replicates(Index n, const RowStatistic& statistic, int replicates,
                                  std::uint64_t seed, unsigned threads = 0);

/// Row-resampling bootstrap of estimate_indices(): partitions are rebuilt in
/// every replicate. Entries cover the index of every input (component named
/// after the method) and, when present, the advective / diffusive / residual
/// parts.
BootstrapResult bootstrap_indices(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                                  const SolverConfig& cfg, const BootstrapOptions& boot,
                                  const EstimatorOptions& opts = {});

/// estimate_indices() with the bootstrap table attached.
IndexEstimate estimate_with_bootstrap(const SensitivityDataset& ds, int partitions,
                                      const GroundCost& cost, const SolverConfig& cfg,
                                      const BootstrapOptions& boot, const EstimatorOptions& opts = {});

}  // namespace otsense
