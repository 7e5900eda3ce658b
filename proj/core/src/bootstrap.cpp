#include "otsense/bootstrap.hpp"

#include "otsense/error.hpp"
#include "otsense/parallel.hpp"

#include <atomic>
#include <numeric>
#include <stdexcept>

namespace otsense {

void BootstrapOptions::validate() const {
  if (replicates < 2) throw std::invalid_argument("bootstrap needs at least 2 replicates");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
}

namespace {

ReplicateSet run_replicates(Index n, const RowStatistic& statistic, std::vector<double> original,
                            int replicates, std::uint64_t seed, unsigned threads) {
  if (replicates < 1) throw std::invalid_argument("bootstrap needs at least 1 replicate");
  ReplicateSet out;
  out.original = std::move(original);
  const auto stats = static_cast<Index>(out.original.size());
  out.values.resize(replicates, stats);

  const long long budget = 10LL * replicates;
  std::atomic<long long> redraws{0};
  std::uniform_int_distribution<Index> pick(0, n - 1);

  parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t r) {
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (std::uint64_t attempt = 0;; ++attempt) {
      auto rng = substream(seed, r, attempt);
      auto dist = pick;
      for (auto& v : rows) v = dist(rng);
      try {
        const auto values = statistic(rows);
        if (static_cast<Index>(values.size()) != stats) {
          throw std::logic_error("bootstrap statistic changed length between replicates");
        }
        for (Index s = 0; s < stats; ++s) out.values(static_cast<Index>(r), s) = values[static_cast<std::size_t>(s)];
        return;
      } catch (const DegenerateInputError&) {
        if (redraws.fetch_add(1) + 1 > budget) {
          throw DataError("bootstrap: too many degenerate resamples (more than " + std::to_string(budget) +
                          " redraws)");
        }
      }
    }
  });
  out.redraws = static_cast<int>(redraws.load());
  return out;
}

}  // namespace

ReplicateSet bootstrap_replicates(Index n, const RowStatistic& statistic, int replicates,
                                  std::uint64_t seed, unsigned threads) {
  if (n < 1) throw std::invalid_argument("bootstrap of an empty sample");
  std::vector<Index> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), Index{0});
  return run_replicates(n, statistic, statistic(identity), replicates, seed, threads);
}

namespace {

struct Layout {
  std::vector<std::string> component_names;  // one per block of d statistics
};

Layout layout_of(const IndexEstimate& est) {
  Layout l;
  l.component_names.push_back(est.method);
  const bool comps = !est.inputs.empty() && est.inputs.front().components.has_value();
  if (comps) {
    l.component_names.push_back("advective");
    l.component_names.push_back("diffusive");
    if (est.method != "wass-bures") l.component_names.push_back("residual");
  }
  return l;
}

std::vector<double> flatten(const IndexEstimate& est, const Layout& l) {
  std::vector<double> v;
  for (const auto& c : l.component_names) {
    for (const auto& in : est.inputs) {
      if (c == est.method) {
        v.push_back(in.index);
        continue;
      }
      if (!in.components) throw DegenerateInputError("degenerate input: components unavailable in resample");
      if (c == "advective") v.push_back(in.components->advective);
      else if (c == "diffusive") v.push_back(in.components->diffusive);
      else v.push_back(in.components->residual);
    }
  }
  return v;
}

BootstrapResult bootstrap_impl(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                                      const SolverConfig& cfg, const BootstrapOptions& boot,
                                      const EstimatorOptions& opts, const IndexEstimate& original) {
  boot.validate();
  const Layout layout = layout_of(original);
  EstimatorOptions inner = opts;
  inner.threads = 1;
  const RowStatistic statistic = [&](std::span<const Index> rows) {
    return flatten(estimate_indices(ds.select_rows(rows), partitions, cost, cfg, inner), layout);
  };
  const ReplicateSet reps =
      run_replicates(ds.n(), statistic, flatten(original, layout), boot.replicates, boot.seed, opts.threads);

  BootstrapResult res;
  res.replicates = boot.replicates;
  res.type = boot.type;
  res.confidence = boot.confidence;
  const auto d = original.inputs.size();
  std::vector<double> column(static_cast<std::size_t>(boot.replicates));
  for (std::size_t c = 0; c < layout.component_names.size(); ++c) {
    for (std::size_t i = 0; i < d; ++i) {
      const auto s = static_cast<Index>(c * d + i);
      for (Index r = 0; r < reps.values.rows(); ++r) column[static_cast<std::size_t>(r)] = reps.values(r, s);
      auto e = confidence_interval(reps.original[static_cast<std::size_t>(s)], column, boot.type, boot.confidence);
      e.input = original.inputs[i].name;
      e.component = layout.component_names[c];
      res.entries.push_back(std::move(e));
    }
  }
  return res;
}

}  // namespace

BootstrapResult bootstrap_indices(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                                  const SolverConfig& cfg, const BootstrapOptions& boot,
                                  const EstimatorOptions& opts) {
  const auto original = estimate_indices(ds, partitions, cost, cfg, opts);
  return bootstrap_impl(ds, partitions, cost, cfg, boot, opts, original);
}

IndexEstimate estimate_with_bootstrap(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                                      const SolverConfig& cfg, const BootstrapOptions& boot,
                                      const EstimatorOptions& opts) {
  auto est = estimate_indices(ds, partitions, cost, cfg, opts);
  est.bootstrap = bootstrap_impl(ds, partitions, cost, cfg, boot, opts, est);
  return est;
}

}  // namespace otsense
