#include "otsense/estimators.hpp"

#include "otsense/error.hpp"
#include "otsense/parallel.hpp"
#include "otsense/partition.hpp"
#include "otsense/solvers.hpp"
#include "solvers_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace otsense {

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::one_d: return "1d";
    case SolverKind::wass_bures: return "wass-bures";
    case SolverKind::exact: return "exact";
    case SolverKind::sinkhorn: return "sinkhorn";
    case SolverKind::sinkhorn_stable: return "sinkhorn-stable";
  }
  return "unknown";
}

SolverKind parse_solver(std::string_view name) {
  if (name == "1d") return SolverKind::one_d;
  if (name == "wass-bures") return SolverKind::wass_bures;
  if (name == "exact") return SolverKind::exact;
  if (name == "sinkhorn") return SolverKind::sinkhorn;
  if (name == "sinkhorn-stable") return SolverKind::sinkhorn_stable;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

bool is_entropic(SolverKind kind) noexcept {
  return kind == SolverKind::sinkhorn || kind == SolverKind::sinkhorn_stable;
}

void SolverConfig::validate() const {
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
    throw std::invalid_argument("epsilon must be > 0");
  }
  if (num_iterations < 1) throw std::invalid_argument("num_iterations must be >= 1");
  if (!(max_err > 0.0)) throw std::invalid_argument("max_err must be > 0");
  if (!(p >= 1.0)) throw std::invalid_argument("order p must be >= 1");
}

std::string_view to_string(CiType type) noexcept {
  switch (type) {
    case CiType::normal: return "normal";
    case CiType::basic: return "basic";
    case CiType::percentile: return "percentile";
  }
  return "unknown";
}

CiType parse_ci_type(std::string_view name) {
  if (name == "normal" || name == "norm") return CiType::normal;
  if (name == "basic") return CiType::basic;
  if (name == "percentile" || name == "perc") return CiType::percentile;
  throw std::invalid_argument("unknown confidence interval type '" + std::string(name) + "'");
}

const BootstrapEntry* BootstrapResult::find(std::string_view input, std::string_view component) const {
  for (const auto& e : entries) {
    if (e.input == input && e.component == component) return &e;
  }
  return nullptr;
}

const InputIndex* IndexEstimate::find(std::string_view name) const {
  for (const auto& in : inputs) {
    if (in.name == name) return &in;
  }
  return nullptr;
}

namespace {

struct Moments {
  Vector mean;
  Matrix cov;
};

Moments moments(const Matrix& y, std::span<const Index> rows) {
  const auto n = static_cast<Index>(rows.size());
  Matrix block(n, y.cols());
  for (Index r = 0; r < n; ++r) block.row(r) = y.row(rows[static_cast<std::size_t>(r)]);
  Moments m;
  m.mean = block.colwise().mean().transpose();
  block.rowwise() -= m.mean.transpose();
  m.cov = (block.transpose() * block) / static_cast<double>(n - 1);
  return m;
}

Moments moments(const Matrix& y) {
  Moments m;
  m.mean = y.colwise().mean().transpose();
  const Matrix centered = y.rowwise() - m.mean.transpose();
  m.cov = (centered.transpose() * centered) / static_cast<double>(y.rows() - 1);
  return m;
}

/// Bures cost against a marginal whose square root is already known.
BuresCost bures_against(const Moments& marg, const Matrix& marg_sqrt, const Moments& cls) {
  BuresCost out;
  out.advective = (marg.mean - cls.mean).squaredNorm();
  double cross;
  if (marg.cov.rows() == 1) {
    cross = marg_sqrt(0, 0) * std::sqrt(std::max(cls.cov(0, 0), 0.0));
  } else {
    const Matrix inner = marg_sqrt * cls.cov * marg_sqrt;
    cross = matrix_sqrt_psd(0.5 * (inner + inner.transpose())).trace();
  }
  out.diffusive = std::max(0.0, marg.cov.trace() + cls.cov.trace() - 2.0 * cross);
  out.total = out.advective + out.diffusive;
  return out;
}

double class_average(const std::vector<double>& per_class, const Partitioning& part, bool weighted) {
  double acc = 0.0;
  if (weighted) {
    const auto n = static_cast<double>(part.size());
    for (int h = 0; h < part.class_count(); ++h) {
      acc += per_class[static_cast<std::size_t>(h)] * static_cast<double>(part.members(h).size()) / n;
    }
    return acc;
  }
  for (double v : per_class) acc += v;
  return acc / static_cast<double>(per_class.size());
}

/// Wasserstein-Bures costs of every (input, class).
std::vector<std::vector<BuresCost>> bures_per_class(const SensitivityDataset& ds,
                                                    const std::vector<Partitioning>& parts,
                                                    unsigned threads) {
  const Matrix& y = ds.y().values();
  const Moments marg = moments(y);
  const Matrix marg_sqrt = matrix_sqrt_psd(marg.cov);
  const auto d = parts.size();
  const auto h_count = static_cast<std::size_t>(parts.front().class_count());
  std::vector<std::vector<BuresCost>> out(d, std::vector<BuresCost>(h_count));
  parallel_for(d * h_count, threads, [&](std::size_t t) {
    const std::size_t i = t / h_count;
    const std::size_t h = t % h_count;
    const auto cls = moments(y, parts[i].members(static_cast<int>(h)));
    out[i][h] = bures_against(marg, marg_sqrt, cls);
  });
  return out;
}

void attach_components(IndexEstimate& est, const std::vector<Partitioning>& parts,
                       const std::vector<std::vector<BuresCost>>& wb, bool weighted,
                       bool residual_from_total) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<double> adv, dif;
    for (const auto& b : wb[i]) {
      adv.push_back(b.advective);
      dif.push_back(b.diffusive);
    }
    Components c;
    c.advective = class_average(adv, parts[i], weighted) / est.bound;
    c.diffusive = class_average(dif, parts[i], weighted) / est.bound;
    c.residual = residual_from_total
                     ? std::max(0.0, est.inputs[i].index - (c.advective + c.diffusive))
                     : 0.0;
    est.inputs[i].components = c;
  }
}

IndexEstimate assemble(std::string method, double bound, const SensitivityDataset& ds,
                       const std::vector<Partitioning>& parts,
                       const std::vector<std::vector<double>>& cost, bool weighted) {
  IndexEstimate est;
  est.method = std::move(method);
  est.bound = bound;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    InputIndex in;
    in.name = ds.x().names()[i];
    in.index = class_average(cost[i], parts[i], weighted) / bound;
    in.separations.reserve(cost[i].size());
    for (double c : cost[i]) in.separations.push_back(c / bound);
    in.representatives = parts[i].representatives();
    est.inputs.push_back(std::move(in));
  }
  return est;
}

double resolve_epsilon(const SolverConfig& cfg, double mean_scaled_cost) {
  if (cfg.epsilon) return *cfg.epsilon;
  const double eps = 0.01 * mean_scaled_cost;
  if (!(eps > 0.0)) throw DataError("cannot derive a default epsilon from a zero cost matrix");
  return eps;
}

}  // namespace

IndexEstimate ot_indices(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                         const SolverConfig& cfg, const EstimatorOptions& opts) {
  cfg.validate();
  if (cfg.solver != SolverKind::exact && !is_entropic(cfg.solver)) {
    throw std::invalid_argument("ot_indices supports the exact, sinkhorn and sinkhorn-stable solvers");
  }
  const auto parts = partition_all(ds.x(), partitions);
  const double bound = upper_bound(ds.y(), cost, opts.bound_mode, opts.threads);
  const Index n = ds.n();
  const bool entropic = is_entropic(cfg.solver);

  // Whole N x N cost matrix when it fits; per-class blocks otherwise.
  constexpr Index kDenseLimit = 5000;
  Matrix full;
  const bool dense = n <= kDenseLimit;
  double scale = 1.0;
  double mean_cost = 0.0;
  if (dense) {
    full = pairwise_costs(ds.y(), cost, opts.threads);
    if (entropic) {
      mean_cost = full.mean();
      if (cfg.scale_cost) scale = full.maxCoeff();
    }
  } else if (entropic) {
    std::vector<Index> all(static_cast<std::size_t>(n));
    for (Index r = 0; r < n; ++r) all[static_cast<std::size_t>(r)] = r;
    std::vector<double> col_max(static_cast<std::size_t>(n)), col_sum(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), opts.threads, [&](std::size_t r) {
      const Index one = static_cast<Index>(r);
      const auto block = cost_matrix(all, std::span<const Index>(&one, 1), ds.y(), cost);
      col_max[r] = block.entries.maxCoeff();
      col_sum[r] = block.entries.sum();
    });
    mean_cost = 0.0;
    for (double s : col_sum) mean_cost += s;
    mean_cost /= static_cast<double>(n) * static_cast<double>(n);
    if (cfg.scale_cost) scale = *std::max_element(col_max.begin(), col_max.end());
  }
  if (!(scale > 0.0)) throw DataError("zero bound: output sample is constant");

  EntropicOptions eopt;
  if (entropic) {
    eopt.epsilon = resolve_epsilon(cfg, mean_cost / scale);
    eopt.num_iterations = cfg.num_iterations;
    eopt.max_err = cfg.max_err;
    eopt.keep_plan = false;
  }

  const auto d = parts.size();
  const auto h_count = static_cast<std::size_t>(partitions);
  std::vector<std::vector<double>> per_class(d, std::vector<double>(h_count, 0.0));
  std::vector<char> converged(d * h_count, 1);
  std::vector<Index> all_rows;
  if (!dense) {
    all_rows.resize(static_cast<std::size_t>(n));
    for (Index r = 0; r < n; ++r) all_rows[static_cast<std::size_t>(r)] = r;
  }

  parallel_for(d * h_count, opts.threads, [&](std::size_t t) {
    const std::size_t i = t / h_count;
    const auto h = static_cast<int>(t % h_count);
    const auto members = parts[i].members(h);
    Matrix block;
    if (dense) {
      block.resize(n, static_cast<Index>(members.size()));
      for (std::size_t c = 0; c < members.size(); ++c) block.col(static_cast<Index>(c)) = full.col(members[c]);
    } else {
      block = cost_matrix(all_rows, members, ds.y(), cost).entries;
    }

    double value;
    if (!entropic) {
      value = detail::exact_uniform_cost(block);
    } else {
      if (scale != 1.0) block /= scale;
      const Vector a = Vector::Constant(n, 1.0 / static_cast<double>(n));
      const Vector b = Vector::Constant(block.cols(), 1.0 / static_cast<double>(block.cols()));
      const auto r = cfg.solver == SolverKind::sinkhorn ? solve_sinkhorn(block, a, b, eopt)
                                                        : solve_sinkhorn_stable(block, a, b, eopt);
      value = r.cost * scale;
      converged[t] = r.converged ? 1 : 0;
    }
    per_class[i][static_cast<std::size_t>(h)] = value;
  });

  auto est = assemble(std::string(to_string(cfg.solver)), bound, ds, parts, per_class, opts.weighted);
  est.converged = std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });

  if (cfg.solver == SolverKind::exact && cost.is_sq_euclidean()) {
    const bool estimable = std::all_of(parts.begin(), parts.end(), [](const Partitioning& p) {
      for (int h = 0; h < p.class_count(); ++h) {
        if (p.members(h).size() < 2) return false;
      }
      return true;
    });
    if (estimable) {
      attach_components(est, parts, bures_per_class(ds, parts, opts.threads), opts.weighted, true);
    }
  }
  return est;
}

IndexEstimate ot_indices_1d(const SensitivityDataset& ds, int partitions, double p,
                            const EstimatorOptions& opts) {
  if (ds.k() != 1) {
    throw std::invalid_argument("ot_indices_1d needs exactly one output column, got " +
                                std::to_string(ds.k()));
  }
  if (!(p >= 1.0)) throw std::invalid_argument("order p must be >= 1");
  const auto parts = partition_all(ds.x(), partitions);
  const auto cost = p == 2.0 ? GroundCost::sq_euclidean() : GroundCost::minkowski_power(p, p);
  const double bound = upper_bound(ds.y(), cost, opts.bound_mode, opts.threads);

  std::vector<double> sorted_y = ds.y().column(0);
  std::sort(sorted_y.begin(), sorted_y.end());
  const auto d = parts.size();
  const auto h_count = static_cast<std::size_t>(partitions);
  std::vector<std::vector<double>> per_class(d, std::vector<double>(h_count, 0.0));
  const Matrix& y = ds.y().values();

  parallel_for(d * h_count, opts.threads, [&](std::size_t t) {
    const std::size_t i = t / h_count;
    const auto members = parts[i].members(static_cast<int>(t % h_count));
    std::vector<double> cond;
    cond.reserve(members.size());
    for (Index r : members) cond.push_back(y(r, 0));
    std::sort(cond.begin(), cond.end());
    per_class[i][t % h_count] = solve_1d(sorted_y, cond, p);
  });
  return assemble("1d", bound, ds, parts, per_class, opts.weighted);
}

IndexEstimate ot_indices_wb(const SensitivityDataset& ds, int partitions, const EstimatorOptions& opts) {
  const auto parts = partition_all(ds.x(), partitions);
  for (const auto& p : parts) {
    for (int h = 0; h < p.class_count(); ++h) {
      if (static_cast<Index>(p.members(h).size()) <= ds.k()) {
        throw DataError("class too small for covariance estimation: " +
                        std::to_string(p.members(h).size()) + " rows for " + std::to_string(ds.k()) +
                        " outputs (need N_h > k)");
      }
    }
  }
  const double bound = upper_bound(ds.y(), GroundCost::sq_euclidean(), opts.bound_mode, opts.threads);
  const auto wb = bures_per_class(ds, parts, opts.threads);

  std::vector<std::vector<double>> per_class(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& b : wb[i]) per_class[i].push_back(b.total);
  }
  auto est = assemble("wass-bures", bound, ds, parts, per_class, opts.weighted);
  attach_components(est, parts, wb, opts.weighted, false);
  for (auto& in : est.inputs) in.index = in.components->advective + in.components->diffusive;
  return est;
}

SensitivityMap ot_indices_smap(const SensitivityDataset& ds, int partitions,
                               const EstimatorOptions& opts) {
  SensitivityMap out;
  out.values.resize(ds.k(), ds.d());
  out.outputs = ds.y().names();
  out.inputs = ds.x().names();
  for (Index j = 0; j < ds.k(); ++j) {
    const Index col = j;
    auto sub = SensitivityDataset::create(ds.x(), ds.y().select_cols(std::span<const Index>(&col, 1)));
    IndexEstimate est;
    try {
      est = ot_indices_1d(sub, partitions, 2.0, opts);
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " (output '" + out.outputs[static_cast<std::size_t>(j)] +
                      "')");
    }
    for (Index i = 0; i < ds.d(); ++i) out.values(j, i) = est.inputs[static_cast<std::size_t>(i)].index;
  }
  return out;
}

IndexEstimate estimate_indices(const SensitivityDataset& ds, int partitions, const GroundCost& cost,
                               const SolverConfig& cfg, const EstimatorOptions& opts) {
  cfg.validate();
  switch (cfg.solver) {
    case SolverKind::one_d: return ot_indices_1d(ds, partitions, cfg.p, opts);
    case SolverKind::wass_bures: return ot_indices_wb(ds, partitions, opts);
    default: return ot_indices(ds, partitions, cost, cfg, opts);
  }
}

IndexEstimate irrelevance_threshold(const SampleMatrix& y, int partitions, DummyDistribution dummy,
                                    const GroundCost& cost, const SolverConfig& cfg,
                                    std::uint64_t seed, const EstimatorOptions& opts) {
  auto gen = substream(seed, 0xd0e);
  Matrix x(y.rows(), 1);
  if (dummy == DummyDistribution::standard_normal) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (Index r = 0; r < y.rows(); ++r) x(r, 0) = dist(gen);
  } else {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (Index r = 0; r < y.rows(); ++r) x(r, 0) = dist(gen);
  }
  const std::string name = dummy == DummyDistribution::standard_normal ? "rnorm" : "runif";
  auto ds = SensitivityDataset::create(SampleMatrix::create(std::move(x), {name}), y);
  return estimate_indices(ds, partitions, cost, cfg, opts);
}

double entropic_self_index(const SampleMatrix& y, const GroundCost& cost, const SolverConfig& cfg,
                           const EstimatorOptions& opts) {
  cfg.validate();
  if (!is_entropic(cfg.solver)) throw std::invalid_argument("entropic_self_index needs an entropic solver");
  const double bound = upper_bound(y, cost, opts.bound_mode, opts.threads);
  Matrix c = pairwise_costs(y, cost, opts.threads);
  const double scale = cfg.scale_cost ? c.maxCoeff() : 1.0;
  const double mean_cost = c.mean();
  c /= scale;
  EntropicOptions eopt;
  eopt.epsilon = resolve_epsilon(cfg, mean_cost / scale);
  eopt.num_iterations = cfg.num_iterations;
  eopt.max_err = cfg.max_err;
  eopt.keep_plan = false;
  const Vector w = Vector::Constant(y.rows(), 1.0 / static_cast<double>(y.rows()));
  const auto r = cfg.solver == SolverKind::sinkhorn ? solve_sinkhorn(c, w, w, eopt)
                                                    : solve_sinkhorn_stable(c, w, w, eopt);
  return r.cost * scale / bound;
}

std::vector<SeparationRow> local_separations(const IndexEstimate& est) {
  std::vector<SeparationRow> rows;
  for (const auto& in : est.inputs) {
    for (std::size_t h = 0; h < in.separations.size(); ++h) {
      rows.push_back({in.name, static_cast<int>(h) + 1,
                      h < in.representatives.size() ? in.representatives[h] : 0.0, in.separations[h]});
    }
  }
  return rows;
}

}  // namespace otsense
