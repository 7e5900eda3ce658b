#include "otsense/cost.hpp"

#include "otsense/error.hpp"
#include "otsense/parallel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace otsense {

namespace {

constexpr Index kExactPairLimit = 5000;
constexpr std::uint64_t kSubsampleSeed = 0x5eed0b0d;

double minkowski(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                 const Eigen::Ref<const Eigen::RowVectorXd>& b, double p, double q) {
  double s = 0.0;
  for (Index j = 0; j < a.size(); ++j) s += std::pow(std::abs(a[j] - b[j]), p);
  return q == p ? s : std::pow(s, q / p);
}

double sq_dist(const Eigen::Ref<const Eigen::RowVectorXd>& a,
               const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  double s = 0.0;
  for (Index j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

Matrix gather(const SampleMatrix& y, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), y.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = y.values().row(rows[r]);
  return out;
}

void check_custom(const Matrix& m, Index rows, Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DataError("custom cost returned a " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " matrix, expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (!std::isfinite(v)) throw DataError("custom cost returned a non-finite value");
      if (v < 0.0) throw DataError("custom cost returned a negative value");
    }
  }
}

}  // namespace

GroundCost GroundCost::minkowski_power(double p, double q) {
  if (!(p >= 1.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw std::invalid_argument("minkowski-power needs order p >= 1 and exponent q > 0");
  }
  return GroundCost(MinkowskiPower{p, q});
}

GroundCost GroundCost::custom(Callback fn, std::string name) {
  if (!fn) throw std::invalid_argument("custom cost needs a callback");
  return GroundCost(Custom{std::move(fn), std::move(name)});
}

bool GroundCost::is_sq_euclidean() const noexcept {
  if (std::holds_alternative<SqEuclidean>(kind_)) return true;
  if (const auto* m = std::get_if<MinkowskiPower>(&kind_)) return m->p == 2.0 && m->q == 2.0;
  return false;
}

std::string GroundCost::name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SqEuclidean>) {
          return "sq-euclidean";
        } else if constexpr (std::is_same_v<K, MinkowskiPower>) {
          return "minkowski-power(" + std::to_string(k.p) + "," + std::to_string(k.q) + ")";
        } else {
          return k.name;
        }
      },
      kind_);
}

double GroundCost::pair(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                        const Eigen::Ref<const Eigen::RowVectorXd>& b) const {
  if (std::holds_alternative<SqEuclidean>(kind_)) return sq_dist(a, b);
  if (const auto* m = std::get_if<MinkowskiPower>(&kind_)) {
    if (m->p == 2.0 && m->q == 2.0) return sq_dist(a, b);
    return minkowski(a, b, m->p, m->q);
  }
  throw std::logic_error("GroundCost::pair is only defined for built-in costs");
}

CostMatrix cost_matrix(std::span<const Index> rows_a, std::span<const Index> rows_b,
                       const SampleMatrix& y, const GroundCost& cost) {
  for (auto r : rows_a) {
    if (r < 0 || r >= y.rows()) throw std::out_of_range("row index out of range");
  }
  for (auto r : rows_b) {
    if (r < 0 || r >= y.rows()) throw std::out_of_range("row index out of range");
  }
  CostMatrix out;
  out.row_points.assign(rows_a.begin(), rows_a.end());
  out.col_points.assign(rows_b.begin(), rows_b.end());
  const auto n = static_cast<Index>(rows_a.size());
  const auto m = static_cast<Index>(rows_b.size());

  if (const auto* c = std::get_if<GroundCost::Custom>(&cost.kind())) {
    out.entries = c->fn(gather(y, rows_a), gather(y, rows_b));
    check_custom(out.entries, n, m);
    return out;
  }
  out.entries.resize(n, m);
  const auto& v = y.values();
  for (Index b = 0; b < m; ++b) {
    for (Index a = 0; a < n; ++a) out.entries(a, b) = cost.pair(v.row(rows_a[a]), v.row(rows_b[b]));
  }
  return out;
}

Matrix pairwise_costs(const SampleMatrix& y, const GroundCost& cost, unsigned threads) {
  const Index n = y.rows();
  if (const auto* c = std::get_if<GroundCost::Custom>(&cost.kind())) {
    Matrix m = c->fn(y.values(), y.values());
    check_custom(m, n, n);
    return m;
  }
  Matrix out(n, n);
  const auto& v = y.values();
  // Column-major: fill column b for rows a <= b, mirror afterwards.
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t bi) {
    const auto b = static_cast<Index>(bi);
    out(b, b) = 0.0;
    for (Index a = 0; a < b; ++a) out(a, b) = cost.pair(v.row(a), v.row(b));
  });
  for (Index b = 0; b < n; ++b) {
    for (Index a = b + 1; a < n; ++a) out(a, b) = out(b, a);
  }
  return out;
}

double upper_bound_from_pairwise(const Matrix& pairwise) {
  const Index n = pairwise.rows();
  if (n < 2 || pairwise.cols() != n) throw std::invalid_argument("pairwise matrix must be square, N >= 2");
  double total = 0.0;
  for (Index b = 1; b < n; ++b) total += pairwise.col(b).head(b).sum();
  const double est = 2.0 * total / (static_cast<double>(n) * static_cast<double>(n - 1));
  if (!(est > 0.0)) throw DataError("zero bound: output sample is constant");
  return est;
}

double upper_bound(const SampleMatrix& y, const GroundCost& cost, UStatisticMode mode,
                   unsigned threads) {
  const Index n = y.rows();
  if (n < 2) throw std::invalid_argument("upper bound needs N >= 2");

  if (cost.is_sq_euclidean()) {
    const auto& v = y.values();
    double total = 0.0;
    for (Index j = 0; j < v.cols(); ++j) {
      const double mean = v.col(j).mean();
      total += (v.col(j).array() - mean).square().sum();
    }
    const double est = 2.0 * total / static_cast<double>(n - 1);
    if (!(est > 0.0)) throw DataError("zero bound: output sample is constant");
    return est;
  }

  if (mode == UStatisticMode::automatic && n > kExactPairLimit) {
    // Random subset of rows; all pairs within it.
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Index{0});
    auto gen = substream(kSubsampleSeed, static_cast<std::uint64_t>(n));
    for (Index i = 0; i < kExactPairLimit; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(pick(gen))]);
    }
    rows.resize(static_cast<std::size_t>(kExactPairLimit));
    return upper_bound_from_pairwise(pairwise_costs(y.select_rows(rows), cost, threads));
  }

  if (std::holds_alternative<GroundCost::Custom>(cost.kind())) {
    return upper_bound_from_pairwise(pairwise_costs(y, cost, threads));
  }
  // Built-in: row sums in parallel, ordered reduction.
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
  const auto& v = y.values();
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t bi) {
    const auto b = static_cast<Index>(bi);
    double s = 0.0;
    for (Index a = 0; a < b; ++a) s += cost.pair(v.row(a), v.row(b));
    partial[bi] = s;
  });
  const double total = std::accumulate(partial.begin(), partial.end(), 0.0);
  const double est = 2.0 * total / (static_cast<double>(n) * static_cast<double>(n - 1));
  if (!(est > 0.0)) throw DataError("zero bound: output sample is constant");
  return est;
}

}  // namespace otsense
