#include "otsense/bootstrap.hpp"
#include "otsense/error.hpp"
#include "otsense/io.hpp"
#include "otsense/models.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace otsense;

TEST_SUITE("bootstrap") {

TEST_CASE("normal quantile inverts the normal CDF") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  for (double p : {1e-12, 1e-6, 0.001, 0.02, 0.1, 0.3, 0.7, 0.9, 0.99, 0.999999}) {
    const double x = normal_quantile(p);
    const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(std::abs(cdf - p) <= 1e-10 * std::min(p, 1.0 - p) + 1e-15);
    if (p >= 1e-6) CHECK(normal_quantile(1.0 - p) == doctest::Approx(-x).epsilon(1e-9));
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK_THROWS_AS(normal_quantile(1.5), std::invalid_argument);
}

TEST_CASE("type-7 quantiles") {
  CHECK(quantile_type7({5, 1, 4, 2, 3}, 0.25) == 2.0);
  CHECK(quantile_type7({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile_type7({1, 2, 3, 4}, 0.0) == 1.0);
  CHECK(quantile_type7({1, 2, 3, 4}, 1.0) == 4.0);
  CHECK(quantile_type7({10, 20}, 0.1) == doctest::Approx(11.0));
  CHECK_THROWS_AS(quantile_type7({}, 0.5), std::invalid_argument);
}

TEST_CASE("interval formulas") {
  const std::vector<double> reps{0.9, 1.0, 1.1, 1.2, 1.3};
  const double orig = 1.0;
  const double mean = 1.1;
  const double sd = std::sqrt((0.04 + 0.01 + 0.0 + 0.01 + 0.04) / 4.0);
  const double z = normal_quantile(0.95);

  const auto n = confidence_interval(orig, reps, CiType::normal, 0.9);
  CHECK(n.bias == doctest::Approx(mean - orig));
  CHECK(n.ci_low == doctest::Approx(orig - (mean - orig) - z * sd));
  CHECK(n.ci_high == doctest::Approx(orig - (mean - orig) + z * sd));

  const double q_lo = quantile_type7(reps, 0.05), q_hi = quantile_type7(reps, 0.95);
  const auto b = confidence_interval(orig, reps, CiType::basic, 0.9);
  CHECK(b.ci_low == doctest::Approx(2.0 * orig - q_hi));
  CHECK(b.ci_high == doctest::Approx(2.0 * orig - q_lo));

  const auto p = confidence_interval(orig, reps, CiType::percentile, 0.9);
  CHECK(p.ci_low == doctest::Approx(q_lo));
  CHECK(p.ci_high == doctest::Approx(q_hi));
  CHECK(p.ci_low == doctest::Approx(0.92));

  CHECK_THROWS_AS(confidence_interval(orig, std::vector<double>{1.0}, CiType::normal, 0.9), std::invalid_argument);
  CHECK(parse_ci_type("norm") == CiType::normal);
  CHECK(parse_ci_type("perc") == CiType::percentile);
}

TEST_CASE("bootstrap of a sample mean") {
  std::mt19937_64 rng(31);
  const Matrix v = testing::normal_matrix(400, 1, rng);
  const RowStatistic mean = [&](std::span<const Index> rows) {
    double s = 0.0;
    for (Index r : rows) s += v(r, 0);
    return std::vector<double>{s / static_cast<double>(rows.size())};
  };
  const auto reps = bootstrap_replicates(400, mean, 2000, 7, 2);
  CHECK(reps.original.front() == doctest::Approx(v.mean()));
  const auto col = reps.values.col(0);
  const std::vector<double> rv(col.data(), col.data() + col.size());
  const auto ci = confidence_interval(reps.original.front(), rv, CiType::normal, 0.95);
  const double sd = std::sqrt((v.array() - v.mean()).square().sum() / 400.0);
  const double half = 1.959963984540054 * sd / std::sqrt(400.0);
  CHECK((ci.ci_high - ci.ci_low) / 2.0 == doctest::Approx(half).epsilon(0.1));
  CHECK(std::abs(ci.bias) < 0.2 * half);
}

TEST_CASE("replicates are reproducible across thread counts") {
  const RowStatistic first_rows = [](std::span<const Index> rows) {
    return std::vector<double>{static_cast<double>(rows[0]), static_cast<double>(rows[1])};
  };
  const auto a = bootstrap_replicates(50, first_rows, 64, 99, 1);
  const auto b = bootstrap_replicates(50, first_rows, 64, 99, 4);
  CHECK(a.values == b.values);
  const auto c = bootstrap_replicates(50, first_rows, 64, 100, 1);
  CHECK(a.values != c.values);
}

TEST_CASE("degenerate resamples are redrawn within a budget") {
  const RowStatistic distinct = [](std::span<const Index> rows) {
    std::set<Index> s(rows.begin(), rows.end());
    if (s.size() < 2) throw DegenerateInputError("degenerate input: constant column");
    return std::vector<double>{static_cast<double>(s.size())};
  };
  const auto r = bootstrap_replicates(2, distinct, 200, 5, 1);
  CHECK(r.redraws > 0);
  CHECK(r.values.minCoeff() == 2.0);

  const RowStatistic only_identity = [](std::span<const Index> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] != static_cast<Index>(i)) throw DegenerateInputError("degenerate input: constant column");
    }
    return std::vector<double>{1.0};
  };
  CHECK_THROWS_AS(bootstrap_replicates(8, only_identity, 10, 1, 1), DataError);
}

TEST_CASE("index bootstrap table") {
  const auto ds = gen_linear_gaussian(300, 3);
  BootstrapOptions b;
  b.replicates = 30;
  b.seed = 4;
  const auto est = estimate_with_bootstrap(ds, 6, GroundCost::sq_euclidean(), SolverConfig{}, b);
  REQUIRE(est.bootstrap.has_value());
  CHECK(est.bootstrap->replicates == 30);
  CHECK(est.bootstrap->entries.size() == 3 * 4);
  for (const char* comp : {"exact", "advective", "diffusive", "residual"}) {
    for (const auto& in : est.inputs) {
      const auto* e = est.bootstrap->find(in.name, comp);
      REQUIRE(e != nullptr);
      CHECK(e->ci_low <= e->ci_high);
    }
  }
  for (const auto& in : est.inputs) CHECK(est.bootstrap->find(in.name, "exact")->original == in.index);

  const auto wb = estimate_with_bootstrap(ds, 6, GroundCost::sq_euclidean(),
                                          SolverConfig{SolverKind::wass_bures}, b);
  CHECK(wb.bootstrap->entries.size() == 3 * 3);
  CHECK(wb.bootstrap->find("X1", "wass-bures") != nullptr);
  CHECK(wb.bootstrap->find("X1", "residual") == nullptr);

  EstimatorOptions one, many;
  one.threads = 1;
  many.threads = 3;
  const auto p = estimate_with_bootstrap(ds, 6, GroundCost::sq_euclidean(), SolverConfig{SolverKind::wass_bures}, b, one);
  const auto q = estimate_with_bootstrap(ds, 6, GroundCost::sq_euclidean(), SolverConfig{SolverKind::wass_bures}, b, many);
  CHECK(results_json(p) == results_json(q));

  BootstrapOptions bad = b;
  bad.confidence = 1.0;
  CHECK_THROWS_AS(bootstrap_indices(ds, 6, GroundCost::sq_euclidean(), SolverConfig{}, bad), std::invalid_argument);
}

}  // TEST_SUITE
