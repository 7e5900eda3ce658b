#include "otsense/error.hpp"
#include "otsense/estimators.hpp"
#include "otsense/io.hpp"
#include "otsense/models.hpp"
#include "support.hpp"

#include <Eigen/QR>
#include <doctest.h>

#include <cmath>

using namespace otsense;

namespace {

SensitivityDataset small_gaussian(Index n, std::uint64_t seed) {
  return gen_linear_gaussian(n, seed);
}

SensitivityDataset independent(Index n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return validate_dataset(testing::uniform_matrix(static_cast<int>(n), 2, rng),
                          testing::normal_matrix(static_cast<int>(n), k, rng));
}

SolverConfig solver(SolverKind kind, std::optional<double> eps = std::nullopt) {
  SolverConfig cfg;
  cfg.solver = kind;
  cfg.epsilon = eps;
  cfg.num_iterations = 5000;
  cfg.max_err = 1e-9;
  return cfg;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("exact indices are normalized and nonnegative") {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto ds = small_gaussian(400, seed);
    const auto est = ot_indices(ds, 10, GroundCost::sq_euclidean(), SolverConfig{});
    REQUIRE(est.inputs.size() == 3);
    for (const auto& in : est.inputs) {
      CHECK(in.index >= 0.0);
      CHECK(in.index <= 1.02);
      REQUIRE(in.components.has_value());
      CHECK(in.components->residual >= 0.0);
      CHECK(in.separations.size() == 10);
    }
    const auto ind = ot_indices(independent(400, 2, seed), 10, GroundCost::minkowski_power(1, 2), SolverConfig{});
    for (const auto& in : ind.inputs) {
      CHECK(in.index >= 0.0);
      CHECK(in.index <= 1.02);
      CHECK_FALSE(in.components.has_value());
    }
  }
}

TEST_CASE("affine maps of the output leave squared-euclidean indices unchanged") {
  const auto ds = small_gaussian(300, 5);
  std::mt19937_64 rng(5);
  const Matrix q = Eigen::HouseholderQR<Matrix>(testing::normal_matrix(2, 2, rng)).householderQ();
  Matrix y2 = 3.7 * ds.y().values() * q.transpose();
  y2.rowwise() += Eigen::RowVector2d(-40.0, 12.5);
  const auto moved = validate_dataset(ds.x().values(), y2, ds.x().names(), ds.y().names());
  // strictly increasing maps of an input keep its classes
  Matrix x2 = ds.x().values();
  x2.col(0) = x2.col(0).array().exp();
  const auto reranked = validate_dataset(x2, ds.y().values(), ds.x().names(), ds.y().names());

  for (const auto kind : {SolverKind::exact, SolverKind::wass_bures, SolverKind::sinkhorn_stable}) {
    const auto cfg = solver(kind, 0.05);
    const auto a = estimate_indices(ds, 8, GroundCost::sq_euclidean(), cfg);
    const auto b = estimate_indices(moved, 8, GroundCost::sq_euclidean(), cfg);
    const auto c = estimate_indices(reranked, 8, GroundCost::sq_euclidean(), cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(a.inputs[i].index - b.inputs[i].index) < 1e-9);
      CHECK(std::abs(a.inputs[i].index - c.inputs[i].index) < 1e-12);
      if (a.inputs[i].components) {
        CHECK(std::abs(a.inputs[i].components->advective - b.inputs[i].components->advective) < 1e-9);
        CHECK(std::abs(a.inputs[i].components->diffusive - b.inputs[i].components->diffusive) < 1e-9);
      }
    }
  }
}

TEST_CASE("wass-bures total is advective plus diffusive") {
  const auto ds = small_gaussian(500, 6);
  const auto est = ot_indices_wb(ds, 10);
  CHECK(est.method == "wass-bures");
  for (const auto& in : est.inputs) {
    REQUIRE(in.components.has_value());
    CHECK(std::abs(in.index - (in.components->advective + in.components->diffusive)) <= 1e-12);
    CHECK(in.components->advective >= 0.0);
    CHECK(in.components->diffusive >= 0.0);
    CHECK(in.components->residual == 0.0);
  }
  // wb lower-bounds the exact index up to sampling slack
  const auto ex = ot_indices(ds, 10, GroundCost::sq_euclidean(), SolverConfig{});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(est.inputs[i].index <= ex.inputs[i].index + 0.05);
    CHECK(std::abs(ex.inputs[i].components->advective - est.inputs[i].components->advective) < 1e-12);
  }
}

TEST_CASE("wass-bures needs more rows per class than outputs") {
  std::mt19937_64 rng(7);
  const auto ds = validate_dataset(testing::uniform_matrix(12, 1, rng), testing::normal_matrix(12, 3, rng));
  CHECK_THROWS_AS(ot_indices_wb(ds, 4), DataError);
  CHECK_NOTHROW(ot_indices_wb(ds, 2));
}

TEST_CASE("functional dependence gives an index near one") {
  std::mt19937_64 rng(8);
  const Matrix x = testing::uniform_matrix(2000, 1, rng);
  const auto ds = validate_dataset(x, x);
  for (const auto kind : {SolverKind::exact, SolverKind::one_d, SolverKind::wass_bures}) {
    const auto est = estimate_indices(ds, 20, GroundCost::sq_euclidean(), solver(kind));
    CHECK(est.inputs.front().index >= 0.9);
  }
}

TEST_CASE("independent inputs stay at the noise floor") {
  const auto ds = independent(2000, 2, 9);
  const auto est = ot_indices(ds, 20, GroundCost::sq_euclidean(), SolverConfig{});
  for (const auto& in : est.inputs) CHECK(in.index <= 0.1);
  const auto thr = irrelevance_threshold(ds.y(), 20, DummyDistribution::standard_normal,
                                         GroundCost::sq_euclidean(), SolverConfig{}, 1);
  CHECK(thr.inputs.front().name == "rnorm");
  CHECK(thr.inputs.front().index <= 0.1);
  const auto thr2 = irrelevance_threshold(ds.y(), 20, DummyDistribution::uniform, GroundCost::sq_euclidean(),
                                          SolverConfig{}, 2);
  CHECK(thr2.inputs.front().name == "runif");
  CHECK(std::abs(thr.inputs.front().index - thr2.inputs.front().index) < 0.05);
}

TEST_CASE("results do not depend on the thread count") {
  const auto ds = small_gaussian(300, 10);
  for (const auto kind : {SolverKind::exact, SolverKind::sinkhorn, SolverKind::wass_bures, SolverKind::one_d}) {
    SolverConfig cfg = solver(kind, 0.05);
    EstimatorOptions one, many;
    one.threads = 1;
    many.threads = 4;
    SensitivityDataset use = ds;
    if (kind == SolverKind::one_d) {
      const Index col = 0;
      use = SensitivityDataset::create(ds.x(), ds.y().select_cols(std::span<const Index>(&col, 1)));
    }
    const auto a = estimate_indices(use, 10, GroundCost::sq_euclidean(), cfg, one);
    const auto b = estimate_indices(use, 10, GroundCost::sq_euclidean(), cfg, many);
    CHECK(results_json(a) == results_json(b));
  }
}

TEST_CASE("1-D and exact estimators coincide for a single output") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 60 + 37 * trial;
    const Matrix x = testing::uniform_matrix(n, 2, rng);
    Matrix y(n, 1);
    y.col(0) = (3.0 * x.col(0)).array().sin() + 0.3 * testing::normal_matrix(n, 1, rng).col(0).array();
    const auto ds = validate_dataset(x, y);
    const int m = 2 + trial;
    const auto a = ot_indices_1d(ds, m);
    const auto b = ot_indices(ds, m, GroundCost::sq_euclidean(), SolverConfig{});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.inputs[i].index - b.inputs[i].index) <= 1e-8);
    const auto a1 = ot_indices_1d(ds, m, 1.0);
    const auto b1 = ot_indices(ds, m, GroundCost::minkowski_power(1, 1), SolverConfig{});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a1.inputs[i].index - b1.inputs[i].index) <= 1e-8);
  }
  const auto two = small_gaussian(100, 1);
  CHECK_THROWS_AS(ot_indices_1d(two, 5), std::invalid_argument);
}

TEST_CASE("sensitivity map rows match the 1-D estimator") {
  const auto ds = small_gaussian(400, 12);
  const auto map = ot_indices_smap(ds, 10);
  REQUIRE(map.values.rows() == 2);
  REQUIRE(map.values.cols() == 3);
  CHECK(map.outputs == std::vector<std::string>{"Y1", "Y2"});
  for (Index j = 0; j < 2; ++j) {
    const auto sub = SensitivityDataset::create(ds.x(), ds.y().select_cols(std::span<const Index>(&j, 1)));
    const auto est = ot_indices_1d(sub, 10);
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(map.values(j, i) - est.inputs[static_cast<std::size_t>(i)].index) <= 1e-12);
  }
}

TEST_CASE("custom cost reproduces the built-in one") {
  const auto ds = small_gaussian(200, 13);
  const auto custom = GroundCost::custom([](const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < b.rows(); ++j) c(i, j) = (a.row(i) - b.row(j)).squaredNorm();
    return c;
  });
  const auto a = ot_indices(ds, 5, GroundCost::sq_euclidean(), SolverConfig{});
  const auto b = ot_indices(ds, 5, custom, SolverConfig{});
  for (std::size_t i = 0; i < 3; ++i) CHECK(a.inputs[i].index == doctest::Approx(b.inputs[i].index).epsilon(1e-10));
}

TEST_CASE("class weighting") {
  const auto ds = small_gaussian(400, 14);
  EstimatorOptions w;
  w.weighted = true;
  const auto a = ot_indices(ds, 10, GroundCost::sq_euclidean(), SolverConfig{});
  const auto b = ot_indices(ds, 10, GroundCost::sq_euclidean(), SolverConfig{}, w);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a.inputs[i].index == doctest::Approx(b.inputs[i].index).epsilon(1e-12));
  const auto c = ot_indices(ds, 7, GroundCost::sq_euclidean(), SolverConfig{}, w);
  for (const auto& in : c.inputs) {
    double s = 0.0;
    for (std::size_t h = 0; h < in.separations.size(); ++h) s += in.separations[h] * (h < 400 % 7 ? 58.0 : 57.0) / 400.0;
    CHECK(in.index == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("separations peak at the extreme classes of a monotone driver") {
  std::mt19937_64 rng(15);
  const Matrix x = testing::uniform_matrix(1000, 2, rng);
  const Matrix y = x.col(0);
  const auto est = ot_indices(validate_dataset(x, y), 10, GroundCost::sq_euclidean(), SolverConfig{});
  const auto& s = est.inputs[0].separations;
  const double ends = std::min(s.front(), s.back());
  for (std::size_t h = 2; h + 2 < s.size(); ++h) CHECK(s[h] < ends);
  const auto rows = local_separations(est);
  REQUIRE(rows.size() == 20);
  CHECK(rows.front().partition == 1);
  CHECK(rows[9].partition == 10);
  CHECK(rows.front().x < rows[9].x);
  double mean = 0.0;
  for (double v : s) mean += v / 10.0;
  CHECK(mean == doctest::Approx(est.inputs[0].index).epsilon(1e-12));
}

TEST_CASE("entropic indices sit above the entropic self-transport floor") {
  for (std::uint64_t seed : {16u, 17u}) {
    const auto ds = independent(400, 2, seed);
    for (double eps : {0.05, 0.01}) {
      const auto cfg = solver(SolverKind::sinkhorn_stable, eps);
      const double floor = entropic_self_index(ds.y(), GroundCost::sq_euclidean(), cfg);
      CHECK(floor > 0.0);
      const auto est = ot_indices(ds, 8, GroundCost::sq_euclidean(), cfg);
      for (const auto& in : est.inputs) CHECK(in.index >= floor - 1e-9);
    }
  }
}

TEST_CASE("solver misuse") {
  const auto ds = small_gaussian(50, 18);
  CHECK_THROWS_AS(ot_indices(ds, 5, GroundCost::sq_euclidean(), solver(SolverKind::wass_bures)),
                  std::invalid_argument);
  SolverConfig bad;
  bad.epsilon = -1.0;
  CHECK_THROWS_AS(estimate_indices(ds, 5, GroundCost::sq_euclidean(), bad), std::invalid_argument);
  CHECK_THROWS_AS(ot_indices(ds, 1, GroundCost::sq_euclidean(), SolverConfig{}), std::invalid_argument);
  CHECK(parse_solver("sinkhorn-stable") == SolverKind::sinkhorn_stable);
  CHECK_THROWS_AS(parse_solver("simplex"), std::invalid_argument);
  CHECK(to_string(SolverKind::one_d) == "1d");
}

}  // TEST_SUITE
