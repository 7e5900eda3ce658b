#include "otsense/cost.hpp"
#include "otsense/estimators.hpp"
#include "otsense/models.hpp"
#include "otsense/solvers.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace otsense;

namespace {

Matrix random_cost(Index n, Index m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u;
  Matrix c(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) c(i, j) = u(rng);
  return c;
}

void BM_NetworkSimplex(benchmark::State& state) {
  const Index n = state.range(0), m = n / 10;
  const Matrix c = random_cost(n, m, 1);
  const Vector a = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Vector b = Vector::Constant(m, 1.0 / static_cast<double>(m));
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(c, a, b, false).cost);
}
BENCHMARK(BM_NetworkSimplex)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const Index n = state.range(0), m = n / 10;
  const Matrix c = random_cost(n, m, 2);
  const Vector a = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Vector b = Vector::Constant(m, 1.0 / static_cast<double>(m));
  EntropicOptions o;
  o.epsilon = 0.05;
  o.num_iterations = 10000;
  o.keep_plan = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_sinkhorn(c, a, b, o).cost);
}
BENCHMARK(BM_Sinkhorn)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SinkhornStable(benchmark::State& state) {
  const Index n = state.range(0), m = n / 10;
  const Matrix c = random_cost(n, m, 2);
  const Vector a = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Vector b = Vector::Constant(m, 1.0 / static_cast<double>(m));
  EntropicOptions o;
  o.epsilon = 0.05;
  o.num_iterations = 10000;
  o.keep_plan = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve_sinkhorn_stable(c, a, b, o).cost);
}
BENCHMARK(BM_SinkhornStable)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_WassBuresIndices(benchmark::State& state) {
  const auto ds = gen_linear_gaussian(state.range(0), 42);
  EstimatorOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ot_indices_wb(ds, 20, opts).inputs.front().index);
}
BENCHMARK(BM_WassBuresIndices)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_ExactIndices(benchmark::State& state) {
  const auto ds = gen_linear_gaussian(state.range(0), 42);
  EstimatorOptions opts;
  opts.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(ot_indices(ds, 20, GroundCost::sq_euclidean(), SolverConfig{}, opts).bound);
}
BENCHMARK(BM_ExactIndices)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
