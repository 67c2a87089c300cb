#include <benchmark/benchmark.h>

#include <random>

#include "mmot/costs.hpp"
#include "mmot/solver.hpp"

namespace {

using namespace mmot;

PairwiseCost random_cost(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(0.0, 1.0);
  std::vector<double> m(static_cast<std::size_t>(l) * l);
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j) {
      const double v = entry(rng);
      m[static_cast<std::size_t>(i) * l + j] = v;
      m[static_cast<std::size_t>(j) * l + i] = v;
    }
  return PairwiseCost::from_matrix(l, std::move(m));
}

void BM_SolveFullCatalog(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const CostSpec cost(random_cost(l, 7));
  const Marginal marginal = Marginal::uniform(l);
  for (auto _ : state) {
    const SolveReport r = solve_sae(cost, marginal, n);
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["columns"] = static_cast<double>(quantized_count(l, n));
}

void BM_SolveColumnGeneration(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const CostSpec cost(random_cost(l, 7));
  const Marginal marginal = Marginal::uniform(l);
  std::uint64_t generated = 0;
  for (auto _ : state) {
    const SolveReport r = solve_colgen(cost, marginal, n);
    generated += r.stats.columns_generated;
    benchmark::DoNotOptimize(r.cost);
  }
  state.counters["columns"] = benchmark::Counter(
      static_cast<double>(generated), benchmark::Counter::kAvgIterations);
}

void BM_MaximizeWasserstein(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const Marginal marginal = Marginal::uniform(l);
  for (auto _ : state) {
    const MaximizeReport r = maximize_wasserstein(marginal, n);
    benchmark::DoNotOptimize(r.value);
  }
}

void BM_OracleFull(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const CostSpec cost(random_cost(l, 7));
  const Marginal marginal = Marginal::uniform(l);
  for (auto _ : state) {
    const OracleReport r = solve_oracle_full(cost, marginal, n);
    benchmark::DoNotOptimize(r.cost);
  }
}

}  // namespace

BENCHMARK(BM_SolveFullCatalog)
    ->Args({4, 8})
    ->Args({5, 12})
    ->Args({5, 20})
    ->Args({6, 24})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveColumnGeneration)
    ->Args({5, 20})
    ->Args({6, 24})
    ->Args({6, 40})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximizeWasserstein)->Args({4, 8})->Args({5, 12})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleFull)->Args({3, 5})->Args({4, 5})
    ->Unit(benchmark::kMillisecond);
