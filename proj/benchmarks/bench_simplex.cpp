#include <benchmark/benchmark.h>

#include <random>

#include "mmot/simplex.hpp"

namespace {

using namespace mmot::lp;

LinearProgram random_feasible_lp(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(0.0, 1.0);
  LinearProgram prog;
  prog.sense = Sense::minimize;
  prog.A = ColMatrix<double>(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) prog.A.at(i, j) = entry(rng);
  std::vector<double> x0(static_cast<std::size_t>(n));
  for (double& v : x0) v = entry(rng);
  prog.b.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      prog.b[static_cast<std::size_t>(i)] +=
          prog.A.at(i, j) * x0[static_cast<std::size_t>(j)];
  prog.c.resize(static_cast<std::size_t>(n));
  for (double& v : prog.c) v = entry(rng);
  return prog;
}

void BM_SimplexRandom(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const LinearProgram prog = random_feasible_lp(m, n, 42);
  long pivots = 0;
  for (auto _ : state) {
    const LPSolution sol = solve(prog);
    pivots += sol.stats.pivots;
    benchmark::DoNotOptimize(sol.objective);
  }
  state.counters["pivots"] =
      benchmark::Counter(static_cast<double>(pivots),
                         benchmark::Counter::kAvgIterations);
}

void BM_SimplexDantzig(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const LinearProgram prog = random_feasible_lp(m, n, 42);
  SimplexOptions options;
  options.rule = PivotRule::dantzig;
  for (auto _ : state) {
    const LPSolution sol = solve(prog, options);
    benchmark::DoNotOptimize(sol.objective);
  }
}

}  // namespace

BENCHMARK(BM_SimplexRandom)->Args({5, 50})->Args({10, 200})->Args({20, 1000});
BENCHMARK(BM_SimplexDantzig)->Args({5, 50})->Args({10, 200})->Args({20, 1000});
