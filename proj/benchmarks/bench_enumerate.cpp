#include <benchmark/benchmark.h>

#include "mmot/quantized.hpp"

namespace {

void BM_EnumerateCatalog(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto catalog = mmot::enumerate_quantized(l, n);
    benchmark::DoNotOptimize(catalog);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(mmot::quantized_count(l, n)));
}

void BM_StreamCatalog(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) {
    long sum = 0;
    mmot::for_each_occupation(l, n, [&](std::span<const int> rho) {
      sum += rho[0];
    });
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(mmot::quantized_count(l, n)));
}

}  // namespace

BENCHMARK(BM_EnumerateCatalog)->Args({3, 10})->Args({5, 20})->Args({6, 30});
BENCHMARK(BM_StreamCatalog)->Args({5, 20})->Args({6, 30})->Args({8, 24});
