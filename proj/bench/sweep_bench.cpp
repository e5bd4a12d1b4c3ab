// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP equivalence sweep over a fixed seed range.

#include <benchmark/benchmark.h>

#include <numeric>

#include "loopmorph/sweep.hpp"

using namespace loopmorph;

namespace {

std::vector<std::uint64_t> seed_range(std::int64_t n) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  std::iota(seeds.begin(), seeds.end(), 1);
  return seeds;
}

std::vector<TransformKind> kinds() {
  return {std::begin(kAllTransforms), std::end(kAllTransforms)};
}

void BM_SweepSerial(benchmark::State& state) {
  auto seeds = seed_range(state.range(0));
  for (auto _ : state) {
    auto r = equivalence_sweep_serial(GenConfig{}, seeds, kinds());
    benchmark::DoNotOptimize(r.items.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}

void BM_SweepParallel(benchmark::State& state) {
  auto seeds = seed_range(state.range(0));
  for (auto _ : state) {
    auto r = equivalence_sweep(GenConfig{}, seeds, kinds(),
                               ConstructConfig{}, static_cast<int>(state.range(1)));
    benchmark::DoNotOptimize(r.items.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Args({32, 1})->Args({32, 2})->Args({32, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
