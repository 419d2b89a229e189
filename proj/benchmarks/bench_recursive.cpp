#include <numeric>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "bubbles/adf.hpp"
#include "bubbles/montecarlo.hpp"
#include "bubbles/recursive.hpp"

namespace {

std::vector<double> walk(std::size_t n) {
  std::mt19937_64 engine(1);
  std::normal_distribution<double> normal;
  std::vector<double> y(n);
  double level = 0.0;
  for (auto& v : y) v = level += normal(engine);
  return y;
}

void BM_AdfFullSample(benchmark::State& state) {
  const auto y = walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bubbles::adf_stat(y, bubbles::AdfSpec::fixed(0)));
}
BENCHMARK(BM_AdfFullSample)->Arg(500);

// All starts for the last end point: one backward family.
void BM_WindowFamily(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto y = walk(T);
  const std::size_t w0 = bubbles::phillips_window(T);
  std::vector<std::size_t> starts(T - w0 + 1);
  std::iota(starts.begin(), starts.end(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bubbles::window_family_stats(y, starts, T, bubbles::AdfSpec::fixed(k)));
  }
}
BENCHMARK(BM_WindowFamily)->Args({500, 0})->Args({500, 2});

// GSADF with the full BSADF sequence.
void BM_Recursive(benchmark::State& state) {
  const auto y = walk(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bubbles::run_recursive(y, bubbles::WindowPolicy::phillips(), bubbles::AdfSpec::fixed(0)));
  }
}
BENCHMARK(BM_Recursive)->Arg(151)->Arg(314)->Arg(465)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_NullReplication(benchmark::State& state) {
  bubbles::McConfig c;
  c.T = static_cast<std::size_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bubbles::simulate_null_replication(c, rep++));
}
BENCHMARK(BM_NullReplication)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
