#include <benchmark/benchmark.h>

#include "wanderlab/interval.hpp"
#include "wanderlab/model_map.hpp"
#include "wanderlab/tower.hpp"

using namespace wanderlab;

static void BM_IntervalCosh(benchmark::State& state) {
  Interval x(0.3, 0.30001);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cosh(x));
  }
}
BENCHMARK(BM_IntervalCosh);

static void BM_TowerPrototypeStep(benchmark::State& state) {
  const Interval lam = pi_interval() * Interval(4.0);
  const TowerReal x = tw_from_real(349.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tw_prototype_step(x, lam));
  }
}
BENCHMARK(BM_TowerPrototypeStep);

static void BM_TowerAdd(benchmark::State& state) {
  const TowerReal a = tw_from_real(1e200), b = tw_from_real(3.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tw_add(a, b));
  }
}
BENCHMARK(BM_TowerAdd);

// All anchors up to n for one lambda (fresh computation each time).
static void BM_Anchors(benchmark::State& state) {
  const long n_max = state.range(0);
  for (auto _ : state) {
    for (long n = 1; n <= n_max; ++n) benchmark::DoNotOptimize(compute_anchor(n, 4));
  }
  state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_Anchors)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);
