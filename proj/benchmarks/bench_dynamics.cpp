#include <benchmark/benchmark.h>

#include "wanderlab/compose.hpp"
#include "wanderlab/orbit.hpp"
#include "wanderlab/render.hpp"

using namespace wanderlab;

namespace {

ParameterSet default_params() {
  ParameterSet p;
  p.lambda_over_pi = 4;
  return p;
}

}  // namespace

static void BM_EscapeCondition(benchmark::State& state) {
  const ParameterSet p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_escape_condition(p, 1e300));
  }
}
BENCHMARK(BM_EscapeCondition)->Unit(benchmark::kMillisecond);

static void BM_IterateOrbit(benchmark::State& state) {
  const ParameterSet p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_orbit(p, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_IterateOrbit)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

static void BM_AdjustParameters(benchmark::State& state) {
  const ParameterSet p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(adjust_parameters(p, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_AdjustParameters)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_VerifySchedule(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_schedule(state.range(0)));
  }
}
BENCHMARK(BM_VerifySchedule)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_ClassifyPoint(benchmark::State& state) {
  const ParameterSet p = default_params();
  const AnchorTable anchors(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_point(Complex(0.37, 0.21), p, anchors, 40));
  }
}
BENCHMARK(BM_ClassifyPoint);

static void BM_Render(benchmark::State& state) {
  RasterJob job;
  job.window = {0.0, 4.0, -2.0, 2.0};
  job.width = job.height = static_cast<int>(state.range(0));
  job.threads = 1;
  const ParameterSet p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(render(job, p).counts);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Render)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
