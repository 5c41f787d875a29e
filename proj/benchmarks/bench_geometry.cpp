#include <benchmark/benchmark.h>

#include "wanderlab/geometry.hpp"
#include "wanderlab/graph.hpp"
#include "wanderlab/thin.hpp"

using namespace wanderlab;

namespace {

ParameterSet default_params() {
  ParameterSet p;
  p.lambda_over_pi = 4;
  return p;
}

}  // namespace

static void BM_BuildGraph(benchmark::State& state) {
  const ParameterSet p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_graph(p, state.range(0)).edge_count());
  }
}
BENCHMARK(BM_BuildGraph)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_BoundedGeometry(benchmark::State& state) {
  const Graph g = build_graph(default_params(), state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_bounded_geometry(g));
  }
}
BENCHMARK(BM_BoundedGeometry)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ThinArea(benchmark::State& state) {
  const Graph g = build_graph(default_params(), 10);
  ThinSetSpec spec;
  spec.graph = &g;
  const auto centers = thin_sample_centers(g.anchors());
  for (auto _ : state) {
    for (const Complex z : centers) benchmark::DoNotOptimize(thin_area(spec, z));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(centers.size()));
}
BENCHMARK(BM_ThinArea)->Unit(benchmark::kMillisecond);

static void BM_TauSize(benchmark::State& state) {
  const ParameterSet p = default_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(tau_size_strip_edges(p, 10000));
  }
}
BENCHMARK(BM_TauSize)->Unit(benchmark::kMillisecond);
