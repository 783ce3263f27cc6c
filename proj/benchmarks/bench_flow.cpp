#include <benchmark/benchmark.h>

#include "momentlab/flow.hpp"
#include "momentlab/level_sets.hpp"

#include <random>

using namespace momentlab;

static void BM_SphereFlow(benchmark::State& state) {
  const auto model = registry_get("sphere");
  const auto f = momentum_component(model, Vec::Ones(1));
  Vec x0(3);
  x0 << 0.6, 0.8, 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(*model, f, x0, 2.0));
}
BENCHMARK(BM_SphereFlow);

static void BM_NormalizedFlow(benchmark::State& state) {
  const auto model = registry_get("sphere");
  const auto f = momentum_component(model, Vec::Ones(1));
  Vec x0(3);
  x0 << 0.6, 0.0, 0.8;
  for (auto _ : state) benchmark::DoNotOptimize(normalized_flow(*model, f, x0, 1.0));
}
BENCHMARK(BM_NormalizedFlow);

static void BM_ConnectedComponents(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  std::vector<Vec> pts(state.range(0), Vec(3));
  for (auto& p : pts)
    for (auto& v : p) v = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(pts));
}
BENCHMARK(BM_ConnectedComponents)->RangeMultiplier(4)->Range(64, 4096);
