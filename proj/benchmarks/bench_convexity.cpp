#include <benchmark/benchmark.h>

#include "momentlab/convexity.hpp"
#include "momentlab/hull.hpp"

#include <random>

using namespace momentlab;

namespace {

std::vector<Vec> cloud(int dim, int count) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<Vec> out(count, Vec(dim));
  for (auto& p : out)
    for (auto& v : p) v = normal(rng);
  return out;
}

}  // namespace

static void BM_ConvexHull2D(benchmark::State& state) {
  const auto pts = cloud(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull2D)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

static void BM_ConvexHull3D(benchmark::State& state) {
  const auto pts = cloud(3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
}
BENCHMARK(BM_ConvexHull3D)->RangeMultiplier(10)->Range(100, 10000);

static void BM_MomentumImageSample(benchmark::State& state) {
  const auto model = registry_get("sphere-product", {{"n", 2}});
  for (auto _ : state) benchmark::DoNotOptimize(momentum_image_sample(*model, 1000, 3));
}
BENCHMARK(BM_MomentumImageSample);

static void BM_MidpointTest(benchmark::State& state) {
  const auto model = registry_get("sphere-product", {{"n", 2}});
  const auto pts = momentum_image_sample(*model, 10000, 4);
  for (auto _ : state) benchmark::DoNotOptimize(verify_convexity(pts, 1000, 2e-2, 5));
}
BENCHMARK(BM_MidpointTest);

static void BM_EvenIndexAudit(benchmark::State& state) {
  const auto model = registry_get("sphere-product", {{"n", static_cast<double>(state.range(0))}});
  const Vec xi = Vec::LinSpaced(state.range(0), 1.0, 1.7);
  for (auto _ : state) benchmark::DoNotOptimize(even_index_audit(*model, xi));
}
BENCHMARK(BM_EvenIndexAudit)->DenseRange(1, 4);
