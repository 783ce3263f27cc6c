#include <benchmark/benchmark.h>

#include "momentlab/loop_group.hpp"

#include <random>

using namespace momentlab::loop;

static void BM_LoopEval(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto l = random_loop(3, static_cast<int>(state.range(0)), 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(loop_eval(l));
}
BENCHMARK(BM_LoopEval)->RangeMultiplier(2)->Range(64, 1024);

static void BM_MomentumImage(benchmark::State& state) {
  std::mt19937_64 rng(8);
  const auto l = loop_eval(random_loop(3, static_cast<int>(state.range(0)), 0.5, rng));
  for (auto _ : state) benchmark::DoNotOptimize(momentum_image(l));
}
BENCHMARK(BM_MomentumImage)->RangeMultiplier(2)->Range(64, 1024);

static void BM_RotateLoop(benchmark::State& state) {
  std::mt19937_64 rng(9);
  const auto l = loop_eval(random_loop(3, 512, 0.5, rng));
  for (auto _ : state) benchmark::DoNotOptimize(rotate_loop(0.37, l));
}
BENCHMARK(BM_RotateLoop);
