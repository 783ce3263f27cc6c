#include <benchmark/benchmark.h>

#include "momentlab/symplectic.hpp"

#include <random>

using namespace momentlab;

static void BM_CompatibleComplexStructure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Mat a(2 * n, 2 * n), b(2 * n, 2 * n);
  for (auto& v : a.reshaped()) v = normal(rng);
  for (auto& v : b.reshaped()) v = normal(rng);
  const Mat omega = a - a.transpose();
  const Mat g = b * b.transpose() + Mat::Identity(2 * n, 2 * n);
  const auto frame = build_frame(omega, g);
  for (auto _ : state) benchmark::DoNotOptimize(compatible_complex_structure(frame));
}
BENCHMARK(BM_CompatibleComplexStructure)->Arg(1)->Arg(3)->Arg(6)->Arg(12);
