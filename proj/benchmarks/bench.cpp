// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>
#include <random>
#include "twoweight/debranges.hpp"
#include "twoweight/hardy.hpp"
#include "twoweight/model.hpp"

using namespace twoweight;

namespace
{

void companion_weight(benchmark::State &state)
{
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const DeBrangesSystem system(random_trig_weight(rng, 2, 4, 1.0, m));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(system.companion_weight(CircleGrid(m)));
  }
  state.SetComplexityN(m);
}
BENCHMARK(companion_weight)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void model_psi1(benchmark::State &state)
{
  const int m = static_cast<int>(state.range(0));
  const TruncatedModel model(fixtures::diagonal(), m);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(model.psi(1, Complex(0.3, 0.1), SolveMode::structured));
  }
  state.SetComplexityN(m);
}
BENCHMARK(model_psi1)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void model_spectral(benchmark::State &state)
{
  const TruncatedModel model(fixtures::cosine(), static_cast<int>(state.range(0)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(model.spectral_nu1());
  }
}
BENCHMARK(model_spectral)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void hardy_projection(benchmark::State &state)
{
  const int m = static_cast<int>(state.range(0));
  const DeBrangesSystem system(fixtures::cosine());
  const WeightedHardy hardy(system, CircleGrid(m));
  std::mt19937_64 rng(2);
  const RationalTestFunction f = TestFunctionSampler{}.function(rng, 1);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(hardy.projection(f, Side::inner));
  }
  state.SetComplexityN(m);
}
BENCHMARK(hardy_projection)->RangeMultiplier(2)->Range(1024, 8192)->Complexity();

void gram_identity(benchmark::State &state)
{
  std::mt19937_64 rng(3);
  const DeBrangesSystem system(random_trig_weight(rng, 3, 4));
  const GramIdentity gi(system);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(gi.residual(Complex(0.4, 0.2), Complex(-1.5, 0.7)));
  }
}
BENCHMARK(gram_identity);

}  // namespace

BENCHMARK_MAIN();
