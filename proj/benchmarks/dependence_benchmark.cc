// Copyright 2026 The DRIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "drip/dependence.h"
#include "drip/matrix.h"
#include "drip/neural_mc.h"
#include "drip/oracle.h"
#include "drip/random.h"

namespace drip {
namespace {

void BM_Mmd2Estimate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomSource rng(1);
  const Matrix xs = rng.GaussianMatrix(n, 20);
  const Matrix ys = rng.GaussianMatrix(n, 20);
  const KernelSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(Mmd2Estimate(spec, xs, ys));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Mmd2Estimate)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_Mmd2Gradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomSource rng(2);
  const Matrix xs = rng.GaussianMatrix(n, 20);
  const Matrix ys = rng.GaussianMatrix(n, 20);
  const KernelSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(Mmd2Gradient(spec, xs, ys));
}
BENCHMARK(BM_Mmd2Gradient)->Arg(64)->Arg(256);

void BM_KernelMaxCorr(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomSource rng(3);
  const Matrix x = rng.GaussianMatrix(n, 20);
  const Matrix s = rng.GaussianMatrix(n, 1);
  const KernelSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(KernelMaxCorr(spec, spec, x, s));
}
BENCHMARK(BM_KernelMaxCorr)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DiscreteMaxCorrSvd(benchmark::State& state) {
  const auto joint = DiscretizedGaussianJoint(0.7, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(DiscreteMaxCorrSvd(*joint));
}
BENCHMARK(BM_DiscreteMaxCorrSvd)->Arg(20)->Arg(50);

void BM_NnMaxCorr(benchmark::State& state) {
  RandomSource rng(4);
  const auto pair = GaussianPairDataset(rng, 0.7, 2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EstimateNnMaxCorr(pair->x, pair->s, NnEstimatorOptions{}, rng));
  }
}
BENCHMARK(BM_NnMaxCorr)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace drip

BENCHMARK_MAIN();
