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

#include "drip/linalg.h"
#include "drip/matrix.h"
#include "drip/random.h"

namespace drip {
namespace {

Matrix RandomSpd(std::size_t n) {
  RandomSource rng(n);
  const Matrix g = rng.GaussianMatrix(n, n);
  Matrix a = MatMulTransB(g, g);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

void BM_MatMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomSource rng(1);
  const Matrix a = rng.GaussianMatrix(n, n);
  const Matrix b = rng.GaussianMatrix(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(MatMul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MatMul)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_SymmetricEigen(benchmark::State& state) {
  const Matrix a = RandomSpd(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(SymmetricEigen(a));
}
BENCHMARK(BM_SymmetricEigen)->Arg(16)->Arg(64)->Arg(128);

void BM_Svd(benchmark::State& state) {
  RandomSource rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = rng.GaussianMatrix(n, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(Svd(a));
}
BENCHMARK(BM_Svd)->Arg(16)->Arg(50)->Arg(100);

void BM_SolveSpd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = RandomSpd(n);
  RandomSource rng(3);
  const Matrix b = rng.GaussianMatrix(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(SolveSpd(a, b));
}
BENCHMARK(BM_SolveSpd)->Arg(64)->Arg(256);

}  // namespace
}  // namespace drip

BENCHMARK_MAIN();
