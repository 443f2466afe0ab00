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

#include "drip/random.h"

#include <algorithm>
#include <numeric>

namespace drip {
namespace {

// SplitMix64 finalizer.
std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource RandomSource::Fork(std::uint64_t stream) const {
  return RandomSource(Mix(Mix(seed_) ^ Mix(stream + 0x632be59bd9b4e019ULL)));
}

double RandomSource::Uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

std::size_t RandomSource::UniformIndex(std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

std::vector<double> RandomSource::GaussianVector(std::size_t n) {
  std::vector<double> out(n);
  for (double& v : out) v = normal_(engine_);
  return out;
}

Matrix RandomSource::GaussianMatrix(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = normal_(engine_);
  return m;
}

std::vector<std::size_t> RandomSource::Permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  // Fisher-Yates with our own index draws so the order does not depend on
  // the standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = UniformIndex(i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

std::vector<double> GaussianSample(RandomSource& rng, std::size_t n) {
  return rng.GaussianVector(n);
}

}  // namespace drip
