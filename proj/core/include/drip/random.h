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

#ifndef DRIP_RANDOM_H_
#define DRIP_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "drip/matrix.h"

namespace drip {

// Seeded pseudo-random stream. Equal seeds and equal call sequences give
// equal outputs. Not thread-safe; give each thread its own instance (see
// Fork).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream derived from this source's seed and `stream`;
  // does not advance this source.
  RandomSource Fork(std::uint64_t stream) const;

  double Gaussian() { return normal_(engine_); }
  double Uniform(double lo = 0.0, double hi = 1.0);
  // Uniform integer in [0, n).
  std::size_t UniformIndex(std::size_t n);

  // n i.i.d. standard normal draws. n == 0 yields an empty vector.
  std::vector<double> GaussianVector(std::size_t n);
  Matrix GaussianMatrix(std::size_t rows, std::size_t cols);

  // Uniformly random permutation of [0, n).
  std::vector<std::size_t> Permutation(std::size_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Free-function form of RandomSource::GaussianVector.
std::vector<double> GaussianSample(RandomSource& rng, std::size_t n);

}  // namespace drip

#endif  // DRIP_RANDOM_H_
