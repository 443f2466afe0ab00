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

// Synthetic tables for tests and the CLI: a correlated Gaussian pair, draws
// from a discrete joint, and Gaussian blobs carrying a private and a public
// class.

#ifndef DRIP_SYNTH_H_
#define DRIP_SYNTH_H_

#include <cstddef>

#include "absl/status/statusor.h"
#include "drip/dataset.h"
#include "drip/oracle.h"
#include "drip/random.h"

namespace drip {

struct SynthTable {
  CsvTable table;
  Schema schema;
};

// Columns x, s (numeric), standard normal with correlation r.
absl::StatusOr<SynthTable> SynthGaussianPair(RandomSource& rng, double r,
                                             std::size_t n);

// Columns x, s (categorical symbol indices) drawn from `joint`.
absl::StatusOr<SynthTable> SynthDiscreteJoint(RandomSource& rng,
                                              const DiscreteJoint& joint,
                                              std::size_t n);

struct BlobOptions {
  std::size_t n = 1000;
  std::size_t dim = 4;
  std::size_t classes = 2;
  double separation = 3.0;
  // Probability that the public class equals the private class; otherwise
  // it is drawn independently.
  double public_agreement = 0.0;
  // When false the features ignore the private class entirely (an exactly
  // independent pair).
  bool private_in_features = true;
};

// Columns x0..x{dim-1} (numeric), s and u (categorical). The first half of
// the feature coordinates is centred by u, the second half by s, with unit
// Gaussian noise.
absl::StatusOr<SynthTable> SynthBlobs(RandomSource& rng,
                                      const BlobOptions& options);

}  // namespace drip

#endif  // DRIP_SYNTH_H_
