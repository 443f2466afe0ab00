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

#ifndef DRIP_ADAM_H_
#define DRIP_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"

namespace drip {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First and second moment estimates for one parameter vector.
struct AdamMoments {
  std::vector<double> first;
  std::vector<double> second;
  std::int64_t steps = 0;

  explicit AdamMoments(std::size_t n = 0) : first(n, 0.0), second(n, 0.0) {}
};

// One bias-corrected Adam step that descends `grads`. Pass negated
// gradients to ascend.
absl::Status AdamUpdate(std::span<double> params, std::span<const double> grads,
                        AdamMoments& moments, const AdamConfig& config);

// Rescales `grads` in place so that its Euclidean norm is at most
// `max_norm`; returns the norm before clipping.
double ClipGlobalNorm(std::span<double> grads, double max_norm);

}  // namespace drip

#endif  // DRIP_ADAM_H_
