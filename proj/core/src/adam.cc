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

#include "drip/adam.h"

#include <cmath>

#include "absl/strings/str_format.h"

namespace drip {

absl::Status AdamUpdate(std::span<double> params, std::span<const double> grads,
                        AdamMoments& moments, const AdamConfig& config) {
  if (grads.size() != params.size() || moments.first.size() != params.size() ||
      moments.second.size() != params.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Adam shapes differ: %d parameters, %d gradients, %d/%d moments",
        params.size(), grads.size(), moments.first.size(),
        moments.second.size()));
  }
  ++moments.steps;
  const double t = static_cast<double>(moments.steps);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = moments.first[i];
    double& v = moments.second[i];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
  return absl::OkStatus();
}

double ClipGlobalNorm(std::span<double> grads, double max_norm) {
  double sq = 0.0;
  for (double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
  return norm;
}

}  // namespace drip
