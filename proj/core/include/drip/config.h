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

// Training configuration and its plain-text `key = value` form.

#ifndef DRIP_CONFIG_H_
#define DRIP_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "drip/adam.h"
#include "drip/regularizer.h"
#include "drip/variational.h"

namespace drip {

enum class PrivacyMetric { kVariational, kNnMaxCorr, kKernelMaxCorr };
enum class UtilityKind { kReconstruction, kPublicTask };

std::string_view PrivacyMetricName(PrivacyMetric metric);
absl::StatusOr<PrivacyMetric> ParsePrivacyMetric(std::string_view name);
std::string_view UtilityKindName(UtilityKind kind);
absl::StatusOr<UtilityKind> ParseUtilityKind(std::string_view name);

struct TradeoffConfig {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  PrivacyMetric privacy = PrivacyMetric::kKernelMaxCorr;
  RegularizerKind regularizer = RegularizerKind::kMmd;
  UtilityKind utility = UtilityKind::kReconstruction;
  TaskLoss task_loss = TaskLoss::kCrossEntropy;

  std::size_t batch_size = 64;
  int inner_steps = 5;
  int outer_steps = 2000;
  // Sanitizer updates.
  AdamConfig adam;
  // Inner-model updates (utility model, adversary, discriminator).
  AdamConfig inner_adam = {1e-3, 0.5, 0.999, 1e-8};
  double clip_norm = 5.0;
  std::uint64_t seed = 0;

  double kernel_sigma = 1.0;
  double kernel_eta = 0.01;

  // Sanitizer shape (input dimension comes from the data).
  std::size_t hidden = 20;
  std::size_t bottleneck = 10;
  std::size_t noise_dim = 0;
  bool logistic_output = true;
  double leaky_slope = 0.1;

  std::size_t inner_hidden = 20;
  std::size_t da_patches = 1;

  int convergence_window = 50;
  double convergence_tolerance = 1e-4;
  bool stop_on_convergence = true;
};

absl::Status ValidateConfig(const TradeoffConfig& config);

// Ordered key -> value pairs. Blank lines and lines starting with '#' are
// ignored; duplicate keys are rejected with their line numbers.
using KeyValues = std::map<std::string, std::string>;
absl::StatusOr<KeyValues> ParseKeyValues(std::string_view text);

// Reads the training keys out of `kv`, erasing each one it consumes so the
// caller can handle (or reject) whatever remains.
absl::StatusOr<TradeoffConfig> TradeoffConfigFromKeyValues(KeyValues& kv);

std::string TradeoffConfigToText(const TradeoffConfig& config);

}  // namespace drip

#endif  // DRIP_CONFIG_H_
