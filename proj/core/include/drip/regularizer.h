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

// Regularizers that keep the sanitized marginal close to the raw one: an
// adversarial domain discriminator and the kernel MMD.

#ifndef DRIP_REGULARIZER_H_
#define DRIP_REGULARIZER_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "drip/dependence.h"
#include "drip/matrix.h"
#include "drip/mlp.h"
#include "drip/random.h"

namespace drip {

enum class PatchMode {
  // One network with `patches` logit outputs.
  kLogits,
  // A shared one-logit network applied to `patches` equal contiguous tiles
  // of each record (rows of a record laid out as a 2-d grid).
  kTiles,
};

struct Discriminator {
  Mlp net;  // emits logits; D = logistic(logit)
  std::size_t patches = 1;
  PatchMode mode = PatchMode::kLogits;
};

// Validates the network shape against the record dimension and patch mode.
absl::StatusOr<Discriminator> MakeDiscriminator(Mlp net, std::size_t record_dim,
                                                std::size_t patches,
                                                PatchMode mode);

Discriminator InitDiscriminator(std::size_t record_dim, std::size_t hidden,
                                std::size_t patches, PatchMode mode,
                                RandomSource& rng);

struct DaLossResult {
  double value = 0.0;
  std::vector<double> param_grad;  // d value / d discriminator parameters
  Matrix sanitized_grad;           // d value / d sanitized records
};

// (1/P) sum_p [ mean_r log D_p(x_r) + mean_r log(1 - D_p(x~_r)) ], with
// probabilities clamped to [1e-12, 1] before the log.
absl::StatusOr<DaLossResult> DaLoss(const Discriminator& disc, const Matrix& xs,
                                    const Matrix& sanitized);

enum class RegularizerKind { kDomainAdaptation, kMmd };

std::string_view RegularizerName(RegularizerKind kind);
absl::StatusOr<RegularizerKind> ParseRegularizer(std::string_view name);

struct RegularizerResult {
  double value = 0.0;     // minimized over the sanitizer
  Matrix sanitized_grad;  // d value / d sanitized records
};

// Domain adaptation: DaLoss with the discriminator frozen (`disc` required).
// MMD: the printed squared-MMD estimate and its gradient.
absl::StatusOr<RegularizerResult> RegularizerValue(RegularizerKind kind,
                                                   const Discriminator* disc,
                                                   const KernelSpec& spec,
                                                   const Matrix& xs,
                                                   const Matrix& sanitized);

}  // namespace drip

#endif  // DRIP_REGULARIZER_H_
