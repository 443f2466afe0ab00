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

// Variational utility and privacy objectives evaluated on a batch of
// sanitized records, with exact gradients for the inner model and
// cotangents on the sanitized records.

#ifndef DRIP_VARIATIONAL_H_
#define DRIP_VARIATIONAL_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "drip/matrix.h"
#include "drip/mlp.h"

namespace drip {

// Probabilities are clamped to [kProbabilityFloor, 1] before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

struct ObjectiveGradients {
  double value = 0.0;
  std::vector<double> param_grad;  // d value / d inner-model parameters
  Matrix input_grad;               // d value / d sanitized records
};

// -(1/M) sum_i |g(x~_i) - x_i|^2 for a reconstruction network g.
absl::StatusOr<ObjectiveGradients> UtilityObjective(const Mlp& posterior,
                                                    const Matrix& x,
                                                    const Matrix& sanitized);

// (1/M) sum_i log q(s_i | x~_i), with q the softmax of the classifier's
// outputs. Labels must be below the classifier's output width.
absl::StatusOr<ObjectiveGradients> PrivacyObjective(
    const Mlp& classifier, const Matrix& sanitized,
    std::span<const std::size_t> labels);

enum class TaskLoss { kMae, kMse, kCrossEntropy };

std::string_view TaskLossName(TaskLoss loss);
absl::StatusOr<TaskLoss> ParseTaskLoss(std::string_view name);

// Public-variable target: regression values (M x k) or class labels.
struct TaskTargets {
  Matrix values;
  std::vector<std::size_t> labels;
};

// Negative mean loss of `model` predicting the public variable from the
// sanitized records. MAE and MSE average over every output entry.
absl::StatusOr<ObjectiveGradients> PublicTaskUtility(const Mlp& model,
                                                     TaskLoss loss,
                                                     const Matrix& sanitized,
                                                     const TaskTargets& targets);

// Row-wise softmax.
Matrix Softmax(const Matrix& logits);

}  // namespace drip

#endif  // DRIP_VARIATIONAL_H_
