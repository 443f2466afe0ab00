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

// Alternating max-min training of a sanitizer against its inner models:
// several ascent steps on the inner models (utility model, privacy
// adversary, domain discriminator) with the sanitizer frozen, then one
// ascent step on the sanitizer for J = utility - lambda1 privacy -
// lambda2 regularizer.

#ifndef DRIP_TRAINER_H_
#define DRIP_TRAINER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "drip/adam.h"
#include "drip/config.h"
#include "drip/dependence.h"
#include "drip/matrix.h"
#include "drip/mlp.h"
#include "drip/neural_mc.h"
#include "drip/random.h"
#include "drip/regularizer.h"
#include "drip/sanitizer.h"
#include "drip/variational.h"

namespace drip {

// Training records with their private and (optional) public variables.
struct TrainingData {
  Matrix x;  // n x d, features in [0, 1]
  // Numeric view of the private variable (n x k); one-hot when discrete.
  Matrix s;
  // Class codes of a discrete private variable; empty when continuous.
  std::vector<std::size_t> s_labels;
  std::size_t s_classes = 0;
  // Public variable: regression values or class codes.
  TaskTargets u;
  std::size_t u_classes = 0;

  std::size_t size() const { return x.rows(); }
};

// Rows `indices` of every field.
TrainingData SelectRecords(const TrainingData& data,
                           std::span<const std::size_t> indices);

// Inner models, only those the configuration uses are populated.
struct InnerModels {
  std::optional<Mlp> posterior;     // reconstruction utility
  std::optional<Mlp> task;          // public-task utility
  std::optional<Mlp> classifier;    // variational privacy
  std::optional<MaxCorrNets> corr;  // nn-maxcorr, continuous private variable
  std::optional<Mlp> corr_f;        // nn-maxcorr, discrete private variable
  std::optional<DiscreteTable> corr_table;
  std::optional<Discriminator> disc;  // domain-adaptation regularizer
};

InnerModels InitInnerModels(const TradeoffConfig& config,
                            const TrainingData& data, RandomSource& rng);

struct ObjectiveTerms {
  double j = 0.0;
  double utility = 0.0;
  double privacy = 0.0;
  double regularizer = 0.0;
  // Kernel or neural maximal-correlation estimate on the batch, when the
  // privacy metric provides one.
  std::optional<double> rho_hat;
  Matrix sanitized_grad;  // dJ / dx~
};

// Evaluates J on a batch with the inner models frozen.
absl::StatusOr<ObjectiveTerms> AssembleObjective(const TradeoffConfig& config,
                                                 const InnerModels& inner,
                                                 const TrainingData& batch,
                                                 const Matrix& sanitized);

struct MetricsRow {
  std::int64_t step = 0;
  double j = 0.0;
  double utility = 0.0;
  double privacy = 0.0;
  double regularizer = 0.0;
  std::optional<double> rho_hat;
};

std::string MetricsRowToJson(const MetricsRow& row);

struct TrainState {
  Sanitizer sanitizer;
  InnerModels inner;
  AdamMoments sanitizer_moments;
  // Keyed by inner-model name.
  std::map<std::string, AdamMoments> inner_moments;
  std::int64_t step = 0;
  RandomSource noise_rng{0};
  RandomSource batch_rng{0};
  std::vector<std::size_t> order;
  std::size_t cursor = 0;
  std::vector<MetricsRow> history;
};

absl::StatusOr<TrainState> InitTrainState(const TradeoffConfig& config,
                                          const TrainingData& data);

// Inner-objective values recorded before every inner update of one step,
// per inner model.
struct StepTrace {
  std::map<std::string, std::vector<double>> inner_values;
};

// One outer iteration: draw a batch and its noise, run the inner updates,
// update the sanitizer, and append a metrics row. With `freeze_sanitizer`
// the sanitizer update is skipped.
absl::StatusOr<StepTrace> AlternatingStep(TrainState& state,
                                          const TradeoffConfig& config,
                                          const TrainingData& data,
                                          bool freeze_sanitizer = false);

struct TrainResult {
  TrainState state;
  bool converged = false;
};

// Runs up to outer_steps alternating steps, stopping early (when enabled)
// once the moving average of J over convergence_window steps moves by less
// than convergence_tolerance across one window.
absl::StatusOr<TrainResult> Train(const TradeoffConfig& config,
                                  const TrainingData& data);

// Sanitizes every record with fresh noise from `rng`.
absl::StatusOr<Matrix> SanitizeAll(const Sanitizer& sanitizer, const Matrix& x,
                                   RandomSource& rng);

// JSON checkpoint: format version, config text, step, sanitizer and inner
// networks.
inline constexpr int kCheckpointFormatVersion = 1;
std::string CheckpointToJson(const TradeoffConfig& config,
                             const TrainState& state);

struct Checkpoint {
  TradeoffConfig config;
  std::int64_t step = 0;
  Sanitizer sanitizer;
};
absl::StatusOr<Checkpoint> CheckpointFromJson(const std::string& text);

}  // namespace drip

#endif  // DRIP_TRAINER_H_
