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

// Post-hoc evaluation of sanitized data: freshly trained adversary and
// utility models, the legacy-compatibility score, and kernel dependence on
// the test split.

#ifndef DRIP_EVALUATE_H_
#define DRIP_EVALUATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "drip/dataset.h"
#include "drip/dependence.h"
#include "drip/matrix.h"
#include "drip/variational.h"

namespace drip {

struct AdversaryOptions {
  std::size_t hidden = 20;
  std::size_t hidden_layers = 1;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 200;
  // Epochs without validation improvement before stopping.
  std::size_t patience = 20;
  // Share of the training rows held out to pick the stopping epoch.
  double validation_fraction = 0.2;
  double learning_rate = 1e-3;
  double leaky_slope = 0.1;
};

// Classification when `labels` are given (loss is cross-entropy), otherwise
// regression on `values` with the given loss.
struct AdversaryTarget {
  std::vector<std::size_t> labels;
  std::size_t classes = 0;
  Matrix values;
  TaskLoss regression_loss = TaskLoss::kMae;

  bool classification() const { return classes > 0; }
  AdversaryTarget Select(std::span<const std::size_t> rows) const;
};

struct AdversaryMetrics {
  // Classification.
  std::optional<double> accuracy;
  std::optional<double> cross_entropy;
  // Regression.
  std::optional<double> mae;
  std::optional<double> mse;
};

// Trains a fresh dense network on (train_x, train) and reports test metrics.
// Rejects single-class training labels.
absl::StatusOr<AdversaryMetrics> TrainAdversaryEval(
    const Matrix& train_x, const AdversaryTarget& train, const Matrix& test_x,
    const AdversaryTarget& test, const AdversaryOptions& options,
    std::uint64_t seed);

// Printed MMD^2 between the raw and sanitized test sets.
absl::StatusOr<double> LegacyCompatScore(const KernelSpec& spec,
                                         const Matrix& raw,
                                         const Matrix& sanitized);

struct EvalOptions {
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  AdversaryOptions adversary;
  double kernel_sigma = 1.0;
  double kernel_eta = 0.01;
  // Loss of the regression adversary/utility model for numeric attributes.
  TaskLoss regression_loss = TaskLoss::kMae;
};

struct EvalReport {
  std::string private_column;
  std::optional<std::string> public_column;
  AdversaryMetrics adversary;  // means over seeds
  std::optional<AdversaryMetrics> utility;
  double legacy_compat = 0.0;
  // Kernel maximal correlation between sanitized test features and the
  // private attribute.
  double kernel_maxcorr = 0.0;
  std::vector<std::uint64_t> seeds;
};

// `sanitized` holds one sanitized feature row per dataset row; pass
// dataset.features to evaluate the raw data.
absl::StatusOr<EvalReport> EvaluateSanitized(const Dataset& dataset,
                                             const Matrix& sanitized,
                                             const EvalOptions& options);

std::string EvalReportToJson(const EvalReport& report);

// One estimator run as a JSON-lines row.
struct DependenceReport {
  std::string estimator;
  double value = 0.0;
  std::optional<std::size_t> batch;
  std::optional<double> sigma;
  std::optional<double> eta;
  std::uint64_t seed = 0;
  std::optional<double> oracle_value;
};

std::string DependenceReportToJson(const DependenceReport& report);

}  // namespace drip

#endif  // DRIP_EVALUATE_H_
