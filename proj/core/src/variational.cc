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

#include "drip/variational.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace drip {
namespace {

absl::Status CheckRows(const Matrix& a, std::size_t rows, const char* what) {
  if (a.rows() == 0) {
    return absl::InvalidArgumentError(absl::StrFormat("%s is empty", what));
  }
  if (a.rows() != rows) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s has %d rows, expected %d", what, a.rows(), rows));
  }
  return absl::OkStatus();
}

// Mean clamped log-likelihood of `labels` under softmax(logits) and its
// gradient with respect to the logits.
absl::StatusOr<std::pair<double, Matrix>> LogLikelihood(
    const Matrix& logits, std::span<const std::size_t> labels) {
  const std::size_t m = logits.rows();
  if (labels.size() != m) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d labels for %d records", labels.size(), m));
  }
  const Matrix p = Softmax(logits);
  Matrix grad(m, logits.cols());
  double total = 0.0;
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t y = labels[i];
    if (y >= logits.cols()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "label %d at row %d is outside the %d known classes", y, i,
          logits.cols()));
    }
    const double py = p(i, y);
    total += std::log(std::clamp(py, kProbabilityFloor, 1.0));
    if (py < kProbabilityFloor) continue;  // clamped: locally constant
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      grad(i, c) = inv_m * ((c == y ? 1.0 : 0.0) - p(i, c));
    }
  }
  return std::make_pair(total * inv_m, std::move(grad));
}

}  // namespace

Matrix Softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto in = logits.row(i);
    auto row = out.row(i);
    const double top = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      row[c] = std::exp(in[c] - top);
      total += row[c];
    }
    for (double& v : row) v /= total;
  }
  return out;
}

absl::StatusOr<ObjectiveGradients> UtilityObjective(const Mlp& posterior,
                                                    const Matrix& x,
                                                    const Matrix& sanitized) {
  if (absl::Status s = CheckRows(sanitized, x.rows(), "sanitized batch");
      !s.ok()) {
    return s;
  }
  if (posterior.output_dim() != x.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "posterior produces %d values per record, raw records have %d",
        posterior.output_dim(), x.cols()));
  }
  MlpTape tape;
  absl::StatusOr<Matrix> recon = posterior.Forward(sanitized, &tape);
  if (!recon.ok()) return recon.status();
  const double inv_m = 1.0 / static_cast<double>(x.rows());
  Matrix grad_out(x.rows(), x.cols());
  ObjectiveGradients out;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = recon->data()[i] - x.data()[i];
    total += d * d;
    grad_out.data()[i] = -2.0 * inv_m * d;
  }
  out.value = -total * inv_m;
  out.param_grad.assign(posterior.num_params(), 0.0);
  absl::StatusOr<Matrix> input_grad =
      posterior.Backward(tape, grad_out, out.param_grad);
  if (!input_grad.ok()) return input_grad.status();
  out.input_grad = *std::move(input_grad);
  return out;
}

absl::StatusOr<ObjectiveGradients> PrivacyObjective(
    const Mlp& classifier, const Matrix& sanitized,
    std::span<const std::size_t> labels) {
  if (absl::Status s = CheckRows(sanitized, labels.size(), "sanitized batch");
      !s.ok()) {
    return s;
  }
  MlpTape tape;
  absl::StatusOr<Matrix> logits = classifier.Forward(sanitized, &tape);
  if (!logits.ok()) return logits.status();
  absl::StatusOr<std::pair<double, Matrix>> ll = LogLikelihood(*logits, labels);
  if (!ll.ok()) return ll.status();
  ObjectiveGradients out;
  out.value = ll->first;
  out.param_grad.assign(classifier.num_params(), 0.0);
  absl::StatusOr<Matrix> input_grad =
      classifier.Backward(tape, ll->second, out.param_grad);
  if (!input_grad.ok()) return input_grad.status();
  out.input_grad = *std::move(input_grad);
  return out;
}

std::string_view TaskLossName(TaskLoss loss) {
  switch (loss) {
    case TaskLoss::kMae:
      return "mae";
    case TaskLoss::kMse:
      return "mse";
    case TaskLoss::kCrossEntropy:
      return "ce";
  }
  return "unknown";
}

absl::StatusOr<TaskLoss> ParseTaskLoss(std::string_view name) {
  if (name == "mae") return TaskLoss::kMae;
  if (name == "mse") return TaskLoss::kMse;
  if (name == "ce") return TaskLoss::kCrossEntropy;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown task loss '%s' (expected mae, mse or ce)",
                      std::string(name)));
}

absl::StatusOr<ObjectiveGradients> PublicTaskUtility(const Mlp& model,
                                                     TaskLoss loss,
                                                     const Matrix& sanitized,
                                                     const TaskTargets& targets) {
  MlpTape tape;
  absl::StatusOr<Matrix> pred = model.Forward(sanitized, &tape);
  if (!pred.ok()) return pred.status();
  ObjectiveGradients out;
  Matrix grad_out;
  if (loss == TaskLoss::kCrossEntropy) {
    if (targets.labels.empty()) {
      return absl::InvalidArgumentError(
          "cross-entropy utility needs class labels");
    }
    absl::StatusOr<std::pair<double, Matrix>> ll =
        LogLikelihood(*pred, targets.labels);
    if (!ll.ok()) return ll.status();
    out.value = ll->first;
    grad_out = std::move(ll->second);
  } else {
    if (!targets.values.SameShape(*pred)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "regression targets are %dx%d but the model predicts %dx%d",
          targets.values.rows(), targets.values.cols(), pred->rows(),
          pred->cols()));
    }
    const double inv = 1.0 / static_cast<double>(pred->size());
    grad_out = Matrix(pred->rows(), pred->cols());
    double total = 0.0;
    for (std::size_t i = 0; i < pred->size(); ++i) {
      const double d = pred->data()[i] - targets.values.data()[i];
      if (loss == TaskLoss::kMae) {
        total += std::abs(d);
        grad_out.data()[i] = -inv * (d > 0.0 ? 1.0 : d < 0.0 ? -1.0 : 0.0);
      } else {
        total += d * d;
        grad_out.data()[i] = -2.0 * inv * d;
      }
    }
    out.value = -total * inv;
  }
  out.param_grad.assign(model.num_params(), 0.0);
  absl::StatusOr<Matrix> input_grad =
      model.Backward(tape, grad_out, out.param_grad);
  if (!input_grad.ok()) return input_grad.status();
  out.input_grad = *std::move(input_grad);
  return out;
}

}  // namespace drip
