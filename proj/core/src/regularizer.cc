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

#include "drip/regularizer.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "drip/variational.h"

namespace drip {
namespace {

double Logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Logits as a records x patches matrix, plus the tape of the forward pass.
absl::StatusOr<Matrix> PatchLogits(const Discriminator& disc,
                                   const Matrix& records, MlpTape* tape) {
  if (disc.mode == PatchMode::kLogits) return disc.net.Forward(records, tape);
  // Row-major records of width P*t are the same buffer as P*M tiles of
  // width t, and the (P*M) x 1 output is the same buffer as M x P logits.
  const std::size_t tile = records.cols() / disc.patches;
  Matrix tiles(records.rows() * disc.patches, tile,
               std::vector<double>(records.data().begin(),
                                   records.data().end()));
  absl::StatusOr<Matrix> out = disc.net.Forward(tiles, tape);
  if (!out.ok()) return out.status();
  return Matrix(records.rows(), disc.patches,
                std::vector<double>(out->data().begin(), out->data().end()));
}

absl::StatusOr<Matrix> PatchBackward(const Discriminator& disc,
                                     const MlpTape& tape, const Matrix& grad,
                                     std::size_t record_dim,
                                     std::span<double> param_grad) {
  if (disc.mode == PatchMode::kLogits) {
    return disc.net.Backward(tape, grad, param_grad);
  }
  Matrix per_tile(grad.rows() * disc.patches, 1,
                  std::vector<double>(grad.data().begin(), grad.data().end()));
  absl::StatusOr<Matrix> back = disc.net.Backward(tape, per_tile, param_grad);
  if (!back.ok()) return back.status();
  return Matrix(grad.rows(), record_dim,
                std::vector<double>(back->data().begin(), back->data().end()));
}

}  // namespace

absl::StatusOr<Discriminator> MakeDiscriminator(Mlp net, std::size_t record_dim,
                                                std::size_t patches,
                                                PatchMode mode) {
  if (patches == 0) return absl::InvalidArgumentError("need at least one patch");
  if (mode == PatchMode::kLogits) {
    if (net.input_dim() != record_dim || net.output_dim() != patches) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "discriminator maps %d -> %d, expected %d -> %d", net.input_dim(),
          net.output_dim(), record_dim, patches));
    }
  } else {
    if (record_dim % patches != 0 || net.output_dim() != 1 ||
        net.input_dim() * patches != record_dim) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "tiled discriminator maps %d -> %d, records of width %d do not "
          "split into %d such tiles",
          net.input_dim(), net.output_dim(), record_dim, patches));
    }
  }
  return Discriminator{std::move(net), patches, mode};
}

Discriminator InitDiscriminator(std::size_t record_dim, std::size_t hidden,
                                std::size_t patches, PatchMode mode,
                                RandomSource& rng) {
  const std::size_t in = mode == PatchMode::kLogits ? record_dim
                                                    : record_dim / patches;
  const std::size_t out = mode == PatchMode::kLogits ? patches : 1;
  const std::size_t dims[] = {in, hidden, out};
  return Discriminator{Mlp::Initialized(dims, Activation::kLeakyRelu,
                                        Activation::kIdentity, rng),
                       patches, mode};
}

absl::StatusOr<DaLossResult> DaLoss(const Discriminator& disc, const Matrix& xs,
                                    const Matrix& sanitized) {
  if (xs.rows() == 0 || sanitized.rows() == 0) {
    return absl::InvalidArgumentError("discriminator batches must be nonempty");
  }
  if (xs.cols() != sanitized.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "raw records have %d columns, sanitized records %d", xs.cols(),
        sanitized.cols()));
  }
  const std::size_t p = disc.patches;
  MlpTape raw_tape;
  absl::StatusOr<Matrix> raw_logits = PatchLogits(disc, xs, &raw_tape);
  if (!raw_logits.ok()) return raw_logits.status();
  MlpTape san_tape;
  absl::StatusOr<Matrix> san_logits = PatchLogits(disc, sanitized, &san_tape);
  if (!san_logits.ok()) return san_logits.status();

  const double raw_w = 1.0 / (static_cast<double>(p) * xs.rows());
  const double san_w = 1.0 / (static_cast<double>(p) * sanitized.rows());
  Matrix raw_grad(xs.rows(), p);
  Matrix san_grad(sanitized.rows(), p);
  double value = 0.0;
  for (std::size_t i = 0; i < raw_logits->size(); ++i) {
    const double z = raw_logits->data()[i];
    const double d = Logistic(z);
    value += raw_w * std::log(std::clamp(d, kProbabilityFloor, 1.0));
    if (d >= kProbabilityFloor) raw_grad.data()[i] = raw_w * Logistic(-z);
  }
  for (std::size_t i = 0; i < san_logits->size(); ++i) {
    const double z = san_logits->data()[i];
    const double one_minus = Logistic(-z);
    value += san_w * std::log(std::clamp(one_minus, kProbabilityFloor, 1.0));
    if (one_minus >= kProbabilityFloor) san_grad.data()[i] = -san_w * Logistic(z);
  }

  DaLossResult out;
  out.value = value;
  out.param_grad.assign(disc.net.num_params(), 0.0);
  absl::StatusOr<Matrix> raw_back =
      PatchBackward(disc, raw_tape, raw_grad, xs.cols(), out.param_grad);
  if (!raw_back.ok()) return raw_back.status();
  absl::StatusOr<Matrix> san_back =
      PatchBackward(disc, san_tape, san_grad, sanitized.cols(), out.param_grad);
  if (!san_back.ok()) return san_back.status();
  out.sanitized_grad = *std::move(san_back);
  return out;
}

std::string_view RegularizerName(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::kDomainAdaptation:
      return "domain-adaptation";
    case RegularizerKind::kMmd:
      return "mmd";
  }
  return "unknown";
}

absl::StatusOr<RegularizerKind> ParseRegularizer(std::string_view name) {
  if (name == "domain-adaptation") return RegularizerKind::kDomainAdaptation;
  if (name == "mmd") return RegularizerKind::kMmd;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown regularizer '%s' (expected domain-adaptation or mmd)",
      std::string(name)));
}

absl::StatusOr<RegularizerResult> RegularizerValue(RegularizerKind kind,
                                                   const Discriminator* disc,
                                                   const KernelSpec& spec,
                                                   const Matrix& xs,
                                                   const Matrix& sanitized) {
  RegularizerResult out;
  if (kind == RegularizerKind::kDomainAdaptation) {
    if (disc == nullptr) {
      return absl::InvalidArgumentError(
          "domain-adaptation regularizer needs a discriminator");
    }
    absl::StatusOr<DaLossResult> da = DaLoss(*disc, xs, sanitized);
    if (!da.ok()) return da.status();
    out.value = da->value;
    out.sanitized_grad = std::move(da->sanitized_grad);
    return out;
  }
  absl::StatusOr<double> value = Mmd2Estimate(spec, xs, sanitized);
  if (!value.ok()) return value.status();
  absl::StatusOr<Matrix> grad = Mmd2Gradient(spec, xs, sanitized);
  if (!grad.ok()) return grad.status();
  out.value = *value;
  out.sanitized_grad = *std::move(grad);
  return out;
}

}  // namespace drip
