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

#include "drip/mlp.h"

#include <atomic>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"

namespace drip {
namespace {

std::uint64_t NextId() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kIdentity:
      return "identity";
    case Activation::kLeakyRelu:
      return "leaky_relu";
    case Activation::kLogistic:
      return "logistic";
  }
  return "unknown";
}

absl::StatusOr<Activation> ParseActivation(std::string_view name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "leaky_relu") return Activation::kLeakyRelu;
  if (name == "logistic") return Activation::kLogistic;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown activation '%s'", std::string(name)));
}

double Activate(Activation activation, double slope, double x) {
  switch (activation) {
    case Activation::kIdentity:
      return x;
    case Activation::kLeakyRelu:
      return x >= 0.0 ? x : slope * x;
    case Activation::kLogistic:
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
      {
        const double e = std::exp(x);
        return e / (1.0 + e);
      }
  }
  return x;
}

double ActivateDerivative(Activation activation, double slope, double x) {
  switch (activation) {
    case Activation::kIdentity:
      return 1.0;
    case Activation::kLeakyRelu:
      return x >= 0.0 ? 1.0 : slope;
    case Activation::kLogistic: {
      const double s = Activate(Activation::kLogistic, slope, x);
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

Mlp::Mlp(std::vector<DenseLayer> layers)
    : layers_(std::move(layers)), id_(NextId()) {}

absl::StatusOr<Mlp> Mlp::Create(std::vector<DenseLayer> layers) {
  if (layers.empty()) {
    return absl::InvalidArgumentError("network needs at least one layer");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& l = layers[i];
    if (l.weight.rows() == 0 || l.weight.cols() == 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer %d has an empty weight matrix", i));
    }
    if (l.bias.size() != l.out_dim()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "layer %d: bias has %d entries, expected %d", i, l.bias.size(),
          l.out_dim()));
    }
    if (i > 0 && layers[i - 1].out_dim() != l.in_dim()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "layer %d expects %d inputs but layer %d produces %d", i, l.in_dim(),
          i - 1, layers[i - 1].out_dim()));
    }
    if (!l.weight.AllFinite()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("layer %d has non-finite weights", i));
    }
    for (double b : l.bias) {
      if (!std::isfinite(b)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("layer %d has non-finite biases", i));
      }
    }
  }
  return Mlp(std::move(layers));
}

Mlp Mlp::Initialized(std::span<const std::size_t> dims, Activation hidden,
                     Activation output, RandomSource& rng, double leaky_slope) {
  assert(dims.size() >= 2);
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer l;
    const std::size_t in = dims[i];
    const std::size_t out = dims[i + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    l.weight = Matrix(out, in);
    for (double& w : l.weight.data()) w = rng.Uniform(-limit, limit);
    l.bias.assign(out, 0.0);
    l.activation = i + 2 == dims.size() ? output : hidden;
    l.leaky_slope = leaky_slope;
    layers.push_back(std::move(l));
  }
  return Mlp(std::move(layers));
}

std::size_t Mlp::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim();
}

std::size_t Mlp::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim();
}

std::vector<DenseLayer>& Mlp::mutable_layers() {
  id_ = NextId();
  return layers_;
}

std::size_t Mlp::num_params() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<double> Mlp::Parameters() const {
  std::vector<double> out;
  out.reserve(num_params());
  for (const DenseLayer& l : layers_) {
    out.insert(out.end(), l.weight.data().begin(), l.weight.data().end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

absl::Status Mlp::SetParameters(std::span<const double> params) {
  if (params.size() != num_params()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d parameters, got %d", num_params(), params.size()));
  }
  std::size_t offset = 0;
  for (DenseLayer& l : layers_) {
    auto w = l.weight.data();
    std::copy(params.begin() + offset, params.begin() + offset + w.size(),
              w.begin());
    offset += w.size();
    std::copy(params.begin() + offset,
              params.begin() + offset + l.bias.size(), l.bias.begin());
    offset += l.bias.size();
  }
  id_ = NextId();
  return absl::OkStatus();
}

absl::StatusOr<Matrix> Mlp::Forward(const Matrix& x, MlpTape* tape) const {
  if (layers_.empty()) {
    return absl::FailedPreconditionError("network has no layers");
  }
  if (x.cols() != input_dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "input has %d columns, network expects %d", x.cols(), input_dim()));
  }
  if (tape != nullptr) {
    tape->params_id = id_;
    tape->inputs.clear();
    tape->pre.clear();
  }
  Matrix current = x;
  for (const DenseLayer& l : layers_) {
    Matrix pre = MatMulTransB(current, l.weight);
    for (std::size_t r = 0; r < pre.rows(); ++r) {
      auto row = pre.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] += l.bias[c];
    }
    Matrix post = pre;
    for (double& v : post.data()) v = Activate(l.activation, l.leaky_slope, v);
    if (tape != nullptr) {
      tape->inputs.push_back(std::move(current));
      tape->pre.push_back(std::move(pre));
    }
    current = std::move(post);
  }
  return current;
}

absl::StatusOr<Matrix> Mlp::Backward(const MlpTape& tape,
                                     const Matrix& grad_out,
                                     std::span<double> param_grad) const {
  if (tape.params_id != id_ || tape.pre.size() != layers_.size()) {
    return absl::FailedPreconditionError(
        "tape was recorded with different network parameters");
  }
  if (param_grad.size() != num_params()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "gradient buffer has %d entries, expected %d", param_grad.size(),
        num_params()));
  }
  const std::size_t batch = tape.inputs.front().rows();
  if (grad_out.rows() != batch || grad_out.cols() != output_dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "output cotangent is %dx%d, expected %dx%d", grad_out.rows(),
        grad_out.cols(), batch, output_dim()));
  }
  // Offsets of each layer's block in the flat parameter vector.
  std::vector<std::size_t> offsets(layers_.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    offsets[i] = offset;
    offset += layers_[i].weight.size() + layers_[i].bias.size();
  }
  Matrix grad = grad_out;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& l = layers_[li];
    const Matrix& pre = tape.pre[li];
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad.data()[i] *=
          ActivateDerivative(l.activation, l.leaky_slope, pre.data()[i]);
    }
    const Matrix gw = MatMulTransA(grad, tape.inputs[li]);  // out x in
    double* dst = param_grad.data() + offsets[li];
    for (double g : gw.data()) *dst++ += g;
    for (std::size_t r = 0; r < grad.rows(); ++r) {
      auto row = grad.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) dst[c] += row[c];
    }
    grad = MatMul(grad, l.weight);
  }
  return grad;
}

}  // namespace drip
