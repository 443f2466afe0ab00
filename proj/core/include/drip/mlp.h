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

#ifndef DRIP_MLP_H_
#define DRIP_MLP_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "drip/matrix.h"
#include "drip/random.h"

namespace drip {

enum class Activation { kIdentity, kLeakyRelu, kLogistic };

std::string_view ActivationName(Activation activation);
absl::StatusOr<Activation> ParseActivation(std::string_view name);

struct DenseLayer {
  Matrix weight;             // out x in
  std::vector<double> bias;  // out
  Activation activation = Activation::kIdentity;
  double leaky_slope = 0.1;

  std::size_t in_dim() const { return weight.cols(); }
  std::size_t out_dim() const { return weight.rows(); }
};

// Intermediates cached by Mlp::Forward for the backward pass.
struct MlpTape {
  std::uint64_t params_id = 0;
  std::vector<Matrix> inputs;  // input to layer i
  std::vector<Matrix> pre;     // pre-activation of layer i
};

// Fully connected network evaluated on batches (one record per row).
//
// Parameters are exposed as a flat vector: for each layer, the weight matrix
// in row-major order followed by the bias. Gradients use the same layout.
class Mlp {
 public:
  Mlp() = default;

  // Validates that layer dimensions chain and all weights are finite.
  static absl::StatusOr<Mlp> Create(std::vector<DenseLayer> layers);

  // dims = {in, hidden..., out}. Weights uniform in +-sqrt(6/(fan_in +
  // fan_out)), zero biases.
  static Mlp Initialized(std::span<const std::size_t> dims, Activation hidden,
                         Activation output, RandomSource& rng,
                         double leaky_slope = 0.1);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t num_layers() const { return layers_.size(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  // Any mutable access invalidates outstanding tapes.
  std::vector<DenseLayer>& mutable_layers();

  std::size_t num_params() const;
  std::vector<double> Parameters() const;
  absl::Status SetParameters(std::span<const double> params);

  // Identifies the current parameter values; tapes record it.
  std::uint64_t id() const { return id_; }

  absl::StatusOr<Matrix> Forward(const Matrix& x,
                                 MlpTape* tape = nullptr) const;

  // Pulls `grad_out` (cotangent on the output batch) back through the
  // network. Adds parameter gradients into `param_grad` (num_params entries)
  // and returns the cotangent on the input batch.
  absl::StatusOr<Matrix> Backward(const MlpTape& tape, const Matrix& grad_out,
                                  std::span<double> param_grad) const;

 private:
  explicit Mlp(std::vector<DenseLayer> layers);

  std::vector<DenseLayer> layers_;
  std::uint64_t id_ = 0;
};

double Activate(Activation activation, double slope, double x);
double ActivateDerivative(Activation activation, double slope, double x);

}  // namespace drip

#endif  // DRIP_MLP_H_
