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

// The stochastic sanitizer x~ = h_d(h_e(x) + h_s(xi)): a dense encoder, an
// additive bottleneck perturbation obtained by a linear map of standard
// normal noise, and a dense decoder back to the record dimension.

#ifndef DRIP_SANITIZER_H_
#define DRIP_SANITIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "drip/matrix.h"
#include "drip/mlp.h"
#include "drip/random.h"

namespace drip {

struct SanitizerShape {
  std::size_t input_dim = 0;
  std::size_t hidden = 20;
  std::size_t bottleneck = 10;
  std::size_t noise_dim = 0;  // 0 means "same as bottleneck"
  // Logistic on the decoder output, for features scaled to [0, 1].
  bool logistic_output = true;
  double leaky_slope = 0.1;
};

struct SanitizerTape {
  MlpTape encoder;
  MlpTape decoder;
  Matrix noise;
  std::uint64_t encoder_id = 0;
  std::uint64_t decoder_id = 0;
  std::uint64_t noise_id = 0;
};

class Sanitizer {
 public:
  Sanitizer() = default;

  // Checks encoder out == noise_transform rows == decoder in, and decoder
  // out == encoder in (sanitized records keep the raw dimension).
  static absl::StatusOr<Sanitizer> Create(Mlp encoder, Matrix noise_transform,
                                          Mlp decoder);

  // Encoder d -> hidden -> b, decoder b -> hidden -> d with leaky-rectifier
  // hidden units.
  static Sanitizer Initialized(const SanitizerShape& shape, RandomSource& rng);

  // Single linear identity layers with a zero noise transform: x~ = x.
  static Sanitizer Identity(std::size_t dim);

  const Mlp& encoder() const { return encoder_; }
  const Mlp& decoder() const { return decoder_; }
  // bottleneck x noise_dim; the implied noise covariance is W W^T.
  const Matrix& noise_transform() const { return noise_transform_; }
  Matrix NoiseCovariance() const;

  std::size_t input_dim() const { return encoder_.input_dim(); }
  std::size_t bottleneck_dim() const { return noise_transform_.rows(); }
  std::size_t noise_dim() const { return noise_transform_.cols(); }

  // Flat layout: encoder parameters, noise transform (row-major), decoder
  // parameters.
  std::size_t num_params() const;
  std::vector<double> Parameters() const;
  absl::Status SetParameters(std::span<const double> params);

  // Sanitizes a batch. `noise` holds one noise vector per row of `x`.
  absl::StatusOr<Matrix> Forward(const Matrix& x, const Matrix& noise,
                                 SanitizerTape* tape = nullptr) const;

  // Contracts the cotangent `grad_out` on x~ back to the parameters (added
  // into `param_grad`) and returns the cotangent on x.
  absl::StatusOr<Matrix> Backward(const SanitizerTape& tape,
                                  const Matrix& grad_out,
                                  std::span<double> param_grad) const;

 private:
  Sanitizer(Mlp encoder, Matrix noise_transform, Mlp decoder);

  Mlp encoder_;
  Matrix noise_transform_;
  Mlp decoder_;
  std::uint64_t noise_id_ = 0;
};

// Independent local sanitization: block i of the output depends only on
// (x_blocks[i], noise_blocks[i]) through sanitizers[i].
absl::StatusOr<Matrix> DecentralizedSanitize(
    std::span<const Sanitizer> sanitizers, std::span<const Matrix> x_blocks,
    std::span<const Matrix> noise_blocks);

// JSON container with a format version, explicit layer dimensions and
// activation tags.
inline constexpr int kSanitizerFormatVersion = 1;
std::string SanitizerToJson(const Sanitizer& sanitizer);
absl::StatusOr<Sanitizer> SanitizerFromJson(const std::string& text);

// Same encoding for a bare network, used by checkpoints of inner models.
std::string MlpToJson(const Mlp& mlp);
absl::StatusOr<Mlp> MlpFromJson(const std::string& text);

}  // namespace drip

#endif  // DRIP_SANITIZER_H_
