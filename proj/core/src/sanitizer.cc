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

#include "drip/sanitizer.h"

#include <atomic>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"
#include "json.hpp"

namespace drip {
namespace {

using nlohmann::json;

std::uint64_t NextNoiseId() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

json MatrixToJson(const Matrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

absl::StatusOr<Matrix> MatrixFromJson(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    return absl::InvalidArgumentError("matrix entry needs rows, cols, data");
  }
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "matrix entry has %d values, expected %dx%d", data.size(), rows, cols));
  }
  return Matrix(rows, cols, std::move(data));
}

json MlpJson(const Mlp& mlp) {
  json layers = json::array();
  for (const DenseLayer& l : mlp.layers()) {
    layers.push_back(json{{"in", l.in_dim()},
                          {"out", l.out_dim()},
                          {"activation", std::string(ActivationName(l.activation))},
                          {"leaky_slope", l.leaky_slope},
                          {"weight", MatrixToJson(l.weight)},
                          {"bias", l.bias}});
  }
  return json{{"layers", layers}};
}

absl::StatusOr<Mlp> MlpFromJsonValue(const json& j) {
  if (!j.is_object() || !j.contains("layers") || !j.at("layers").is_array()) {
    return absl::InvalidArgumentError("network entry needs a layers array");
  }
  std::vector<DenseLayer> layers;
  for (const json& lj : j.at("layers")) {
    DenseLayer l;
    absl::StatusOr<Matrix> w = MatrixFromJson(lj.at("weight"));
    if (!w.ok()) return w.status();
    l.weight = *std::move(w);
    l.bias = lj.at("bias").get<std::vector<double>>();
    absl::StatusOr<Activation> act =
        ParseActivation(lj.at("activation").get<std::string>());
    if (!act.ok()) return act.status();
    l.activation = *act;
    l.leaky_slope = lj.value("leaky_slope", 0.1);
    if (lj.at("in").get<std::size_t>() != l.in_dim() ||
        lj.at("out").get<std::size_t>() != l.out_dim()) {
      return absl::InvalidArgumentError(
          "layer dims disagree with its weight matrix");
    }
    layers.push_back(std::move(l));
  }
  return Mlp::Create(std::move(layers));
}

DenseLayer IdentityLayer(std::size_t dim) {
  DenseLayer l;
  l.weight = Matrix::Identity(dim);
  l.bias.assign(dim, 0.0);
  l.activation = Activation::kIdentity;
  return l;
}

}  // namespace

Sanitizer::Sanitizer(Mlp encoder, Matrix noise_transform, Mlp decoder)
    : encoder_(std::move(encoder)),
      noise_transform_(std::move(noise_transform)),
      decoder_(std::move(decoder)),
      noise_id_(NextNoiseId()) {}

absl::StatusOr<Sanitizer> Sanitizer::Create(Mlp encoder, Matrix noise_transform,
                                            Mlp decoder) {
  if (encoder.num_layers() == 0 || decoder.num_layers() == 0) {
    return absl::InvalidArgumentError("encoder and decoder need layers");
  }
  if (encoder.output_dim() != noise_transform.rows() ||
      decoder.input_dim() != noise_transform.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bottleneck mismatch: encoder out %d, noise transform rows %d, "
        "decoder in %d",
        encoder.output_dim(), noise_transform.rows(), decoder.input_dim()));
  }
  if (noise_transform.cols() == 0) {
    return absl::InvalidArgumentError("noise dimension must be positive");
  }
  if (decoder.output_dim() != encoder.input_dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sanitized records must keep the raw dimension: decoder out %d vs "
        "encoder in %d",
        decoder.output_dim(), encoder.input_dim()));
  }
  if (!noise_transform.AllFinite()) {
    return absl::InvalidArgumentError("noise transform has non-finite entries");
  }
  return Sanitizer(std::move(encoder), std::move(noise_transform),
                   std::move(decoder));
}

Sanitizer Sanitizer::Initialized(const SanitizerShape& shape,
                                 RandomSource& rng) {
  const std::size_t noise_dim =
      shape.noise_dim == 0 ? shape.bottleneck : shape.noise_dim;
  const std::size_t enc_dims[] = {shape.input_dim, shape.hidden,
                                  shape.bottleneck};
  Mlp encoder = Mlp::Initialized(enc_dims, Activation::kLeakyRelu,
                                 Activation::kIdentity, rng, shape.leaky_slope);
  Matrix noise(shape.bottleneck, noise_dim);
  const double limit =
      std::sqrt(6.0 / static_cast<double>(shape.bottleneck + noise_dim));
  for (double& w : noise.data()) w = rng.Uniform(-limit, limit);
  const std::size_t dec_dims[] = {shape.bottleneck, shape.hidden,
                                  shape.input_dim};
  Mlp decoder = Mlp::Initialized(
      dec_dims, Activation::kLeakyRelu,
      shape.logistic_output ? Activation::kLogistic : Activation::kIdentity,
      rng, shape.leaky_slope);
  return Sanitizer(std::move(encoder), std::move(noise), std::move(decoder));
}

Sanitizer Sanitizer::Identity(std::size_t dim) {
  absl::StatusOr<Mlp> enc = Mlp::Create({IdentityLayer(dim)});
  absl::StatusOr<Mlp> dec = Mlp::Create({IdentityLayer(dim)});
  return Sanitizer(*std::move(enc), Matrix(dim, dim), *std::move(dec));
}

Matrix Sanitizer::NoiseCovariance() const {
  return MatMulTransB(noise_transform_, noise_transform_);
}

std::size_t Sanitizer::num_params() const {
  return encoder_.num_params() + noise_transform_.size() +
         decoder_.num_params();
}

std::vector<double> Sanitizer::Parameters() const {
  std::vector<double> out = encoder_.Parameters();
  out.insert(out.end(), noise_transform_.data().begin(),
             noise_transform_.data().end());
  const std::vector<double> dec = decoder_.Parameters();
  out.insert(out.end(), dec.begin(), dec.end());
  return out;
}

absl::Status Sanitizer::SetParameters(std::span<const double> params) {
  if (params.size() != num_params()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d sanitizer parameters, got %d", num_params(),
        params.size()));
  }
  const std::size_t ne = encoder_.num_params();
  const std::size_t nn = noise_transform_.size();
  if (absl::Status s = encoder_.SetParameters(params.subspan(0, ne)); !s.ok()) {
    return s;
  }
  std::copy(params.begin() + ne, params.begin() + ne + nn,
            noise_transform_.data().begin());
  noise_id_ = NextNoiseId();
  return decoder_.SetParameters(params.subspan(ne + nn));
}

absl::StatusOr<Matrix> Sanitizer::Forward(const Matrix& x, const Matrix& noise,
                                          SanitizerTape* tape) const {
  if (x.cols() != input_dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "records have %d columns, sanitizer expects %d", x.cols(),
        input_dim()));
  }
  if (noise.rows() != x.rows() || noise.cols() != noise_dim()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "noise is %dx%d, expected %dx%d", noise.rows(), noise.cols(), x.rows(),
        noise_dim()));
  }
  absl::StatusOr<Matrix> code =
      encoder_.Forward(x, tape != nullptr ? &tape->encoder : nullptr);
  if (!code.ok()) return code.status();
  *code += MatMulTransB(noise, noise_transform_);
  absl::StatusOr<Matrix> out =
      decoder_.Forward(*code, tape != nullptr ? &tape->decoder : nullptr);
  if (!out.ok()) return out.status();
  if (tape != nullptr) {
    tape->noise = noise;
    tape->encoder_id = encoder_.id();
    tape->decoder_id = decoder_.id();
    tape->noise_id = noise_id_;
  }
  return out;
}

absl::StatusOr<Matrix> Sanitizer::Backward(const SanitizerTape& tape,
                                           const Matrix& grad_out,
                                           std::span<double> param_grad) const {
  if (tape.encoder_id != encoder_.id() || tape.decoder_id != decoder_.id() ||
      tape.noise_id != noise_id_) {
    return absl::FailedPreconditionError(
        "sanitizer tape is stale: parameters changed since the forward pass");
  }
  if (param_grad.size() != num_params()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "gradient buffer has %d entries, expected %d", param_grad.size(),
        num_params()));
  }
  const std::size_t ne = encoder_.num_params();
  const std::size_t nn = noise_transform_.size();
  absl::StatusOr<Matrix> grad_code =
      decoder_.Backward(tape.decoder, grad_out, param_grad.subspan(ne + nn));
  if (!grad_code.ok()) return grad_code.status();
  const Matrix grad_noise = MatMulTransA(*grad_code, tape.noise);
  for (std::size_t i = 0; i < nn; ++i) {
    param_grad[ne + i] += grad_noise.data()[i];
  }
  return encoder_.Backward(tape.encoder, *grad_code, param_grad.subspan(0, ne));
}

absl::StatusOr<Matrix> DecentralizedSanitize(
    std::span<const Sanitizer> sanitizers, std::span<const Matrix> x_blocks,
    std::span<const Matrix> noise_blocks) {
  if (sanitizers.empty() || sanitizers.size() != x_blocks.size() ||
      sanitizers.size() != noise_blocks.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "partition mismatch: %d sanitizers, %d record blocks, %d noise blocks",
        sanitizers.size(), x_blocks.size(), noise_blocks.size()));
  }
  std::vector<Matrix> outputs;
  outputs.reserve(sanitizers.size());
  for (std::size_t i = 0; i < sanitizers.size(); ++i) {
    if (x_blocks[i].rows() != x_blocks[0].rows()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("block %d has %d rows, block 0 has %d", i,
                          x_blocks[i].rows(), x_blocks[0].rows()));
    }
    absl::StatusOr<Matrix> out =
        sanitizers[i].Forward(x_blocks[i], noise_blocks[i]);
    if (!out.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("block %d: %s", i, out.status().message()));
    }
    outputs.push_back(*std::move(out));
  }
  return ConcatColumns(outputs);
}

std::string MlpToJson(const Mlp& mlp) { return MlpJson(mlp).dump(); }

absl::StatusOr<Mlp> MlpFromJson(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  try {
    return MlpFromJsonValue(j);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  }
}

std::string SanitizerToJson(const Sanitizer& sanitizer) {
  json j{{"format_version", kSanitizerFormatVersion},
         {"kind", "drip-sanitizer"},
         {"encoder", MlpJson(sanitizer.encoder())},
         {"noise_transform", MatrixToJson(sanitizer.noise_transform())},
         {"decoder", MlpJson(sanitizer.decoder())}};
  return j.dump();
}

absl::StatusOr<Sanitizer> SanitizerFromJson(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  try {
    if (j.value("format_version", -1) != kSanitizerFormatVersion) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "unsupported sanitizer format version %d (expected %d)",
          j.value("format_version", -1), kSanitizerFormatVersion));
    }
    absl::StatusOr<Mlp> enc = MlpFromJsonValue(j.at("encoder"));
    if (!enc.ok()) return enc.status();
    absl::StatusOr<Matrix> noise = MatrixFromJson(j.at("noise_transform"));
    if (!noise.ok()) return noise.status();
    absl::StatusOr<Mlp> dec = MlpFromJsonValue(j.at("decoder"));
    if (!dec.ok()) return dec.status();
    return Sanitizer::Create(*std::move(enc), *std::move(noise),
                             *std::move(dec));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  }
}

}  // namespace drip
