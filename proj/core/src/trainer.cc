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

#include "drip/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_format.h"
#include "json.hpp"

namespace drip {
namespace {

using nlohmann::json;

constexpr std::uint64_t kSanitizerStream = 1;
constexpr std::uint64_t kInnerStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kBatchStream = 4;

Mlp DenseNet(std::size_t in, std::size_t hidden, std::size_t out,
             Activation output, RandomSource& rng) {
  const std::size_t dims[] = {in, hidden, out};
  return Mlp::Initialized(dims, Activation::kLeakyRelu, output, rng);
}

std::vector<std::int64_t> ToSymbols(std::span<const std::size_t> labels) {
  return std::vector<std::int64_t>(labels.begin(), labels.end());
}

KernelSpec SpecFor(const TradeoffConfig& config) {
  absl::StatusOr<KernelSpec> spec =
      KernelSpec::Rbf(config.kernel_sigma, config.kernel_eta);
  return spec.ok() ? *spec : KernelSpec();
}

absl::Status CheckDataForConfig(const TradeoffConfig& config,
                                const TrainingData& data) {
  const std::size_t n = data.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need at least two training records, got %d", n));
  }
  if (data.s.rows() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d private values for %d records", data.s.rows(), n));
  }
  if (!data.s_labels.empty() && data.s_labels.size() != n) {
    return absl::InvalidArgumentError("private labels do not cover the records");
  }
  if (config.privacy == PrivacyMetric::kVariational && data.s_classes < 2) {
    return absl::InvalidArgumentError(
        "variational privacy needs a discrete private variable");
  }
  if (config.utility == UtilityKind::kPublicTask) {
    if (config.task_loss == TaskLoss::kCrossEntropy) {
      if (data.u.labels.size() != n || data.u_classes < 2) {
        return absl::InvalidArgumentError(
            "public-task cross-entropy utility needs public class labels");
      }
    } else if (data.u.values.rows() != n || data.u.values.cols() == 0) {
      return absl::InvalidArgumentError(
          "public-task regression utility needs public target values");
    }
  }
  return absl::OkStatus();
}

// Descends -grad (i.e. ascends) one network with clipping.
absl::Status AscendNet(Mlp& net, std::vector<double> grad,
                       AdamMoments& moments, const TradeoffConfig& config) {
  for (double& g : grad) g = -g;
  ClipGlobalNorm(grad, config.clip_norm);
  std::vector<double> params = net.Parameters();
  if (absl::Status s = AdamUpdate(params, grad, moments, config.inner_adam);
      !s.ok()) {
    return s;
  }
  return net.SetParameters(params);
}

AdamMoments& MomentsFor(TrainState& state, const std::string& name,
                        std::size_t n) {
  auto it = state.inner_moments.find(name);
  if (it == state.inner_moments.end()) {
    it = state.inner_moments.emplace(name, AdamMoments(n)).first;
  }
  return it->second;
}

// One ascent update of every inner model on (batch, sanitized), recording
// each objective value before its update.
absl::Status InnerUpdate(TrainState& state, const TradeoffConfig& config,
                         const TrainingData& batch, const Matrix& sanitized,
                         StepTrace& trace) {
  InnerModels& inner = state.inner;
  if (inner.posterior) {
    absl::StatusOr<ObjectiveGradients> obj =
        UtilityObjective(*inner.posterior, batch.x, sanitized);
    if (!obj.ok()) return obj.status();
    trace.inner_values["utility"].push_back(obj->value);
    AdamMoments& m = MomentsFor(state, "utility", inner.posterior->num_params());
    if (absl::Status s = AscendNet(*inner.posterior, obj->param_grad, m, config);
        !s.ok()) {
      return s;
    }
  }
  if (inner.task) {
    absl::StatusOr<ObjectiveGradients> obj = PublicTaskUtility(
        *inner.task, config.task_loss, sanitized, batch.u);
    if (!obj.ok()) return obj.status();
    trace.inner_values["utility"].push_back(obj->value);
    AdamMoments& m = MomentsFor(state, "utility", inner.task->num_params());
    if (absl::Status s = AscendNet(*inner.task, obj->param_grad, m, config);
        !s.ok()) {
      return s;
    }
  }
  if (inner.classifier) {
    absl::StatusOr<ObjectiveGradients> obj =
        PrivacyObjective(*inner.classifier, sanitized, batch.s_labels);
    if (!obj.ok()) return obj.status();
    trace.inner_values["privacy"].push_back(obj->value);
    AdamMoments& m =
        MomentsFor(state, "privacy", inner.classifier->num_params());
    if (absl::Status s = AscendNet(*inner.classifier, obj->param_grad, m, config);
        !s.ok()) {
      return s;
    }
  }
  if (inner.corr) {
    absl::StatusOr<NetObjective> obj =
        NnMaxCorrObjective(*inner.corr, sanitized, batch.s);
    if (!obj.ok()) return obj.status();
    trace.inner_values["privacy"].push_back(obj->value);
    const std::size_t nf = inner.corr->f.num_params();
    AdamMoments& mf = MomentsFor(state, "privacy_f", nf);
    AdamMoments& mg = MomentsFor(state, "privacy_g", inner.corr->g.num_params());
    if (absl::Status s = AscendNet(inner.corr->f, obj->f_grad, mf, config);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = AscendNet(inner.corr->g, obj->g_grad, mg, config);
        !s.ok()) {
      return s;
    }
  }
  if (inner.corr_f) {
    const std::vector<std::int64_t> symbols = ToSymbols(batch.s_labels);
    MlpTape tape;
    absl::StatusOr<Matrix> raw = inner.corr_f->Forward(sanitized, &tape);
    if (!raw.ok()) return raw.status();
    const RatioObjective ratio =
        MaxCorrRatio(*raw, inner.corr_table->Evaluate(symbols));
    trace.inner_values["privacy"].push_back(ratio.value);
    std::vector<double> grad(inner.corr_f->num_params(), 0.0);
    absl::StatusOr<Matrix> back =
        inner.corr_f->Backward(tape, ratio.grad_f_raw, grad);
    if (!back.ok()) return back.status();
    AdamMoments& m = MomentsFor(state, "privacy", inner.corr_f->num_params());
    if (absl::Status s = AscendNet(*inner.corr_f, std::move(grad), m, config);
        !s.ok()) {
      return s;
    }
    // Exact maximizer over the table for the updated f.
    absl::StatusOr<Matrix> updated = inner.corr_f->Forward(sanitized);
    if (!updated.ok()) return updated.status();
    *inner.corr_table =
        DiscreteTable::ConditionalMean(CenterColumns(*updated), symbols);
  }
  if (inner.disc) {
    absl::StatusOr<DaLossResult> obj = DaLoss(*inner.disc, batch.x, sanitized);
    if (!obj.ok()) return obj.status();
    trace.inner_values["regularizer"].push_back(obj->value);
    AdamMoments& m =
        MomentsFor(state, "regularizer", inner.disc->net.num_params());
    if (absl::Status s = AscendNet(inner.disc->net, obj->param_grad, m, config);
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

std::vector<std::size_t> NextBatch(TrainState& state, std::size_t n,
                                   std::size_t batch) {
  const std::size_t m = std::min(batch, n);
  if (state.order.size() != n || state.cursor + m > n) {
    state.order = state.batch_rng.Permutation(n);
    state.cursor = 0;
  }
  std::vector<std::size_t> idx(state.order.begin() + state.cursor,
                               state.order.begin() + state.cursor + m);
  state.cursor += m;
  return idx;
}

json ParseOrNull(const std::string& text) {
  return json::parse(text, nullptr, /*allow_exceptions=*/false);
}

}  // namespace

TrainingData SelectRecords(const TrainingData& data,
                           std::span<const std::size_t> indices) {
  TrainingData out;
  out.x = data.x.SelectRows(indices);
  out.s = data.s.SelectRows(indices);
  out.s_classes = data.s_classes;
  out.u_classes = data.u_classes;
  if (!data.s_labels.empty()) {
    for (std::size_t i : indices) out.s_labels.push_back(data.s_labels[i]);
  }
  if (data.u.values.rows() > 0) out.u.values = data.u.values.SelectRows(indices);
  if (!data.u.labels.empty()) {
    for (std::size_t i : indices) out.u.labels.push_back(data.u.labels[i]);
  }
  return out;
}

InnerModels InitInnerModels(const TradeoffConfig& config,
                            const TrainingData& data, RandomSource& rng) {
  InnerModels inner;
  const std::size_t d = data.x.cols();
  const std::size_t h = config.inner_hidden;
  if (config.utility == UtilityKind::kReconstruction) {
    inner.posterior = DenseNet(
        d, h, d,
        config.logistic_output ? Activation::kLogistic : Activation::kIdentity,
        rng);
  } else {
    const std::size_t out = config.task_loss == TaskLoss::kCrossEntropy
                                ? data.u_classes
                                : data.u.values.cols();
    inner.task = DenseNet(d, h, out, Activation::kIdentity, rng);
  }
  switch (config.privacy) {
    case PrivacyMetric::kVariational:
      inner.classifier = DenseNet(d, h, data.s_classes, Activation::kIdentity, rng);
      break;
    case PrivacyMetric::kNnMaxCorr:
      if (!data.s_labels.empty()) {
        inner.corr_f = DenseNet(d, h, 1, Activation::kIdentity, rng);
        inner.corr_table = DiscreteTable(1);
      } else {
        inner.corr = InitMaxCorrNets(d, data.s.cols(), h, 1, rng);
      }
      break;
    case PrivacyMetric::kKernelMaxCorr:
      break;
  }
  if (config.regularizer == RegularizerKind::kDomainAdaptation) {
    inner.disc = InitDiscriminator(
        d, h, config.da_patches,
        config.da_patches == 1 ? PatchMode::kLogits : PatchMode::kTiles, rng);
  }
  return inner;
}

absl::StatusOr<ObjectiveTerms> AssembleObjective(const TradeoffConfig& config,
                                                 const InnerModels& inner,
                                                 const TrainingData& batch,
                                                 const Matrix& sanitized) {
  ObjectiveTerms out;
  Matrix grad_u;
  if (config.utility == UtilityKind::kReconstruction) {
    if (!inner.posterior) {
      return absl::FailedPreconditionError("missing reconstruction network");
    }
    absl::StatusOr<ObjectiveGradients> u =
        UtilityObjective(*inner.posterior, batch.x, sanitized);
    if (!u.ok()) return u.status();
    out.utility = u->value;
    grad_u = std::move(u->input_grad);
  } else {
    if (!inner.task) return absl::FailedPreconditionError("missing task model");
    if (batch.u.labels.empty() && batch.u.values.rows() == 0) {
      return absl::InvalidArgumentError(
          "public-task utility configured but the batch has no public "
          "variable");
    }
    absl::StatusOr<ObjectiveGradients> u =
        PublicTaskUtility(*inner.task, config.task_loss, sanitized, batch.u);
    if (!u.ok()) return u.status();
    out.utility = u->value;
    grad_u = std::move(u->input_grad);
  }

  Matrix grad_p;
  switch (config.privacy) {
    case PrivacyMetric::kVariational: {
      if (!inner.classifier) {
        return absl::FailedPreconditionError("missing privacy classifier");
      }
      absl::StatusOr<ObjectiveGradients> p =
          PrivacyObjective(*inner.classifier, sanitized, batch.s_labels);
      if (!p.ok()) return p.status();
      out.privacy = p->value;
      grad_p = std::move(p->input_grad);
      break;
    }
    case PrivacyMetric::kNnMaxCorr: {
      if (inner.corr) {
        absl::StatusOr<NetObjective> p =
            NnMaxCorrObjective(*inner.corr, sanitized, batch.s);
        if (!p.ok()) return p.status();
        out.privacy = p->value;
        grad_p = std::move(p->x_grad);
      } else if (inner.corr_f && inner.corr_table) {
        MlpTape tape;
        absl::StatusOr<Matrix> raw = inner.corr_f->Forward(sanitized, &tape);
        if (!raw.ok()) return raw.status();
        const RatioObjective ratio = MaxCorrRatio(
            *raw, inner.corr_table->Evaluate(ToSymbols(batch.s_labels)));
        std::vector<double> unused(inner.corr_f->num_params(), 0.0);
        absl::StatusOr<Matrix> back =
            inner.corr_f->Backward(tape, ratio.grad_f_raw, unused);
        if (!back.ok()) return back.status();
        out.privacy = ratio.value;
        grad_p = *std::move(back);
      } else {
        return absl::FailedPreconditionError("missing correlation networks");
      }
      out.rho_hat = std::sqrt(std::max(0.0, out.privacy));
      break;
    }
    case PrivacyMetric::kKernelMaxCorr: {
      const KernelSpec spec = SpecFor(config);
      absl::StatusOr<KernelMaxCorrSolution> sol =
          KernelMaxCorr(spec, spec, sanitized, batch.s);
      if (!sol.ok()) return sol.status();
      absl::StatusOr<Matrix> g = KernelMaxCorrGradient(spec, *sol, sanitized);
      if (!g.ok()) return g.status();
      out.privacy = sol->rho_hat;
      out.rho_hat = sol->rho_hat;
      grad_p = *std::move(g);
      break;
    }
  }

  absl::StatusOr<RegularizerResult> r =
      RegularizerValue(config.regularizer,
                       inner.disc ? &*inner.disc : nullptr, SpecFor(config),
                       batch.x, sanitized);
  if (!r.ok()) return r.status();
  out.regularizer = r->value;

  out.j = out.utility - config.lambda1 * out.privacy -
          config.lambda2 * out.regularizer;
  out.sanitized_grad = std::move(grad_u);
  for (std::size_t i = 0; i < out.sanitized_grad.size(); ++i) {
    out.sanitized_grad.data()[i] -=
        config.lambda1 * grad_p.data()[i] +
        config.lambda2 * r->sanitized_grad.data()[i];
  }
  return out;
}

std::string MetricsRowToJson(const MetricsRow& row) {
  json j{{"step", row.step},
         {"J", row.j},
         {"utility", row.utility},
         {"privacy", row.privacy},
         {"regularizer", row.regularizer}};
  if (row.rho_hat) j["rho_hat"] = *row.rho_hat;
  return j.dump();
}

absl::StatusOr<TrainState> InitTrainState(const TradeoffConfig& config,
                                          const TrainingData& data) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (absl::Status s = CheckDataForConfig(config, data); !s.ok()) return s;
  RandomSource root(config.seed);
  RandomSource init_rng = root.Fork(kSanitizerStream);
  RandomSource inner_rng = root.Fork(kInnerStream);
  SanitizerShape shape;
  shape.input_dim = data.x.cols();
  shape.hidden = config.hidden;
  shape.bottleneck = config.bottleneck;
  shape.noise_dim = config.noise_dim;
  shape.logistic_output = config.logistic_output;
  shape.leaky_slope = config.leaky_slope;
  TrainState state;
  state.sanitizer = Sanitizer::Initialized(shape, init_rng);
  state.inner = InitInnerModels(config, data, inner_rng);
  state.sanitizer_moments = AdamMoments(state.sanitizer.num_params());
  state.noise_rng = root.Fork(kNoiseStream);
  state.batch_rng = root.Fork(kBatchStream);
  return state;
}

absl::StatusOr<StepTrace> AlternatingStep(TrainState& state,
                                          const TradeoffConfig& config,
                                          const TrainingData& data,
                                          bool freeze_sanitizer) {
  const std::vector<std::size_t> idx =
      NextBatch(state, data.size(), config.batch_size);
  const TrainingData batch = SelectRecords(data, idx);
  const Matrix noise =
      state.noise_rng.GaussianMatrix(idx.size(), state.sanitizer.noise_dim());
  SanitizerTape tape;
  absl::StatusOr<Matrix> sanitized =
      state.sanitizer.Forward(batch.x, noise, &tape);
  if (!sanitized.ok()) return sanitized.status();

  StepTrace trace;
  if (state.inner.corr_f && state.inner.corr_table->entries().empty()) {
    absl::StatusOr<Matrix> raw = state.inner.corr_f->Forward(*sanitized);
    if (!raw.ok()) return raw.status();
    *state.inner.corr_table = DiscreteTable::ConditionalMean(
        CenterColumns(*raw), ToSymbols(batch.s_labels));
  }
  for (int k = 0; k < config.inner_steps; ++k) {
    if (absl::Status s = InnerUpdate(state, config, batch, *sanitized, trace);
        !s.ok()) {
      return s;
    }
  }

  absl::StatusOr<ObjectiveTerms> terms =
      AssembleObjective(config, state.inner, batch, *sanitized);
  if (!terms.ok()) return terms.status();
  if (!freeze_sanitizer) {
    std::vector<double> grad(state.sanitizer.num_params(), 0.0);
    absl::StatusOr<Matrix> back =
        state.sanitizer.Backward(tape, terms->sanitized_grad, grad);
    if (!back.ok()) return back.status();
    for (double& g : grad) g = -g;
    ClipGlobalNorm(grad, config.clip_norm);
    std::vector<double> params = state.sanitizer.Parameters();
    if (absl::Status s =
            AdamUpdate(params, grad, state.sanitizer_moments, config.adam);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = state.sanitizer.SetParameters(params); !s.ok()) {
      return s;
    }
  }
  ++state.step;
  state.history.push_back(MetricsRow{state.step, terms->j, terms->utility,
                                     terms->privacy, terms->regularizer,
                                     terms->rho_hat});
  return trace;
}

absl::StatusOr<TrainResult> Train(const TradeoffConfig& config,
                                  const TrainingData& data) {
  absl::StatusOr<TrainState> state = InitTrainState(config, data);
  if (!state.ok()) return state.status();
  TrainResult result{*std::move(state), false};
  const std::size_t w = static_cast<std::size_t>(config.convergence_window);
  auto window_mean = [&](std::size_t end) {
    double total = 0.0;
    for (std::size_t i = end - w; i < end; ++i) {
      total += result.state.history[i].j;
    }
    return total / static_cast<double>(w);
  };
  for (int t = 0; t < config.outer_steps; ++t) {
    absl::StatusOr<StepTrace> step = AlternatingStep(result.state, config, data);
    if (!step.ok()) return step.status();
    const std::size_t h = result.state.history.size();
    if (config.stop_on_convergence && h >= 2 * w) {
      if (std::abs(window_mean(h) - window_mean(h - w)) <
          config.convergence_tolerance) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

absl::StatusOr<Matrix> SanitizeAll(const Sanitizer& sanitizer, const Matrix& x,
                                   RandomSource& rng) {
  const Matrix noise = rng.GaussianMatrix(x.rows(), sanitizer.noise_dim());
  return sanitizer.Forward(x, noise);
}

std::string CheckpointToJson(const TradeoffConfig& config,
                             const TrainState& state) {
  json inner = json::object();
  const InnerModels& m = state.inner;
  if (m.posterior) inner["posterior"] = ParseOrNull(MlpToJson(*m.posterior));
  if (m.task) inner["task"] = ParseOrNull(MlpToJson(*m.task));
  if (m.classifier) inner["classifier"] = ParseOrNull(MlpToJson(*m.classifier));
  if (m.corr) {
    inner["corr_f"] = ParseOrNull(MlpToJson(m.corr->f));
    inner["corr_g"] = ParseOrNull(MlpToJson(m.corr->g));
  }
  if (m.corr_f) inner["corr_f"] = ParseOrNull(MlpToJson(*m.corr_f));
  if (m.corr_table) {
    json table = json::array();
    for (const auto& [symbol, value] : m.corr_table->entries()) {
      table.push_back(json{{"symbol", symbol}, {"value", value}});
    }
    inner["corr_table"] = table;
  }
  if (m.disc) {
    inner["discriminator"] = ParseOrNull(MlpToJson(m.disc->net));
    inner["discriminator_patches"] = m.disc->patches;
  }
  json j{{"format_version", kCheckpointFormatVersion},
         {"kind", "drip-checkpoint"},
         {"step", state.step},
         {"config", TradeoffConfigToText(config)},
         {"sanitizer", ParseOrNull(SanitizerToJson(state.sanitizer))},
         {"inner", inner}};
  return j.dump(1);
}

absl::StatusOr<Checkpoint> CheckpointFromJson(const std::string& text) {
  json j = ParseOrNull(text);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("checkpoint is not a JSON object");
  }
  try {
    if (j.at("kind").get<std::string>() != "drip-checkpoint") {
      return absl::InvalidArgumentError("not a drip checkpoint");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "unsupported checkpoint format version %d (expected %d)", version,
          kCheckpointFormatVersion));
    }
    Checkpoint out;
    out.step = j.at("step").get<std::int64_t>();
    KeyValues kv;
    absl::StatusOr<KeyValues> parsed =
        ParseKeyValues(j.at("config").get<std::string>());
    if (!parsed.ok()) return parsed.status();
    kv = *std::move(parsed);
    absl::StatusOr<TradeoffConfig> config = TradeoffConfigFromKeyValues(kv);
    if (!config.ok()) return config.status();
    out.config = *config;
    absl::StatusOr<Sanitizer> sanitizer =
        SanitizerFromJson(j.at("sanitizer").dump());
    if (!sanitizer.ok()) return sanitizer.status();
    out.sanitizer = *std::move(sanitizer);
    return out;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed checkpoint: %s", e.what()));
  }
}

}  // namespace drip
