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

#include "drip/config.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace drip {
namespace {

// Pops `key` from `kv` into `*out` when present.
template <typename T>
absl::Status Take(KeyValues& kv, const std::string& key, T* out) {
  auto it = kv.find(key);
  if (it == kv.end()) return absl::OkStatus();
  const std::string value = it->second;
  kv.erase(it);
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) {
    ok = absl::SimpleAtob(value, out);
  } else if constexpr (std::is_same_v<T, double>) {
    ok = absl::SimpleAtod(value, out) && std::isfinite(*out);
  } else if constexpr (std::is_same_v<T, int>) {
    ok = absl::SimpleAtoi(value, out);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    ok = absl::SimpleAtoi(value, out);
  } else if constexpr (std::is_same_v<T, std::size_t>) {
    std::uint64_t v = 0;
    ok = absl::SimpleAtoi(value, &v);
    *out = static_cast<std::size_t>(v);
  } else {
    static_assert(std::is_same_v<T, std::string>);
    *out = value;
    ok = true;
  }
  if (!ok) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config key '%s' has invalid value '%s'", key, value));
  }
  return absl::OkStatus();
}

template <typename Enum, typename Parser>
absl::Status TakeEnum(KeyValues& kv, const std::string& key, Parser parse,
                      Enum* out) {
  std::string text;
  bool present = kv.count(key) > 0;
  if (absl::Status s = Take(kv, key, &text); !s.ok()) return s;
  if (!present) return absl::OkStatus();
  absl::StatusOr<Enum> parsed = parse(text);
  if (!parsed.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config key '", key, "': ", parsed.status().message()));
  }
  *out = *parsed;
  return absl::OkStatus();
}

}  // namespace

std::string_view PrivacyMetricName(PrivacyMetric metric) {
  switch (metric) {
    case PrivacyMetric::kVariational:
      return "variational";
    case PrivacyMetric::kNnMaxCorr:
      return "nn-maxcorr";
    case PrivacyMetric::kKernelMaxCorr:
      return "kernel-maxcorr";
  }
  return "unknown";
}

absl::StatusOr<PrivacyMetric> ParsePrivacyMetric(std::string_view name) {
  if (name == "variational") return PrivacyMetric::kVariational;
  if (name == "nn-maxcorr") return PrivacyMetric::kNnMaxCorr;
  if (name == "kernel-maxcorr") return PrivacyMetric::kKernelMaxCorr;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown privacy metric '%s' (expected variational, nn-maxcorr or "
      "kernel-maxcorr)",
      std::string(name)));
}

std::string_view UtilityKindName(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::kReconstruction:
      return "variational-reconstruction";
    case UtilityKind::kPublicTask:
      return "public-task";
  }
  return "unknown";
}

absl::StatusOr<UtilityKind> ParseUtilityKind(std::string_view name) {
  if (name == "variational-reconstruction") return UtilityKind::kReconstruction;
  if (name == "public-task") return UtilityKind::kPublicTask;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown utility '%s' (expected variational-reconstruction or "
      "public-task)",
      std::string(name)));
}

absl::Status ValidateConfig(const TradeoffConfig& c) {
  if (!(c.lambda1 >= 0.0) || !(c.lambda2 >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "lambda1 and lambda2 must be non-negative, got %g and %g", c.lambda1,
        c.lambda2));
  }
  if (c.batch_size < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("batch_size must be at least 2, got %d", c.batch_size));
  }
  if (c.inner_steps < 0 || c.outer_steps < 0) {
    return absl::InvalidArgumentError("step counts must be non-negative");
  }
  if (!(c.kernel_sigma > 0.0) || !(c.kernel_eta > 0.0)) {
    return absl::InvalidArgumentError(
        "kernel_sigma and kernel_eta must be positive");
  }
  if (!(c.adam.learning_rate > 0.0) || !(c.inner_adam.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning rates must be positive");
  }
  if (c.hidden == 0 || c.bottleneck == 0 || c.inner_hidden == 0 ||
      c.da_patches == 0) {
    return absl::InvalidArgumentError(
        "hidden, bottleneck, inner_hidden and da_patches must be positive");
  }
  if (!(c.clip_norm > 0.0) || c.convergence_window < 1) {
    return absl::InvalidArgumentError(
        "clip_norm and convergence_window must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<KeyValues> ParseKeyValues(std::string_view text) {
  KeyValues out;
  std::map<std::string, int> first_line;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(
           absl::string_view(text.data(), text.size()), '\n')) {
    ++line_no;
    const std::string line(absl::StripAsciiWhitespace(raw));
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: expected 'key = value', got '%s'", line_no, line));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: empty key", line_no));
    }
    if (auto it = first_line.find(key); it != first_line.end()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: key '%s' already set on line %d", line_no, key, it->second));
    }
    first_line[key] = line_no;
    out[key] = value;
  }
  return out;
}

absl::StatusOr<TradeoffConfig> TradeoffConfigFromKeyValues(KeyValues& kv) {
  TradeoffConfig c;
  absl::Status s;
  auto take = [&](absl::Status next) {
    if (s.ok()) s = std::move(next);
  };
  take(Take(kv, "lambda1", &c.lambda1));
  take(Take(kv, "lambda2", &c.lambda2));
  take(TakeEnum(kv, "privacy", ParsePrivacyMetric, &c.privacy));
  take(TakeEnum(kv, "regularizer", ParseRegularizer, &c.regularizer));
  take(TakeEnum(kv, "utility", ParseUtilityKind, &c.utility));
  take(TakeEnum(kv, "task_loss", ParseTaskLoss, &c.task_loss));
  take(Take(kv, "batch_size", &c.batch_size));
  take(Take(kv, "inner_steps", &c.inner_steps));
  take(Take(kv, "outer_steps", &c.outer_steps));
  take(Take(kv, "learning_rate", &c.adam.learning_rate));
  take(Take(kv, "beta1", &c.adam.beta1));
  take(Take(kv, "beta2", &c.adam.beta2));
  take(Take(kv, "epsilon", &c.adam.epsilon));
  take(Take(kv, "inner_learning_rate", &c.inner_adam.learning_rate));
  take(Take(kv, "inner_beta1", &c.inner_adam.beta1));
  take(Take(kv, "clip_norm", &c.clip_norm));
  take(Take(kv, "seed", &c.seed));
  take(Take(kv, "kernel_sigma", &c.kernel_sigma));
  take(Take(kv, "kernel_eta", &c.kernel_eta));
  take(Take(kv, "hidden", &c.hidden));
  take(Take(kv, "bottleneck", &c.bottleneck));
  take(Take(kv, "noise_dim", &c.noise_dim));
  take(Take(kv, "logistic_output", &c.logistic_output));
  take(Take(kv, "leaky_slope", &c.leaky_slope));
  take(Take(kv, "inner_hidden", &c.inner_hidden));
  take(Take(kv, "da_patches", &c.da_patches));
  take(Take(kv, "convergence_window", &c.convergence_window));
  take(Take(kv, "convergence_tolerance", &c.convergence_tolerance));
  take(Take(kv, "stop_on_convergence", &c.stop_on_convergence));
  if (!s.ok()) return s;
  if (absl::Status v = ValidateConfig(c); !v.ok()) return v;
  return c;
}

std::string TradeoffConfigToText(const TradeoffConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    absl::StrAppend(&out, absl::string_view(key.data(), key.size()), " = ",
                    value, "\n");
  };
  auto num = [](double v) { return absl::StrFormat("%.17g", v); };
  line("lambda1", num(c.lambda1));
  line("lambda2", num(c.lambda2));
  line("privacy", std::string(PrivacyMetricName(c.privacy)));
  line("regularizer", std::string(RegularizerName(c.regularizer)));
  line("utility", std::string(UtilityKindName(c.utility)));
  line("task_loss", std::string(TaskLossName(c.task_loss)));
  line("batch_size", absl::StrCat(c.batch_size));
  line("inner_steps", absl::StrCat(c.inner_steps));
  line("outer_steps", absl::StrCat(c.outer_steps));
  line("learning_rate", num(c.adam.learning_rate));
  line("beta1", num(c.adam.beta1));
  line("beta2", num(c.adam.beta2));
  line("epsilon", num(c.adam.epsilon));
  line("inner_learning_rate", num(c.inner_adam.learning_rate));
  line("inner_beta1", num(c.inner_adam.beta1));
  line("clip_norm", num(c.clip_norm));
  line("seed", absl::StrCat(c.seed));
  line("kernel_sigma", num(c.kernel_sigma));
  line("kernel_eta", num(c.kernel_eta));
  line("hidden", absl::StrCat(c.hidden));
  line("bottleneck", absl::StrCat(c.bottleneck));
  line("noise_dim", absl::StrCat(c.noise_dim));
  line("logistic_output", c.logistic_output ? "true" : "false");
  line("leaky_slope", num(c.leaky_slope));
  line("inner_hidden", absl::StrCat(c.inner_hidden));
  line("da_patches", absl::StrCat(c.da_patches));
  line("convergence_window", absl::StrCat(c.convergence_window));
  line("convergence_tolerance", num(c.convergence_tolerance));
  line("stop_on_convergence", c.stop_on_convergence ? "true" : "false");
  return out;
}

}  // namespace drip
