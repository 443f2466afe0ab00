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

#include "drip/evaluate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "absl/strings/str_format.h"
#include "drip/adam.h"
#include "drip/mlp.h"
#include "drip/random.h"
#include "json.hpp"

namespace drip {
namespace {

using nlohmann::json;

std::size_t TargetRows(const AdversaryTarget& t) {
  return t.classification() ? t.labels.size() : t.values.rows();
}

TaskTargets AsTaskTargets(const AdversaryTarget& t) {
  TaskTargets out;
  if (t.classification()) {
    out.labels = t.labels;
  } else {
    out.values = t.values;
  }
  return out;
}

TaskLoss LossFor(const AdversaryTarget& t) {
  return t.classification() ? TaskLoss::kCrossEntropy : t.regression_loss;
}

absl::StatusOr<AdversaryMetrics> TestMetrics(const Mlp& net, const Matrix& x,
                                             const AdversaryTarget& target) {
  absl::StatusOr<Matrix> out = net.Forward(x);
  if (!out.ok()) return out.status();
  AdversaryMetrics m;
  const std::size_t n = x.rows();
  if (target.classification()) {
    const Matrix p = Softmax(*out);
    std::size_t correct = 0;
    double ce = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = p.row(i);
      const std::size_t pred = static_cast<std::size_t>(
          std::max_element(row.begin(), row.end()) - row.begin());
      if (pred == target.labels[i]) ++correct;
      ce -= std::log(std::max(row[target.labels[i]], kProbabilityFloor));
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    m.cross_entropy = ce / static_cast<double>(n);
  } else {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < out->size(); ++i) {
      const double e = out->data()[i] - target.values.data()[i];
      abs_sum += std::abs(e);
      sq_sum += e * e;
    }
    const double count = static_cast<double>(out->size());
    m.mae = abs_sum / count;
    m.mse = sq_sum / count;
  }
  return m;
}

void Accumulate(std::optional<double>& sum, const std::optional<double>& v) {
  if (!v) return;
  sum = sum.value_or(0.0) + *v;
}

void Scale(std::optional<double>& v, double k) {
  if (v) *v *= k;
}

AdversaryMetrics Mean(const std::vector<AdversaryMetrics>& runs) {
  AdversaryMetrics out;
  for (const AdversaryMetrics& r : runs) {
    Accumulate(out.accuracy, r.accuracy);
    Accumulate(out.cross_entropy, r.cross_entropy);
    Accumulate(out.mae, r.mae);
    Accumulate(out.mse, r.mse);
  }
  const double k = 1.0 / static_cast<double>(runs.size());
  Scale(out.accuracy, k);
  Scale(out.cross_entropy, k);
  Scale(out.mae, k);
  Scale(out.mse, k);
  return out;
}

json MetricsJson(const AdversaryMetrics& m) {
  json j = json::object();
  if (m.accuracy) j["accuracy"] = *m.accuracy;
  if (m.cross_entropy) j["cross_entropy"] = *m.cross_entropy;
  if (m.mae) j["mae"] = *m.mae;
  if (m.mse) j["mse"] = *m.mse;
  return j;
}

AdversaryTarget TargetFor(const Attribute& attr, TaskLoss regression_loss) {
  AdversaryTarget t;
  if (attr.categorical()) {
    t.labels = attr.labels;
    t.classes = attr.classes;
  } else {
    t.values = attr.values;
    t.regression_loss = regression_loss;
  }
  return t;
}

}  // namespace

AdversaryTarget AdversaryTarget::Select(
    std::span<const std::size_t> rows) const {
  AdversaryTarget out;
  out.classes = classes;
  out.regression_loss = regression_loss;
  if (classification()) {
    for (std::size_t r : rows) out.labels.push_back(labels[r]);
  } else {
    out.values = values.SelectRows(rows);
  }
  return out;
}

absl::StatusOr<AdversaryMetrics> TrainAdversaryEval(
    const Matrix& train_x, const AdversaryTarget& train, const Matrix& test_x,
    const AdversaryTarget& test, const AdversaryOptions& options,
    std::uint64_t seed) {
  const std::size_t n = train_x.rows();
  if (n < 2 || TargetRows(train) != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "training set has %d rows and %d targets", n, TargetRows(train)));
  }
  if (test_x.rows() == 0 || TargetRows(test) != test_x.rows() ||
      test_x.cols() != train_x.cols()) {
    return absl::InvalidArgumentError("test set does not match training set");
  }
  if (train.classification()) {
    const std::set<std::size_t> distinct(train.labels.begin(),
                                         train.labels.end());
    if (distinct.size() < 2) {
      return absl::InvalidArgumentError(
          "training labels contain a single class");
    }
    for (const auto* labels : {&train.labels, &test.labels}) {
      for (std::size_t l : *labels) {
        if (l >= train.classes) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "label %d out of range for %d classes", l, train.classes));
        }
      }
    }
  } else if (train.values.cols() == 0 ||
             test.values.cols() != train.values.cols()) {
    return absl::InvalidArgumentError("regression targets have no columns");
  }
  if (!(options.validation_fraction >= 0.0 &&
        options.validation_fraction < 1.0) ||
      options.batch_size == 0 || options.max_epochs == 0) {
    return absl::InvalidArgumentError("invalid adversary options");
  }

  RandomSource root(seed);
  RandomSource init_rng = root.Fork(1);
  RandomSource split_rng = root.Fork(2);
  RandomSource batch_rng = root.Fork(3);

  std::vector<std::size_t> dims = {train_x.cols()};
  for (std::size_t l = 0; l < options.hidden_layers; ++l) {
    dims.push_back(options.hidden);
  }
  dims.push_back(train.classification() ? train.classes : train.values.cols());
  Mlp net = Mlp::Initialized(dims, Activation::kLeakyRelu,
                             Activation::kIdentity, init_rng,
                             options.leaky_slope);

  const std::vector<std::size_t> perm = split_rng.Permutation(n);
  const std::size_t n_val = static_cast<std::size_t>(
      std::llround(options.validation_fraction * static_cast<double>(n)));
  const std::vector<std::size_t> val_rows(perm.begin(), perm.begin() + n_val);
  const std::vector<std::size_t> fit_rows(perm.begin() + n_val, perm.end());
  const Matrix val_x = train_x.SelectRows(val_rows);
  const TaskTargets val_t = AsTaskTargets(train.Select(val_rows));
  const TaskLoss loss = LossFor(train);

  AdamConfig adam;
  adam.learning_rate = options.learning_rate;
  adam.beta1 = 0.9;
  AdamMoments moments(net.num_params());
  std::vector<double> best_params = net.Parameters();
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  const std::size_t m = std::min(options.batch_size, fit_rows.size());

  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    const std::vector<std::size_t> order = batch_rng.Permutation(fit_rows.size());
    for (std::size_t start = 0; start + m <= order.size(); start += m) {
      std::vector<std::size_t> rows;
      for (std::size_t k = start; k < start + m; ++k) {
        rows.push_back(fit_rows[order[k]]);
      }
      absl::StatusOr<ObjectiveGradients> obj =
          PublicTaskUtility(net, loss, train_x.SelectRows(rows),
                            AsTaskTargets(train.Select(rows)));
      if (!obj.ok()) return obj.status();
      std::vector<double> grad = std::move(obj->param_grad);
      for (double& g : grad) g = -g;
      std::vector<double> params = net.Parameters();
      if (absl::Status s = AdamUpdate(params, grad, moments, adam); !s.ok()) {
        return s;
      }
      if (absl::Status s = net.SetParameters(params); !s.ok()) return s;
    }
    if (n_val == 0) continue;
    absl::StatusOr<ObjectiveGradients> val =
        PublicTaskUtility(net, loss, val_x, val_t);
    if (!val.ok()) return val.status();
    const double val_loss = -val->value;
    if (val_loss < best_loss) {
      best_loss = val_loss;
      best_params = net.Parameters();
      since_best = 0;
    } else if (++since_best >= options.patience) {
      break;
    }
  }
  if (n_val > 0) {
    if (absl::Status s = net.SetParameters(best_params); !s.ok()) return s;
  }
  return TestMetrics(net, test_x, test);
}

absl::StatusOr<double> LegacyCompatScore(const KernelSpec& spec,
                                         const Matrix& raw,
                                         const Matrix& sanitized) {
  return Mmd2Estimate(spec, raw, sanitized, MmdForm::kPrinted);
}

absl::StatusOr<EvalReport> EvaluateSanitized(const Dataset& dataset,
                                             const Matrix& sanitized,
                                             const EvalOptions& options) {
  if (!sanitized.SameShape(dataset.features)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sanitized features are %dx%d, dataset expects %dx%d",
        sanitized.rows(), sanitized.cols(), dataset.features.rows(),
        dataset.features.cols()));
  }
  if (options.seeds.empty()) {
    return absl::InvalidArgumentError("evaluation needs at least one seed");
  }
  const std::vector<std::size_t>& train = dataset.encoding.train;
  const std::vector<std::size_t>& test = dataset.encoding.test;
  if (train.empty() || test.empty()) {
    return absl::InvalidArgumentError("evaluation needs a non-empty split");
  }
  const Matrix train_x = sanitized.SelectRows(train);
  const Matrix test_x = sanitized.SelectRows(test);

  EvalReport report;
  report.seeds = options.seeds;
  report.private_column =
      dataset.schema.columns[dataset.private_attr.column].name;

  const AdversaryTarget priv =
      TargetFor(dataset.private_attr, options.regression_loss);
  std::vector<AdversaryMetrics> runs;
  for (std::uint64_t seed : options.seeds) {
    absl::StatusOr<AdversaryMetrics> m =
        TrainAdversaryEval(train_x, priv.Select(train), test_x,
                           priv.Select(test), options.adversary, seed);
    if (!m.ok()) return m.status();
    runs.push_back(*m);
  }
  report.adversary = Mean(runs);

  if (dataset.public_attr) {
    report.public_column =
        dataset.schema.columns[dataset.public_attr->column].name;
    const AdversaryTarget pub =
        TargetFor(*dataset.public_attr, options.regression_loss);
    runs.clear();
    for (std::uint64_t seed : options.seeds) {
      absl::StatusOr<AdversaryMetrics> m =
          TrainAdversaryEval(train_x, pub.Select(train), test_x,
                             pub.Select(test), options.adversary, seed);
      if (!m.ok()) return m.status();
      runs.push_back(*m);
    }
    report.utility = Mean(runs);
  }

  absl::StatusOr<KernelSpec> spec =
      KernelSpec::Rbf(options.kernel_sigma, options.kernel_eta);
  if (!spec.ok()) return spec.status();
  absl::StatusOr<double> legacy =
      LegacyCompatScore(*spec, dataset.features.SelectRows(test), test_x);
  if (!legacy.ok()) return legacy.status();
  report.legacy_compat = *legacy;
  absl::StatusOr<KernelMaxCorrSolution> corr = KernelMaxCorr(
      *spec, *spec, test_x, dataset.private_attr.values.SelectRows(test));
  if (!corr.ok()) return corr.status();
  report.kernel_maxcorr = corr->rho_hat;
  return report;
}

std::string EvalReportToJson(const EvalReport& report) {
  json j{{"private_column", report.private_column},
         {"adversary", MetricsJson(report.adversary)},
         {"legacy_compat", report.legacy_compat},
         {"kernel_maxcorr", report.kernel_maxcorr},
         {"seeds", report.seeds}};
  if (report.public_column) j["public_column"] = *report.public_column;
  if (report.utility) j["utility"] = MetricsJson(*report.utility);
  return j.dump();
}

std::string DependenceReportToJson(const DependenceReport& report) {
  json j{{"estimator", report.estimator},
         {"value", report.value},
         {"seed", report.seed}};
  if (report.batch) j["M"] = *report.batch;
  if (report.sigma) j["sigma"] = *report.sigma;
  if (report.eta) j["eta"] = *report.eta;
  if (report.oracle_value) j["oracle_value"] = *report.oracle_value;
  return j.dump();
}

}  // namespace drip
