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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "drip/adam.h"
#include "drip/config.h"
#include "drip/dataset.h"
#include "drip/dependence.h"
#include "drip/evaluate.h"
#include "drip/matrix.h"
#include "drip/random.h"
#include "drip/regularizer.h"
#include "drip/sanitizer.h"
#include "drip/synth.h"
#include "drip/trainer.h"
#include "drip/variational.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace drip {
namespace {

using ::drip::testing::CentralDifferences;
using ::drip::testing::Flat;
using ::drip::testing::FromFlat;
using ::drip::testing::MaxRelError;
using ::drip::testing::UniformMatrix;

// Records in [0, 1]^d whose first coordinate leaks a binary private label,
// with a binary public label tied to the second coordinate.
TrainingData ToyData(RandomSource& rng, std::size_t n, std::size_t d) {
  TrainingData data;
  data.x = UniformMatrix(rng, n, d);
  data.s = Matrix(n, 2);
  data.s_classes = 2;
  data.u_classes = 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = rng.UniformIndex(2);
    data.x(i, 0) = 0.25 + 0.5 * s + 0.1 * (data.x(i, 0) - 0.5);
    data.s(i, s) = 1.0;
    data.s_labels.push_back(s);
    data.u.labels.push_back(data.x(i, 1) > 0.5 ? 1 : 0);
  }
  return data;
}

TradeoffConfig SmallConfig() {
  TradeoffConfig config;
  config.batch_size = 16;
  config.hidden = 6;
  config.bottleneck = 3;
  config.inner_hidden = 6;
  config.outer_steps = 20;
  config.stop_on_convergence = false;
  return config;
}

TEST(AdamTest, ZeroGradientLeavesParametersAndDecaysMoments) {
  std::vector<double> params{1.0, -2.0};
  AdamMoments moments(2);
  moments.first = {0.4, -0.2};
  moments.second = {0.09, 0.01};
  const AdamConfig config;
  const std::vector<double> zero(2, 0.0);
  ASSERT_TRUE(AdamUpdate(params, zero, moments, config).ok());
  EXPECT_DOUBLE_EQ(moments.first[0], 0.4 * config.beta1);
  EXPECT_DOUBLE_EQ(moments.second[1], 0.01 * config.beta2);
  // Stale momentum still moves the parameters; with fresh moments they stay.
  std::vector<double> fresh{1.0, -2.0};
  AdamMoments clean(2);
  ASSERT_TRUE(AdamUpdate(fresh, zero, clean, config).ok());
  EXPECT_EQ(fresh, (std::vector<double>{1.0, -2.0}));
}

TEST(AdamTest, FirstStepIsSignedLearningRate) {
  const AdamConfig config{1e-2, 0.5, 0.999, 1e-8};
  std::vector<double> params{0.0, 0.0, 0.0};
  const std::vector<double> grads{3.0, -0.5, 1e-3};
  AdamMoments moments(3);
  ASSERT_TRUE(AdamUpdate(params, grads, moments, config).ok());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(params[i],
                -config.learning_rate * grads[i] /
                    (std::abs(grads[i]) + config.epsilon),
                1e-15);
  }
  EXPECT_EQ(moments.steps, 1);
}

TEST(AdamTest, RejectsShapeMismatch) {
  std::vector<double> params(3);
  AdamMoments moments(2);
  EXPECT_FALSE(
      AdamUpdate(params, std::vector<double>(3), moments, AdamConfig{}).ok());
  AdamMoments ok(3);
  EXPECT_FALSE(
      AdamUpdate(params, std::vector<double>(2), ok, AdamConfig{}).ok());
}

TEST(AdamTest, DeterministicTrajectories) {
  auto run = [] {
    RandomSource rng(3);
    std::vector<double> params = rng.GaussianVector(5);
    AdamMoments moments(5);
    for (int step = 0; step < 50; ++step) {
      std::vector<double> grads = params;
      for (double& g : grads) g = 2.0 * g + 0.1 * rng.Gaussian();
      EXPECT_TRUE(AdamUpdate(params, grads, moments, AdamConfig{}).ok());
    }
    return params;
  };
  EXPECT_EQ(run(), run());
}

TEST(ClipGlobalNormTest, RescalesOnlyLongVectors) {
  std::vector<double> g{3.0, 4.0};
  EXPECT_DOUBLE_EQ(ClipGlobalNorm(g, 10.0), 5.0);
  EXPECT_EQ(g, (std::vector<double>{3.0, 4.0}));
  EXPECT_DOUBLE_EQ(ClipGlobalNorm(g, 1.0), 5.0);
  EXPECT_NEAR(g[0], 0.6, 1e-15);
  EXPECT_NEAR(g[1], 0.8, 1e-15);
}

TEST(SelectRecordsTest, SelectsEveryField) {
  RandomSource rng(4);
  const TrainingData data = ToyData(rng, 10, 3);
  const std::vector<std::size_t> rows{7, 2};
  const TrainingData sub = SelectRecords(data, rows);
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.s_labels, (std::vector<std::size_t>{data.s_labels[7],
                                                    data.s_labels[2]}));
  EXPECT_EQ(sub.u.labels[1], data.u.labels[2]);
  EXPECT_EQ(sub.x(0, 2), data.x(7, 2));
  EXPECT_EQ(sub.s_classes, 2u);
}

TEST(AssembleObjectiveTest, DecoupledEqualsUtility) {
  RandomSource rng(5);
  const TrainingData data = ToyData(rng, 16, 3);
  TradeoffConfig config = SmallConfig();
  config.lambda1 = 0.0;
  config.lambda2 = 0.0;
  config.privacy = PrivacyMetric::kVariational;
  const InnerModels inner = InitInnerModels(config, data, rng);
  const Matrix sanitized = UniformMatrix(rng, 16, 3);
  auto terms = AssembleObjective(config, inner, data, sanitized);
  ASSERT_TRUE(terms.ok());
  EXPECT_EQ(terms->j, terms->utility);
}

TEST(AssembleObjectiveTest, MmdVanishesOnRawRecords) {
  RandomSource rng(6);
  const TrainingData data = ToyData(rng, 16, 3);
  TradeoffConfig config = SmallConfig();
  config.lambda1 = 0.0;
  config.lambda2 = 0.7;
  config.regularizer = RegularizerKind::kMmd;
  const InnerModels inner = InitInnerModels(config, data, rng);
  auto terms = AssembleObjective(config, inner, data, data.x);
  ASSERT_TRUE(terms.ok());
  EXPECT_EQ(terms->regularizer, 0.0);
  EXPECT_EQ(terms->j, terms->utility);
}

TEST(AssembleObjectiveTest, MissingPublicVariableRejected) {
  RandomSource rng(7);
  TrainingData data = ToyData(rng, 8, 3);
  data.u = TaskTargets{};
  data.u_classes = 0;
  TradeoffConfig config = SmallConfig();
  config.utility = UtilityKind::kReconstruction;
  const InnerModels inner = InitInnerModels(config, data, rng);
  config.utility = UtilityKind::kPublicTask;
  EXPECT_FALSE(AssembleObjective(config, inner, data, data.x).ok());
}

struct CotangentCase {
  PrivacyMetric privacy;
  UtilityKind utility;
  RegularizerKind regularizer;
  TaskLoss task_loss;
  bool discrete_private;
};

class CotangentTest : public ::testing::TestWithParam<CotangentCase> {};

TEST_P(CotangentTest, MatchesFiniteDifferencesOfJ) {
  const CotangentCase& c = GetParam();
  RandomSource rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    TrainingData data = ToyData(rng, 12, 3);
    if (!c.discrete_private) {
      data.s = UniformMatrix(rng, 12, 1);
      data.s_labels.clear();
      data.s_classes = 0;
    }
    if (c.task_loss != TaskLoss::kCrossEntropy) {
      data.u.values = UniformMatrix(rng, 12, 1);
      data.u.labels.clear();
      data.u_classes = 0;
    }
    TradeoffConfig config = SmallConfig();
    config.privacy = c.privacy;
    config.utility = c.utility;
    config.regularizer = c.regularizer;
    config.task_loss = c.task_loss;
    config.lambda1 = 0.8;
    config.lambda2 = 0.3;
    InnerModels inner = InitInnerModels(config, data, rng);
    if (inner.corr_f.has_value()) {
      inner.corr_table =
          DiscreteTable::ConditionalMean(CenterColumns(*inner.corr_f->Forward(data.x)),
                                         std::vector<std::int64_t>{0, 1, 0, 1, 0, 1,
                                                                   0, 1, 0, 1, 0, 1});
    }
    const Matrix sanitized = UniformMatrix(rng, 12, 3);
    auto terms = AssembleObjective(config, inner, data, sanitized);
    ASSERT_TRUE(terms.ok()) << terms.status();

    std::function<double(const Matrix&)> j_of;
    if (c.privacy == PrivacyMetric::kKernelMaxCorr) {
      // The cotangent holds the kernel coefficients fixed.
      const KernelSpec spec = *KernelSpec::Rbf(config.kernel_sigma, config.kernel_eta);
      auto sol = KernelMaxCorr(spec, spec, sanitized, data.s);
      ASSERT_TRUE(sol.ok());
      j_of = [&, sol = *sol, spec](const Matrix& st) {
        const ObjectiveTerms t = *AssembleObjective(config, inner, data, st);
        return t.utility - config.lambda1 * *FrozenKernelMaxCorr(spec, sol, st) -
               config.lambda2 * t.regularizer;
      };
    } else {
      j_of = [&](const Matrix& st) {
        return AssembleObjective(config, inner, data, st)->j;
      };
    }
    const auto fd = CentralDifferences(
        Flat(sanitized), [&](const auto& v) { return j_of(FromFlat(sanitized, v)); });
    EXPECT_LE(MaxRelError(Flat(terms->sanitized_grad), fd), 1e-4) << "trial " << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Configurations, CotangentTest,
    ::testing::Values(
        CotangentCase{PrivacyMetric::kVariational, UtilityKind::kReconstruction,
                      RegularizerKind::kMmd, TaskLoss::kCrossEntropy, true},
        CotangentCase{PrivacyMetric::kVariational, UtilityKind::kPublicTask,
                      RegularizerKind::kDomainAdaptation,
                      TaskLoss::kCrossEntropy, true},
        CotangentCase{PrivacyMetric::kNnMaxCorr, UtilityKind::kPublicTask,
                      RegularizerKind::kMmd, TaskLoss::kMse, false},
        CotangentCase{PrivacyMetric::kNnMaxCorr, UtilityKind::kReconstruction,
                      RegularizerKind::kDomainAdaptation, TaskLoss::kMae, true},
        CotangentCase{PrivacyMetric::kKernelMaxCorr, UtilityKind::kPublicTask,
                      RegularizerKind::kMmd, TaskLoss::kCrossEntropy, false}));

TEST(TrainTest, RejectsEmptyDataset) {
  TrainingData empty;
  empty.x = Matrix(0, 3);
  empty.s = Matrix(0, 2);
  empty.s_classes = 2;
  EXPECT_FALSE(Train(SmallConfig(), empty).ok());
}

TEST(TrainTest, SeededRunsHaveIdenticalHistories) {
  RandomSource rng(9);
  const TrainingData data = ToyData(rng, 40, 3);
  for (PrivacyMetric privacy : {PrivacyMetric::kVariational,
                                PrivacyMetric::kNnMaxCorr,
                                PrivacyMetric::kKernelMaxCorr}) {
    TradeoffConfig config = SmallConfig();
    config.privacy = privacy;
    config.seed = 17;
    auto a = Train(config, data);
    auto b = Train(config, data);
    ASSERT_TRUE(a.ok() && b.ok()) << a.status();
    ASSERT_EQ(a->state.history.size(), b->state.history.size());
    for (std::size_t i = 0; i < a->state.history.size(); ++i) {
      EXPECT_EQ(MetricsRowToJson(a->state.history[i]),
                MetricsRowToJson(b->state.history[i]));
    }
    EXPECT_EQ(a->state.sanitizer.Parameters(), b->state.sanitizer.Parameters());
  }
}

TEST(TrainStateTest, MomentBuffersMatchParameters) {
  RandomSource rng(10);
  const TrainingData data = ToyData(rng, 20, 3);
  TradeoffConfig config = SmallConfig();
  config.privacy = PrivacyMetric::kVariational;
  config.regularizer = RegularizerKind::kDomainAdaptation;
  auto state = InitTrainState(config, data);
  ASSERT_TRUE(state.ok());
  ASSERT_TRUE(AlternatingStep(*state, config, data).ok());
  EXPECT_EQ(state->sanitizer_moments.first.size(), state->sanitizer.num_params());
  EXPECT_EQ(state->inner_moments.at("privacy").first.size(),
            state->inner.classifier->num_params());
  EXPECT_EQ(state->inner_moments.at("regularizer").second.size(),
            state->inner.disc->net.num_params());
}

TEST(AlternatingStepTest, FrozenIdentityKeepsMmdAtZero) {
  RandomSource rng(11);
  const TrainingData data = ToyData(rng, 40, 3);
  TradeoffConfig config = SmallConfig();
  config.privacy = PrivacyMetric::kVariational;
  config.regularizer = RegularizerKind::kMmd;
  config.lambda2 = 1.0;
  auto state = InitTrainState(config, data);
  ASSERT_TRUE(state.ok());
  state->sanitizer = Sanitizer::Identity(3);
  state->sanitizer_moments = AdamMoments(state->sanitizer.num_params());
  const std::vector<double> before = state->sanitizer.Parameters();
  for (int step = 0; step < 10; ++step) {
    ASSERT_TRUE(AlternatingStep(*state, config, data, true).ok());
    EXPECT_EQ(state->history.back().regularizer, 0.0);
  }
  EXPECT_EQ(state->sanitizer.Parameters(), before);
}

TEST(AlternatingStepTest, InnerPhasesDoNotDecreaseTheirObjectives) {
  RandomSource rng(12);
  const TrainingData data = ToyData(rng, 64, 3);
  for (PrivacyMetric privacy :
       {PrivacyMetric::kVariational, PrivacyMetric::kNnMaxCorr}) {
    TradeoffConfig config = SmallConfig();
    config.privacy = privacy;
    config.regularizer = RegularizerKind::kDomainAdaptation;
    config.utility = UtilityKind::kPublicTask;
    config.batch_size = 32;
    config.inner_steps = 3;
    auto state = InitTrainState(config, data);
    ASSERT_TRUE(state.ok());
    std::map<std::string, double> gain;
    constexpr int kSteps = 50;
    for (int step = 0; step < kSteps; ++step) {
      auto trace = AlternatingStep(*state, config, data, true);
      ASSERT_TRUE(trace.ok());
      for (const auto& [name, values] : trace->inner_values) {
        ASSERT_EQ(values.size(), 3u) << name;
        gain[name] += (values.back() - values.front()) / kSteps;
      }
    }
    for (const char* name : {"utility", "privacy", "regularizer"}) {
      ASSERT_TRUE(gain.contains(name)) << name;
      EXPECT_GE(gain[name], -1e-8) << name;
    }
  }
}

TEST(AlternatingStepTest, ReconstructionErrorDecreasesOnLinearToy) {
  RandomSource rng(13);
  TrainingData data;
  data.x = Matrix(128, 2);
  data.s = Matrix(128, 1);
  for (std::size_t i = 0; i < 128; ++i) {
    const double t = rng.Uniform(0.1, 0.9);
    data.x(i, 0) = t;
    data.x(i, 1) = 1.0 - t;
    data.s(i, 0) = t;
  }
  TradeoffConfig config = SmallConfig();
  config.lambda1 = 0.0;
  config.lambda2 = 0.0;
  config.privacy = PrivacyMetric::kNnMaxCorr;
  config.utility = UtilityKind::kReconstruction;
  config.batch_size = 128;
  config.adam.learning_rate = 1e-3;
  auto state = InitTrainState(config, data);
  ASSERT_TRUE(state.ok());
  RandomSource eval_rng(99);
  const Matrix eval_noise =
      eval_rng.GaussianMatrix(128, state->sanitizer.noise_dim());
  auto error = [&] {
    const Matrix st = *state->sanitizer.Forward(data.x, eval_noise);
    return -UtilityObjective(*state->inner.posterior, data.x, st)->value;
  };
  double previous = error();
  const double initial = previous;
  int non_monotone = 0;
  for (int step = 0; step < 100; ++step) {
    ASSERT_TRUE(AlternatingStep(*state, config, data).ok());
    const double current = error();
    if (current > previous) ++non_monotone;
    previous = current;
  }
  EXPECT_LE(non_monotone, 5);
  EXPECT_LT(previous, initial);
}

TEST(CheckpointTest, RoundTrip) {
  RandomSource rng(14);
  const TrainingData data = ToyData(rng, 30, 3);
  TradeoffConfig config = SmallConfig();
  config.privacy = PrivacyMetric::kNnMaxCorr;
  config.lambda1 = 2.5;
  config.outer_steps = 5;
  auto result = Train(config, data);
  ASSERT_TRUE(result.ok());
  const std::string text = CheckpointToJson(config, result->state);
  auto back = CheckpointFromJson(text);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->step, result->state.step);
  EXPECT_EQ(back->sanitizer.Parameters(), result->state.sanitizer.Parameters());
  EXPECT_EQ(TradeoffConfigToText(back->config), TradeoffConfigToText(config));
  EXPECT_FALSE(CheckpointFromJson("{}").ok());
  EXPECT_FALSE(CheckpointFromJson("[1, 2").ok());
}

TEST(MetricsRowTest, JsonKeys) {
  MetricsRow row;
  row.step = 3;
  row.j = -0.5;
  EXPECT_EQ(MetricsRowToJson(row).find("rho_hat"), std::string::npos);
  row.rho_hat = 0.25;
  const std::string json = MetricsRowToJson(row);
  for (const char* key : {"\"step\"", "\"J\"", "\"utility\"", "\"privacy\"",
                          "\"regularizer\"", "\"rho_hat\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

// Blobs whose feature half carries the private class, split 800/200.
Dataset BlobDataset(std::uint64_t seed) {
  RandomSource rng(seed);
  BlobOptions options;
  options.n = 1000;
  auto synth = SynthBlobs(rng, options);
  IngestOptions ingest;
  ingest.private_column = "s";
  ingest.seed = seed;
  return *IngestTable(synth->table, synth->schema, ingest);
}

double AdversaryAccuracy(const Dataset& dataset, const Matrix& features,
                         std::uint64_t seed) {
  AdversaryTarget target;
  target.labels = dataset.private_attr.labels;
  target.classes = dataset.private_attr.classes;
  const auto& enc = dataset.encoding;
  auto metrics = TrainAdversaryEval(
      features.SelectRows(enc.train), target.Select(enc.train),
      features.SelectRows(enc.test), target.Select(enc.test),
      AdversaryOptions{}, seed);
  EXPECT_TRUE(metrics.ok()) << metrics.status();
  return metrics.ok() ? *metrics->accuracy : 0.0;
}

TEST(TrainTest, HugePrivacyWeightDrivesAdversaryToMajorityRate) {
  const Dataset dataset = BlobDataset(21);
  const TrainingData data = ToTrainingData(dataset, dataset.encoding.train);
  TradeoffConfig config;
  config.lambda1 = 100.0;
  config.privacy = PrivacyMetric::kVariational;
  config.utility = UtilityKind::kReconstruction;
  config.outer_steps = 1500;
  config.adam.learning_rate = 1e-3;
  config.stop_on_convergence = false;
  auto result = Train(config, data);
  ASSERT_TRUE(result.ok());
  RandomSource noise(5);
  auto sanitized = SanitizeAll(result->state.sanitizer, dataset.features, noise);
  ASSERT_TRUE(sanitized.ok());
  std::size_t ones = 0;
  for (std::size_t r : dataset.encoding.test) ones += dataset.private_attr.labels[r];
  const double majority =
      std::max(ones, dataset.encoding.test.size() - ones) /
      static_cast<double>(dataset.encoding.test.size());
  EXPECT_NEAR(AdversaryAccuracy(dataset, *sanitized, 0), majority, 0.05);
}

TEST(TrainTest, ZeroPrivacyWeightMatchesRawAdversary) {
  double raw = 0.0;
  double trained = 0.0;
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const Dataset dataset = BlobDataset(30 + seed);
    const TrainingData data = ToTrainingData(dataset, dataset.encoding.train);
    TradeoffConfig config;
    config.lambda1 = 0.0;
    config.privacy = PrivacyMetric::kVariational;
    config.utility = UtilityKind::kReconstruction;
    config.outer_steps = 1500;
    config.adam.learning_rate = 1e-3;
    config.stop_on_convergence = false;
    config.seed = seed;
    auto result = Train(config, data);
    ASSERT_TRUE(result.ok());
    RandomSource noise(seed);
    auto sanitized = SanitizeAll(result->state.sanitizer, dataset.features, noise);
    ASSERT_TRUE(sanitized.ok());
    raw += AdversaryAccuracy(dataset, dataset.features, seed) / 3.0;
    trained += AdversaryAccuracy(dataset, *sanitized, seed) / 3.0;
  }
  EXPECT_NEAR(trained, raw, 0.03);
}

}  // namespace
}  // namespace drip
