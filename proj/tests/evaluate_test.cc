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

#include <string>
#include <vector>

#include "drip/dataset.h"
#include "drip/dependence.h"
#include "drip/evaluate.h"
#include "drip/matrix.h"
#include "drip/random.h"
#include "drip/sanitizer.h"
#include "drip/synth.h"
#include "drip/trainer.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace drip {
namespace {

using ::drip::testing::UniformMatrix;

struct LabelledSplit {
  Matrix train_x;
  AdversaryTarget train;
  Matrix test_x;
  AdversaryTarget test;
};

LabelledSplit BalancedLabels(RandomSource& rng, bool leak) {
  LabelledSplit split;
  auto fill = [&](std::size_t n, Matrix& x, AdversaryTarget& t) {
    x = UniformMatrix(rng, n, 3);
    t.classes = 2;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t label = i % 2;
      t.labels.push_back(label);
      if (leak) x(i, 0) = static_cast<double>(label);
    }
  };
  fill(800, split.train_x, split.train);
  fill(2000, split.test_x, split.test);
  return split;
}

TEST(TrainAdversaryEvalTest, IndependentFeaturesGiveChance) {
  RandomSource rng(1);
  const LabelledSplit s = BalancedLabels(rng, false);
  auto m = TrainAdversaryEval(s.train_x, s.train, s.test_x, s.test,
                              AdversaryOptions{}, 0);
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_NEAR(*m->accuracy, 0.5, 0.05);
}

TEST(TrainAdversaryEvalTest, LeakedLabelIsLearned) {
  RandomSource rng(2);
  const LabelledSplit s = BalancedLabels(rng, true);
  auto m = TrainAdversaryEval(s.train_x, s.train, s.test_x, s.test,
                              AdversaryOptions{}, 0);
  ASSERT_TRUE(m.ok());
  EXPECT_GE(*m->accuracy, 0.98);
  EXPECT_TRUE(m->cross_entropy.has_value());
  EXPECT_FALSE(m->mae.has_value());
}

TEST(TrainAdversaryEvalTest, SingleClassRejected) {
  RandomSource rng(3);
  AdversaryTarget one;
  one.classes = 2;
  one.labels.assign(20, 1);
  const Matrix x = UniformMatrix(rng, 20, 2);
  EXPECT_FALSE(
      TrainAdversaryEval(x, one, x, one, AdversaryOptions{}, 0).ok());
}

TEST(TrainAdversaryEvalTest, RegressionReportsErrors) {
  RandomSource rng(4);
  const Matrix x = UniformMatrix(rng, 300, 2);
  AdversaryTarget t;
  t.values = Matrix(300, 1);
  for (std::size_t i = 0; i < 300; ++i) t.values(i, 0) = 0.5 * x(i, 0);
  const std::vector<std::size_t> train = [] {
    std::vector<std::size_t> v(200);
    for (std::size_t i = 0; i < 200; ++i) v[i] = i;
    return v;
  }();
  std::vector<std::size_t> test;
  for (std::size_t i = 200; i < 300; ++i) test.push_back(i);
  auto m = TrainAdversaryEval(x.SelectRows(train), t.Select(train),
                              x.SelectRows(test), t.Select(test),
                              AdversaryOptions{}, 1);
  ASSERT_TRUE(m.ok());
  ASSERT_TRUE(m->mae.has_value() && m->mse.has_value());
  EXPECT_LT(*m->mae, 0.1);
  EXPECT_FALSE(m->accuracy.has_value());
}

TEST(LegacyCompatScoreTest, IdentitySanitizerScoresZero) {
  RandomSource rng(5);
  const Matrix raw = UniformMatrix(rng, 50, 4);
  RandomSource noise(6);
  auto st = SanitizeAll(Sanitizer::Identity(4), raw, noise);
  ASSERT_TRUE(st.ok());
  EXPECT_EQ(*LegacyCompatScore(KernelSpec(), raw, *st), 0.0);
}

TEST(LegacyCompatScoreTest, HeavyNoiseScoresHigher) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomSource rng(seed);
    const Matrix raw = UniformMatrix(rng, 100, 3);
    SanitizerShape shape;
    shape.input_dim = 3;
    shape.logistic_output = false;
    Sanitizer noisy = Sanitizer::Initialized(shape, rng);
    std::vector<double> params = noisy.Parameters();
    const std::size_t ne = noisy.encoder().num_params();
    for (std::size_t i = 0; i < noisy.noise_transform().size(); ++i) {
      params[ne + i] *= 50.0;
    }
    ASSERT_TRUE(noisy.SetParameters(params).ok());
    RandomSource noise(seed + 10);
    const Matrix identity = *SanitizeAll(Sanitizer::Identity(3), raw, noise);
    const Matrix heavy = *SanitizeAll(noisy, raw, noise);
    EXPECT_GT(*LegacyCompatScore(KernelSpec(), raw, heavy),
              *LegacyCompatScore(KernelSpec(), raw, identity));
  }
}

TEST(LegacyCompatScoreTest, RejectsSizeMismatch) {
  EXPECT_FALSE(LegacyCompatScore(KernelSpec(), Matrix(3, 2), Matrix(4, 2)).ok());
}

Dataset Blobs(std::uint64_t seed) {
  RandomSource rng(seed);
  BlobOptions options;
  options.n = 400;
  options.public_agreement = 0.5;
  auto synth = SynthBlobs(rng, options);
  IngestOptions ingest;
  ingest.private_column = "s";
  ingest.public_column = "u";
  return *IngestTable(synth->table, synth->schema, ingest);
}

TEST(EvaluateSanitizedTest, ReproducibleAndFinite) {
  const Dataset d = Blobs(7);
  EvalOptions options;
  options.seeds = {0, 1};
  auto a = EvaluateSanitized(d, d.features, options);
  auto b = EvaluateSanitized(d, d.features, options);
  ASSERT_TRUE(a.ok() && b.ok()) << a.status();
  EXPECT_EQ(EvalReportToJson(*a), EvalReportToJson(*b));
  EXPECT_EQ(a->legacy_compat, 0.0);
  EXPECT_GT(*a->adversary.accuracy, 0.9);
  ASSERT_TRUE(a->utility.has_value());
  EXPECT_GT(*a->utility->accuracy, 0.9);
  EXPECT_GT(a->kernel_maxcorr, 0.5);
  EXPECT_LE(a->kernel_maxcorr, 1.0 + 1e-6);
  const std::string json = EvalReportToJson(*a);
  for (const char* key : {"\"legacy_compat\"", "\"kernel_maxcorr\"", "\"seeds\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
}

TEST(EvaluateSanitizedTest, RejectsWrongShape) {
  const Dataset d = Blobs(8);
  EXPECT_FALSE(EvaluateSanitized(d, Matrix(3, d.feature_width()), EvalOptions{}).ok());
}

TEST(DependenceReportTest, OmitsUnsetFields) {
  DependenceReport report;
  report.estimator = "mi";
  report.value = 0.25;
  const std::string json = DependenceReportToJson(report);
  EXPECT_EQ(json.find("\"M\""), std::string::npos);
  EXPECT_EQ(json.find("oracle_value"), std::string::npos);
  report.batch = 100;
  report.oracle_value = 0.3;
  const std::string full = DependenceReportToJson(report);
  EXPECT_NE(full.find("\"M\":100"), std::string::npos) << full;
  EXPECT_NE(full.find("oracle_value"), std::string::npos);
}

}  // namespace
}  // namespace drip
