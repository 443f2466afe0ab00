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

#include "absl/strings/str_cat.h"
#include "drip/dataset.h"
#include "drip/matrix.h"
#include "drip/random.h"
#include "drip/synth.h"
#include "drip/trainer.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace drip {
namespace {

CsvTable MustCsv(const std::string& text) {
  auto table = ParseCsv(text);
  EXPECT_TRUE(table.ok()) << table.status();
  return *table;
}

Schema MustSchema(const std::string& text) {
  auto schema = ParseSchema(text);
  EXPECT_TRUE(schema.ok()) << schema.status();
  return *schema;
}

absl::StatusOr<Dataset> GermanCredit(std::uint64_t seed = 0) {
  IngestOptions options;
  options.private_column = "age_in_years";
  options.public_column = "credit_risk";
  options.seed = seed;
  options.train_count = 800;
  const std::string dir = testing::SourceDir() + "/data/";
  return IngestCsvFile(dir + "german_credit.csv", dir + "german_credit.schema",
                       options);
}

TEST(SchemaTest, ParsesKindsAndVocabularies) {
  const Schema schema =
      MustSchema("# comment\nage:numeric\ncolor:categorical:red,green\nz:categorical\n");
  ASSERT_EQ(schema.columns.size(), 3u);
  EXPECT_EQ(schema.columns[0].kind, ColumnKind::kNumeric);
  EXPECT_EQ(schema.columns[1].categories,
            (std::vector<std::string>{"red", "green"}));
  EXPECT_TRUE(schema.columns[2].categories.empty());
  EXPECT_EQ(*schema.Find("color"), 1u);
  EXPECT_EQ(MustSchema(SchemaToText(schema)).columns.size(), 3u);
}

TEST(SchemaTest, RejectsBadLines) {
  EXPECT_FALSE(ParseSchema("age\n").ok());
  EXPECT_FALSE(ParseSchema("age:ordinal\n").ok());
  EXPECT_FALSE(ParseSchema("a:numeric\na:numeric\n").ok());
}

TEST(CsvTest, QuotedFieldsAndRoundTrip) {
  const CsvTable table = MustCsv("a,b\n\"x,y\",2\n\"he said \"\"hi\"\"\",3\n");
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0][0], "x,y");
  EXPECT_EQ(table.rows[1][0], "he said \"hi\"");
  EXPECT_EQ(MustCsv(CsvToText(table)).rows, table.rows);
}

TEST(CsvTest, RejectsRaggedRows) {
  auto table = ParseCsv("a,b\n1,2\n3\n");
  ASSERT_FALSE(table.ok());
  EXPECT_NE(table.status().message().find("3"), std::string::npos);
}

TEST(IngestTest, MinMaxScalesNumericColumn) {
  IngestOptions options;
  options.private_column = "s";
  options.train_count = 3;
  auto d = IngestTable(MustCsv("v,s\n1,0\n2,1\n3,0\n"),
                       MustSchema("v:numeric\ns:categorical\n"), options);
  ASSERT_TRUE(d.ok()) << d.status();
  ASSERT_EQ(d->feature_width(), 1u);
  std::vector<double> scaled = d->features.ColumnCopy(0);
  std::vector<double> by_value(3);
  for (std::size_t r = 0; r < 3; ++r) {
    by_value[std::stoi(d->table.rows[r][0]) - 1] = scaled[r];
  }
  EXPECT_EQ(by_value, (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(IngestTest, OneHotEncodesCategoricalColumn) {
  IngestOptions options;
  options.private_column = "s";
  options.train_count = 3;
  auto d = IngestTable(MustCsv("c,s\na,0\nb,1\na,0\n"),
                       MustSchema("c:categorical\ns:numeric\n"), options);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->feature_width(), 2u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(d->features(r, 0) + d->features(r, 1), 1.0);
  }
}

TEST(IngestTest, GermanCreditShape) {
  auto d = GermanCredit();
  ASSERT_TRUE(d.ok()) << d.status();
  EXPECT_EQ(d->rows(), 1000u);
  EXPECT_EQ(d->encoding.train.size(), 800u);
  EXPECT_EQ(d->encoding.test.size(), 200u);
  EXPECT_EQ(d->feature_columns.size(), 19u);
  EXPECT_EQ(d->feature_width(), 60u);
  EXPECT_FALSE(d->private_attr.categorical());
  ASSERT_TRUE(d->public_attr.has_value());
  EXPECT_EQ(d->public_attr->classes, 2u);
  std::vector<bool> seen(1000, false);
  for (std::size_t r : d->encoding.train) seen[r] = true;
  for (std::size_t r : d->encoding.test) {
    EXPECT_FALSE(seen[r]);
    seen[r] = true;
  }
  for (bool s : seen) EXPECT_TRUE(s);
}

TEST(IngestTest, SplitIsDeterministicPerSeed) {
  auto a = GermanCredit(3);
  auto b = GermanCredit(3);
  auto c = GermanCredit(4);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->encoding.test, b->encoding.test);
  EXPECT_EQ(a->features, b->features);
  EXPECT_NE(a->encoding.test, c->encoding.test);
}

TEST(IngestTest, TrainingFeaturesLieInUnitInterval) {
  auto d = GermanCredit();
  ASSERT_TRUE(d.ok());
  for (std::size_t r : d->encoding.train) {
    for (double v : d->features.row(r)) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(IngestTest, ErrorsCarryLineAndColumn) {
  IngestOptions options;
  options.private_column = "s";
  options.train_count = 2;
  const Schema schema = MustSchema("v:numeric\nc:categorical:a,b\ns:numeric\n");
  auto missing = IngestTable(MustCsv("v,c,s\n1,a,0\n?,b,1\n"), schema, options);
  ASSERT_FALSE(missing.ok());
  EXPECT_NE(missing.status().message().find("line 3"), std::string::npos)
      << missing.status();
  EXPECT_NE(missing.status().message().find("'v'"), std::string::npos)
      << missing.status();
  auto garbled = IngestTable(MustCsv("v,c,s\n1,a,0\n2x,b,1\n"), schema, options);
  ASSERT_FALSE(garbled.ok());
  EXPECT_NE(garbled.status().message().find("line 3"), std::string::npos);
  auto unknown = IngestTable(MustCsv("v,c,s\n1,a,0\n2,q,1\n"), schema, options);
  ASSERT_FALSE(unknown.ok());
  EXPECT_NE(unknown.status().message().find("'c'"), std::string::npos)
      << unknown.status();
  options.private_column = "nope";
  EXPECT_FALSE(IngestTable(MustCsv("v,c,s\n1,a,0\n2,b,1\n"), schema, options).ok());
}

TEST(IngestTest, UnknownTestCategoryReported) {
  IngestOptions options;
  options.private_column = "s";
  options.train_count = 4;
  const Schema schema = MustSchema("c:categorical\ns:numeric\n");
  CsvTable table = MustCsv("c,s\na,0\nb,1\na,0\nb,1\na,0\n");
  auto clean = IngestTable(table, schema, options);
  ASSERT_TRUE(clean.ok());
  ASSERT_EQ(clean->encoding.test.size(), 1u);
  const std::size_t test_row = clean->encoding.test[0];
  table.rows[test_row][0] = "z";
  auto d = IngestTable(table, schema, options);
  ASSERT_FALSE(d.ok());
  EXPECT_NE(d.status().message().find("'c'"), std::string::npos) << d.status();
  EXPECT_NE(d.status().message().find(absl::StrCat("line ", test_row + 2)),
            std::string::npos)
      << d.status();
}

TEST(IngestTest, ScalerIgnoresTestRows) {
  auto d = GermanCredit();
  ASSERT_TRUE(d.ok());
  CsvTable perturbed = d->table;
  const std::size_t amount = *d->schema.Find("credit_amount");
  const std::size_t duration = *d->schema.Find("duration_in_month");
  for (std::size_t r : d->encoding.test) {
    perturbed.rows[r][amount] = "999999";
    perturbed.rows[r][duration] = "1";
  }
  IngestOptions options;
  options.private_column = "age_in_years";
  options.public_column = "credit_risk";
  options.train_count = 800;
  auto again = IngestTable(perturbed, d->schema, options);
  ASSERT_TRUE(again.ok());
  for (std::size_t c = 0; c < d->encoding.columns.size(); ++c) {
    EXPECT_EQ(again->encoding.columns[c].min, d->encoding.columns[c].min);
    EXPECT_EQ(again->encoding.columns[c].max, d->encoding.columns[c].max);
  }
  for (std::size_t r : d->encoding.train) {
    for (std::size_t c = 0; c < d->feature_width(); ++c) {
      EXPECT_EQ(again->features(r, c), d->features(r, c));
    }
  }
}

TEST(IngestTest, ReingestingEmittedCsvIsBitIdentical) {
  auto d = GermanCredit();
  ASSERT_TRUE(d.ok());
  RandomSource rng(1);
  Matrix noisy = d->features;
  for (double& v : noisy.data()) v += 0.05 * rng.Gaussian();
  IngestOptions options;
  options.private_column = "age_in_years";
  options.public_column = "credit_risk";
  options.train_count = 800;

  auto first_csv = DecodeFeatures(*d, noisy);
  ASSERT_TRUE(first_csv.ok());
  auto first = IngestWithEncoding(*first_csv, d->schema, d->encoding, options);
  ASSERT_TRUE(first.ok()) << first.status();
  auto second_csv = DecodeFeatures(*first, first->features);
  ASSERT_TRUE(second_csv.ok());
  EXPECT_EQ(second_csv->rows, first_csv->rows);
  auto second = IngestWithEncoding(*second_csv, d->schema, d->encoding, options);
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(second->features, first->features);
  EXPECT_EQ(second->table.rows, first->table.rows);
}

TEST(IngestTest, DecodedRawDataKeepsPrivateAndPublicCells) {
  auto d = GermanCredit();
  ASSERT_TRUE(d.ok());
  auto csv = DecodeFeatures(*d, d->features);
  ASSERT_TRUE(csv.ok());
  EXPECT_EQ(csv->header, d->table.header);
  const std::size_t age = *d->schema.Find("age_in_years");
  const std::size_t purpose = *d->schema.Find("purpose");
  for (std::size_t r = 0; r < d->rows(); ++r) {
    EXPECT_EQ(csv->rows[r][age], d->table.rows[r][age]);
    EXPECT_EQ(csv->rows[r][purpose], d->table.rows[r][purpose]);
  }
}

TEST(ToTrainingDataTest, ExposesAttributes) {
  auto d = GermanCredit();
  ASSERT_TRUE(d.ok());
  const TrainingData t = ToTrainingData(*d, d->encoding.train);
  EXPECT_EQ(t.size(), 800u);
  EXPECT_EQ(t.x.cols(), 60u);
  EXPECT_EQ(t.s.cols(), 1u);
  EXPECT_TRUE(t.s_labels.empty());
  EXPECT_EQ(t.u_classes, 2u);
  EXPECT_EQ(t.u.labels.size(), 800u);
}

TEST(SynthTest, BlobsAndPairsHaveDeclaredColumns) {
  RandomSource rng(2);
  auto pair = SynthGaussianPair(rng, 0.5, 50);
  ASSERT_TRUE(pair.ok());
  EXPECT_EQ(pair->table.header, (std::vector<std::string>{"x", "s"}));
  BlobOptions options;
  options.n = 40;
  auto blobs = SynthBlobs(rng, options);
  ASSERT_TRUE(blobs.ok());
  EXPECT_EQ(blobs->table.rows.size(), 40u);
  EXPECT_EQ(blobs->table.header.size(), options.dim + 2);
}

}  // namespace
}  // namespace drip
