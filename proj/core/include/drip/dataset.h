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

// Tabular ingestion: a plain-text schema, a header-first CSV reader, a seeded
// train/test split, min-max scaling fit on training rows, one-hot encoding of
// categorical columns, and the private/public role assignment.

#ifndef DRIP_DATASET_H_
#define DRIP_DATASET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "drip/matrix.h"
#include "drip/trainer.h"
#include "drip/variational.h"

namespace drip {

enum class ColumnKind { kNumeric, kCategorical };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Optional declared vocabulary; inferred from the training rows when empty.
  std::vector<std::string> categories;
};

struct Schema {
  std::vector<ColumnSchema> columns;
  // Index of `name`, or nullopt.
  std::optional<std::size_t> Find(const std::string& name) const;
};

// One `name:kind` entry per line, kind in {numeric, categorical}. A third
// field lists the vocabulary of a categorical column: `name:categorical:a,b`.
// Blank lines and lines starting with '#' are skipped.
absl::StatusOr<Schema> ParseSchema(const std::string& text);
std::string SchemaToText(const Schema& schema);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma-separated with a header row. Double-quoted fields may contain commas
// and doubled quotes. Every row must have as many fields as the header.
absl::StatusOr<CsvTable> ParseCsv(const std::string& text);
std::string CsvToText(const CsvTable& table);

// Fitted encoding of one column.
struct ColumnEncoding {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::size_t source = 0;  // position in the CSV header
  double min = 0.0;
  double max = 0.0;
  std::vector<std::string> categories;
  // Encoded width: 1 for numeric, |categories| for categorical.
  std::size_t width() const {
    return kind == ColumnKind::kNumeric ? 1 : categories.size();
  }
};

// Everything fit on the training rows: the split and one encoding per column.
struct Encoding {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<ColumnEncoding> columns;  // same order as the schema
};

struct IngestOptions {
  std::string private_column;
  std::optional<std::string> public_column;
  std::uint64_t seed = 0;
  // Number of training rows; 0 means round(train_fraction * rows).
  std::size_t train_count = 0;
  double train_fraction = 0.8;
};

// An attribute in numeric form (min-max value, or one-hot) plus class codes
// for categorical attributes.
struct Attribute {
  std::size_t column = 0;  // schema index
  Matrix values;
  std::vector<std::size_t> labels;
  std::size_t classes = 0;
  bool categorical() const { return classes > 0; }
};

struct Dataset {
  Schema schema;
  CsvTable table;  // cells exactly as read, in schema column order
  Encoding encoding;
  // Schema indices of the feature columns (all but the private and public
  // columns), and the encoded feature matrix over all rows.
  std::vector<std::size_t> feature_columns;
  Matrix features;
  Attribute private_attr;
  std::optional<Attribute> public_attr;

  std::size_t rows() const { return table.rows.size(); }
  std::size_t feature_width() const { return features.cols(); }
};

// Reads the table, splits it by seed, fits the encoding on the training rows
// and encodes all rows. Errors carry 1-based file line numbers and column
// names.
absl::StatusOr<Dataset> IngestTable(const CsvTable& table, const Schema& schema,
                                    const IngestOptions& options);

// Encodes `table` with an already-fit encoding (split and scalers reused);
// used to re-ingest sanitized output of a dataset.
absl::StatusOr<Dataset> IngestWithEncoding(const CsvTable& table,
                                           const Schema& schema,
                                           const Encoding& encoding,
                                           const IngestOptions& options);

absl::StatusOr<Dataset> IngestCsvFile(const std::string& csv_path,
                                      const std::string& schema_path,
                                      const IngestOptions& options);

// Decodes sanitized feature rows (one per dataset row) back into the
// original header: numeric cells are unscaled and printed with %.17g,
// categorical cells take the category of the largest coordinate of their
// block. Private and public cells are copied unchanged.
absl::StatusOr<CsvTable> DecodeFeatures(const Dataset& dataset,
                                        const Matrix& features);

// Training-loop view of a subset of rows. `task_loss` decides whether a
// public attribute is exposed as class labels or as values.
TrainingData ToTrainingData(const Dataset& dataset,
                            std::span<const std::size_t> rows,
                            TaskLoss task_loss = TaskLoss::kCrossEntropy);

absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, const std::string& text);

}  // namespace drip

#endif  // DRIP_DATASET_H_
