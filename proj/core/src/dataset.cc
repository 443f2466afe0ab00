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

#include "drip/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "drip/random.h"

namespace drip {
namespace {

// Header is file line 1, data row r is line r + 2.
std::size_t FileLine(std::size_t row) { return row + 2; }

bool IsMissing(const std::string& cell) {
  return cell.empty() || cell == "?" || cell == "NA" || cell == "NaN" ||
         cell == "nan";
}

absl::StatusOr<double> ParseNumericCell(const std::string& cell,
                                        std::size_t row,
                                        const std::string& column) {
  if (IsMissing(cell)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "missing value at line %d, column '%s'", FileLine(row), column));
  }
  double value = 0.0;
  if (!absl::SimpleAtod(cell, &value) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unparseable number '%s' at line %d, column '%s'",
                        cell, FileLine(row), column));
  }
  return value;
}

absl::StatusOr<std::vector<std::string>> SplitCsvLine(const std::string& line,
                                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unterminated quote on line %d", line_no));
  }
  fields.push_back(std::move(field));
  for (std::string& f : fields) absl::StripAsciiWhitespace(&f);
  return fields;
}

std::string QuoteCsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Reorders the CSV columns into schema order.
absl::StatusOr<CsvTable> AlignToSchema(const CsvTable& table,
                                       const Schema& schema) {
  std::map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    position[table.header[c]] = c;
  }
  std::vector<std::size_t> source;
  CsvTable out;
  for (const ColumnSchema& col : schema.columns) {
    auto it = position.find(col.name);
    if (it == position.end()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("schema column '%s' is not in the CSV header",
                          col.name));
    }
    source.push_back(it->second);
    out.header.push_back(col.name);
  }
  out.rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    std::vector<std::string> aligned;
    aligned.reserve(source.size());
    for (std::size_t s : source) aligned.push_back(row[s]);
    out.rows.push_back(std::move(aligned));
  }
  return out;
}

absl::Status FitEncoding(const CsvTable& aligned, const Schema& schema,
                         Encoding& encoding) {
  encoding.columns.clear();
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSchema& col = schema.columns[c];
    ColumnEncoding enc;
    enc.name = col.name;
    enc.kind = col.kind;
    enc.source = c;
    if (col.kind == ColumnKind::kNumeric) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t r : encoding.train) {
        absl::StatusOr<double> v =
            ParseNumericCell(aligned.rows[r][c], r, col.name);
        if (!v.ok()) return v.status();
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
      enc.min = lo;
      enc.max = hi;
    } else if (!col.categories.empty()) {
      enc.categories = col.categories;
    } else {
      std::set<std::string> seen;
      for (std::size_t r : encoding.train) {
        const std::string& cell = aligned.rows[r][c];
        if (IsMissing(cell)) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "missing value at line %d, column '%s'", FileLine(r), col.name));
        }
        seen.insert(cell);
      }
      enc.categories.assign(seen.begin(), seen.end());
    }
    encoding.columns.push_back(std::move(enc));
  }
  return absl::OkStatus();
}

// Encodes column `c` of every row into `out` starting at column `offset`;
// optionally records class codes.
absl::Status EncodeColumn(const CsvTable& aligned, const ColumnEncoding& enc,
                          std::size_t c, Matrix& out, std::size_t offset,
                          std::vector<std::size_t>* labels) {
  const std::size_t n = aligned.rows.size();
  if (enc.kind == ColumnKind::kNumeric) {
    const double range = enc.max - enc.min;
    for (std::size_t r = 0; r < n; ++r) {
      absl::StatusOr<double> v = ParseNumericCell(aligned.rows[r][c], r, enc.name);
      if (!v.ok()) return v.status();
      out(r, offset) = range > 0.0 ? (*v - enc.min) / range : 0.0;
    }
    return absl::OkStatus();
  }
  std::map<std::string, std::size_t> code;
  for (std::size_t k = 0; k < enc.categories.size(); ++k) {
    code[enc.categories[k]] = k;
  }
  if (labels != nullptr) labels->assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string& cell = aligned.rows[r][c];
    if (IsMissing(cell)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "missing value at line %d, column '%s'", FileLine(r), enc.name));
    }
    auto it = code.find(cell);
    if (it == code.end()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown category '%s' at line %d, column '%s'",
                          cell, FileLine(r), enc.name));
    }
    out(r, offset + it->second) = 1.0;
    if (labels != nullptr) (*labels)[r] = it->second;
  }
  return absl::OkStatus();
}

absl::StatusOr<Attribute> EncodeAttribute(const CsvTable& aligned,
                                          const ColumnEncoding& enc,
                                          std::size_t c) {
  Attribute attr;
  attr.column = c;
  attr.values = Matrix(aligned.rows.size(), enc.width());
  std::vector<std::size_t> labels;
  const bool categorical = enc.kind == ColumnKind::kCategorical;
  if (absl::Status s = EncodeColumn(aligned, enc, c, attr.values, 0,
                                    categorical ? &labels : nullptr);
      !s.ok()) {
    return s;
  }
  if (categorical) {
    attr.labels = std::move(labels);
    attr.classes = enc.categories.size();
  }
  return attr;
}

absl::StatusOr<Dataset> EncodeAll(CsvTable aligned, const Schema& schema,
                                  Encoding encoding,
                                  const IngestOptions& options) {
  const std::optional<std::size_t> private_index =
      schema.Find(options.private_column);
  if (!private_index) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "private column '%s' is not in the schema", options.private_column));
  }
  std::optional<std::size_t> public_index;
  if (options.public_column) {
    public_index = schema.Find(*options.public_column);
    if (!public_index) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "public column '%s' is not in the schema", *options.public_column));
    }
    if (*public_index == *private_index) {
      return absl::InvalidArgumentError(
          "private and public columns must differ");
    }
  }
  if (encoding.columns.size() != schema.columns.size()) {
    return absl::InvalidArgumentError("encoding does not match the schema");
  }

  Dataset out;
  out.schema = schema;
  std::size_t width = 0;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (c == *private_index || (public_index && c == *public_index)) continue;
    out.feature_columns.push_back(c);
    width += encoding.columns[c].width();
  }
  if (out.feature_columns.empty()) {
    return absl::InvalidArgumentError("no feature columns left after roles");
  }
  out.features = Matrix(aligned.rows.size(), width);
  std::size_t offset = 0;
  for (std::size_t c : out.feature_columns) {
    if (absl::Status s = EncodeColumn(aligned, encoding.columns[c], c,
                                      out.features, offset, nullptr);
        !s.ok()) {
      return s;
    }
    offset += encoding.columns[c].width();
  }
  absl::StatusOr<Attribute> priv =
      EncodeAttribute(aligned, encoding.columns[*private_index], *private_index);
  if (!priv.ok()) return priv.status();
  out.private_attr = *std::move(priv);
  if (public_index) {
    absl::StatusOr<Attribute> pub =
        EncodeAttribute(aligned, encoding.columns[*public_index], *public_index);
    if (!pub.ok()) return pub.status();
    out.public_attr = *std::move(pub);
  }
  out.table = std::move(aligned);
  out.encoding = std::move(encoding);
  return out;
}

}  // namespace

std::optional<std::size_t> Schema::Find(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

absl::StatusOr<Schema> ParseSchema(const std::string& text) {
  Schema schema;
  std::set<std::string> names;
  std::size_t line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    const std::string line(absl::StripAsciiWhitespace(raw));
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts = absl::StrSplit(line, absl::MaxSplits(':', 2));
    for (std::string& p : parts) absl::StripAsciiWhitespace(&p);
    if (parts.size() < 2 || parts[0].empty()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "schema line %d: expected name:kind, got '%s'", line_no, line));
    }
    ColumnSchema col;
    col.name = parts[0];
    if (parts[1] == "numeric") {
      col.kind = ColumnKind::kNumeric;
    } else if (parts[1] == "categorical") {
      col.kind = ColumnKind::kCategorical;
    } else {
      return absl::InvalidArgumentError(absl::StrFormat(
          "schema line %d: unknown kind '%s' (numeric or categorical)",
          line_no, parts[1]));
    }
    if (parts.size() == 3) {
      if (col.kind != ColumnKind::kCategorical) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "schema line %d: only categorical columns take a vocabulary",
            line_no));
      }
      for (absl::string_view c : absl::StrSplit(parts[2], ',')) {
        const std::string category(absl::StripAsciiWhitespace(c));
        if (category.empty()) continue;
        if (std::find(col.categories.begin(), col.categories.end(),
                      category) != col.categories.end()) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "schema line %d: duplicate category '%s'", line_no, category));
        }
        col.categories.push_back(category);
      }
    }
    if (!names.insert(col.name).second) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "schema line %d: duplicate column '%s'", line_no, col.name));
    }
    schema.columns.push_back(std::move(col));
  }
  if (schema.columns.empty()) {
    return absl::InvalidArgumentError("schema declares no columns");
  }
  return schema;
}

std::string SchemaToText(const Schema& schema) {
  std::string out;
  for (const ColumnSchema& col : schema.columns) {
    out += col.name;
    out += col.kind == ColumnKind::kNumeric ? ":numeric" : ":categorical";
    if (!col.categories.empty()) {
      out += ":" + absl::StrJoin(col.categories, ",");
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<CsvTable> ParseCsv(const std::string& text) {
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    std::string line(raw);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    absl::StatusOr<std::vector<std::string>> fields =
        SplitCsvLine(line, line_no);
    if (!fields.ok()) return fields.status();
    if (!have_header) {
      table.header = *std::move(fields);
      have_header = true;
      continue;
    }
    if (fields->size() != table.header.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d has %d fields, header has %d", line_no,
                          fields->size(), table.header.size()));
    }
    table.rows.push_back(*std::move(fields));
  }
  if (!have_header) return absl::InvalidArgumentError("CSV has no header row");
  return table;
}

std::string CsvToText(const CsvTable& table) {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += QuoteCsvField(row[i]);
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

absl::StatusOr<Dataset> IngestTable(const CsvTable& table, const Schema& schema,
                                    const IngestOptions& options) {
  absl::StatusOr<CsvTable> aligned = AlignToSchema(table, schema);
  if (!aligned.ok()) return aligned.status();
  const std::size_t n = aligned->rows.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need at least two data rows, got %d", n));
  }
  std::size_t train_count = options.train_count;
  if (train_count == 0) {
    if (!(options.train_fraction > 0.0 && options.train_fraction <= 1.0)) {
      return absl::InvalidArgumentError("train_fraction must be in (0, 1]");
    }
    train_count = static_cast<std::size_t>(
        std::llround(options.train_fraction * static_cast<double>(n)));
    train_count = std::max<std::size_t>(train_count, 1);
  }
  if (train_count > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "train_count %d exceeds the %d data rows", train_count, n));
  }
  Encoding encoding;
  RandomSource rng(options.seed);
  std::vector<std::size_t> order = rng.Permutation(n);
  encoding.train.assign(order.begin(), order.begin() + train_count);
  encoding.test.assign(order.begin() + train_count, order.end());
  std::sort(encoding.train.begin(), encoding.train.end());
  std::sort(encoding.test.begin(), encoding.test.end());
  if (absl::Status s = FitEncoding(*aligned, schema, encoding); !s.ok()) {
    return s;
  }
  return EncodeAll(*std::move(aligned), schema, std::move(encoding), options);
}

absl::StatusOr<Dataset> IngestWithEncoding(const CsvTable& table,
                                           const Schema& schema,
                                           const Encoding& encoding,
                                           const IngestOptions& options) {
  absl::StatusOr<CsvTable> aligned = AlignToSchema(table, schema);
  if (!aligned.ok()) return aligned.status();
  const std::size_t n = aligned->rows.size();
  for (const auto* part : {&encoding.train, &encoding.test}) {
    for (std::size_t r : *part) {
      if (r >= n) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "encoding refers to row %d but the table has %d rows", r, n));
      }
    }
  }
  return EncodeAll(*std::move(aligned), schema, encoding, options);
}

absl::StatusOr<Dataset> IngestCsvFile(const std::string& csv_path,
                                      const std::string& schema_path,
                                      const IngestOptions& options) {
  absl::StatusOr<std::string> schema_text = ReadTextFile(schema_path);
  if (!schema_text.ok()) return schema_text.status();
  absl::StatusOr<Schema> schema = ParseSchema(*schema_text);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<std::string> csv_text = ReadTextFile(csv_path);
  if (!csv_text.ok()) return csv_text.status();
  absl::StatusOr<CsvTable> table = ParseCsv(*csv_text);
  if (!table.ok()) return table.status();
  return IngestTable(*table, *schema, options);
}

absl::StatusOr<CsvTable> DecodeFeatures(const Dataset& dataset,
                                        const Matrix& features) {
  if (features.rows() != dataset.rows() ||
      features.cols() != dataset.feature_width()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sanitized features are %dx%d, dataset expects %dx%d", features.rows(),
        features.cols(), dataset.rows(), dataset.feature_width()));
  }
  CsvTable out = dataset.table;
  std::size_t offset = 0;
  for (std::size_t c : dataset.feature_columns) {
    const ColumnEncoding& enc = dataset.encoding.columns[c];
    for (std::size_t r = 0; r < features.rows(); ++r) {
      if (enc.kind == ColumnKind::kNumeric) {
        const double v = enc.min + features(r, offset) * (enc.max - enc.min);
        out.rows[r][c] = absl::StrFormat("%.17g", v);
      } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < enc.width(); ++k) {
          if (features(r, offset + k) > features(r, offset + best)) best = k;
        }
        out.rows[r][c] = enc.categories[best];
      }
    }
    offset += enc.width();
  }
  return out;
}

TrainingData ToTrainingData(const Dataset& dataset,
                            std::span<const std::size_t> rows,
                            TaskLoss task_loss) {
  TrainingData data;
  data.x = dataset.features.SelectRows(rows);
  const Attribute& s = dataset.private_attr;
  data.s = s.values.SelectRows(rows);
  if (s.categorical()) {
    for (std::size_t r : rows) data.s_labels.push_back(s.labels[r]);
    data.s_classes = s.classes;
  }
  if (dataset.public_attr) {
    const Attribute& u = *dataset.public_attr;
    if (u.categorical() && task_loss == TaskLoss::kCrossEntropy) {
      for (std::size_t r : rows) data.u.labels.push_back(u.labels[r]);
      data.u_classes = u.classes;
    } else {
      data.u.values = u.values.SelectRows(rows);
    }
  }
  return data;
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write '%s'", path));
  }
  out << text;
  out.close();
  if (!out) {
    return absl::DataLossError(absl::StrFormat("short write to '%s'", path));
  }
  return absl::OkStatus();
}

}  // namespace drip
