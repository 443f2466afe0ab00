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

#include "cli.h"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "drip/config.h"
#include "drip/dataset.h"
#include "drip/dependence.h"
#include "drip/evaluate.h"
#include "drip/neural_mc.h"
#include "drip/oracle.h"
#include "drip/random.h"
#include "drip/synth.h"
#include "drip/trainer.h"

namespace drip {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = ".";
};

struct DataFlags {
  std::string data;
  std::string schema;
  std::string private_column;
  std::string public_column;
  std::uint64_t split_seed = 0;
  std::size_t train_count = 0;
};

void AddDataFlags(CLI::App* cmd, DataFlags& flags, bool required) {
  cmd->add_option("--data", flags.data, "CSV file with a header row")
      ->required(required);
  cmd->add_option("--schema", flags.schema, "schema file (name:kind lines)")
      ->required(required);
  cmd->add_option("--private", flags.private_column, "private column name");
  cmd->add_option("--public", flags.public_column, "public column name");
  cmd->add_option("--split-seed", flags.split_seed,
                  "seed of the train/test shuffle");
  cmd->add_option("--train-count", flags.train_count,
                  "training rows (default: 80% of the rows)");
}

IngestOptions ToIngestOptions(const DataFlags& flags) {
  IngestOptions o;
  o.private_column = flags.private_column;
  if (!flags.public_column.empty()) o.public_column = flags.public_column;
  o.seed = flags.split_seed;
  o.train_count = flags.train_count;
  return o;
}

absl::StatusOr<Schema> LoadSchema(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParseSchema(*text);
}

absl::StatusOr<CsvTable> LoadCsv(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  return ParseCsv(*text);
}

absl::StatusOr<Dataset> LoadDataset(const DataFlags& flags) {
  if (flags.private_column.empty()) {
    return absl::InvalidArgumentError("--private is required");
  }
  return IngestCsvFile(flags.data, flags.schema, ToIngestOptions(flags));
}

absl::StatusOr<std::vector<double>> ParseVector(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view piece : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v = 0.0;
    if (!absl::SimpleAtod(piece, &v)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("'%s' is not a number", std::string(piece)));
    }
    out.push_back(v);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty vector");
  return out;
}

// Rows separated by ';', entries by ','.
absl::StatusOr<Matrix> ParseMatrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (absl::string_view row : absl::StrSplit(text, ';', absl::SkipEmpty())) {
    absl::StatusOr<std::vector<double>> v = ParseVector(std::string(row));
    if (!v.ok()) return v.status();
    if (!rows.empty() && v->size() != rows.front().size()) {
      return absl::InvalidArgumentError("matrix rows differ in length");
    }
    rows.push_back(*std::move(v));
  }
  if (rows.empty()) return absl::InvalidArgumentError("empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

absl::Status EnsureOutDir(const GlobalFlags& g) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(absl::StrFormat(
        "cannot create output directory '%s': %s", g.out_dir, ec.message()));
  }
  return absl::OkStatus();
}

std::string OutPath(const GlobalFlags& g, const std::string& name) {
  return (fs::path(g.out_dir) / name).string();
}

absl::Status AppendLine(const std::string& path, const std::string& line) {
  std::string existing;
  if (fs::exists(path)) {
    absl::StatusOr<std::string> text = ReadTextFile(path);
    if (!text.ok()) return text.status();
    existing = *std::move(text);
  }
  return WriteTextFile(path, existing + line + "\n");
}

// ---- synth ----

struct SynthFlags {
  std::string kind;
  std::size_t n = 1000;
  double r = 0.0;
  std::string pmf = "0.45,0.05;0.05,0.45";
  BlobOptions blobs;
  bool independent = false;
  std::string name;
};

absl::Status RunSynth(const GlobalFlags& g, const SynthFlags& f,
                      std::ostream& out) {
  RandomSource rng(g.seed);
  absl::StatusOr<SynthTable> table;
  if (f.kind == "gaussian-pair") {
    table = SynthGaussianPair(rng, f.r, f.n);
  } else if (f.kind == "discrete-joint") {
    absl::StatusOr<Matrix> pmf = ParseMatrix(f.pmf);
    if (!pmf.ok()) return pmf.status();
    absl::StatusOr<DiscreteJoint> joint = DiscreteJoint::Create(*pmf);
    if (!joint.ok()) return joint.status();
    table = SynthDiscreteJoint(rng, *joint, f.n);
  } else {
    BlobOptions o = f.blobs;
    o.n = f.n;
    o.private_in_features = !f.independent;
    table = SynthBlobs(rng, o);
  }
  if (!table.ok()) return table.status();
  if (absl::Status s = EnsureOutDir(g); !s.ok()) return s;
  const std::string base = f.name.empty() ? f.kind : f.name;
  const std::string csv = OutPath(g, base + ".csv");
  const std::string schema = OutPath(g, base + ".schema");
  if (absl::Status s = WriteTextFile(csv, CsvToText(table->table)); !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteTextFile(schema, SchemaToText(table->schema));
      !s.ok()) {
    return s;
  }
  out << absl::StrFormat("wrote %d rows to %s and %s\n",
                         table->table.rows.size(), csv, schema);
  return absl::OkStatus();
}

// ---- estimate ----

struct EstimateFlags {
  std::string method;
  DataFlags data;
  std::string other;
  std::size_t batch = 0;
  double sigma = 1.0;
  double eta = 0.01;
  bool unbiased = false;
  std::string pmf;
};

// Encodes every row of `table` with the column encodings of `reference`.
absl::StatusOr<Dataset> EncodeLike(const Dataset& reference,
                                   const CsvTable& table,
                                   const IngestOptions& options) {
  Encoding enc = reference.encoding;
  enc.train.clear();
  enc.test.clear();
  for (std::size_t i = 0; i < table.rows.size(); ++i) enc.train.push_back(i);
  return IngestWithEncoding(table, reference.schema, enc, options);
}

absl::Status RunEstimate(const GlobalFlags& g, EstimateFlags f,
                         std::ostream& out) {
  if (f.data.private_column.empty()) f.data.private_column = "s";
  IngestOptions opts = ToIngestOptions(f.data);
  opts.train_fraction = 1.0;
  opts.train_count = 0;
  absl::StatusOr<Schema> schema = LoadSchema(f.data.schema);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<CsvTable> table = LoadCsv(f.data.data);
  if (!table.ok()) return table.status();
  absl::StatusOr<Dataset> ds = IngestTable(*table, *schema, opts);
  if (!ds.ok()) return ds.status();

  std::size_t m = ds->rows();
  if (f.batch > 0) m = std::min(m, f.batch);
  std::vector<std::size_t> rows(m);
  for (std::size_t i = 0; i < m; ++i) rows[i] = i;
  const Matrix x = ds->features.SelectRows(rows);
  const Matrix s = ds->private_attr.values.SelectRows(rows);

  absl::StatusOr<KernelSpec> spec = KernelSpec::Rbf(f.sigma, f.eta);
  if (!spec.ok()) return spec.status();
  DependenceReport report;
  report.estimator = f.method;
  report.batch = m;
  report.seed = g.seed;
  if (f.method == "mmd") {
    if (f.other.empty()) return absl::InvalidArgumentError("mmd needs --other");
    absl::StatusOr<CsvTable> other = LoadCsv(f.other);
    if (!other.ok()) return other.status();
    absl::StatusOr<Dataset> ods = EncodeLike(*ds, *other, opts);
    if (!ods.ok()) return ods.status();
    if (ods->rows() < m) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "--other has %d rows, need %d", ods->rows(), m));
    }
    absl::StatusOr<double> v =
        Mmd2Estimate(*spec, x, ods->features.SelectRows(rows),
                     f.unbiased ? MmdForm::kUnbiased : MmdForm::kPrinted);
    if (!v.ok()) return v.status();
    report.value = *v;
    report.sigma = f.sigma;
  } else if (f.method == "kernel-maxcorr") {
    absl::StatusOr<KernelMaxCorrSolution> sol =
        KernelMaxCorr(*spec, *spec, x, s);
    if (!sol.ok()) return sol.status();
    report.value = sol->rho_hat;
    report.sigma = f.sigma;
    report.eta = f.eta;
  } else if (f.method == "hsic") {
    absl::StatusOr<double> v = HsicEstimate(*spec, *spec, x, s);
    if (!v.ok()) return v.status();
    report.value = *v;
    report.sigma = f.sigma;
  } else {
    RandomSource rng(g.seed);
    absl::StatusOr<NnEstimate> est =
        EstimateNnMaxCorr(x, s, NnEstimatorOptions(), rng);
    if (!est.ok()) return est.status();
    report.value = est->rho_hat;
  }
  if (!f.pmf.empty() && f.method != "mmd") {
    absl::StatusOr<Matrix> pmf = ParseMatrix(f.pmf);
    if (!pmf.ok()) return pmf.status();
    absl::StatusOr<DiscreteJoint> joint = DiscreteJoint::Create(*pmf);
    if (!joint.ok()) return joint.status();
    absl::StatusOr<double> oracle = DiscreteMaxCorrSvd(*joint);
    if (!oracle.ok()) return oracle.status();
    report.oracle_value = *oracle;
  }
  const std::string line = DependenceReportToJson(report);
  out << line << "\n";
  if (absl::Status s2 = EnsureOutDir(g); !s2.ok()) return s2;
  return AppendLine(OutPath(g, "estimates.jsonl"), line);
}

// ---- oracle ----

struct OracleFlags {
  std::string method;
  std::string pmf;
  std::optional<double> gaussian_r;
  std::size_t bins = 50;
  std::string points;
  std::string p;
  std::string q;
  double sigma = 1.0;
};

absl::Status RunOracle(const GlobalFlags& g, const OracleFlags& f,
                       std::ostream& out) {
  DependenceReport report;
  report.estimator = f.method;
  report.seed = g.seed;
  if (f.method == "mmd-pop") {
    absl::StatusOr<Matrix> points = ParseMatrix(f.points);
    if (!points.ok()) return points.status();
    absl::StatusOr<std::vector<double>> p = ParseVector(f.p);
    if (!p.ok()) return p.status();
    absl::StatusOr<std::vector<double>> q = ParseVector(f.q);
    if (!q.ok()) return q.status();
    absl::StatusOr<KernelSpec> spec = KernelSpec::Rbf(f.sigma);
    if (!spec.ok()) return spec.status();
    absl::StatusOr<double> v = PopulationMmd2Discrete(*spec, *points, *p, *q);
    if (!v.ok()) return v.status();
    report.value = *v;
    report.sigma = f.sigma;
  } else {
    absl::StatusOr<DiscreteJoint> joint;
    if (f.gaussian_r) {
      joint = DiscretizedGaussianJoint(*f.gaussian_r, f.bins);
    } else {
      absl::StatusOr<Matrix> pmf = ParseMatrix(f.pmf);
      if (!pmf.ok()) return pmf.status();
      joint = DiscreteJoint::Create(*pmf);
    }
    if (!joint.ok()) return joint.status();
    absl::StatusOr<double> v = f.method == "mi"
                                   ? DiscreteMutualInformation(*joint)
                                   : DiscreteMaxCorrSvd(*joint);
    if (!v.ok()) return v.status();
    report.value = *v;
  }
  report.oracle_value = report.value;
  out << DependenceReportToJson(report) << "\n";
  return absl::OkStatus();
}

// ---- train ----

struct TrainFlags {
  std::string config;
  DataFlags data;
};

// Dataset keys a config file may carry next to the training keys. Relative
// paths resolve against the config file's directory.
absl::Status TakeDataKeys(KeyValues& kv, const std::string& config_path,
                          DataFlags& data) {
  const fs::path base = fs::path(config_path).parent_path();
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto resolve = [&base](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? p : (base / path).string();
  };
  if (auto v = take("data"); v && data.data.empty()) data.data = resolve(*v);
  if (auto v = take("schema"); v && data.schema.empty()) {
    data.schema = resolve(*v);
  }
  if (auto v = take("private_column"); v && data.private_column.empty()) {
    data.private_column = *v;
  }
  if (auto v = take("public_column"); v && data.public_column.empty()) {
    data.public_column = *v;
  }
  if (auto v = take("split_seed")) {
    if (!absl::SimpleAtoi(*v, &data.split_seed)) {
      return absl::InvalidArgumentError("split_seed must be an integer");
    }
  }
  if (auto v = take("train_count")) {
    if (!absl::SimpleAtoi(*v, &data.train_count)) {
      return absl::InvalidArgumentError("train_count must be an integer");
    }
  }
  return absl::OkStatus();
}

absl::Status RunTrain(const GlobalFlags& g, TrainFlags f, std::ostream& out) {
  absl::StatusOr<std::string> text = ReadTextFile(f.config);
  if (!text.ok()) return text.status();
  absl::StatusOr<KeyValues> kv = ParseKeyValues(*text);
  if (!kv.ok()) return kv.status();
  if (absl::Status s = TakeDataKeys(*kv, f.config, f.data); !s.ok()) return s;
  absl::StatusOr<TradeoffConfig> config = TradeoffConfigFromKeyValues(*kv);
  if (!config.ok()) return config.status();
  if (!kv->empty()) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : *kv) keys.push_back(k);
    return absl::InvalidArgumentError(absl::StrFormat(
        "unknown config keys: %s", absl::StrJoin(keys, ", ")));
  }
  if (g.seed_given) config->seed = g.seed;
  if (f.data.data.empty() || f.data.schema.empty()) {
    return absl::InvalidArgumentError(
        "train needs data and schema (flags or config keys)");
  }
  absl::StatusOr<Dataset> ds = LoadDataset(f.data);
  if (!ds.ok()) return ds.status();
  const TrainingData data =
      ToTrainingData(*ds, ds->encoding.train, config->task_loss);
  absl::StatusOr<TrainResult> result = Train(*config, data);
  if (!result.ok()) return result.status();

  if (absl::Status s = EnsureOutDir(g); !s.ok()) return s;
  std::string metrics;
  for (const MetricsRow& row : result->state.history) {
    metrics += MetricsRowToJson(row) + "\n";
  }
  const std::string metrics_path = OutPath(g, "metrics.jsonl");
  const std::string checkpoint_path = OutPath(g, "checkpoint.json");
  if (absl::Status s = WriteTextFile(metrics_path, metrics); !s.ok()) return s;
  if (absl::Status s = WriteTextFile(
          checkpoint_path, CheckpointToJson(*config, result->state));
      !s.ok()) {
    return s;
  }
  const MetricsRow& last = result->state.history.back();
  out << absl::StrFormat(
      "trained %d steps (%s); final J=%.6g utility=%.6g privacy=%.6g "
      "regularizer=%.6g\nwrote %s and %s\n",
      last.step, result->converged ? "converged" : "step cap reached", last.j,
      last.utility, last.privacy, last.regularizer, metrics_path,
      checkpoint_path);
  return absl::OkStatus();
}

// ---- sanitize ----

struct SanitizeFlags {
  std::string checkpoint;
  DataFlags data;
  std::string output = "sanitized.csv";
};

absl::Status RunSanitize(const GlobalFlags& g, const SanitizeFlags& f,
                         std::ostream& out) {
  absl::StatusOr<std::string> text = ReadTextFile(f.checkpoint);
  if (!text.ok()) return text.status();
  absl::StatusOr<Checkpoint> ckpt = CheckpointFromJson(*text);
  if (!ckpt.ok()) return ckpt.status();
  absl::StatusOr<Dataset> ds = LoadDataset(f.data);
  if (!ds.ok()) return ds.status();
  if (ckpt->sanitizer.input_dim() != ds->feature_width()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "checkpoint expects %d encoded features, data has %d",
        ckpt->sanitizer.input_dim(), ds->feature_width()));
  }
  RandomSource rng(g.seed);
  absl::StatusOr<Matrix> x = SanitizeAll(ckpt->sanitizer, ds->features, rng);
  if (!x.ok()) return x.status();
  absl::StatusOr<CsvTable> table = DecodeFeatures(*ds, *x);
  if (!table.ok()) return table.status();
  if (absl::Status s = EnsureOutDir(g); !s.ok()) return s;
  const std::string path = OutPath(g, f.output);
  if (absl::Status s = WriteTextFile(path, CsvToText(*table)); !s.ok()) {
    return s;
  }
  out << absl::StrFormat("wrote %d sanitized rows to %s\n", table->rows.size(),
                         path);
  return absl::OkStatus();
}

// ---- evaluate ----

struct EvaluateFlags {
  DataFlags data;
  std::string sanitized;
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  double sigma = 1.0;
  double eta = 0.01;
};

absl::Status RunEvaluate(const GlobalFlags& g, const EvaluateFlags& f,
                         std::ostream& out) {
  absl::StatusOr<Dataset> raw = LoadDataset(f.data);
  if (!raw.ok()) return raw.status();
  Matrix features = raw->features;
  if (!f.sanitized.empty()) {
    absl::StatusOr<CsvTable> table = LoadCsv(f.sanitized);
    if (!table.ok()) return table.status();
    if (table->rows.size() != raw->rows()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "sanitized file has %d rows, raw data has %d", table->rows.size(),
          raw->rows()));
    }
    absl::StatusOr<Dataset> sanitized = IngestWithEncoding(
        *table, raw->schema, raw->encoding, ToIngestOptions(f.data));
    if (!sanitized.ok()) return sanitized.status();
    features = sanitized->features;
  }
  EvalOptions options;
  options.seeds = f.seeds;
  options.kernel_sigma = f.sigma;
  options.kernel_eta = f.eta;
  absl::StatusOr<EvalReport> report = EvaluateSanitized(*raw, features, options);
  if (!report.ok()) return report.status();
  const std::string line = EvalReportToJson(*report);
  out << line << "\n";
  if (absl::Status s = EnsureOutDir(g); !s.ok()) return s;
  return AppendLine(OutPath(g, "eval.jsonl"), line);
}

}  // namespace

int CliDispatch(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Learn and evaluate privacy-preserving data sanitizers", "drip"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  CLI::Option* seed_opt =
      app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "directory for output artifacts")
      ->capture_default_str();

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic table");
  synth_cmd->add_option("kind", synth.kind, "generator")
      ->required()
      ->check(CLI::IsMember({"gaussian-pair", "discrete-joint", "blobs"}));
  synth_cmd->add_option("--n", synth.n, "rows")->capture_default_str();
  synth_cmd->add_option("--r", synth.r, "gaussian-pair correlation");
  synth_cmd->add_option("--pmf", synth.pmf,
                        "discrete-joint pmf, rows ';' entries ','")
      ->capture_default_str();
  synth_cmd->add_option("--dim", synth.blobs.dim, "blobs feature dimension");
  synth_cmd->add_option("--classes", synth.blobs.classes, "blobs classes");
  synth_cmd->add_option("--separation", synth.blobs.separation,
                        "blobs centre scale");
  synth_cmd->add_option("--public-agreement", synth.blobs.public_agreement,
                        "P(u = s) for blobs");
  synth_cmd->add_flag("--independent", synth.independent,
                      "blobs features ignore the private class");
  synth_cmd->add_option("--name", synth.name, "output base name");

  EstimateFlags est;
  CLI::App* est_cmd =
      app.add_subcommand("estimate", "estimate dependence or discrepancy");
  est_cmd->add_option("--method", est.method, "estimator")
      ->required()
      ->check(CLI::IsMember({"mmd", "kernel-maxcorr", "nn-maxcorr", "hsic"}));
  AddDataFlags(est_cmd, est.data, true);
  est_cmd->add_option("--other", est.other, "second CSV for mmd");
  est_cmd->add_option("--batch", est.batch, "use the first M rows");
  est_cmd->add_option("--sigma", est.sigma, "RBF bandwidth")
      ->capture_default_str();
  est_cmd->add_option("--eta", est.eta, "kernel regularization")
      ->capture_default_str();
  est_cmd->add_flag("--unbiased", est.unbiased, "U-statistic MMD");
  est_cmd->add_option("--pmf", est.pmf, "joint pmf for the oracle value");

  OracleFlags orc;
  CLI::App* orc_cmd = app.add_subcommand("oracle", "exact ground truth");
  orc_cmd->add_option("--method", orc.method, "oracle")
      ->required()
      ->check(CLI::IsMember({"svd-maxcorr", "mi", "mmd-pop"}));
  orc_cmd->add_option("--pmf", orc.pmf, "joint pmf, rows ';' entries ','");
  orc_cmd->add_option("--gaussian-r", orc.gaussian_r,
                      "discretized bivariate normal with correlation r");
  orc_cmd->add_option("--bins", orc.bins, "equal-probability bins per axis")
      ->capture_default_str();
  orc_cmd->add_option("--points", orc.points, "support points for mmd-pop");
  orc_cmd->add_option("--p", orc.p, "first pmf over the points");
  orc_cmd->add_option("--q", orc.q, "second pmf over the points");
  orc_cmd->add_option("--sigma", orc.sigma, "RBF bandwidth")
      ->capture_default_str();

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a sanitizer");
  train_cmd->add_option("--config", train.config, "key = value config file")
      ->required();
  AddDataFlags(train_cmd, train.data, false);

  SanitizeFlags san;
  CLI::App* san_cmd =
      app.add_subcommand("sanitize", "apply a trained sanitizer to a CSV");
  san_cmd->add_option("--checkpoint", san.checkpoint, "checkpoint file")
      ->required();
  AddDataFlags(san_cmd, san.data, true);
  san_cmd->add_option("--output", san.output, "output file name")
      ->capture_default_str();

  EvaluateFlags ev;
  CLI::App* ev_cmd = app.add_subcommand(
      "evaluate", "retrain adversary and utility models on (sanitized) data");
  AddDataFlags(ev_cmd, ev.data, true);
  ev_cmd->add_option("--sanitized", ev.sanitized,
                     "sanitized CSV with the raw header (default: raw data)");
  ev_cmd->add_option("--seeds", ev.seeds, "evaluation seeds")
      ->delimiter(',');
  ev_cmd->add_option("--sigma", ev.sigma, "RBF bandwidth")
      ->capture_default_str();
  ev_cmd->add_option("--eta", ev.eta, "kernel regularization")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  g.seed_given = seed_opt->count() > 0;

  absl::Status status;
  if (*synth_cmd) {
    status = RunSynth(g, synth, out);
  } else if (*est_cmd) {
    status = RunEstimate(g, est, out);
  } else if (*orc_cmd) {
    status = RunOracle(g, orc, out);
  } else if (*train_cmd) {
    status = RunTrain(g, train, out);
  } else if (*san_cmd) {
    status = RunSanitize(g, san, out);
  } else if (*ev_cmd) {
    status = RunEvaluate(g, ev, out);
  }
  if (!status.ok()) {
    err << "drip: " << status.message() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace drip
