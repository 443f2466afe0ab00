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

#include "drip/synth.h"

#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace drip {
namespace {

std::string Num(double v) { return absl::StrFormat("%.17g", v); }

ColumnSchema Numeric(std::string name) {
  return ColumnSchema{std::move(name), ColumnKind::kNumeric, {}};
}

ColumnSchema Categorical(std::string name, std::size_t k) {
  ColumnSchema col{std::move(name), ColumnKind::kCategorical, {}};
  for (std::size_t i = 0; i < k; ++i) col.categories.push_back(absl::StrCat(i));
  return col;
}

void SetHeader(SynthTable& out) {
  for (const ColumnSchema& col : out.schema.columns) {
    out.table.header.push_back(col.name);
  }
}

}  // namespace

absl::StatusOr<SynthTable> SynthGaussianPair(RandomSource& rng, double r,
                                             std::size_t n) {
  absl::StatusOr<PairSample> pair = GaussianPairDataset(rng, r, n);
  if (!pair.ok()) return pair.status();
  SynthTable out;
  out.schema.columns = {Numeric("x"), Numeric("s")};
  SetHeader(out);
  for (std::size_t i = 0; i < n; ++i) {
    out.table.rows.push_back({Num(pair->x(i, 0)), Num(pair->s(i, 0))});
  }
  return out;
}

absl::StatusOr<SynthTable> SynthDiscreteJoint(RandomSource& rng,
                                              const DiscreteJoint& joint,
                                              std::size_t n) {
  if (n == 0) return absl::InvalidArgumentError("n must be positive");
  const PairSample pair = SampleDiscreteJoint(rng, joint, n);
  SynthTable out;
  out.schema.columns = {Categorical("x", joint.rows()),
                        Categorical("s", joint.cols())};
  SetHeader(out);
  for (std::size_t i = 0; i < n; ++i) {
    out.table.rows.push_back(
        {absl::StrCat(static_cast<long long>(pair.x(i, 0))),
         absl::StrCat(static_cast<long long>(pair.s(i, 0)))});
  }
  return out;
}

absl::StatusOr<SynthTable> SynthBlobs(RandomSource& rng,
                                      const BlobOptions& options) {
  if (options.n == 0 || options.dim < 2 || options.classes < 2) {
    return absl::InvalidArgumentError(
        "blobs need n > 0, dim >= 2 and at least two classes");
  }
  if (!(options.public_agreement >= 0.0 && options.public_agreement <= 1.0)) {
    return absl::InvalidArgumentError("public_agreement must be in [0, 1]");
  }
  const std::size_t half = options.dim / 2;
  // Class centres: one random direction per class in each half.
  Matrix centers = rng.GaussianMatrix(options.classes, options.dim);
  SynthTable out;
  for (std::size_t j = 0; j < options.dim; ++j) {
    out.schema.columns.push_back(Numeric(absl::StrCat("x", j)));
  }
  out.schema.columns.push_back(Categorical("s", options.classes));
  out.schema.columns.push_back(Categorical("u", options.classes));
  SetHeader(out);
  for (std::size_t i = 0; i < options.n; ++i) {
    const std::size_t s = rng.UniformIndex(options.classes);
    const std::size_t u = rng.Uniform() < options.public_agreement
                              ? s
                              : rng.UniformIndex(options.classes);
    std::vector<std::string> row;
    for (std::size_t j = 0; j < options.dim; ++j) {
      double mean = 0.0;
      if (j < half) {
        mean = options.separation * centers(u, j);
      } else if (options.private_in_features) {
        mean = options.separation * centers(s, j);
      }
      row.push_back(Num(mean + rng.Gaussian()));
    }
    row.push_back(absl::StrCat(s));
    row.push_back(absl::StrCat(u));
    out.table.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace drip
