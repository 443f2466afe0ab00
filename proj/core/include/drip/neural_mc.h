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

// Neural estimators of maximal correlation between sanitized records and a
// private attribute: a centered ratio objective over two networks, an
// alternating conditional-expectation refinement for discrete attributes,
// and an unconstrained two-output objective.

#ifndef DRIP_NEURAL_MC_H_
#define DRIP_NEURAL_MC_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "drip/matrix.h"
#include "drip/mlp.h"
#include "drip/random.h"

namespace drip {

// g for a finite private alphabet: one value vector per symbol.
class DiscreteTable {
 public:
  explicit DiscreteTable(std::size_t width = 1) : width_(width) {}

  std::size_t width() const { return width_; }
  const std::map<std::int64_t, std::vector<double>>& entries() const {
    return entries_;
  }
  void Set(std::int64_t symbol, std::vector<double> value);

  // One row per symbol. Symbols missing from the table evaluate to zero and
  // are counted in `*unseen` when it is non-null.
  Matrix Evaluate(std::span<const std::int64_t> symbols,
                  std::size_t* unseen = nullptr) const;

  // g(s) = mean of the rows of `f` whose symbol is s.
  static DiscreteTable ConditionalMean(const Matrix& f,
                                       std::span<const std::int64_t> symbols);

 private:
  std::size_t width_;
  std::map<std::int64_t, std::vector<double>> entries_;
};

// Converts a one-column matrix of integral codes to symbols.
absl::StatusOr<std::vector<std::int64_t>> SymbolsFromColumn(const Matrix& s);

// Subtracts each column's mean.
Matrix CenterColumns(const Matrix& m);

struct RatioObjective {
  double value = 0.0;
  // Set when the centered f is identically zero; value is then 0.
  bool degenerate = false;
  Matrix grad_f_raw;  // dV/df' (centering included)
  Matrix grad_g;      // dV/dg
};

// V = (2 sum f g - sum g^2) / sum f^2 with f = f' - mean(f'), for one-column
// f' and g.
RatioObjective MaxCorrRatio(const Matrix& f_raw, const Matrix& g);

struct MaxCorrNets {
  Mlp f;  // sanitized record -> k outputs
  Mlp g;  // private value -> k outputs
};

// One hidden leaky-rectifier layer of `hidden` units on each side, linear
// outputs of width `outputs`.
MaxCorrNets InitMaxCorrNets(std::size_t x_dim, std::size_t s_dim,
                            std::size_t hidden, std::size_t outputs,
                            RandomSource& rng);

struct NetObjective {
  double value = 0.0;
  bool degenerate = false;
  std::vector<double> f_grad;
  std::vector<double> g_grad;
  Matrix x_grad;  // cotangent on the sanitized records
};

// Ratio objective evaluated through the networks, with exact gradients for
// both networks and the sanitized records.
absl::StatusOr<NetObjective> NnMaxCorrObjective(const MaxCorrNets& nets,
                                                const Matrix& xs,
                                                const Matrix& ss);

struct Rank2Objective {
  double value = 0.0;
  double condition = 0.0;  // of the second-moment matrix of f
  Matrix grad_f;
  Matrix grad_g;
};

// 2 tr(A^{-1/2} B) - tr(C) with A = f^T f / M, B = f^T g / M, C = g^T g / M.
// Rejects A with condition number above 1e8.
absl::StatusOr<Rank2Objective> Rank2UnconstrainedObjective(const Matrix& f,
                                                           const Matrix& g);

absl::StatusOr<NetObjective> Rank2NetObjective(const MaxCorrNets& nets,
                                               const Matrix& xs,
                                               const Matrix& ss);

struct NnEstimatorOptions {
  std::size_t hidden = 20;
  int steps = 800;
  double learning_rate = 1e-2;
  double clip_norm = 5.0;
  // Fraction of the records (chosen by a seeded shuffle) held out from
  // training; the reported objective is evaluated on them. 0 trains and
  // evaluates on every record.
  double holdout_fraction = 0.5;
};

struct NnEstimate {
  double objective = 0.0;
  // sqrt of the ratio objective, or sqrt(objective - 1) for the rank-2 form;
  // clamped at 0.
  double rho_hat = 0.0;
  MaxCorrNets nets;
};

// Full-batch Adam ascent of the ratio objective from a fresh initialization,
// scored on the held-out records.
absl::StatusOr<NnEstimate> EstimateNnMaxCorr(const Matrix& xs, const Matrix& ss,
                                             const NnEstimatorOptions& options,
                                             RandomSource& rng);

// Same for the two-output unconstrained objective.
absl::StatusOr<NnEstimate> EstimateRank2MaxCorr(const Matrix& xs,
                                                const Matrix& ss,
                                                const NnEstimatorOptions& options,
                                                RandomSource& rng);

struct AceOptions {
  int max_outer = 100;
  int inner_steps = 50;
  double learning_rate = 1e-2;
  double tolerance = 1e-5;
  double clip_norm = 5.0;
};

struct AceResult {
  double rho_hat = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  // Correlation of f with the old table just before each table update and
  // with the new table just after it.
  std::vector<double> before_update;
  std::vector<double> after_update;
  std::size_t unseen_symbols = 0;
};

// Alternates gradient ascent of sum f g / sum f^2 over `f` (linear output
// layer required) with the exact update g(s) = mean of f over samples with
// that symbol. `f` is renormalized to unit empirical second moment after
// every outer iteration.
absl::StatusOr<AceResult> AceRefineDiscrete(Mlp& f, DiscreteTable& g,
                                            const Matrix& xs,
                                            std::span<const std::int64_t> symbols,
                                            const AceOptions& options = {});

// Fresh one-output f, then AceRefineDiscrete.
absl::StatusOr<AceResult> EstimateAceMaxCorr(const Matrix& xs,
                                             std::span<const std::int64_t> symbols,
                                             std::size_t hidden,
                                             const AceOptions& options,
                                             RandomSource& rng);

}  // namespace drip

#endif  // DRIP_NEURAL_MC_H_
