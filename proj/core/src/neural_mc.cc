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

#include "drip/neural_mc.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "drip/adam.h"
#include "drip/linalg.h"

namespace drip {
namespace {

constexpr double kMaxCondition = 1e8;
constexpr double kEigenFloor = 1e-8;

absl::Status CheckBatch(const Matrix& xs, std::size_t s_rows) {
  if (xs.rows() < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need at least two records, got %d", xs.rows()));
  }
  if (xs.rows() != s_rows) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d sanitized records but %d private values", xs.rows(), s_rows));
  }
  return absl::OkStatus();
}

// Pearson-style correlation sum f g / sqrt(sum f^2 sum g^2) of two columns.
double ColumnCorrelation(const Matrix& f, const Matrix& g) {
  double fg = 0.0;
  double ff = 0.0;
  double gg = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    fg += f(i, 0) * g(i, 0);
    ff += f(i, 0) * f(i, 0);
    gg += g(i, 0) * g(i, 0);
  }
  if (ff <= 0.0 || gg <= 0.0) return 0.0;
  return fg / std::sqrt(ff * gg);
}

AdamConfig EstimatorAdam(double learning_rate) {
  AdamConfig config;
  config.learning_rate = learning_rate;
  config.beta1 = 0.9;
  return config;
}

using NetObjectiveFn = absl::StatusOr<NetObjective> (*)(const MaxCorrNets&,
                                                        const Matrix&,
                                                        const Matrix&);

absl::StatusOr<NnEstimate> AscendNets(NetObjectiveFn objective,
                                      std::size_t outputs,
                                      const Matrix& all_xs,
                                      const Matrix& all_ss,
                                      const NnEstimatorOptions& options,
                                      RandomSource& rng) {
  if (absl::Status s = CheckBatch(all_xs, all_ss.rows()); !s.ok()) return s;
  if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "holdout fraction must lie in [0, 1), got %g", options.holdout_fraction));
  }
  const std::size_t n = all_xs.rows();
  const std::size_t held = static_cast<std::size_t>(
      std::floor(options.holdout_fraction * static_cast<double>(n)));
  Matrix xs = all_xs;
  Matrix ss = all_ss;
  Matrix eval_xs = all_xs;
  Matrix eval_ss = all_ss;
  if (held > 0) {
    if (held < 2 || n - held < 2) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "holdout split of %d records leaves fewer than two on a side", n));
    }
    const std::vector<std::size_t> order = rng.Permutation(n);
    std::span<const std::size_t> idx(order);
    xs = all_xs.SelectRows(idx.first(n - held));
    ss = all_ss.SelectRows(idx.first(n - held));
    eval_xs = all_xs.SelectRows(idx.subspan(n - held));
    eval_ss = all_ss.SelectRows(idx.subspan(n - held));
  }
  NnEstimate est;
  est.nets = InitMaxCorrNets(xs.cols(), ss.cols(), options.hidden, outputs, rng);
  const std::size_t nf = est.nets.f.num_params();
  const std::size_t ng = est.nets.g.num_params();
  AdamMoments moments(nf + ng);
  const AdamConfig adam = EstimatorAdam(options.learning_rate);
  std::vector<double> params(nf + ng);
  std::vector<double> grads(nf + ng);
  for (int step = 0; step < options.steps; ++step) {
    absl::StatusOr<NetObjective> obj = objective(est.nets, xs, ss);
    if (!obj.ok()) return obj.status();
    for (std::size_t i = 0; i < nf; ++i) grads[i] = -obj->f_grad[i];
    for (std::size_t i = 0; i < ng; ++i) grads[nf + i] = -obj->g_grad[i];
    ClipGlobalNorm(grads, options.clip_norm);
    const std::vector<double> pf = est.nets.f.Parameters();
    const std::vector<double> pg = est.nets.g.Parameters();
    std::copy(pf.begin(), pf.end(), params.begin());
    std::copy(pg.begin(), pg.end(), params.begin() + nf);
    if (absl::Status s = AdamUpdate(params, grads, moments, adam); !s.ok()) {
      return s;
    }
    std::span<const double> all(params);
    if (absl::Status s = est.nets.f.SetParameters(all.first(nf)); !s.ok()) {
      return s;
    }
    if (absl::Status s = est.nets.g.SetParameters(all.subspan(nf)); !s.ok()) {
      return s;
    }
  }
  absl::StatusOr<NetObjective> final_obj =
      objective(est.nets, eval_xs, eval_ss);
  if (!final_obj.ok()) return final_obj.status();
  est.objective = final_obj->value;
  const double excess = outputs == 1 ? est.objective : est.objective - 1.0;
  est.rho_hat = std::sqrt(std::max(0.0, excess));
  return est;
}

}  // namespace

void DiscreteTable::Set(std::int64_t symbol, std::vector<double> value) {
  value.resize(width_, 0.0);
  entries_[symbol] = std::move(value);
}

Matrix DiscreteTable::Evaluate(std::span<const std::int64_t> symbols,
                               std::size_t* unseen) const {
  Matrix out(symbols.size(), width_);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    auto it = entries_.find(symbols[i]);
    if (it == entries_.end()) {
      ++missing;
      continue;
    }
    std::copy(it->second.begin(), it->second.end(), out.row(i).begin());
  }
  if (unseen != nullptr) *unseen = missing;
  return out;
}

DiscreteTable DiscreteTable::ConditionalMean(
    const Matrix& f, std::span<const std::int64_t> symbols) {
  std::map<std::int64_t, std::pair<std::vector<double>, std::size_t>> sums;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    auto& [total, count] = sums[symbols[i]];
    total.resize(f.cols(), 0.0);
    auto row = f.row(i);
    for (std::size_t c = 0; c < f.cols(); ++c) total[c] += row[c];
    ++count;
  }
  DiscreteTable table(f.cols());
  for (auto& [symbol, entry] : sums) {
    auto& [total, count] = entry;
    for (double& v : total) v /= static_cast<double>(count);
    table.Set(symbol, std::move(total));
  }
  return table;
}

absl::StatusOr<std::vector<std::int64_t>> SymbolsFromColumn(const Matrix& s) {
  if (s.cols() != 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "discrete private values must be one column, got %d", s.cols()));
  }
  std::vector<std::int64_t> out(s.rows());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const double v = s(i, 0);
    if (!std::isfinite(v) || std::nearbyint(v) != v) {
      return absl::InvalidArgumentError(
          absl::StrFormat("private value %g at row %d is not an integer code",
                          v, i));
    }
    out[i] = static_cast<std::int64_t>(v);
  }
  return out;
}

Matrix CenterColumns(const Matrix& m) {
  Matrix out = m;
  if (m.rows() == 0) return out;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) mean += m(r, c);
    mean /= static_cast<double>(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, c) -= mean;
  }
  return out;
}

RatioObjective MaxCorrRatio(const Matrix& f_raw, const Matrix& g) {
  const std::size_t m = f_raw.rows();
  const Matrix f = CenterColumns(f_raw);
  RatioObjective out;
  out.grad_f_raw = Matrix(m, 1);
  out.grad_g = Matrix(m, 1);
  double fg = 0.0;
  double gg = 0.0;
  double ff = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    fg += f(i, 0) * g(i, 0);
    gg += g(i, 0) * g(i, 0);
    ff += f(i, 0) * f(i, 0);
  }
  if (ff <= 0.0) {
    out.degenerate = true;
    return out;
  }
  const double num = 2.0 * fg - gg;
  out.value = num / ff;
  double mean_grad = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double df = 2.0 * g(i, 0) / ff - 2.0 * num * f(i, 0) / (ff * ff);
    out.grad_f_raw(i, 0) = df;
    mean_grad += df;
    out.grad_g(i, 0) = (2.0 * f(i, 0) - 2.0 * g(i, 0)) / ff;
  }
  mean_grad /= static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) out.grad_f_raw(i, 0) -= mean_grad;
  return out;
}

MaxCorrNets InitMaxCorrNets(std::size_t x_dim, std::size_t s_dim,
                            std::size_t hidden, std::size_t outputs,
                            RandomSource& rng) {
  const std::size_t f_dims[] = {x_dim, hidden, outputs};
  const std::size_t g_dims[] = {s_dim, hidden, outputs};
  return MaxCorrNets{
      Mlp::Initialized(f_dims, Activation::kLeakyRelu, Activation::kIdentity,
                       rng),
      Mlp::Initialized(g_dims, Activation::kLeakyRelu, Activation::kIdentity,
                       rng)};
}

absl::StatusOr<NetObjective> NnMaxCorrObjective(const MaxCorrNets& nets,
                                                const Matrix& xs,
                                                const Matrix& ss) {
  if (absl::Status s = CheckBatch(xs, ss.rows()); !s.ok()) return s;
  if (nets.f.output_dim() != 1 || nets.g.output_dim() != 1) {
    return absl::InvalidArgumentError(
        "the ratio objective needs one-output networks");
  }
  MlpTape tf;
  MlpTape tg;
  absl::StatusOr<Matrix> f = nets.f.Forward(xs, &tf);
  if (!f.ok()) return f.status();
  absl::StatusOr<Matrix> g = nets.g.Forward(ss, &tg);
  if (!g.ok()) return g.status();
  const RatioObjective ratio = MaxCorrRatio(*f, *g);
  NetObjective out;
  out.value = ratio.value;
  out.degenerate = ratio.degenerate;
  out.f_grad.assign(nets.f.num_params(), 0.0);
  out.g_grad.assign(nets.g.num_params(), 0.0);
  absl::StatusOr<Matrix> x_grad =
      nets.f.Backward(tf, ratio.grad_f_raw, out.f_grad);
  if (!x_grad.ok()) return x_grad.status();
  out.x_grad = *std::move(x_grad);
  absl::StatusOr<Matrix> s_grad = nets.g.Backward(tg, ratio.grad_g, out.g_grad);
  if (!s_grad.ok()) return s_grad.status();
  return out;
}

absl::StatusOr<Rank2Objective> Rank2UnconstrainedObjective(const Matrix& f,
                                                           const Matrix& g) {
  if (!f.SameShape(g) || f.rows() == 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "f is %dx%d but g is %dx%d", f.rows(), f.cols(), g.rows(), g.cols()));
  }
  const double inv_m = 1.0 / static_cast<double>(f.rows());
  const Matrix a = inv_m * MatMulTransA(f, f);
  const Matrix b = inv_m * MatMulTransA(f, g);
  const Matrix c = inv_m * MatMulTransA(g, g);
  absl::StatusOr<EigenDecomposition> eig = SymmetricEigen(a);
  if (!eig.ok()) return eig.status();
  const std::size_t k = a.rows();
  const double top = eig->values.front();
  const double bottom = eig->values.back();
  Rank2Objective out;
  out.condition = bottom > 0.0 ? top / bottom : HUGE_VAL;
  if (!(out.condition <= kMaxCondition)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "second-moment matrix of f is near singular (condition number %g, "
        "eigenvalues %g .. %g)",
        out.condition, top, bottom));
  }
  std::vector<double> root(k);
  for (std::size_t i = 0; i < k; ++i) {
    root[i] = std::sqrt(std::max(eig->values[i], kEigenFloor));
  }
  const Matrix& v = eig->vectors;
  Matrix inv_sqrt(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += v(i, t) * v(j, t) / root[t];
      inv_sqrt(i, j) = acc;
    }
  }
  out.value = 2.0 * Trace(MatMul(inv_sqrt, b)) - Trace(c);

  // d tr(A^{-1/2} B) / dA = V (L o (V^T B V)^T) V^T, where L is the divided
  // difference of t^{-1/2} over the eigenvalues.
  const Matrix y = MatMulTransA(v, MatMul(b, v));
  Matrix w(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double l = -1.0 / (root[i] * root[j] * (root[i] + root[j]));
      w(i, j) = l * y(j, i);
    }
  }
  const Matrix grad_a = MatMulTransB(MatMul(v, w), v);
  const Matrix sym = grad_a + grad_a.Transposed();
  out.grad_f = (2.0 * inv_m) * (MatMul(g, inv_sqrt) + MatMul(f, sym));
  out.grad_g = (2.0 * inv_m) * (MatMul(f, inv_sqrt) - g);
  return out;
}

absl::StatusOr<NetObjective> Rank2NetObjective(const MaxCorrNets& nets,
                                               const Matrix& xs,
                                               const Matrix& ss) {
  if (absl::Status s = CheckBatch(xs, ss.rows()); !s.ok()) return s;
  MlpTape tf;
  MlpTape tg;
  absl::StatusOr<Matrix> f = nets.f.Forward(xs, &tf);
  if (!f.ok()) return f.status();
  absl::StatusOr<Matrix> g = nets.g.Forward(ss, &tg);
  if (!g.ok()) return g.status();
  absl::StatusOr<Rank2Objective> r2 = Rank2UnconstrainedObjective(*f, *g);
  if (!r2.ok()) return r2.status();
  NetObjective out;
  out.value = r2->value;
  out.f_grad.assign(nets.f.num_params(), 0.0);
  out.g_grad.assign(nets.g.num_params(), 0.0);
  absl::StatusOr<Matrix> x_grad = nets.f.Backward(tf, r2->grad_f, out.f_grad);
  if (!x_grad.ok()) return x_grad.status();
  out.x_grad = *std::move(x_grad);
  absl::StatusOr<Matrix> s_grad = nets.g.Backward(tg, r2->grad_g, out.g_grad);
  if (!s_grad.ok()) return s_grad.status();
  return out;
}

absl::StatusOr<NnEstimate> EstimateNnMaxCorr(const Matrix& xs, const Matrix& ss,
                                             const NnEstimatorOptions& options,
                                             RandomSource& rng) {
  return AscendNets(&NnMaxCorrObjective, 1, xs, ss, options, rng);
}

absl::StatusOr<NnEstimate> EstimateRank2MaxCorr(const Matrix& xs,
                                                const Matrix& ss,
                                                const NnEstimatorOptions& options,
                                                RandomSource& rng) {
  return AscendNets(&Rank2NetObjective, 2, xs, ss, options, rng);
}

absl::StatusOr<AceResult> AceRefineDiscrete(Mlp& f, DiscreteTable& g,
                                            const Matrix& xs,
                                            std::span<const std::int64_t> symbols,
                                            const AceOptions& options) {
  if (absl::Status s = CheckBatch(xs, symbols.size()); !s.ok()) return s;
  if (f.output_dim() != 1 || g.width() != 1) {
    return absl::InvalidArgumentError("ACE refinement needs one-output f and g");
  }
  if (f.layers().back().activation != Activation::kIdentity) {
    return absl::InvalidArgumentError(
        "ACE refinement rescales f and needs a linear output layer");
  }
  const std::size_t m = xs.rows();
  AceResult result;
  AdamMoments moments(f.num_params());
  const AdamConfig adam = EstimatorAdam(options.learning_rate);
  std::vector<double> grad(f.num_params());

  auto centered_f = [&]() -> absl::StatusOr<Matrix> {
    absl::StatusOr<Matrix> raw = f.Forward(xs);
    if (!raw.ok()) return raw.status();
    return CenterColumns(*raw);
  };

  double previous = -1.0;
  for (int outer = 1; outer <= options.max_outer; ++outer) {
    result.outer_iterations = outer;
    // (a) ascend sum f g / sum f^2 over f with g held fixed.
    std::size_t unseen = 0;
    const Matrix gv = g.Evaluate(symbols, &unseen);
    result.unseen_symbols = unseen;
    for (int step = 0; step < options.inner_steps; ++step) {
      MlpTape tape;
      absl::StatusOr<Matrix> raw = f.Forward(xs, &tape);
      if (!raw.ok()) return raw.status();
      const Matrix fc = CenterColumns(*raw);
      double fg = 0.0;
      double ff = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        fg += fc(i, 0) * gv(i, 0);
        ff += fc(i, 0) * fc(i, 0);
      }
      if (ff <= 0.0) break;
      Matrix d(m, 1);
      double mean_d = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        d(i, 0) = gv(i, 0) / ff - 2.0 * fg * fc(i, 0) / (ff * ff);
        mean_d += d(i, 0);
      }
      mean_d /= static_cast<double>(m);
      for (std::size_t i = 0; i < m; ++i) d(i, 0) = -(d(i, 0) - mean_d);
      std::fill(grad.begin(), grad.end(), 0.0);
      absl::StatusOr<Matrix> back = f.Backward(tape, d, grad);
      if (!back.ok()) return back.status();
      ClipGlobalNorm(grad, options.clip_norm);
      std::vector<double> params = f.Parameters();
      if (absl::Status s = AdamUpdate(params, grad, moments, adam); !s.ok()) {
        return s;
      }
      if (absl::Status s = f.SetParameters(params); !s.ok()) return s;
    }
    absl::StatusOr<Matrix> fc = centered_f();
    if (!fc.ok()) return fc.status();
    double second = 0.0;
    for (std::size_t i = 0; i < m; ++i) second += (*fc)(i, 0) * (*fc)(i, 0);
    second /= static_cast<double>(m);
    if (second <= 0.0) {
      result.rho_hat = 0.0;
      return result;
    }
    // Unit empirical second moment; scaling the linear output layer scales
    // the centered output by the same factor.
    const double scale = 1.0 / std::sqrt(second);
    DenseLayer& last = f.mutable_layers().back();
    last.weight *= scale;
    for (double& bias : last.bias) bias *= scale;
    *fc *= scale;

    // (b) exact conditional-expectation update of the table.
    result.before_update.push_back(
        ColumnCorrelation(*fc, g.Evaluate(symbols)));
    g = DiscreteTable::ConditionalMean(*fc, symbols);
    const double rho = ColumnCorrelation(*fc, g.Evaluate(symbols));
    result.after_update.push_back(rho);
    result.rho_hat = rho;
    if (previous >= 0.0 && std::abs(rho - previous) < options.tolerance) {
      result.converged = true;
      break;
    }
    previous = rho;
  }
  return result;
}

absl::StatusOr<AceResult> EstimateAceMaxCorr(const Matrix& xs,
                                             std::span<const std::int64_t> symbols,
                                             std::size_t hidden,
                                             const AceOptions& options,
                                             RandomSource& rng) {
  const std::size_t dims[] = {xs.cols(), hidden, 1};
  Mlp f = Mlp::Initialized(dims, Activation::kLeakyRelu, Activation::kIdentity,
                           rng);
  absl::StatusOr<Matrix> raw = f.Forward(xs);
  if (!raw.ok()) return raw.status();
  DiscreteTable g = DiscreteTable::ConditionalMean(CenterColumns(*raw), symbols);
  return AceRefineDiscrete(f, g, xs, symbols, options);
}

}  // namespace drip
