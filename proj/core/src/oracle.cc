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

#include "drip/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "drip/linalg.h"

namespace drip {
namespace {

constexpr double kPmfTolerance = 1e-12;
constexpr double kPi = 3.14159265358979323846;
constexpr int kQuadratureNodes = 32;

struct Quadrature {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule by Newton iteration on P_n.
Quadrature GaussLegendre(int n) {
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

}  // namespace

absl::StatusOr<DiscreteJoint> DiscreteJoint::Create(Matrix pmf) {
  if (pmf.rows() == 0 || pmf.cols() == 0) {
    return absl::InvalidArgumentError("joint pmf is empty");
  }
  double total = 0.0;
  for (double v : pmf.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("joint pmf has an invalid entry %g", v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kPmfTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("joint pmf sums to %.17g, expected 1", total));
  }
  return DiscreteJoint(std::move(pmf));
}

absl::StatusOr<DiscreteJoint> DiscreteJoint::FromCounts(const Matrix& counts) {
  double total = 0.0;
  for (double v : counts.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("count table has an invalid entry %g", v));
    }
    total += v;
  }
  if (total <= 0.0) return absl::InvalidArgumentError("count table is empty");
  Matrix pmf = counts;
  pmf *= 1.0 / total;
  return DiscreteJoint(std::move(pmf));
}

std::vector<double> DiscreteJoint::RowMarginal() const {
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (double v : pmf_.row(i)) out[i] += v;
  }
  return out;
}

std::vector<double> DiscreteJoint::ColumnMarginal() const {
  std::vector<double> out(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    auto row = pmf_.row(i);
    for (std::size_t j = 0; j < cols(); ++j) out[j] += row[j];
  }
  return out;
}

absl::StatusOr<Matrix> DivergenceTransitionMatrix(const DiscreteJoint& joint) {
  const std::vector<double> py = joint.RowMarginal();
  const std::vector<double> pz = joint.ColumnMarginal();
  for (std::size_t i = 0; i < py.size(); ++i) {
    if (py[i] <= 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row symbol %d has zero probability", i));
    }
  }
  for (std::size_t j = 0; j < pz.size(); ++j) {
    if (pz[j] <= 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("column symbol %d has zero probability", j));
    }
  }
  Matrix q(joint.rows(), joint.cols());
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      q(i, j) = joint.pmf()(i, j) / std::sqrt(py[i] * pz[j]);
    }
  }
  return q;
}

absl::StatusOr<double> DiscreteMaxCorrSvd(const DiscreteJoint& joint) {
  absl::StatusOr<Matrix> q = DivergenceTransitionMatrix(joint);
  if (!q.ok()) return q.status();
  if (q->rows() < 2 || q->cols() < 2) return 0.0;
  absl::StatusOr<SvdResult> svd = Svd(*q);
  if (!svd.ok()) return svd.status();
  return svd->singular_values[1];
}

absl::StatusOr<double> DiscreteMutualInformation(const DiscreteJoint& joint) {
  const std::vector<double> py = joint.RowMarginal();
  const std::vector<double> pz = joint.ColumnMarginal();
  double mi = 0.0;
  for (std::size_t i = 0; i < joint.rows(); ++i) {
    for (std::size_t j = 0; j < joint.cols(); ++j) {
      const double p = joint.pmf()(i, j);
      if (p > 0.0) mi += p * std::log(p / (py[i] * pz[j]));
    }
  }
  return std::max(0.0, mi);
}

absl::StatusOr<double> PopulationMmd2Discrete(const KernelSpec& spec,
                                              const Matrix& points,
                                              std::span<const double> p,
                                              std::span<const double> q) {
  const std::size_t n = points.rows();
  if (p.size() != n || q.size() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "pmfs have %d and %d entries but the support has %d points", p.size(),
        q.size(), n));
  }
  for (std::span<const double> pmf : {p, q}) {
    double total = 0.0;
    for (double v : pmf) {
      if (!std::isfinite(v) || v < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrFormat("pmf has an invalid entry %g", v));
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kPmfTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("pmf sums to %.17g, expected 1", total));
    }
  }
  absl::StatusOr<Matrix> k = GramMatrix(spec, points);
  if (!k.ok()) return k.status();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = p[i] - q[i];
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) total += diff[i] * diff[j] * (*k)(i, j);
  }
  return total;
}

absl::StatusOr<PairSample> GaussianPairDataset(RandomSource& rng, double r,
                                               std::size_t n) {
  if (!(std::abs(r) <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("correlation must lie in [-1, 1], got %g", r));
  }
  const double rest = std::sqrt(1.0 - r * r);
  PairSample out{Matrix(n, 1), Matrix(n, 1)};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.Gaussian();
    const double z = rng.Gaussian();
    out.x(i, 0) = x;
    out.s(i, 0) = r * x + rest * z;
  }
  return out;
}

PairSample SampleDiscreteJoint(RandomSource& rng, const DiscreteJoint& joint,
                               std::size_t n) {
  const Matrix& pmf = joint.pmf();
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.data().begin(), pmf.data().end(), cdf.begin());
  PairSample out{Matrix(n, 1), Matrix(n, 1)};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.Uniform(0.0, cdf.back());
    std::size_t cell = static_cast<std::size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    cell = std::min(cell, cdf.size() - 1);
    out.x(i, 0) = static_cast<double>(cell / pmf.cols());
    out.s(i, 0) = static_cast<double>(cell % pmf.cols());
  }
  return out;
}

std::vector<std::size_t> EqualProbabilityBins(std::span<const double> values,
                                              std::size_t bins) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<std::size_t> out(n, 0);
  if (bins == 0) return out;
  for (std::size_t rank = 0; rank < n; ++rank) {
    out[order[rank]] = rank * bins / n;
  }
  return out;
}

absl::StatusOr<DiscreteJoint> EmpiricalJoint(std::span<const std::size_t> y,
                                             std::span<const std::size_t> z,
                                             std::size_t y_bins,
                                             std::size_t z_bins) {
  if (y.size() != z.size() || y.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need equally many nonzero y and z symbols, got %d and %d", y.size(),
        z.size()));
  }
  Matrix counts(y_bins, z_bins);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] >= y_bins || z[i] >= z_bins) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "symbol pair (%d, %d) at index %d is outside a %dx%d table", y[i],
          z[i], i, y_bins, z_bins));
    }
    counts(y[i], z[i]) += 1.0;
  }
  return DiscreteJoint::FromCounts(counts);
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double NormalQuantile(double p) {
  if (p <= 0.0) return -HUGE_VAL;
  if (p >= 1.0) return HUGE_VAL;
  // Rational approximation (relative error ~1e-9), polished by one Halley
  // step against the erfc-based cdf.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = NormalCdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

absl::StatusOr<DiscreteJoint> DiscretizedGaussianJoint(double r,
                                                       std::size_t bins) {
  if (!(std::abs(r) <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("correlation must lie in [-1, 1], got %g", r));
  }
  if (bins == 0) return absl::InvalidArgumentError("need at least one bin");
  const double b = static_cast<double>(bins);
  Matrix pmf(bins, bins);
  if (std::abs(r) == 1.0) {
    for (std::size_t i = 0; i < bins; ++i) {
      pmf(i, r > 0.0 ? i : bins - 1 - i) = 1.0 / b;
    }
    return DiscreteJoint::Create(std::move(pmf));
  }
  std::vector<double> cuts(bins + 1);
  cuts.front() = -HUGE_VAL;
  cuts.back() = HUGE_VAL;
  for (std::size_t k = 1; k < bins; ++k) {
    cuts[k] = NormalQuantile(static_cast<double>(k) / b);
  }
  const double rest = std::sqrt(1.0 - r * r);
  const Quadrature rule = GaussLegendre(kQuadratureNodes);
  // P(i, j) = integral over u in cell i of P(Z in cell j | X = Phi^-1(u)).
  std::vector<double> cond(bins + 1);
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = static_cast<double>(i) / b;
    const double half = 0.5 / b;
    const double mid = lo + half;
    for (int k = 0; k < kQuadratureNodes; ++k) {
      const double x = NormalQuantile(mid + half * rule.nodes[k]);
      for (std::size_t j = 0; j <= bins; ++j) {
        cond[j] = j == 0 ? 0.0
                  : j == bins ? 1.0
                              : NormalCdf((cuts[j] - r * x) / rest);
      }
      const double w = half * rule.weights[k];
      for (std::size_t j = 0; j < bins; ++j) {
        pmf(i, j) += w * (cond[j + 1] - cond[j]);
      }
    }
  }
  double total = 0.0;
  for (double v : pmf.data()) total += v;
  pmf *= 1.0 / total;
  return DiscreteJoint::Create(std::move(pmf));
}

}  // namespace drip
