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

// Exact reference quantities for small discrete distributions: maximal
// correlation from the divergence transition matrix, mutual information,
// population MMD over a finite point set, and discretized bivariate normals.

#ifndef DRIP_ORACLE_H_
#define DRIP_ORACLE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "drip/dependence.h"
#include "drip/matrix.h"
#include "drip/random.h"

namespace drip {

// Joint pmf of two finite random variables Y (rows) and Z (columns).
class DiscreteJoint {
 public:
  // Entries must be finite and non-negative and sum to 1 within 1e-12.
  static absl::StatusOr<DiscreteJoint> Create(Matrix pmf);
  // Normalized counts; rejects an all-zero table.
  static absl::StatusOr<DiscreteJoint> FromCounts(const Matrix& counts);

  const Matrix& pmf() const { return pmf_; }
  std::size_t rows() const { return pmf_.rows(); }
  std::size_t cols() const { return pmf_.cols(); }
  std::vector<double> RowMarginal() const;
  std::vector<double> ColumnMarginal() const;

 private:
  explicit DiscreteJoint(Matrix pmf) : pmf_(std::move(pmf)) {}
  Matrix pmf_;
};

// Q(y, z) = p(y, z) / sqrt(p(y) p(z)). Rejects zero marginals.
absl::StatusOr<Matrix> DivergenceTransitionMatrix(const DiscreteJoint& joint);

// Second largest singular value of the divergence transition matrix (the
// largest is always 1). A 1 x n or m x 1 joint has maximal correlation 0.
absl::StatusOr<double> DiscreteMaxCorrSvd(const DiscreteJoint& joint);

// I(Y; Z) in nats.
absl::StatusOr<double> DiscreteMutualInformation(const DiscreteJoint& joint);

// E_pp K + E_qq K - 2 E_pq K over the rows of `points`, evaluated as
// sum_ij (p_i - q_i)(p_j - q_j) K_ij so that p == q gives exactly 0.
absl::StatusOr<double> PopulationMmd2Discrete(const KernelSpec& spec,
                                              const Matrix& points,
                                              std::span<const double> p,
                                              std::span<const double> q);

struct PairSample {
  Matrix x;  // n x 1
  Matrix s;  // n x 1
};

// n draws of a standard bivariate normal with correlation r, built as
// s = r x + sqrt(1 - r^2) z. r = 1 gives s == x bitwise.
absl::StatusOr<PairSample> GaussianPairDataset(RandomSource& rng, double r,
                                               std::size_t n);

// n draws of (y, z) symbol indices from a joint pmf, returned as n x 1
// matrices holding the indices as doubles.
PairSample SampleDiscreteJoint(RandomSource& rng, const DiscreteJoint& joint,
                               std::size_t n);

// Bin index in [0, bins) for each value, by rank: equal-count (empirical
// equal-probability) bins. Ties are broken by position.
std::vector<std::size_t> EqualProbabilityBins(std::span<const double> values,
                                              std::size_t bins);

// Counts of paired bin indices normalized to a joint.
absl::StatusOr<DiscreteJoint> EmpiricalJoint(std::span<const std::size_t> y,
                                             std::span<const std::size_t> z,
                                             std::size_t y_bins,
                                             std::size_t z_bins);

// Exact (quadrature) joint of a standard bivariate normal with correlation
// r discretized on a bins x bins grid of equal-probability cells.
absl::StatusOr<DiscreteJoint> DiscretizedGaussianJoint(double r,
                                                       std::size_t bins);

// Standard normal cdf and its inverse.
double NormalCdf(double x);
double NormalQuantile(double p);

}  // namespace drip

#endif  // DRIP_ORACLE_H_
