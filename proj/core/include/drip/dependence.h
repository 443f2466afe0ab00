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

// Kernel dependence and discrepancy measures on minibatches: MMD^2 between
// raw and sanitized records, regularized kernel maximal correlation between
// sanitized records and the private attribute, and HSIC.

#ifndef DRIP_DEPENDENCE_H_
#define DRIP_DEPENDENCE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "drip/matrix.h"

namespace drip {

// RBF kernel K(p, q) = exp(-|p - q|^2 / (2 sigma^2)) with a regularization
// constant eta used by the kernel correlation estimator.
class KernelSpec {
 public:
  static absl::StatusOr<KernelSpec> Rbf(double bandwidth,
                                        double regularization = 0.01);
  // sigma = 1, eta = 0.01
  KernelSpec() = default;

  double bandwidth() const { return bandwidth_; }
  double regularization() const { return regularization_; }

  double Evaluate(std::span<const double> p, std::span<const double> q) const;
  // K as a function of the squared distance.
  double FromSquaredDistance(double d2) const;

 private:
  KernelSpec(double bandwidth, double regularization)
      : bandwidth_(bandwidth), regularization_(regularization) {}

  double bandwidth_ = 1.0;
  double regularization_ = 0.01;
};

// K_ij over the rows of `points`.
absl::StatusOr<Matrix> GramMatrix(const KernelSpec& spec, const Matrix& points);
// K(a_i, b_j) for rows of `a` and `b`.
absl::StatusOr<Matrix> CrossGramMatrix(const KernelSpec& spec, const Matrix& a,
                                       const Matrix& b);

// H K H with H = I - (1/M) 1 1^T.
absl::StatusOr<Matrix> CenterGram(const Matrix& k);

enum class MmdForm {
  kPrinted,   // all N^2 terms, diagonals included
  kUnbiased,  // U-statistic, diagonal terms excluded from the within-set sums
};

// Empirical squared MMD between `xs` and `sanitized` (equal batch sizes).
absl::StatusOr<double> Mmd2Estimate(const KernelSpec& spec, const Matrix& xs,
                                    const Matrix& sanitized,
                                    MmdForm form = MmdForm::kPrinted);

// Exact gradient of the printed estimator with respect to each sanitized
// record (one row per record).
absl::StatusOr<Matrix> Mmd2Gradient(const KernelSpec& spec, const Matrix& xs,
                                    const Matrix& sanitized);

struct KernelMaxCorrSolution {
  double rho_hat = 0.0;
  // Coefficients scaled so that (1/M) a^T (K~x + eta I)^2 a = 1, and likewise
  // for b.
  std::vector<double> a;
  std::vector<double> b;
  // alpha_ij = [H a]_i [H K_s H b]_j, so rho_hat = (1/M) sum_ij alpha_ij
  // K(x~_i, x~_j).
  Matrix alpha;
  // Set when a centered Gram matrix vanishes (all records identical);
  // rho_hat is then 0.
  bool degenerate = false;
  // Fingerprint of the sanitized batch the solution was computed on.
  std::uint64_t batch_fingerprint = 0;
};

// Regularized kernel maximal correlation between the rows of `sanitized`
// and `private_values`. Solved as the top singular triplet of R_x R_s with
// R = (K~ + eta I)^{-1} K~.
absl::StatusOr<KernelMaxCorrSolution> KernelMaxCorr(
    const KernelSpec& spec_x, const KernelSpec& spec_s,
    const Matrix& sanitized, const Matrix& private_values);

// (1/M) sum_ij alpha_ij K(x~_i, x~_j) with the solution's alpha held fixed;
// equals rho_hat on the batch the solution was computed on.
absl::StatusOr<double> FrozenKernelMaxCorr(const KernelSpec& spec_x,
                                           const KernelMaxCorrSolution& solution,
                                           const Matrix& sanitized);

// Gradient of FrozenKernelMaxCorr with respect to each sanitized record:
// (1/M) sum_j (alpha_ij + alpha_ji) grad K(x~_i - x~_j). Rejects a solution
// computed on a different batch.
absl::StatusOr<Matrix> KernelMaxCorrGradient(
    const KernelSpec& spec_x, const KernelMaxCorrSolution& solution,
    const Matrix& sanitized);

// (1/(M-1)^2) tr(K_x H K_s H).
absl::StatusOr<double> HsicEstimate(const KernelSpec& spec_x,
                                    const KernelSpec& spec_s,
                                    const Matrix& sanitized,
                                    const Matrix& private_values);

std::uint64_t FingerprintMatrix(const Matrix& m);

}  // namespace drip

#endif  // DRIP_DEPENDENCE_H_
