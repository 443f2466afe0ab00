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

// Dense linear algebra for the small matrices this library works with
// (minibatch Gram matrices, divergence transition matrices, 2x2 moment
// matrices). Everything is Jacobi-based and deterministic.

#ifndef DRIP_LINALG_H_
#define DRIP_LINALG_H_

#include <vector>

#include "absl/status/statusor.h"
#include "drip/matrix.h"

namespace drip {

inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr double kSymmetryTolerance = 1e-10;

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
  int sweeps = 0;
};

// Cyclic Jacobi eigensolver for symmetric matrices. Rejects inputs whose
// asymmetry exceeds kSymmetryTolerance (relative to max |a_ij|, floored at 1).
absl::StatusOr<EigenDecomposition> SymmetricEigen(const Matrix& a);

struct SvdResult {
  std::vector<double> singular_values;  // descending, non-negative
  Matrix u;                             // rows x k, orthonormal columns
  Matrix v;                             // cols x k, orthonormal columns
  int sweeps = 0;
};

// Thin SVD by one-sided (Hestenes) Jacobi, k = min(rows, cols).
absl::StatusOr<SvdResult> Svd(const Matrix& a);

// Lower-triangular L with L L^T = a. Fails with FailedPrecondition when `a`
// is not symmetric positive definite.
absl::StatusOr<Matrix> CholeskyFactor(const Matrix& a);

// Solves L L^T X = B given the Cholesky factor L.
Matrix CholeskySolve(const Matrix& lower, const Matrix& b);
std::vector<double> CholeskySolve(const Matrix& lower,
                                  std::span<const double> b);

// X with a X = b for symmetric positive definite `a`.
absl::StatusOr<Matrix> SolveSpd(const Matrix& a, const Matrix& b);

// Low-rank G (n x r) with a ~= G G^T by greedy diagonal pivoting, for
// symmetric positive semidefinite `a`. Stops once every residual diagonal
// entry is at most `tolerance`; `max_rank` of 0 means no cap. Fails with
// ResourceExhausted when the cap is hit first.
absl::StatusOr<Matrix> PivotedCholesky(const Matrix& a, double tolerance,
                                       std::size_t max_rank = 0);

// a^{-1/2} for symmetric positive definite `a`; eigenvalues are floored at
// `eigen_floor`. Rejects inputs whose condition number exceeds
// `max_condition`.
absl::StatusOr<Matrix> InverseSqrtSpd(const Matrix& a,
                                      double eigen_floor = 1e-8,
                                      double max_condition = 1e8);

}  // namespace drip

#endif  // DRIP_LINALG_H_
