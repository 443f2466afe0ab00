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

#include "drip/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace drip {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

absl::Status CheckSymmetric(const Matrix& a) {
  if (a.rows() != a.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected a square matrix, got %dx%d", a.rows(), a.cols()));
  }
  if (!a.AllFinite()) {
    return absl::InvalidArgumentError("matrix has non-finite entries");
  }
  const double scale = std::max(1.0, MaxAbs(a));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance * scale) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "matrix is not symmetric: |a(%d,%d) - a(%d,%d)| = %g", i, j, j, i,
            std::abs(a(i, j) - a(j, i))));
      }
    }
  }
  return absl::OkStatus();
}

double OffDiagonalNorm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// Orthonormalizes the columns of `q` in place (modified Gram-Schmidt).
// Columns that collapse numerically are replaced by unit vectors orthogonal
// to the preceding ones.
void OrthonormalizeColumns(Matrix& q) {
  const std::size_t n = q.rows();
  const std::size_t k = q.cols();
  Matrix cols = q.Transposed();  // k x n, one column per row
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < k; ++j) {
    auto cj = cols.row(j);
    const double original = Norm2(cj);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        auto ci = cols.row(i);
        const double proj = Dot(ci, cj);
        for (std::size_t t = 0; t < n; ++t) cj[t] -= proj * ci[t];
      }
    }
    double norm = Norm2(cj);
    while (norm <= 1e-12 * std::max(original, 1.0) && next_basis < n) {
      std::fill(cj.begin(), cj.end(), 0.0);
      cj[next_basis++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < j; ++i) {
          auto ci = cols.row(i);
          const double proj = Dot(ci, cj);
          for (std::size_t t = 0; t < n; ++t) cj[t] -= proj * ci[t];
        }
      }
      norm = Norm2(cj);
    }
    for (double& v : cj) v /= norm;
  }
  q = cols.Transposed();
}

}  // namespace

absl::StatusOr<EigenDecomposition> SymmetricEigen(const Matrix& input) {
  if (absl::Status s = CheckSymmetric(input); !s.ok()) return s;
  const std::size_t n = input.rows();
  Matrix a = input;
  // Symmetrize exactly so rotations act on a truly symmetric matrix.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = m;
      a(j, i) = m;
    }
  }
  Matrix v = Matrix::Identity(n);
  const double total = FrobeniusNorm(a);
  int sweep = 0;
  bool converged = n <= 1 || total == 0.0;
  while (!converged && sweep < kMaxJacobiSweeps) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (std::abs(apq) <= kEps * 1e-3 * std::sqrt(std::abs(app * aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = OffDiagonalNorm(a) <= 1e-15 * total;
  }
  if (!converged) {
    return absl::InternalError(absl::StrFormat(
        "Jacobi eigensolver did not converge after %d sweeps (n=%d, "
        "off-diagonal norm %g, matrix norm %g)",
        sweep, n, OffDiagonalNorm(a), total));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });
  EigenDecomposition out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

absl::StatusOr<SvdResult> Svd(const Matrix& a) {
  if (!a.AllFinite()) {
    return absl::InvalidArgumentError("matrix has non-finite entries");
  }
  if (a.rows() < a.cols()) {
    absl::StatusOr<SvdResult> t = Svd(a.Transposed());
    if (!t.ok()) return t.status();
    std::swap(t->u, t->v);
    return t;
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix w = a.Transposed();  // n x m: row j is column j of `a`
  Matrix v = Matrix::Identity(n);
  int sweep = 0;
  bool rotated = true;
  while (rotated && sweep < kMaxJacobiSweeps) {
    rotated = false;
    ++sweep;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto wi = w.row(i);
        auto wj = w.row(j);
        const double alpha = Dot(wi, wi);
        const double beta = Dot(wj, wj);
        const double gamma = Dot(wi, wj);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double x = wi[k];
          const double y = wj[k];
          wi[k] = c * x - s * y;
          wj[k] = s * x + c * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double x = v(k, i);
          const double y = v(k, j);
          v(k, i) = c * x - s * y;
          v(k, j) = s * x + c * y;
        }
      }
    }
  }
  if (rotated) {
    return absl::InternalError(absl::StrFormat(
        "one-sided Jacobi SVD did not converge after %d sweeps (%dx%d)", sweep,
        m, n));
  }
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = Norm2(w.row(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sigma[x] > sigma[y];
  });
  SvdResult out;
  out.sweeps = sweep;
  out.singular_values.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  const double smax = n > 0 ? sigma[order[0]] : 0.0;
  const double cutoff = smax * kEps * static_cast<double>(std::max(m, n));
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src];
    out.singular_values[j] = s;
    for (std::size_t k = 0; k < n; ++k) out.v(k, j) = v(k, src);
    if (s > cutoff && s > 0.0) {
      for (std::size_t k = 0; k < m; ++k) out.u(k, j) = w(src, k) / s;
    }
  }
  // Left vectors of (numerically) zero singular values are completed to an
  // orthonormal set; the Gram-Schmidt pass leaves the others untouched.
  bool needs_completion = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(out.singular_values[j] > cutoff && out.singular_values[j] > 0.0)) {
      needs_completion = true;
    }
  }
  if (needs_completion) OrthonormalizeColumns(out.u);
  return out;
}

absl::StatusOr<Matrix> CholeskyFactor(const Matrix& a) {
  if (absl::Status s = CheckSymmetric(a); !s.ok()) return s;
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    auto lj = l.row(j);
    for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0) || !std::isfinite(d)) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "matrix is not positive definite: pivot %d is %g", j, d));
    }
    const double ljj = std::sqrt(d);
    lj[j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      auto li = l.row(i);
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      li[j] = s / ljj;
    }
  }
  return l;
}

Matrix CholeskySolve(const Matrix& lower, const Matrix& b) {
  assert(lower.rows() == b.rows());
  const std::size_t n = lower.rows();
  const std::size_t k = b.cols();
  Matrix y = b;
  for (std::size_t i = 0; i < n; ++i) {
    auto yi = y.row(i);
    for (std::size_t t = 0; t < i; ++t) {
      const double lit = lower(i, t);
      if (lit == 0.0) continue;
      auto yt = y.row(t);
      for (std::size_t c = 0; c < k; ++c) yi[c] -= lit * yt[c];
    }
    const double inv = 1.0 / lower(i, i);
    for (std::size_t c = 0; c < k; ++c) yi[c] *= inv;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = y.row(ii);
    for (std::size_t t = ii + 1; t < n; ++t) {
      const double lti = lower(t, ii);
      if (lti == 0.0) continue;
      auto xt = y.row(t);
      for (std::size_t c = 0; c < k; ++c) xi[c] -= lti * xt[c];
    }
    const double inv = 1.0 / lower(ii, ii);
    for (std::size_t c = 0; c < k; ++c) xi[c] *= inv;
  }
  return y;
}

std::vector<double> CholeskySolve(const Matrix& lower,
                                  std::span<const double> b) {
  Matrix x = CholeskySolve(lower, Matrix::Column(b));
  return std::vector<double>(x.data().begin(), x.data().end());
}

absl::StatusOr<Matrix> SolveSpd(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "right-hand side has %d rows, expected %d", b.rows(), a.rows()));
  }
  absl::StatusOr<Matrix> l = CholeskyFactor(a);
  if (!l.ok()) return l.status();
  return CholeskySolve(*l, b);
}

absl::StatusOr<Matrix> PivotedCholesky(const Matrix& a, double tolerance,
                                       std::size_t max_rank) {
  if (absl::Status s = CheckSymmetric(a); !s.ok()) return s;
  const std::size_t n = a.rows();
  const std::size_t cap = max_rank == 0 ? n : std::min(max_rank, n);
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = a(i, i);
  // Columns are built transposed (one factor column per row) for locality.
  std::vector<std::vector<double>> factor;
  while (factor.size() < cap) {
    const auto pivot_it = std::max_element(residual.begin(), residual.end());
    const double pivot = *pivot_it;
    if (pivot <= tolerance) break;
    const std::size_t p = static_cast<std::size_t>(pivot_it - residual.begin());
    const double root = std::sqrt(pivot);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = a(i, p);
      for (const std::vector<double>& prev : factor) v -= prev[i] * prev[p];
      col[i] = v / root;
    }
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = std::max(0.0, residual[i] - col[i] * col[i]);
    }
    residual[p] = 0.0;
    factor.push_back(std::move(col));
  }
  if (factor.size() == cap && cap < n &&
      *std::max_element(residual.begin(), residual.end()) > tolerance) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "pivoted Cholesky did not reach tolerance %g within rank %d",
        tolerance, cap));
  }
  Matrix g(n, factor.size());
  for (std::size_t j = 0; j < factor.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) g(i, j) = factor[j][i];
  }
  return g;
}

absl::StatusOr<Matrix> InverseSqrtSpd(const Matrix& a, double eigen_floor,
                                      double max_condition) {
  absl::StatusOr<EigenDecomposition> eig = SymmetricEigen(a);
  if (!eig.ok()) return eig.status();
  const double largest = eig->values.front();
  const double smallest = eig->values.back();
  const double condition =
      smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
  if (!(largest > 0.0) || condition > max_condition) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "moment matrix is singular or ill-conditioned: condition number %g "
        "(limit %g)",
        condition, max_condition));
  }
  const std::size_t n = a.rows();
  Matrix out(n, n);
  for (std::size_t t = 0; t < n; ++t) {
    const double w = 1.0 / std::sqrt(std::max(eig->values[t], eigen_floor));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += w * eig->vectors(i, t) * eig->vectors(j, t);
      }
    }
  }
  return out;
}

}  // namespace drip
