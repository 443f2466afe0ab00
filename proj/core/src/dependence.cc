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

#include "drip/dependence.h"

#include <cmath>
#include <cstring>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "drip/linalg.h"

namespace drip {
namespace {

constexpr double kDegenerateGram = 1e-13;
// Residual diagonal at which the pivoted factorization of a centered Gram
// matrix stops, and the eigenvalue below which a factor direction is
// treated as numerically null.
constexpr double kPivotTolerance = 1e-12;
constexpr double kNullEigenvalue = 1e-11;

absl::Status CheckPoints(const Matrix& points, const char* what) {
  if (points.rows() == 0 || points.cols() == 0) {
    return absl::InvalidArgumentError(absl::StrFormat("%s is empty", what));
  }
  if (!points.AllFinite()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s has non-finite entries", what));
  }
  return absl::OkStatus();
}

absl::Status CheckPairedBatches(const Matrix& a, const Matrix& b,
                                const char* a_name,
                                const char* b_name) {
  if (absl::Status s = CheckPoints(a, a_name); !s.ok()) return s;
  if (absl::Status s = CheckPoints(b, b_name); !s.ok()) return s;
  if (a.rows() != b.rows()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s has %d records but %s has %d", a_name, a.rows(),
                        b_name, b.rows()));
  }
  return absl::OkStatus();
}

Matrix AddRidge(Matrix k, double eta) {
  for (std::size_t i = 0; i < k.rows(); ++i) k(i, i) += eta;
  return k;
}

// Orthonormal basis Q of a centered Gram matrix K~ ~= Q diag(lambda) Q^T,
// with the shrinkage factors lambda / (lambda + eta) of R = (K~ + eta I)^{-1}
// K~ and the ridge inverses 1 / (lambda + eta).
struct LowRankSide {
  Matrix q;
  std::vector<double> shrink;
  std::vector<double> inv_ridge;
};

absl::StatusOr<LowRankSide> FactorSide(const Matrix& centered, double eta,
                                       std::size_t max_rank) {
  absl::StatusOr<Matrix> g = PivotedCholesky(centered, kPivotTolerance, max_rank);
  if (!g.ok()) return g.status();
  LowRankSide side;
  if (g->cols() == 0) {
    side.q = Matrix(centered.rows(), 0);
    return side;
  }
  absl::StatusOr<EigenDecomposition> eig = SymmetricEigen(MatMulTransA(*g, *g));
  if (!eig.ok()) return eig.status();
  std::size_t keep = 0;
  while (keep < eig->values.size() && eig->values[keep] > kNullEigenvalue) {
    ++keep;
  }
  Matrix basis = MatMul(*g, eig->vectors.ColumnBlock(0, keep));
  for (std::size_t j = 0; j < keep; ++j) {
    const double lambda = eig->values[j];
    const double inv_root = 1.0 / std::sqrt(lambda);
    for (std::size_t i = 0; i < basis.rows(); ++i) basis(i, j) *= inv_root;
    side.shrink.push_back(lambda / (lambda + eta));
    side.inv_ridge.push_back(1.0 / (lambda + eta));
  }
  side.q = std::move(basis);
  return side;
}

}  // namespace

absl::StatusOr<KernelSpec> KernelSpec::Rbf(double bandwidth,
                                           double regularization) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("kernel bandwidth must be positive, got %g", bandwidth));
  }
  if (!(regularization > 0.0) || !std::isfinite(regularization)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "kernel regularization must be positive, got %g", regularization));
  }
  return KernelSpec(bandwidth, regularization);
}

double KernelSpec::FromSquaredDistance(double d2) const {
  return std::exp(-d2 / (2.0 * bandwidth_ * bandwidth_));
}

double KernelSpec::Evaluate(std::span<const double> p,
                            std::span<const double> q) const {
  return FromSquaredDistance(SquaredDistance(p, q));
}

absl::StatusOr<Matrix> GramMatrix(const KernelSpec& spec, const Matrix& points) {
  if (absl::Status s = CheckPoints(points, "point set"); !s.ok()) return s;
  const std::size_t n = points.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = spec.Evaluate(points.row(i), points.row(j));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

absl::StatusOr<Matrix> CrossGramMatrix(const KernelSpec& spec, const Matrix& a,
                                       const Matrix& b) {
  if (absl::Status s = CheckPoints(a, "first point set"); !s.ok()) return s;
  if (absl::Status s = CheckPoints(b, "second point set"); !s.ok()) return s;
  if (a.cols() != b.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "point dimensions differ: %d vs %d", a.cols(), b.cols()));
  }
  Matrix k(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      k(i, j) = spec.Evaluate(a.row(i), b.row(j));
    }
  }
  return k;
}

absl::StatusOr<Matrix> CenterGram(const Matrix& k) {
  if (k.rows() != k.cols() || k.rows() == 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Gram matrix must be square and nonempty, got %dx%d", k.rows(),
        k.cols()));
  }
  const std::size_t n = k.rows();
  const double inv = 1.0 / static_cast<double>(n);
  std::vector<double> row_mean(n, 0.0);
  std::vector<double> col_mean(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row_mean[i] += k(i, j);
      col_mean[j] += k(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    total += row_mean[i];
    row_mean[i] *= inv;
    col_mean[i] *= inv;
  }
  total *= inv * inv;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = k(i, j) - row_mean[i] - col_mean[j] + total;
    }
  }
  return out;
}

absl::StatusOr<double> Mmd2Estimate(const KernelSpec& spec, const Matrix& xs,
                                    const Matrix& sanitized, MmdForm form) {
  if (absl::Status s = CheckPairedBatches(xs, sanitized, "raw batch",
                                          "sanitized batch");
      !s.ok()) {
    return s;
  }
  if (xs.cols() != sanitized.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "record dimensions differ: %d vs %d", xs.cols(), sanitized.cols()));
  }
  const std::size_t n = xs.rows();
  double kxx = 0.0;
  double kyx = 0.0;
  double kyy = 0.0;
  const bool skip_diagonal = form == MmdForm::kUnbiased;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(skip_diagonal && i == j)) {
        kxx += spec.Evaluate(xs.row(i), xs.row(j));
      }
      kyx += spec.Evaluate(sanitized.row(i), xs.row(j));
      if (!(skip_diagonal && i == j)) {
        kyy += spec.Evaluate(sanitized.row(i), sanitized.row(j));
      }
    }
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  if (skip_diagonal) {
    if (n < 2) {
      return absl::InvalidArgumentError(
          "the unbiased MMD form needs at least two records");
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    return kxx / pairs - 2.0 * kyx / nn + kyy / pairs;
  }
  return kxx / nn - 2.0 * kyx / nn + kyy / nn;
}

absl::StatusOr<Matrix> Mmd2Gradient(const KernelSpec& spec, const Matrix& xs,
                                    const Matrix& sanitized) {
  if (absl::Status s = CheckPairedBatches(xs, sanitized, "raw batch",
                                          "sanitized batch");
      !s.ok()) {
    return s;
  }
  if (xs.cols() != sanitized.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "record dimensions differ: %d vs %d", xs.cols(), sanitized.cols()));
  }
  const std::size_t n = xs.rows();
  const std::size_t d = xs.cols();
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const double inv_bw2 = 1.0 / (spec.bandwidth() * spec.bandwidth());
  Matrix grad(n, d);
  for (std::size_t k = 0; k < n; ++k) {
    auto yk = sanitized.row(k);
    auto gk = grad.row(k);
    for (std::size_t j = 0; j < n; ++j) {
      // d/dy K(y, b) = -K(y, b) (y - b) / sigma^2
      auto xj = xs.row(j);
      const double kx = spec.Evaluate(yk, xj);
      auto yj = sanitized.row(j);
      const double ky = spec.Evaluate(yk, yj);
      for (std::size_t c = 0; c < d; ++c) {
        const double cross = -kx * (yk[c] - xj[c]) * inv_bw2;
        const double self = -ky * (yk[c] - yj[c]) * inv_bw2;
        gk[c] += (-2.0 * cross + 2.0 * self) / nn;
      }
    }
  }
  return grad;
}

std::uint64_t FingerprintMatrix(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::size_t dims[2] = {m.rows(), m.cols()};
  mix(dims, sizeof(dims));
  mix(m.data().data(), m.size() * sizeof(double));
  return h;
}

absl::StatusOr<KernelMaxCorrSolution> KernelMaxCorr(
    const KernelSpec& spec_x, const KernelSpec& spec_s,
    const Matrix& sanitized, const Matrix& private_values) {
  if (absl::Status s = CheckPairedBatches(sanitized, private_values,
                                          "sanitized batch", "private values");
      !s.ok()) {
    return s;
  }
  const std::size_t m = sanitized.rows();
  if (m < 2) {
    return absl::InvalidArgumentError(
        "kernel maximal correlation needs at least two records");
  }
  absl::StatusOr<Matrix> kx = GramMatrix(spec_x, sanitized);
  if (!kx.ok()) return kx.status();
  absl::StatusOr<Matrix> ks = GramMatrix(spec_s, private_values);
  if (!ks.ok()) return ks.status();
  absl::StatusOr<Matrix> kxc = CenterGram(*kx);
  if (!kxc.ok()) return kxc.status();
  absl::StatusOr<Matrix> ksc = CenterGram(*ks);
  if (!ksc.ok()) return ksc.status();

  KernelMaxCorrSolution sol;
  sol.batch_fingerprint = FingerprintMatrix(sanitized);
  sol.a.assign(m, 0.0);
  sol.b.assign(m, 0.0);
  sol.alpha = Matrix(m, m);
  if (MaxAbs(*kxc) <= kDegenerateGram || MaxAbs(*ksc) <= kDegenerateGram) {
    sol.degenerate = true;
    return sol;
  }

  // Factor whichever side has the lower numerical rank; the private
  // attribute usually does.
  const std::size_t cap = std::max<std::size_t>(m / 2, 1);
  bool low_is_s = true;
  absl::StatusOr<LowRankSide> low =
      FactorSide(*ksc, spec_s.regularization(), cap);
  if (!low.ok() && absl::IsResourceExhausted(low.status())) {
    low = FactorSide(*kxc, spec_x.regularization(), cap);
    low_is_s = false;
    if (!low.ok() && absl::IsResourceExhausted(low.status())) {
      low = FactorSide(*ksc, spec_s.regularization(), 0);
      low_is_s = true;
    }
  }
  if (!low.ok()) return low.status();
  if (low->q.cols() == 0) {
    sol.degenerate = true;
    return sol;
  }
  const Matrix& full_gram = low_is_s ? *kxc : *ksc;
  const double full_eta =
      low_is_s ? spec_x.regularization() : spec_s.regularization();

  absl::StatusOr<Matrix> full_chol = CholeskyFactor(AddRidge(full_gram, full_eta));
  if (!full_chol.ok()) return full_chol.status();
  // R_full R_low = N Q^T with N = R_full Q diag(shrink), so the nonzero
  // singular triplets of the m x m product come from the m x r matrix N.
  Matrix n = CholeskySolve(*full_chol, MatMul(full_gram, low->q));
  for (std::size_t i = 0; i < n.rows(); ++i) {
    auto row = n.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= low->shrink[j];
  }
  absl::StatusOr<SvdResult> svd = Svd(n);
  if (!svd.ok()) return svd.status();
  const std::vector<double> full_dir = svd->u.ColumnCopy(0);
  const std::vector<double> low_coeff = svd->v.ColumnCopy(0);
  const std::vector<double> low_dir = MatVec(low->q, low_coeff);
  sol.rho_hat = svd->singular_values[0];

  const double root_m = std::sqrt(static_cast<double>(m));
  std::vector<double> full_coef = CholeskySolve(*full_chol, full_dir);
  // (K~ + eta I)^{-1} on span(Q) is Q diag(1 / (lambda + eta)) Q^T.
  std::vector<double> proj = MatTransVec(low->q, low_dir);
  for (std::size_t j = 0; j < proj.size(); ++j) proj[j] *= low->inv_ridge[j];
  std::vector<double> low_coef = MatVec(low->q, proj);
  for (double& v : full_coef) v *= root_m;
  for (double& v : low_coef) v *= root_m;
  sol.a = low_is_s ? std::move(full_coef) : std::move(low_coef);
  sol.b = low_is_s ? std::move(low_coef) : std::move(full_coef);

  // alpha = (H a)(K~s b)^T, using H K_s H = K~s.
  double mean_a = 0.0;
  for (double v : sol.a) mean_a += v;
  mean_a /= static_cast<double>(m);
  const std::vector<double> q = MatVec(*ksc, sol.b);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = sol.a[i] - mean_a;
    auto row = sol.alpha.row(i);
    for (std::size_t j = 0; j < m; ++j) row[j] = p * q[j];
  }
  return sol;
}

absl::StatusOr<double> FrozenKernelMaxCorr(const KernelSpec& spec_x,
                                           const KernelMaxCorrSolution& solution,
                                           const Matrix& sanitized) {
  const std::size_t m = sanitized.rows();
  if (solution.alpha.rows() != m || solution.alpha.cols() != m) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "solution has %d records, batch has %d", solution.alpha.rows(), m));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      total += solution.alpha(i, j) *
               spec_x.Evaluate(sanitized.row(i), sanitized.row(j));
    }
  }
  return total / static_cast<double>(m);
}

absl::StatusOr<Matrix> KernelMaxCorrGradient(
    const KernelSpec& spec_x, const KernelMaxCorrSolution& solution,
    const Matrix& sanitized) {
  const std::size_t m = sanitized.rows();
  if (solution.alpha.rows() != m ||
      solution.batch_fingerprint != FingerprintMatrix(sanitized)) {
    return absl::FailedPreconditionError(
        "kernel correlation solution was computed on a different batch");
  }
  const std::size_t d = sanitized.cols();
  const double inv_bw2 = 1.0 / (spec_x.bandwidth() * spec_x.bandwidth());
  const double inv_m = 1.0 / static_cast<double>(m);
  Matrix grad(m, d);
  if (solution.degenerate) return grad;
  for (std::size_t i = 0; i < m; ++i) {
    auto xi = sanitized.row(i);
    auto gi = grad.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      auto xj = sanitized.row(j);
      const double w = solution.alpha(i, j) + solution.alpha(j, i);
      const double k = spec_x.Evaluate(xi, xj);
      for (std::size_t c = 0; c < d; ++c) {
        gi[c] += inv_m * w * (-k * (xi[c] - xj[c]) * inv_bw2);
      }
    }
  }
  return grad;
}

absl::StatusOr<double> HsicEstimate(const KernelSpec& spec_x,
                                    const KernelSpec& spec_s,
                                    const Matrix& sanitized,
                                    const Matrix& private_values) {
  if (absl::Status s = CheckPairedBatches(sanitized, private_values,
                                          "sanitized batch", "private values");
      !s.ok()) {
    return s;
  }
  const std::size_t m = sanitized.rows();
  if (m < 2) return absl::InvalidArgumentError("HSIC needs at least two records");
  absl::StatusOr<Matrix> kx = GramMatrix(spec_x, sanitized);
  if (!kx.ok()) return kx.status();
  absl::StatusOr<Matrix> ks = GramMatrix(spec_s, private_values);
  if (!ks.ok()) return ks.status();
  absl::StatusOr<Matrix> ksc = CenterGram(*ks);
  if (!ksc.ok()) return ksc.status();
  // tr(K_x H K_s H) = sum_ij K_x(i,j) [H K_s H](j,i), and H K_s H is symmetric.
  double total = 0.0;
  for (std::size_t i = 0; i < kx->size(); ++i) {
    total += kx->data()[i] * ksc->data()[i];
  }
  const double denom = static_cast<double>(m - 1) * static_cast<double>(m - 1);
  return total / denom;
}

}  // namespace drip
