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

#include <algorithm>
#include <cmath>
#include <vector>

#include "drip/dependence.h"
#include "drip/matrix.h"
#include "drip/oracle.h"
#include "drip/random.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace drip {
namespace {

using ::drip::testing::CentralDifferences;
using ::drip::testing::Flat;
using ::drip::testing::FromFlat;
using ::drip::testing::MaxRelError;
using ::drip::testing::UniformMatrix;

const KernelSpec kDefault;

Matrix OneHot(std::span<const std::size_t> labels, std::size_t classes) {
  Matrix m(labels.size(), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) m(i, labels[i]) = 1.0;
  return m;
}

// Binary pair with P(x = s) = agreement and uniform marginals.
PairSample BinaryPair(RandomSource& rng, double agreement, std::size_t n) {
  const double off = (1.0 - agreement) / 2.0;
  auto joint = DiscreteJoint::Create(
      Matrix::FromRows({{agreement / 2.0, off}, {off, agreement / 2.0}}));
  return SampleDiscreteJoint(rng, *joint, n);
}

TEST(KernelSpecTest, RejectsNonPositiveParameters) {
  EXPECT_FALSE(KernelSpec::Rbf(0.0).ok());
  EXPECT_FALSE(KernelSpec::Rbf(1.0, 0.0).ok());
  EXPECT_FALSE(KernelSpec::Rbf(-1.0).ok());
  EXPECT_TRUE(KernelSpec::Rbf(2.0, 0.1).ok());
}

TEST(GramMatrixTest, SinglePoint) {
  auto k = GramMatrix(kDefault, Matrix::FromRows({{0.3, -2.0}}));
  ASSERT_TRUE(k.ok());
  EXPECT_EQ(*k, Matrix::FromRows({{1.0}}));
}

TEST(GramMatrixTest, TwoScalarPoints) {
  auto k = GramMatrix(kDefault, Matrix::FromRows({{0.0}, {1.0}}));
  ASSERT_TRUE(k.ok());
  EXPECT_DOUBLE_EQ((*k)(0, 1), std::exp(-0.5));
  EXPECT_NEAR((*k)(1, 0), 0.60653, 1e-5);
}

TEST(GramMatrixTest, SymmetricUnitDiagonalPsd) {
  RandomSource rng(1);
  Matrix pts = UniformMatrix(rng, 6, 3);
  for (std::size_t c = 0; c < 3; ++c) pts(5, c) = pts(2, c);
  auto k = GramMatrix(kDefault, pts);
  ASSERT_TRUE(k.ok());
  EXPECT_EQ(*k, k->Transposed());
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ((*k)(i, i), 1.0);
  EXPECT_EQ(std::vector<double>(k->row(2).begin(), k->row(2).end()),
            std::vector<double>(k->row(5).begin(), k->row(5).end()));
}

TEST(GramMatrixTest, RejectsNonFinite) {
  Matrix pts(2, 1);
  pts(1, 0) = std::nan("");
  EXPECT_FALSE(GramMatrix(kDefault, pts).ok());
  EXPECT_FALSE(GramMatrix(kDefault, Matrix()).ok());
}

TEST(CenterGramTest, AllOnesVanishes) {
  auto c = CenterGram(Matrix(4, 4, 1.0));
  ASSERT_TRUE(c.ok());
  EXPECT_LT(MaxAbs(*c), 1e-15);
}

TEST(CenterGramTest, SinglePoint) {
  auto c = CenterGram(Matrix::FromRows({{1.0}}));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(*c, Matrix::FromRows({{0.0}}));
}

TEST(CenterGramTest, RowAndColumnSumsVanish) {
  RandomSource rng(2);
  auto k = GramMatrix(kDefault, UniformMatrix(rng, 20, 2, -2.0, 2.0));
  auto c = CenterGram(*k);
  ASSERT_TRUE(c.ok());
  for (std::size_t i = 0; i < 20; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (std::size_t j = 0; j < 20; ++j) {
      row += (*c)(i, j);
      col += (*c)(j, i);
    }
    EXPECT_LE(std::abs(row), 1e-10);
    EXPECT_LE(std::abs(col), 1e-10);
  }
}

TEST(CenterGramTest, RejectsNonSquare) {
  EXPECT_FALSE(CenterGram(Matrix(2, 3)).ok());
}

TEST(MmdTest, IdenticalSetsGiveExactlyZero) {
  RandomSource rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix xs = UniformMatrix(rng, 1 + trial % 17, 3, -3.0, 3.0);
    auto v = Mmd2Estimate(kDefault, xs, xs);
    ASSERT_TRUE(v.ok());
    EXPECT_EQ(*v, 0.0);
  }
}

TEST(MmdTest, SinglePointPair) {
  auto v = Mmd2Estimate(kDefault, Matrix::FromRows({{0.0}}),
                        Matrix::FromRows({{1.0}}));
  ASSERT_TRUE(v.ok());
  EXPECT_NEAR(*v, 2.0 - 2.0 * std::exp(-0.5), 1e-12);
}

TEST(MmdTest, SameDistributionIsSmall) {
  RandomSource rng(4);
  const Matrix a = rng.GaussianMatrix(2000, 1);
  const Matrix b = rng.GaussianMatrix(2000, 1);
  auto v = Mmd2Estimate(kDefault, a, b);
  ASSERT_TRUE(v.ok());
  EXPECT_LT(std::abs(*v), 0.01);
}

TEST(MmdTest, SymmetricUnderSwap) {
  RandomSource rng(5);
  const Matrix a = UniformMatrix(rng, 30, 2);
  const Matrix b = UniformMatrix(rng, 30, 2, 0.5, 1.5);
  EXPECT_NEAR(*Mmd2Estimate(kDefault, a, b), *Mmd2Estimate(kDefault, b, a),
              1e-14);
}

TEST(MmdTest, UnbiasedFormDropsDiagonals) {
  auto v = Mmd2Estimate(kDefault, Matrix::FromRows({{0.0}, {0.0}}),
                        Matrix::FromRows({{1.0}, {1.0}}), MmdForm::kUnbiased);
  ASSERT_TRUE(v.ok());
  EXPECT_NEAR(*v, 2.0 - 2.0 * std::exp(-0.5), 1e-12);
}

TEST(MmdTest, RejectsSizeMismatch) {
  EXPECT_FALSE(Mmd2Estimate(kDefault, Matrix(3, 1), Matrix(2, 1)).ok());
  EXPECT_FALSE(Mmd2Gradient(kDefault, Matrix(3, 1), Matrix(3, 2)).ok());
}

TEST(MmdGradientTest, ZeroAtCoincidence) {
  RandomSource rng(6);
  const Matrix xs = UniformMatrix(rng, 8, 3);
  auto g = Mmd2Gradient(kDefault, xs, xs);
  ASSERT_TRUE(g.ok());
  EXPECT_LT(MaxAbs(*g), 1e-15);
}

TEST(MmdGradientTest, ScalarHandDerivative) {
  const double x = 0.2;
  const double xt = 1.1;
  auto g = Mmd2Gradient(kDefault, Matrix::FromRows({{x}}),
                        Matrix::FromRows({{xt}}));
  ASSERT_TRUE(g.ok());
  const double d = xt - x;
  EXPECT_NEAR((*g)(0, 0), 2.0 * d * std::exp(-d * d / 2.0), 1e-14);
}

TEST(MmdGradientTest, MatchesFiniteDifferences) {
  RandomSource rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix xs = UniformMatrix(rng, 6, 3);
    const Matrix st = UniformMatrix(rng, 6, 3);
    auto g = Mmd2Gradient(kDefault, xs, st);
    ASSERT_TRUE(g.ok());
    const auto fd = CentralDifferences(Flat(st), [&](const auto& v) {
      return *Mmd2Estimate(kDefault, xs, FromFlat(st, v));
    });
    EXPECT_LE(MaxRelError(Flat(*g), fd), 1e-4);
  }
}

TEST(KernelMaxCorrTest, IndependentUniformsAreSmall) {
  RandomSource rng(8);
  const Matrix x = UniformMatrix(rng, 500, 1);
  const Matrix s = UniformMatrix(rng, 500, 1);
  auto sol = KernelMaxCorr(kDefault, kDefault, x, s);
  ASSERT_TRUE(sol.ok());
  EXPECT_LE(sol->rho_hat, 0.15);
}

TEST(KernelMaxCorrTest, EqualBinaryIsNearOne) {
  RandomSource rng(9);
  const PairSample p = BinaryPair(rng, 1.0, 100);
  auto spec = KernelSpec::Rbf(1.0, 1e-4);
  auto sol = KernelMaxCorr(*spec, *spec, p.x, p.x);
  ASSERT_TRUE(sol.ok());
  EXPECT_GE(sol->rho_hat, 0.95);
}

TEST(KernelMaxCorrTest, BinaryAgreementMatchesOracle) {
  RandomSource rng(10);
  const PairSample p = BinaryPair(rng, 0.9, 1000);
  auto sol = KernelMaxCorr(kDefault, kDefault, p.x, p.s);
  ASSERT_TRUE(sol.ok());
  EXPECT_NEAR(sol->rho_hat, 0.8, 0.07);
}

// A single draw of 500 records scatters the plug-in value by about 0.03
// around the population value, so the sample estimate is checked against
// the plug-in oracle of the same sample and the seed-averaged estimate
// against the population oracle.
TEST(KernelMaxCorrTest, AgreesWithOracleOnFullRankJoint) {
  auto joint = DiscreteJoint::Create(Matrix::FromRows(
      {{0.20, 0.05, 0.05}, {0.03, 0.25, 0.02}, {0.05, 0.05, 0.30}}));
  ASSERT_TRUE(joint.ok());
  const double oracle = *DiscreteMaxCorrSvd(*joint);
  double mean = 0.0;
  constexpr int kSeeds = 10;
  for (int seed = 0; seed < kSeeds; ++seed) {
    RandomSource rng(100 + seed);
    const PairSample p = SampleDiscreteJoint(rng, *joint, 500);
    std::vector<std::size_t> y(500);
    std::vector<std::size_t> z(500);
    Matrix counts(3, 3);
    for (std::size_t i = 0; i < 500; ++i) {
      y[i] = static_cast<std::size_t>(p.x(i, 0));
      z[i] = static_cast<std::size_t>(p.s(i, 0));
      counts(y[i], z[i]) += 1.0;
    }
    auto sol = KernelMaxCorr(kDefault, kDefault, OneHot(y, 3), OneHot(z, 3));
    ASSERT_TRUE(sol.ok());
    const double plug_in = *DiscreteMaxCorrSvd(*DiscreteJoint::FromCounts(counts));
    EXPECT_NEAR(sol->rho_hat, plug_in, 1e-3);
    mean += sol->rho_hat / kSeeds;
  }
  EXPECT_NEAR(mean, oracle, 0.05);
}

TEST(KernelMaxCorrTest, InvariantToRelabelingOfOneHotSymbols) {
  RandomSource rng(12);
  std::vector<std::size_t> s(200);
  Matrix x(200, 1);
  for (std::size_t i = 0; i < 200; ++i) {
    s[i] = rng.UniformIndex(3);
    x(i, 0) = 0.4 * s[i] + rng.Gaussian();
  }
  const std::vector<std::size_t> relabel{2, 0, 1};
  std::vector<std::size_t> t(200);
  for (std::size_t i = 0; i < 200; ++i) t[i] = relabel[s[i]];
  auto a = KernelMaxCorr(kDefault, kDefault, x, OneHot(s, 3));
  auto b = KernelMaxCorr(kDefault, kDefault, x, OneHot(t, 3));
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_LE(std::abs(a->rho_hat - b->rho_hat), 1e-6);
}

TEST(KernelMaxCorrTest, BoundedAndConsistentAlpha) {
  RandomSource rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x = UniformMatrix(rng, 40, 2);
    Matrix s(40, 1);
    for (std::size_t i = 0; i < 40; ++i) s(i, 0) = x(i, 0) + 0.1 * rng.Gaussian();
    auto sol = KernelMaxCorr(kDefault, kDefault, x, s);
    ASSERT_TRUE(sol.ok());
    EXPECT_GE(sol->rho_hat, 0.0);
    EXPECT_LE(sol->rho_hat, 1.0 + 1e-6);
    auto frozen = FrozenKernelMaxCorr(kDefault, *sol, x);
    ASSERT_TRUE(frozen.ok());
    EXPECT_NEAR(*frozen, sol->rho_hat, 1e-8);
  }
}

TEST(KernelMaxCorrTest, DegenerateBatchIsFlaggedNotAnError) {
  auto sol = KernelMaxCorr(kDefault, kDefault, Matrix(10, 2, 0.5),
                           Matrix::Column(std::vector<double>(10, 1.0)));
  ASSERT_TRUE(sol.ok());
  EXPECT_TRUE(sol->degenerate);
  EXPECT_EQ(sol->rho_hat, 0.0);
}

TEST(KernelMaxCorrTest, RejectsTooFewOrMismatchedRecords) {
  EXPECT_FALSE(KernelMaxCorr(kDefault, kDefault, Matrix(1, 1), Matrix(1, 1)).ok());
  EXPECT_FALSE(KernelMaxCorr(kDefault, kDefault, Matrix(4, 1), Matrix(3, 1)).ok());
}

TEST(KernelMaxCorrGradientTest, AntisymmetricAlphaCancels) {
  RandomSource rng(14);
  const Matrix x = UniformMatrix(rng, 5, 2);
  KernelMaxCorrSolution sol;
  sol.alpha = UniformMatrix(rng, 5, 5, -1.0, 1.0);
  sol.alpha = sol.alpha - sol.alpha.Transposed();
  sol.batch_fingerprint = FingerprintMatrix(x);
  auto g = KernelMaxCorrGradient(kDefault, sol, x);
  ASSERT_TRUE(g.ok());
  EXPECT_LT(MaxAbs(*g), 1e-15);
}

TEST(KernelMaxCorrGradientTest, TwoPointScalarCase) {
  const Matrix x = Matrix::FromRows({{0.1}, {0.9}});
  KernelMaxCorrSolution sol;
  sol.alpha = Matrix::FromRows({{0.3, -0.2}, {0.7, 0.4}});
  sol.batch_fingerprint = FingerprintMatrix(x);
  auto g = KernelMaxCorrGradient(kDefault, sol, x);
  ASSERT_TRUE(g.ok());
  const double d = 0.1 - 0.9;
  const double dk = -d * std::exp(-d * d / 2.0);
  EXPECT_NEAR((*g)(0, 0), 0.5 * (-0.2 + 0.7) * dk, 1e-15);
  EXPECT_NEAR((*g)(1, 0), -0.5 * (-0.2 + 0.7) * dk, 1e-15);
}

TEST(KernelMaxCorrGradientTest, MatchesFrozenFiniteDifferences) {
  RandomSource rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = UniformMatrix(rng, 8, 2);
    const Matrix s = UniformMatrix(rng, 8, 1);
    auto sol = KernelMaxCorr(kDefault, kDefault, x, s);
    ASSERT_TRUE(sol.ok());
    auto g = KernelMaxCorrGradient(kDefault, *sol, x);
    ASSERT_TRUE(g.ok());
    const auto fd = CentralDifferences(Flat(x), [&](const auto& v) {
      return *FrozenKernelMaxCorr(kDefault, *sol, FromFlat(x, v));
    });
    EXPECT_LE(MaxRelError(Flat(*g), fd), 1e-4);
  }
}

TEST(KernelMaxCorrGradientTest, StaleSolutionRejected) {
  RandomSource rng(16);
  Matrix x = UniformMatrix(rng, 6, 1);
  auto sol = KernelMaxCorr(kDefault, kDefault, x, UniformMatrix(rng, 6, 1));
  ASSERT_TRUE(sol.ok());
  x(0, 0) += 0.01;
  EXPECT_FALSE(KernelMaxCorrGradient(kDefault, *sol, x).ok());
}

TEST(HsicTest, ConstantPrivateValueGivesZero) {
  RandomSource rng(17);
  auto v = HsicEstimate(kDefault, kDefault, UniformMatrix(rng, 30, 2),
                        Matrix(30, 1, 4.0));
  ASSERT_TRUE(v.ok());
  EXPECT_NEAR(*v, 0.0, 1e-14);
}

double PermutationQuantile(RandomSource& rng, const Matrix& x, const Matrix& s,
                           double q) {
  std::vector<double> null;
  for (int p = 0; p < 200; ++p) {
    const std::vector<std::size_t> perm = rng.Permutation(s.rows());
    null.push_back(*HsicEstimate(kDefault, kDefault, x, s.SelectRows(perm)));
  }
  std::sort(null.begin(), null.end());
  return null[static_cast<std::size_t>(q * (null.size() - 1))];
}

TEST(HsicTest, IndependentWithinPermutationNull) {
  RandomSource rng(18);
  const Matrix x = rng.GaussianMatrix(500, 1);
  const Matrix s = rng.GaussianMatrix(500, 1);
  auto v = HsicEstimate(kDefault, kDefault, x, s);
  ASSERT_TRUE(v.ok());
  EXPECT_GE(*v, -1e-12);
  EXPECT_LE(*v, 3.0 * PermutationQuantile(rng, x, s, 0.95));
}

TEST(HsicTest, StrongDependenceExceedsPermutationNull) {
  RandomSource rng(19);
  const Matrix x = rng.GaussianMatrix(200, 1);
  auto v = HsicEstimate(kDefault, kDefault, x, x);
  ASSERT_TRUE(v.ok());
  EXPECT_GT(*v, PermutationQuantile(rng, x, x, 0.99));
}

TEST(HsicTest, RejectsSizeMismatch) {
  EXPECT_FALSE(HsicEstimate(kDefault, kDefault, Matrix(4, 1), Matrix(5, 1)).ok());
}

}  // namespace
}  // namespace drip
