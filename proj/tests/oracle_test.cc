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

const Matrix kBinary = Matrix::FromRows({{0.45, 0.05}, {0.05, 0.45}});

DiscreteJoint MustJoint(const Matrix& pmf) {
  auto joint = DiscreteJoint::Create(pmf);
  EXPECT_TRUE(joint.ok()) << joint.status();
  return *joint;
}

DiscreteJoint Product(std::span<const double> p, std::span<const double> q) {
  Matrix pmf(p.size(), q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) pmf(i, j) = p[i] * q[j];
  }
  return *DiscreteJoint::FromCounts(pmf);
}

Matrix RandomPositivePmf(RandomSource& rng, std::size_t m, std::size_t n) {
  Matrix counts(m, n);
  for (double& v : counts.data()) v = rng.Uniform(0.05, 1.0);
  return counts;
}

TEST(DiscreteJointTest, RejectsInvalidPmf) {
  EXPECT_FALSE(DiscreteJoint::Create(Matrix::FromRows({{0.5, 0.6}})).ok());
  EXPECT_FALSE(DiscreteJoint::Create(Matrix::FromRows({{1.5, -0.5}})).ok());
  EXPECT_FALSE(DiscreteJoint::FromCounts(Matrix(2, 2)).ok());
}

TEST(DiscreteMaxCorrTest, ProductDistributionIsZero) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  const std::vector<double> q{0.6, 0.4};
  auto rho = DiscreteMaxCorrSvd(Product(p, q));
  ASSERT_TRUE(rho.ok());
  EXPECT_NEAR(*rho, 0.0, 1e-10);
}

TEST(DiscreteMaxCorrTest, UniformDiagonalIsOne) {
  for (std::size_t k : {2u, 3u, 5u}) {
    Matrix pmf(k, k);
    for (std::size_t i = 0; i < k; ++i) pmf(i, i) = 1.0 / k;
    auto rho = DiscreteMaxCorrSvd(*DiscreteJoint::FromCounts(pmf));
    ASSERT_TRUE(rho.ok());
    EXPECT_NEAR(*rho, 1.0, 1e-10);
  }
}

TEST(DiscreteMaxCorrTest, BinaryAgreement) {
  auto dtm = DivergenceTransitionMatrix(MustJoint(kBinary));
  ASSERT_TRUE(dtm.ok());
  EXPECT_NEAR((*dtm)(0, 0), 0.9, 1e-12);
  EXPECT_NEAR((*dtm)(0, 1), 0.1, 1e-12);
  auto rho = DiscreteMaxCorrSvd(MustJoint(kBinary));
  ASSERT_TRUE(rho.ok());
  EXPECT_NEAR(*rho, 0.8, 1e-12);
}

TEST(DiscreteMaxCorrTest, RejectsZeroMarginal) {
  auto rho = DiscreteMaxCorrSvd(
      MustJoint(Matrix::FromRows({{0.5, 0.0}, {0.5, 0.0}})));
  EXPECT_FALSE(rho.ok());
}

TEST(DiscreteMaxCorrTest, InvariantUnderPermutations) {
  RandomSource rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix counts = RandomPositivePmf(rng, 3, 4);
    const std::vector<std::size_t> rows = rng.Permutation(3);
    const std::vector<std::size_t> cols = rng.Permutation(4);
    Matrix permuted(3, 4);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        permuted(i, j) = counts(rows[i], cols[j]);
      }
    }
    const double a = *DiscreteMaxCorrSvd(*DiscreteJoint::FromCounts(counts));
    const double b = *DiscreteMaxCorrSvd(*DiscreteJoint::FromCounts(permuted));
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0 + 1e-10);
  }
}

TEST(MutualInformationTest, IndependentIsZero) {
  const std::vector<double> p{0.1, 0.9};
  const std::vector<double> q{0.25, 0.25, 0.5};
  EXPECT_NEAR(*DiscreteMutualInformation(Product(p, q)), 0.0, 1e-15);
}

TEST(MutualInformationTest, UniformDiagonalIsLogK) {
  Matrix pmf(4, 4);
  for (std::size_t i = 0; i < 4; ++i) pmf(i, i) = 0.25;
  EXPECT_NEAR(*DiscreteMutualInformation(MustJoint(pmf)), std::log(4.0),
              1e-12);
}

TEST(MutualInformationTest, BinaryAgreement) {
  auto mi = DiscreteMutualInformation(MustJoint(kBinary));
  ASSERT_TRUE(mi.ok());
  EXPECT_NEAR(*mi, 0.3680, 1e-4);
  EXPECT_NEAR(*mi, std::log(2.0) + 0.1 * std::log(0.1) + 0.9 * std::log(0.9),
              1e-12);
}

TEST(MutualInformationTest, ZeroExactlyWhenMaxCorrZero) {
  RandomSource rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(4);
    std::vector<double> q(4);
    for (double& v : p) v = rng.Uniform(0.1, 1.0);
    for (double& v : q) v = rng.Uniform(0.1, 1.0);
    const DiscreteJoint independent = Product(p, q);
    EXPECT_LE(*DiscreteMutualInformation(independent), 1e-9);
    EXPECT_LE(*DiscreteMaxCorrSvd(independent), 1e-9);

    const DiscreteJoint dependent =
        *DiscreteJoint::FromCounts(RandomPositivePmf(rng, 4, 4));
    EXPECT_GT(*DiscreteMutualInformation(dependent), 1e-9);
    EXPECT_GT(*DiscreteMaxCorrSvd(dependent), 1e-9);
  }
}

TEST(PopulationMmdTest, EqualPmfsGiveZero) {
  const Matrix points = Matrix::FromRows({{0.0}, {1.0}});
  const std::vector<double> p{0.5, 0.5};
  auto v = PopulationMmd2Discrete(KernelSpec(), points, p, p);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(*v, 0.0);
}

TEST(PopulationMmdTest, PointMasses) {
  const Matrix points = Matrix::FromRows({{0.0}, {1.0}});
  const std::vector<double> p{1.0, 0.0};
  const std::vector<double> q{0.0, 1.0};
  auto v = PopulationMmd2Discrete(KernelSpec(), points, p, q);
  ASSERT_TRUE(v.ok());
  EXPECT_NEAR(*v, 0.78694, 1e-5);
  EXPECT_NEAR(*v, 2.0 - 2.0 * std::exp(-0.5), 1e-15);
}

TEST(PopulationMmdTest, PositiveUnlessEqual) {
  RandomSource rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix points = testing::UniformMatrix(rng, 5, 2, -1.0, 1.0);
    std::vector<double> p(5);
    std::vector<double> q(5);
    double sp = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      sp += p[i] = rng.Uniform();
      sq += q[i] = rng.Uniform();
    }
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    EXPECT_GT(*PopulationMmd2Discrete(KernelSpec(), points, p, q), 0.0);
    EXPECT_EQ(*PopulationMmd2Discrete(KernelSpec(), points, p, p), 0.0);
  }
}

TEST(PopulationMmdTest, RejectsMismatchedSupport) {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<double> q{1.0};
  EXPECT_FALSE(
      PopulationMmd2Discrete(KernelSpec(), Matrix(2, 1), p, q).ok());
  EXPECT_FALSE(
      PopulationMmd2Discrete(KernelSpec(), Matrix(3, 1), p, p).ok());
}

TEST(GaussianPairTest, UnitCorrelationCopiesColumn) {
  RandomSource rng(4);
  auto pair = GaussianPairDataset(rng, 1.0, 1000);
  ASSERT_TRUE(pair.ok());
  EXPECT_EQ(pair->x, pair->s);
}

TEST(GaussianPairTest, EmpiricalPearson) {
  RandomSource rng(5);
  auto pair = GaussianPairDataset(rng, 0.7, 100000);
  ASSERT_TRUE(pair.ok());
  const std::size_t n = pair->x.rows();
  double mx = 0, ms = 0, sxx = 0, sss = 0, sxs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += pair->x(i, 0) / n;
    ms += pair->s(i, 0) / n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = pair->x(i, 0) - mx;
    const double ds = pair->s(i, 0) - ms;
    sxx += dx * dx;
    sss += ds * ds;
    sxs += dx * ds;
  }
  EXPECT_NEAR(sxs / std::sqrt(sxx * sss), 0.7, 0.01);
}

TEST(GaussianPairTest, RejectsInvalidCorrelation) {
  RandomSource rng(6);
  EXPECT_FALSE(GaussianPairDataset(rng, 1.01, 10).ok());
}

TEST(GaussianPairTest, DiscretizedOracleRecoversCorrelation) {
  auto joint = DiscretizedGaussianJoint(0.7, 50);
  ASSERT_TRUE(joint.ok());
  EXPECT_NEAR(*DiscreteMaxCorrSvd(*joint), 0.70, 0.01);

  RandomSource rng(7);
  auto pair = GaussianPairDataset(rng, 0.7, 100000);
  const std::vector<double> x = pair->x.ColumnCopy(0);
  const std::vector<double> s = pair->s.ColumnCopy(0);
  auto sampled = EmpiricalJoint(EqualProbabilityBins(x, 50),
                                EqualProbabilityBins(s, 50), 50, 50);
  ASSERT_TRUE(sampled.ok());
  EXPECT_NEAR(*DiscreteMaxCorrSvd(*sampled), 0.70, 0.01);
}

TEST(EqualProbabilityBinsTest, BalancedCounts) {
  RandomSource rng(8);
  const std::vector<double> v = GaussianSample(rng, 1000);
  const std::vector<std::size_t> bins = EqualProbabilityBins(v, 10);
  std::vector<int> counts(10, 0);
  for (std::size_t b : bins) ++counts[b];
  for (int c : counts) EXPECT_EQ(c, 100);
}

TEST(NormalTest, CdfAndQuantileInvert) {
  EXPECT_NEAR(NormalCdf(0.0), 0.5, 1e-15);
  for (double p : {0.01, 0.2, 0.5, 0.8, 0.975}) {
    EXPECT_NEAR(NormalCdf(NormalQuantile(p)), p, 1e-12);
  }
}

}  // namespace
}  // namespace drip
