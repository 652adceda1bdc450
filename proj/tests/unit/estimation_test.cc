// Copyright 2026 The labeldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "labeldp/estimation.h"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "labeldp/mechanisms.h"
#include "labeldp/random.h"

namespace labeldp {
namespace {

const double kLn3 = std::log(3.0);

SanitizedSubset Subset(Mechanism tag, int k, std::vector<int> members) {
  return *SanitizedSubset::Create(tag, k, std::move(members));
}

PerLabelGradients Basis(int k) {
  return {Eigen::MatrixXd::Identity(k, k), 1.0};
}

PerLabelGradients RandomGradients(int p, int k, uint64_t seed) {
  RandomnessStream rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(p, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < p; ++i) g(i, j) = normal(rng);
    g.col(j) *= rng.UniformDouble() / g.col(j).norm();
  }
  return {g, 1.0};
}

TEST(SubsetGradientEstimateTest, WorkedValues) {
  const MechanismParams params{kLn3, 2, std::nullopt};
  const auto m = Mechanism::kBernoulliSubset;
  Eigen::VectorXd g = *SubsetGradientEstimate(Subset(m, 2, {1}), Basis(2), params);
  EXPECT_NEAR(g[0], 3.0, 1e-14);
  EXPECT_NEAR(g[1], -1.0, 1e-14);
  g = *SubsetGradientEstimate(Subset(m, 2, {}), Basis(2), params);
  EXPECT_NEAR(g[0], -1.0, 1e-14);
  EXPECT_NEAR(g[1], -1.0, 1e-14);
}

TEST(SubsetGradientEstimateTest, ZeroGradientsGiveZero) {
  const PerLabelGradients zero{Eigen::MatrixXd::Zero(3, 4), 1.0};
  for (Mechanism m : {Mechanism::kBernoulliSubset, Mechanism::kKrr}) {
    const Eigen::VectorXd g = *GradientEstimate(
        Subset(m, 4, {2}), zero, {1.0, 4, std::nullopt});
    EXPECT_EQ(g, Eigen::VectorXd::Zero(3));
  }
  const Eigen::VectorXd g =
      *GradientEstimate(Subset(Mechanism::kDSubset, 4, {2}), zero, {1.0, 4, 1});
  EXPECT_EQ(g, Eigen::VectorXd::Zero(3));
}

TEST(SubsetGradientEstimateTest, RejectsMismatches) {
  EXPECT_FALSE(SubsetGradientEstimate(Subset(Mechanism::kKrr, 2, {1}), Basis(2),
                                      {kLn3, 2, std::nullopt})
                   .ok());
  EXPECT_FALSE(SubsetGradientEstimate(Subset(Mechanism::kBernoulliSubset, 3, {1}),
                                      Basis(2), {kLn3, 2, std::nullopt})
                   .ok());
}

TEST(DSubsetGradientEstimateTest, WorkedValue) {
  const Eigen::VectorXd g = *DSubsetGradientEstimate(
      Subset(Mechanism::kDSubset, 4, {1}), Basis(4), {kLn3, 4, 1});
  // 3 * [(5/6) e1 - (1/6)(e2 + e3 + e4)].
  const Eigen::Vector4d expected(2.5, -0.5, -0.5, -0.5);
  EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(KrrGradientEstimateTest, WorkedValue) {
  // ((e^eps + K - 2) g_j - sum_{k != j} g_k) / (e^eps - 1) with e^eps = 3,
  // K = 2: (3/2, -1/2).
  const Eigen::VectorXd g = *KrrGradientEstimate(
      Subset(Mechanism::kKrr, 2, {1}), Basis(2), {kLn3, 2, std::nullopt});
  EXPECT_NEAR(g[0], 1.5, 1e-14);
  EXPECT_NEAR(g[1], -0.5, 1e-14);
}

// Independent enumeration: sum estimate * likelihood over all outputs.
Eigen::VectorXd EnumeratedMean(Mechanism m, int y, const PerLabelGradients& g,
                               const MechanismParams& params) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(g.dimension());
  EXPECT_TRUE(ForEachOutput(m, params, [&](const SanitizedSubset& s) {
                mean += *Likelihood(m, s, Label{y}, params) *
                        *GradientEstimate(s, g, params);
              }).ok());
  return mean;
}

TEST(UnbiasednessTest, AllMechanismsRandomGradients) {
  for (int k : {2, 3, 5, 8}) {
    for (double eps : {0.5, 1.0, 2.0, std::log(static_cast<double>(k))}) {
      const PerLabelGradients g = RandomGradients(3, k, 100 * k);
      std::vector<std::pair<Mechanism, MechanismParams>> cases = {
          {Mechanism::kBernoulliSubset, {eps, k, std::nullopt}},
          {Mechanism::kKrr, {eps, k, std::nullopt}},
          {Mechanism::kDSubset, {eps, k, RecommendedSubsetSize(k, eps)}}};
      for (const auto& [m, params] : cases) {
        for (int y = 1; y <= k; ++y) {
          const Eigen::VectorXd mean = EnumeratedMean(m, y, g, params);
          EXPECT_LT((mean - g.gradients.col(y - 1)).cwiseAbs().maxCoeff(),
                    1e-9)
              << MechanismName(m) << " K=" << k << " eps=" << eps;
        }
      }
    }
  }
}

TEST(EstimatorMomentsTest, WorkedBernoulliCell) {
  const MomentReport r = *EstimatorMomentsBruteForce(
      Mechanism::kBernoulliSubset, Label{1}, Basis(2), {kLn3, 2, std::nullopt});
  EXPECT_NEAR(r.mean[0], 1.0, 1e-14);
  EXPECT_NEAR(r.mean[1], 0.0, 1e-14);
  EXPECT_NEAR(r.second_moment, 8.0, 1e-13);
  EXPECT_NEAR(r.bound, 16.0, 1e-13);
  EXPECT_LT(r.mean_error, 1e-14);
}

TEST(EstimatorMomentsTest, WorkedDSubsetCell) {
  const MomentReport r = *EstimatorMomentsBruteForce(
      Mechanism::kDSubset, Label{1}, Basis(4), {kLn3, 4, 1});
  EXPECT_LT((r.mean - Eigen::Vector4d(1, 0, 0, 0)).cwiseAbs().maxCoeff(),
            1e-14);
  ASSERT_TRUE(r.pairwise_cov.has_value());
  // Singletons: P[2 in S] = P[3 in S] = 1/6, never together.
  EXPECT_NEAR(*r.pairwise_cov, -1.0 / 36, 1e-15);
}

TEST(EstimatorMomentsTest, ZeroGradients) {
  const PerLabelGradients zero{Eigen::MatrixXd::Zero(2, 4), 1.0};
  for (Mechanism m : {Mechanism::kBernoulliSubset, Mechanism::kKrr}) {
    const MomentReport r =
        *EstimatorMomentsBruteForce(m, Label{1}, zero, {1.0, 4, std::nullopt});
    EXPECT_EQ(r.second_moment, 0.0);
    EXPECT_EQ(r.mean.norm(), 0.0);
  }
}

TEST(EstimatorMomentsTest, BoundsHoldAndKrrClosedFormIsExact) {
  for (int k = 2; k <= 8; ++k) {
    for (double eps : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      for (uint64_t seed = 0; seed < 5; ++seed) {
        const PerLabelGradients g = RandomGradients(k, k, seed * 31 + k);
        for (int y = 1; y <= k; ++y) {
          const MomentReport b = *EstimatorMomentsBruteForce(
              Mechanism::kBernoulliSubset, Label{y}, g, {eps, k, std::nullopt});
          EXPECT_LE(b.second_moment, b.bound);
          const double expected = 1 + 4 * std::exp(eps) *
                                          (k + std::exp(eps)) /
                                          std::pow(std::expm1(eps), 2);
          EXPECT_NEAR(b.bound, expected, 1e-13 * expected);
          const MomentReport r = *EstimatorMomentsBruteForce(
              Mechanism::kKrr, Label{y}, g, {eps, k, std::nullopt});
          EXPECT_NEAR(r.second_moment, r.bound, 1e-9 * r.bound);
          for (int d = 1; 3 * d <= 2 * k; ++d) {
            const MomentReport s = *EstimatorMomentsBruteForce(
                Mechanism::kDSubset, Label{y}, g, {eps, k, d});
            EXPECT_LE(s.second_moment, s.bound) << "K=" << k << " d=" << d;
          }
        }
      }
    }
  }
}

TEST(EstimatorMomentsTest, GuardExceeded) {
  const PerLabelGradients g{Eigen::MatrixXd::Zero(1, 21), 1.0};
  EXPECT_EQ(EstimatorMomentsBruteForce(Mechanism::kBernoulliSubset, Label{1}, g,
                                       {1.0, 21, std::nullopt})
                .status()
                .code(),
            absl::StatusCode::kResourceExhausted);
}

TEST(PerLabelGradientsTest, RejectsOverLipschitz) {
  PerLabelGradients g = Basis(3);
  g.gradients(0, 0) = 2.0;
  EXPECT_FALSE(g.Validate().ok());
  EXPECT_TRUE(Basis(3).Validate().ok());
}

}  // namespace
}  // namespace labeldp
