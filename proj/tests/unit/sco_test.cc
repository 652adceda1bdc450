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

#include "labeldp/sco.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "labeldp/hard_instances.h"

namespace labeldp {
namespace {

// Gradient 0 everywhere.
class FlatLoss final : public LossSpec {
 public:
  explicit FlatLoss(int k) : k_(k) {}
  int dimension() const override { return 2; }
  int num_labels() const override { return k_; }
  double lipschitz_bound() const override { return 1.0; }
  double Value(const Eigen::VectorXd&, const Feature&, Label) const override {
    return 0.0;
  }
  void Gradient(const Eigen::VectorXd&, const Feature&, Label,
                Eigen::Ref<Eigen::VectorXd> out) const override {
    out.setZero();
  }

 private:
  int k_;
};

// Counts label reads and flags any read after Seal().
class SentinelStore final : public LabelStore {
 public:
  explicit SentinelStore(std::vector<DataPoint> points)
      : points_(std::move(points)) {}
  size_t size() const override { return points_.size(); }
  Label Read(size_t i) override {
    ++reads_;
    if (sealed_) ++reads_after_seal_;
    return points_[i].label;
  }
  void Seal() override { sealed_ = true; }

  int reads() const { return reads_; }
  int reads_after_seal() const { return reads_after_seal_; }
  bool sealed() const { return sealed_; }

 private:
  std::vector<DataPoint> points_;
  int reads_ = 0;
  int reads_after_seal_ = 0;
  bool sealed_ = false;
};

HardInstance Instance(int k, int64_t n, double eps) {
  return *MakeHardInstance(*MakeHardTheta(k, n, eps));
}

TEST(LearningRateTest, WorkedValue) {
  const double eta = *LearningRate(1.0, 1.0, 100, 4, std::log(3.0));
  EXPECT_NEAR(eta, std::sqrt(1.0 / 1050), 1e-15);
  EXPECT_NEAR(eta, 0.030861, 1e-6);
  EXPECT_NEAR(*LearningRate(1.0, 1.0, 400, 4, std::log(3.0)), eta / 2, 1e-16);
  EXPECT_FALSE(LearningRate(1.0, 1.0, 0, 4, 1.0).ok());
  EXPECT_FALSE(LearningRate(1.0, 0.0, 10, 4, 1.0).ok());
}

TEST(LearningRateTest, StableForTinyEpsilon) {
  const double eta = *LearningRate(1.0, 1.0, 10, 2, 1e-6);
  // (e^eps - 1)^2 / (2n (K + e^eps) e^eps) ~ eps^2 / (2n (K + 1)).
  EXPECT_NEAR(eta, 1e-6 / std::sqrt(60.0), 1e-12);
}

TEST(ProjectBallTest, Cases) {
  const ParameterDomain domain{2, 1.0};
  const Eigen::VectorXd p = *ProjectBall(Eigen::Vector2d(3, 4), domain);
  EXPECT_NEAR(p[0], 0.6, 1e-15);
  EXPECT_NEAR(p[1], 0.8, 1e-15);
  const Eigen::Vector2d inside(0.1, -0.2);
  EXPECT_EQ(*ProjectBall(inside, domain), inside);
  EXPECT_FALSE(ProjectBall(Eigen::Vector2d(NAN, 0), domain).ok());
}

TEST(TrainTest, ZeroGradientsKeepInitialPoint) {
  Dataset data;
  data.features = {Feature::Zero(1)};
  for (int i = 0; i < 50; ++i) data.points.push_back({0, Label{1 + i % 3}});
  TrainConfig config;
  config.mechanism = Mechanism::kKrr;
  config.params = {1.0, 3, std::nullopt};
  config.domain = {2, 1.0};
  config.initial = Eigen::Vector2d(0.3, -0.1);
  const TrainResult r = *Train(data, FlatLoss(3), config);
  EXPECT_EQ(r.averaged_iterate, *config.initial);
}

TEST(TrainTest, DeterministicAndBitReproducible) {
  const HardInstance inst = Instance(4, 200, 1.0);
  const Dataset data = SampleHardDataset(inst, 200, 17);
  for (Mechanism m : {Mechanism::kBernoulliSubset, Mechanism::kDSubset,
                      Mechanism::kKrr, Mechanism::kDjw}) {
    TrainConfig config;
    config.mechanism = m;
    config.params = {1.0, 4,
                     m == Mechanism::kDSubset ? std::optional<int>(1)
                                              : std::nullopt};
    config.domain = {4, 1.0};
    config.seed = 5;
    const TrainResult a = *Train(data, LinearLabelLoss(4), config);
    const TrainResult b = *Train(data, LinearLabelLoss(4), config);
    EXPECT_EQ(a.averaged_iterate, b.averaged_iterate) << MechanismName(m);
    EXPECT_LE(a.averaged_iterate.norm(), 1.0 + 1e-12);
    EXPECT_EQ(a.num_steps, 200);
    EXPECT_EQ(a.non_interactive, m != Mechanism::kDjw);
    config.seed = 6;
    const TrainResult c = *Train(data, LinearLabelLoss(4), config);
    EXPECT_NE(a.averaged_iterate, c.averaged_iterate);
  }
}

TEST(TrainTest, SingleDataPointIsReproducible) {
  Dataset data;
  data.features = {Feature::Zero(1)};
  data.points = {{0, Label{2}}};
  TrainConfig config;
  config.params = {1.0, 2, std::nullopt};
  config.domain = {2, 1.0};
  config.seed = 3;
  EXPECT_EQ(Train(data, LinearLabelLoss(2), config)->averaged_iterate,
            Train(data, LinearLabelLoss(2), config)->averaged_iterate);
}

TEST(TrainTest, LabelsAreSealedBeforeLearning) {
  const HardInstance inst = Instance(4, 100, 1.0);
  const Dataset data = SampleHardDataset(inst, 100, 1);
  for (Mechanism m : {Mechanism::kBernoulliSubset, Mechanism::kKrr}) {
    SentinelStore store(data.points);
    std::vector<FeatureId> ids(data.points.size(), 0);
    TrainConfig config;
    config.mechanism = m;
    config.params = {1.0, 4, std::nullopt};
    config.domain = {4, 1.0};
    int steps_seen = 0;
    ASSERT_TRUE(Train(data.features, ids, store, LinearLabelLoss(4), config,
                      [&](int64_t, const Eigen::VectorXd&) {
                        EXPECT_TRUE(store.sealed());
                        ++steps_seen;
                      })
                    .ok());
    EXPECT_EQ(store.reads(), 100);
    EXPECT_EQ(store.reads_after_seal(), 0);
    EXPECT_EQ(steps_seen, 100);
  }
}

TEST(TrainTest, DjwReportsL1Bound) {
  const HardInstance inst = Instance(4, 50, 1.0);
  const Dataset data = SampleHardDataset(inst, 50, 1);
  TrainConfig config;
  config.mechanism = Mechanism::kDjw;
  config.params = {1.0, 4, std::nullopt};
  config.domain = {4, 1.0};
  const TrainResult r = *Train(data, LinearLabelLoss(4), config);
  ASSERT_TRUE(r.l1_bound.has_value());
  EXPECT_DOUBLE_EQ(*r.l1_bound, 2.0);  // L sqrt(K)
}

TEST(TrainTest, NonPrivateConvergesOnSeparatedInstance) {
  // gamma capped at 1/(2K).
  const HardInstance inst = *MakeHardInstance(
      *MakeHardTheta(4, 20000, 20.0, std::nullopt, 1e6));
  const Dataset data = SampleHardDataset(inst, 20000, 2);
  TrainConfig config;
  config.params = {20.0, 4, std::nullopt};
  config.domain = {4, 1.0};
  const TrainResult r = *TrainNonPrivate(data, LinearLabelLoss(4), config);
  EXPECT_LT(*ClosedFormExcessRisk(r.averaged_iterate, inst), inst.alpha / 10);
}

TEST(ExcessRiskMonteCarloTest, ReferenceGivesZeroAndMatchesClosedForm) {
  const HardInstance inst = Instance(4, 100, 1.0);
  const LinearLabelLoss loss(4);
  RandomnessStream rng(1);
  const RiskEstimate zero = *ExcessRiskMonteCarlo(
      inst.optimum, HardInstanceSampler(inst), loss, 1000, inst.optimum, rng);
  EXPECT_EQ(zero.mean, 0.0);
  const Eigen::VectorXd w = -inst.direction;
  const RiskEstimate est = *ExcessRiskMonteCarlo(
      w, HardInstanceSampler(inst), loss, 200000, inst.optimum, rng);
  EXPECT_NEAR(est.mean, *ClosedFormExcessRisk(w, inst),
              4 * est.standard_error);
}

}  // namespace
}  // namespace labeldp
