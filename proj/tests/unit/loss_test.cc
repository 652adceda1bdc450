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

#include "labeldp/loss.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "labeldp/hard_instances.h"
#include "labeldp/random.h"

namespace labeldp {
namespace {

TEST(MulticlassLogisticLossTest, PassesContractCheck) {
  const MulticlassLogisticLoss loss(3, 2, 1.0);
  EXPECT_NEAR(loss.lipschitz_bound(), std::sqrt(2.0), 1e-15);
  const std::vector<Feature> features = {Eigen::Vector2d(1, 0),
                                         Eigen::Vector2d(0.6, -0.8),
                                         Eigen::Vector2d(0.1, 0.2)};
  RandomnessStream rng(5);
  const LossCheckReport r = *CheckLossSpec(loss, features, 20, 3.0, rng);
  EXPECT_EQ(r.probes, 20);
  EXPECT_LE(r.max_gradient_norm, loss.lipschitz_bound());
  EXPECT_LE(r.max_directional_error, kFiniteDifferenceTolerance);
}

TEST(MulticlassLogisticLossTest, ValueAtOriginIsLogK) {
  const MulticlassLogisticLoss loss(4, 3, 1.0);
  EXPECT_NEAR(loss.Value(Eigen::VectorXd::Zero(12), Eigen::Vector3d(1, 0, 0),
                         Label{2}),
              std::log(4.0), 1e-14);
}

TEST(MulticlassLogisticLossTest, PerLabelGradientsMatchGradient) {
  const MulticlassLogisticLoss loss(3, 2, 1.0);
  Eigen::VectorXd w(6);
  w << 0.3, -0.2, 0.5, 0.1, -0.4, 0.2;
  const Feature x = Eigen::Vector2d(0.6, 0.8);
  Eigen::MatrixXd all;
  loss.PerLabelGradients(w, x, all);
  for (int y = 1; y <= 3; ++y) {
    Eigen::VectorXd g(6);
    loss.Gradient(w, x, Label{y}, g);
    EXPECT_LT((all.col(y - 1) - g).norm(), 1e-15);
  }
}

// A loss that lies about its Lipschitz constant must be caught.
class OverclaimedLoss final : public LossSpec {
 public:
  int dimension() const override { return 1; }
  int num_labels() const override { return 2; }
  double lipschitz_bound() const override { return 0.5; }
  double Value(const Eigen::VectorXd& w, const Feature&,
               Label) const override {
    return w[0];
  }
  void Gradient(const Eigen::VectorXd&, const Feature&, Label,
                Eigen::Ref<Eigen::VectorXd> out) const override {
    out[0] = 1.0;
  }
};

TEST(CheckLossSpecTest, DetectsLipschitzViolation) {
  const std::vector<Feature> features = {Feature::Zero(1)};
  RandomnessStream rng(1);
  EXPECT_FALSE(CheckLossSpec(OverclaimedLoss(), features, 3, 1.0, rng).ok());
}

TEST(CheckLossSpecTest, LinearLabelLossPasses) {
  const std::vector<Feature> features = {Feature::Zero(1)};
  RandomnessStream rng(1);
  EXPECT_TRUE(CheckLossSpec(LinearLabelLoss(6), features, 5, 1.0, rng).ok());
}

}  // namespace
}  // namespace labeldp
