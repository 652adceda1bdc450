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

// Lower-bound instances: label distributions theta in {1/K +- gamma}^K paired
// with the feature-independent linear loss
//
//   l(w; (x, y)) = -(1/2) <w, e_y - (1/K) 1>,
//
// for which the population risk is -(1/2) <w, theta - (1/K) 1> =
// -(alpha/2) <w, b> with alpha = gamma sqrt(K) and b = (theta - 1/K)/alpha a
// unit vector. Over the unit ball the optimum is w* = b and the excess risk
// of w is (alpha/2)(1 - <w, b>). Any estimate w_hat maps to a distribution
// estimate theta_hat = 1/K + alpha w_hat with
// ||theta_hat - theta|| = alpha ||w_hat - b||.

#ifndef LABELDP_HARD_INSTANCES_H_
#define LABELDP_HARD_INSTANCES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "labeldp/loss.h"
#include "labeldp/sco.h"

namespace labeldp {

inline constexpr double kDefaultGammaScale = 0.25;

struct LabelDistribution {
  Eigen::VectorXd probabilities;
  double gamma = 0.0;
};

struct HardInstance {
  LabelDistribution distribution;
  // b, a unit vector.
  Eigen::VectorXd direction;
  double alpha = 0.0;
  Feature fixed_feature;
  // w* = b.
  Eigen::VectorXd optimum;

  int num_labels() const {
    return static_cast<int>(distribution.probabilities.size());
  }
};

// gamma = min{1/(2K), c_gamma sqrt(e^eps / ((e^eps - 1)^2 n))}.
double HardGamma(int num_labels, int64_t n, double epsilon, double c_gamma);

// 1,0,1,0,...: exactly K/2 ones.
std::vector<bool> AlternatingSignPattern(int num_labels);
// Uniformly random pattern with exactly K/2 ones.
std::vector<bool> RandomBalancedSignPattern(int num_labels, uint64_t seed);

// theta_i = 1/K + gamma where the pattern is set, 1/K - gamma elsewhere.
// Fails for odd K or an unbalanced pattern.
absl::StatusOr<LabelDistribution> MakeHardTheta(
    int num_labels, int64_t n, double epsilon,
    const std::optional<std::vector<bool>>& sign_pattern = std::nullopt,
    double c_gamma = kDefaultGammaScale);

// Derives b, alpha and w* from a perturbed distribution. gamma must be
// positive.
absl::StatusOr<HardInstance> MakeHardInstance(const LabelDistribution& theta);

class LinearLabelLoss final : public LossSpec {
 public:
  explicit LinearLabelLoss(int num_labels) : num_labels_(num_labels) {}

  int dimension() const override { return num_labels_; }
  int num_labels() const override { return num_labels_; }
  // The true gradient norm is (1/2) sqrt(1 - 1/K); 1 is the bound the
  // analysis works with.
  double lipschitz_bound() const override { return 1.0; }

  double Value(const Eigen::VectorXd& w, const Feature& x,
               Label k) const override;
  void Gradient(const Eigen::VectorXd& w, const Feature& x, Label k,
                Eigen::Ref<Eigen::VectorXd> out) const override;
  void PerLabelGradients(const Eigen::VectorXd& w, const Feature& x,
                         Eigen::MatrixXd& out) const override;

 private:
  int num_labels_;
};

// Exact L(w, P_theta) - L(w*, P_theta) = (alpha/2)(1 - <w, b>). Requires
// ||w|| <= 1 + 1e-9.
absl::StatusOr<double> ClosedFormExcessRisk(const Eigen::VectorXd& w,
                                            const HardInstance& instance);

// (1/K) 1 + gamma sqrt(K) w_hat. Not projected onto the simplex.
Eigen::VectorXd ReduceToThetaHat(const Eigen::VectorXd& w_hat, int num_labels,
                                 double gamma);

// Draws n i.i.d. labels from theta, all sharing feature id 0 (the constant
// feature x0).
Dataset SampleHardDataset(const HardInstance& instance, int64_t n,
                          uint64_t seed);
ExampleSampler HardInstanceSampler(const HardInstance& instance);

// Text form "K=<K>;c_gamma=<c>;pattern=<bits>" of a hard instance. gamma is
// recomputed from (n, eps) when the instance is rebuilt.
struct HardInstanceSpec {
  int num_labels = 2;
  double c_gamma = kDefaultGammaScale;
  std::vector<bool> pattern;

  std::string ToString() const;
  static absl::StatusOr<HardInstanceSpec> Parse(const std::string& text);
  absl::StatusOr<HardInstance> Build(int64_t n, double epsilon) const;
};

}  // namespace labeldp

#endif  // LABELDP_HARD_INSTANCES_H_
