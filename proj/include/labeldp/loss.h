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

#ifndef LABELDP_LOSS_H_
#define LABELDP_LOSS_H_

#include <span>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "labeldp/mechanism_types.h"
#include "labeldp/random.h"

namespace labeldp {

// Features are public and opaque to the optimizer; losses interpret them.
using Feature = Eigen::VectorXd;

// A loss l(w; (x, k)) that is convex and L-Lipschitz in w.
class LossSpec {
 public:
  virtual ~LossSpec() = default;

  // Length p of the parameter vector w.
  virtual int dimension() const = 0;
  virtual int num_labels() const = 0;
  virtual double lipschitz_bound() const = 0;

  virtual double Value(const Eigen::VectorXd& w, const Feature& x,
                       Label k) const = 0;
  virtual void Gradient(const Eigen::VectorXd& w, const Feature& x, Label k,
                        Eigen::Ref<Eigen::VectorXd> out) const = 0;

  // Resizes `out` to p x K and fills column k - 1 with the gradient at
  // label k. The default calls Gradient() once per label.
  virtual void PerLabelGradients(const Eigen::VectorXd& w, const Feature& x,
                                 Eigen::MatrixXd& out) const;
};

// Softmax cross-entropy for a linear model with K x m weights stored
// column-major in w. The gradient (softmax - e_k) x^T has norm at most
// sqrt(2) * ||x||, so the loss is L-Lipschitz with L = sqrt(2) *
// feature_norm_bound on features with ||x|| <= feature_norm_bound.
class MulticlassLogisticLoss final : public LossSpec {
 public:
  MulticlassLogisticLoss(int num_labels, int feature_dimension,
                         double feature_norm_bound);

  int dimension() const override { return num_labels_ * feature_dimension_; }
  int num_labels() const override { return num_labels_; }
  double lipschitz_bound() const override;

  double Value(const Eigen::VectorXd& w, const Feature& x,
               Label k) const override;
  void Gradient(const Eigen::VectorXd& w, const Feature& x, Label k,
                Eigen::Ref<Eigen::VectorXd> out) const override;
  void PerLabelGradients(const Eigen::VectorXd& w, const Feature& x,
                         Eigen::MatrixXd& out) const override;

 private:
  Eigen::VectorXd Softmax(const Eigen::VectorXd& w, const Feature& x) const;

  int num_labels_;
  int feature_dimension_;
  double feature_norm_bound_;
};

struct LossCheckReport {
  double max_gradient_norm = 0.0;
  double max_directional_error = 0.0;
  int probes = 0;
};

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kFiniteDifferenceTolerance = 1e-4;

// Spot-checks the LossSpec contract on `probes` random points w drawn from
// the ball of `radius`, each paired with every feature and label: gradient
// norms must not exceed the Lipschitz bound, and the central finite
// difference along a random unit direction must match <grad, u> within
// kFiniteDifferenceTolerance relative error.
absl::StatusOr<LossCheckReport> CheckLossSpec(const LossSpec& loss,
                                              std::span<const Feature> features,
                                              int probes, double radius,
                                              RandomnessStream& rng);

}  // namespace labeldp

#endif  // LABELDP_LOSS_H_
