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

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/strings/str_cat.h"

namespace labeldp {

void LossSpec::PerLabelGradients(const Eigen::VectorXd& w, const Feature& x,
                                 Eigen::MatrixXd& out) const {
  out.resize(dimension(), num_labels());
  for (int k = 1; k <= num_labels(); ++k) {
    Gradient(w, x, Label{k}, out.col(k - 1));
  }
}

MulticlassLogisticLoss::MulticlassLogisticLoss(int num_labels,
                                               int feature_dimension,
                                               double feature_norm_bound)
    : num_labels_(num_labels),
      feature_dimension_(feature_dimension),
      feature_norm_bound_(feature_norm_bound) {}

double MulticlassLogisticLoss::lipschitz_bound() const {
  return std::sqrt(2.0) * feature_norm_bound_;
}

Eigen::VectorXd MulticlassLogisticLoss::Softmax(const Eigen::VectorXd& w,
                                                const Feature& x) const {
  const Eigen::Map<const Eigen::MatrixXd> weights(w.data(), num_labels_,
                                                  feature_dimension_);
  Eigen::VectorXd logits = weights * x;
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd p = logits.array().exp();
  return p / p.sum();
}

double MulticlassLogisticLoss::Value(const Eigen::VectorXd& w,
                                     const Feature& x, Label k) const {
  const Eigen::Map<const Eigen::MatrixXd> weights(w.data(), num_labels_,
                                                  feature_dimension_);
  const Eigen::VectorXd logits = weights * x;
  const double top = logits.maxCoeff();
  const double log_partition =
      top + std::log((logits.array() - top).exp().sum());
  return log_partition - logits[k.value - 1];
}

void MulticlassLogisticLoss::Gradient(const Eigen::VectorXd& w,
                                      const Feature& x, Label k,
                                      Eigen::Ref<Eigen::VectorXd> out) const {
  Eigen::VectorXd residual = Softmax(w, x);
  residual[k.value - 1] -= 1.0;
  Eigen::Map<Eigen::MatrixXd> grad(out.data(), num_labels_,
                                   feature_dimension_);
  grad.noalias() = residual * x.transpose();
}

void MulticlassLogisticLoss::PerLabelGradients(const Eigen::VectorXd& w,
                                               const Feature& x,
                                               Eigen::MatrixXd& out) const {
  // All K gradients share the softmax term; only the e_k part differs.
  const Eigen::VectorXd p = Softmax(w, x);
  out.resize(dimension(), num_labels_);
  for (int k = 0; k < num_labels_; ++k) {
    Eigen::VectorXd residual = p;
    residual[k] -= 1.0;
    Eigen::Map<Eigen::MatrixXd> grad(out.col(k).data(), num_labels_,
                                     feature_dimension_);
    grad.noalias() = residual * x.transpose();
  }
}

absl::StatusOr<LossCheckReport> CheckLossSpec(const LossSpec& loss,
                                              std::span<const Feature> features,
                                              int probes, double radius,
                                              RandomnessStream& rng) {
  const int p = loss.dimension();
  std::normal_distribution<double> normal;
  auto random_unit = [&] {
    Eigen::VectorXd u(p);
    for (int i = 0; i < p; ++i) u[i] = normal(rng);
    return Eigen::VectorXd(u / u.norm());
  };

  LossCheckReport report;
  Eigen::VectorXd grad(p);
  for (int probe = 0; probe < probes; ++probe) {
    const Eigen::VectorXd w =
        random_unit() * radius * std::pow(rng.UniformDouble(), 1.0 / p);
    for (const Feature& x : features) {
      for (int k = 1; k <= loss.num_labels(); ++k) {
        const Label label{k};
        loss.Gradient(w, x, label, grad);
        const double norm = grad.norm();
        report.max_gradient_norm = std::max(report.max_gradient_norm, norm);
        if (norm > loss.lipschitz_bound() * (1.0 + 1e-9)) {
          return absl::FailedPreconditionError(absl::StrCat(
              "gradient norm ", norm, " exceeds Lipschitz bound ",
              loss.lipschitz_bound()));
        }
        const Eigen::VectorXd u = random_unit();
        const double h = kFiniteDifferenceStep;
        const double numeric =
            (loss.Value(w + h * u, x, label) - loss.Value(w - h * u, x, label)) /
            (2.0 * h);
        const double analytic = grad.dot(u);
        const double error =
            std::abs(numeric - analytic) / std::max(std::abs(analytic), 1e-6);
        report.max_directional_error =
            std::max(report.max_directional_error, error);
        if (error > kFiniteDifferenceTolerance) {
          return absl::FailedPreconditionError(absl::StrCat(
              "finite difference ", numeric, " disagrees with gradient ",
              analytic, " for label ", k));
        }
      }
    }
    ++report.probes;
  }
  return report;
}

}  // namespace labeldp
