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

#ifndef LABELDP_ESTIMATION_H_
#define LABELDP_ESTIMATION_H_

#include <optional>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "labeldp/mechanism_types.h"

namespace labeldp {

// Column k - 1 holds the loss gradient evaluated at label k, so the matrix is
// p x K.
struct PerLabelGradients {
  Eigen::MatrixXd gradients;
  double lipschitz_bound = 1.0;

  int num_labels() const { return static_cast<int>(gradients.cols()); }
  int dimension() const { return static_cast<int>(gradients.rows()); }

  // Every column norm must be <= lipschitz_bound * (1 + 1e-9).
  absl::Status Validate() const;
};

// Every subset estimator here is linear in the membership indicators:
//
//   g_hat = member_weight * sum_{k in S} g_k + total_weight * sum_k g_k.
//
// The weights are fixed by the mechanism so that E[g_hat | y] = g_y.
struct DebiasingWeights {
  double member_weight = 0.0;
  double total_weight = 0.0;
};

// bernoulli-subset: (2(e^eps+1)/(e^eps-1)) sum_k (1{k in S} - 1/(e^eps+1)) g_k.
DebiasingWeights BernoulliSubsetWeights(double epsilon);
// d-subset: (1/(gamma - zeta)) sum_k (1{k in S} - zeta) g_k.
absl::StatusOr<DebiasingWeights> DSubsetWeights(int num_labels,
                                                int subset_size,
                                                double epsilon);
// krr reporting j: ((e^eps+K-2) g_j - sum_{k != j} g_k) / (e^eps - 1).
DebiasingWeights KrrWeights(int num_labels, double epsilon);

absl::StatusOr<DebiasingWeights> WeightsFor(Mechanism mechanism,
                                            const MechanismParams& params);

// Applies `weights` to the gradient columns selected by `s`. `column_sum`
// must equal gradients.rowwise().sum(); callers that evaluate many subsets
// against one gradient set pass it in once.
void ApplyDebiasing(const SanitizedSubset& s,
                    const Eigen::Ref<const Eigen::MatrixXd>& gradients,
                    const Eigen::VectorXd& column_sum,
                    const DebiasingWeights& weights, Eigen::VectorXd& out);

absl::StatusOr<Eigen::VectorXd> SubsetGradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params);
absl::StatusOr<Eigen::VectorXd> DSubsetGradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params);
absl::StatusOr<Eigen::VectorXd> KrrGradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params);

// Dispatches on s.tag().
absl::StatusOr<Eigen::VectorXd> GradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params);

struct MomentReport {
  Eigen::VectorXd mean;
  // E ||g_hat||^2.
  double second_moment = 0.0;
  // Cov(1{k in S}, 1{k' in S}) for two distinct labels other than y.
  // d-subset with K >= 3 only.
  std::optional<double> pairwise_cov;
  // Analytic upper bound on second_moment.
  double bound = 0.0;
  // max_i |mean_i - g_y,i|.
  double mean_error = 0.0;
};

// Absolute constant used in the d-subset second-moment bound
// C' ((e^eps + K/d)/(e^eps - 1))^2 d L^2.
inline constexpr double kDSubsetBoundConstant = 16.0;

// L^2 (1 + 4 e^eps (K + e^eps) / (e^eps - 1)^2).
double BernoulliSubsetSecondMomentBound(int num_labels, double epsilon,
                                        double lipschitz_bound);
double DSubsetSecondMomentBound(int num_labels, int subset_size,
                                double epsilon, double lipschitz_bound);
// Exact E||g_hat||^2 for krr written out in terms of the gradients rather
// than by enumeration.
double KrrSecondMomentClosedForm(Label y, const PerLabelGradients& grads,
                                 double epsilon);

// Exact mean and second moment of the mechanism's estimator given the true
// label y, by summing over the entire output space weighted by the exact
// likelihoods. Sums are compensated.
absl::StatusOr<MomentReport> EstimatorMomentsBruteForce(
    Mechanism mechanism, Label y, const PerLabelGradients& grads,
    const MechanismParams& params);

}  // namespace labeldp

#endif  // LABELDP_ESTIMATION_H_
