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

#include "absl/strings/str_cat.h"
#include "labeldp/mechanisms.h"

namespace labeldp {

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

class CompensatedVectorSum {
 public:
  explicit CompensatedVectorSum(Eigen::Index size) : parts_(size) {}
  void Add(const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) parts_[i].Add(x[i]);
  }
  Eigen::VectorXd value() const {
    Eigen::VectorXd out(parts_.size());
    for (size_t i = 0; i < parts_.size(); ++i) out[i] = parts_[i].value();
    return out;
  }

 private:
  std::vector<CompensatedSum> parts_;
};

absl::Status CheckEstimatorInput(Mechanism expected, const SanitizedSubset& s,
                                 const PerLabelGradients& grads,
                                 const MechanismParams& params) {
  if (s.tag() != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("estimator for ", MechanismName(expected),
                     " given a subset from ", MechanismName(s.tag())));
  }
  if (absl::Status st = ValidateFor(expected, params); !st.ok()) return st;
  if (grads.num_labels() != params.num_labels ||
      s.num_labels() != params.num_labels) {
    return absl::InvalidArgumentError(
        absl::StrCat("gradients cover ", grads.num_labels(),
                     " labels, subset ", s.num_labels(), ", params ",
                     params.num_labels));
  }
  return absl::OkStatus();
}

absl::StatusOr<Eigen::VectorXd> Estimate(const SanitizedSubset& s,
                                         const PerLabelGradients& grads,
                                         const DebiasingWeights& weights) {
  Eigen::VectorXd out;
  ApplyDebiasing(s, grads.gradients, grads.gradients.rowwise().sum(), weights,
                 out);
  return out;
}

}  // namespace

absl::Status PerLabelGradients::Validate() const {
  if (gradients.cols() < 2) {
    return absl::InvalidArgumentError("need gradients for at least 2 labels");
  }
  if (!(lipschitz_bound > 0.0)) {
    return absl::InvalidArgumentError("lipschitz_bound must be positive");
  }
  for (Eigen::Index k = 0; k < gradients.cols(); ++k) {
    const double norm = gradients.col(k).norm();
    if (!std::isfinite(norm) || norm > lipschitz_bound * (1.0 + 1e-9)) {
      return absl::InvalidArgumentError(
          absl::StrCat("gradient for label ", k + 1, " has norm ", norm,
                       " above the Lipschitz bound ", lipschitz_bound));
    }
  }
  return absl::OkStatus();
}

DebiasingWeights BernoulliSubsetWeights(double epsilon) {
  const double e = std::exp(epsilon);
  const double scale = 2.0 * (e + 1.0) / (e - 1.0);
  return {scale, -scale / (e + 1.0)};
}

absl::StatusOr<DebiasingWeights> DSubsetWeights(int num_labels,
                                                int subset_size,
                                                double epsilon) {
  const SubsetInclusion p = DSubsetInclusion(num_labels, subset_size, epsilon);
  const double gap = p.gamma - p.zeta;
  if (!(gap > 0.0)) {
    return absl::InternalError(
        absl::StrCat("gamma - zeta = ", gap, " is not positive"));
  }
  return DebiasingWeights{1.0 / gap, -p.zeta / gap};
}

DebiasingWeights KrrWeights(int num_labels, double epsilon) {
  const double e = std::exp(epsilon);
  return {(e + num_labels - 1.0) / (e - 1.0), -1.0 / (e - 1.0)};
}

absl::StatusOr<DebiasingWeights> WeightsFor(Mechanism mechanism,
                                            const MechanismParams& params) {
  if (absl::Status s = ValidateFor(mechanism, params); !s.ok()) return s;
  switch (mechanism) {
    case Mechanism::kBernoulliSubset:
      return BernoulliSubsetWeights(params.epsilon);
    case Mechanism::kDSubset:
      return DSubsetWeights(params.num_labels, *params.subset_size,
                            params.epsilon);
    case Mechanism::kKrr:
      return KrrWeights(params.num_labels, params.epsilon);
    case Mechanism::kDjw:
      break;
  }
  return absl::InvalidArgumentError("djw is not a subset estimator");
}

void ApplyDebiasing(const SanitizedSubset& s,
                    const Eigen::Ref<const Eigen::MatrixXd>& gradients,
                    const Eigen::VectorXd& column_sum,
                    const DebiasingWeights& weights, Eigen::VectorXd& out) {
  out.noalias() = weights.total_weight * column_sum;
  for (int k : s.members()) {
    out.noalias() += weights.member_weight * gradients.col(k - 1);
  }
}

absl::StatusOr<Eigen::VectorXd> SubsetGradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params) {
  if (absl::Status st =
          CheckEstimatorInput(Mechanism::kBernoulliSubset, s, grads, params);
      !st.ok()) {
    return st;
  }
  return Estimate(s, grads, BernoulliSubsetWeights(params.epsilon));
}

absl::StatusOr<Eigen::VectorXd> DSubsetGradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params) {
  if (absl::Status st =
          CheckEstimatorInput(Mechanism::kDSubset, s, grads, params);
      !st.ok()) {
    return st;
  }
  if (s.size() != *params.subset_size) {
    return absl::InvalidArgumentError(
        absl::StrCat("d-subset output has ", s.size(), " members, expected ",
                     *params.subset_size));
  }
  absl::StatusOr<DebiasingWeights> w = DSubsetWeights(
      params.num_labels, *params.subset_size, params.epsilon);
  if (!w.ok()) return w.status();
  return Estimate(s, grads, *w);
}

absl::StatusOr<Eigen::VectorXd> KrrGradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params) {
  if (absl::Status st = CheckEstimatorInput(Mechanism::kKrr, s, grads, params);
      !st.ok()) {
    return st;
  }
  if (s.size() != 1) {
    return absl::InvalidArgumentError("krr output must be a singleton");
  }
  return Estimate(s, grads, KrrWeights(params.num_labels, params.epsilon));
}

absl::StatusOr<Eigen::VectorXd> GradientEstimate(
    const SanitizedSubset& s, const PerLabelGradients& grads,
    const MechanismParams& params) {
  switch (s.tag()) {
    case Mechanism::kBernoulliSubset:
      return SubsetGradientEstimate(s, grads, params);
    case Mechanism::kDSubset:
      return DSubsetGradientEstimate(s, grads, params);
    case Mechanism::kKrr:
      return KrrGradientEstimate(s, grads, params);
    case Mechanism::kDjw:
      break;
  }
  return absl::InvalidArgumentError("djw is not a subset estimator");
}

double BernoulliSubsetSecondMomentBound(int num_labels, double epsilon,
                                        double lipschitz_bound) {
  const double e = std::exp(epsilon);
  return lipschitz_bound * lipschitz_bound *
         (1.0 + 4.0 * e * (num_labels + e) / ((e - 1.0) * (e - 1.0)));
}

double DSubsetSecondMomentBound(int num_labels, int subset_size,
                                double epsilon, double lipschitz_bound) {
  const double e = std::exp(epsilon);
  const double ratio =
      (e + static_cast<double>(num_labels) / subset_size) / (e - 1.0);
  return kDSubsetBoundConstant * ratio * ratio * subset_size *
         lipschitz_bound * lipschitz_bound;
}

double KrrSecondMomentClosedForm(Label y, const PerLabelGradients& grads,
                                 double epsilon) {
  // Reporting j yields m g_j + t G with G the column sum, so
  //   E||g_hat||^2 = m^2 sum_j p_j ||g_j||^2 + 2 m t <sum_j p_j g_j, G>
  //                  + t^2 ||G||^2.
  const int k = grads.num_labels();
  const DebiasingWeights w = KrrWeights(k, epsilon);
  const double keep = KrrKeepProbability(k, epsilon);
  const double flip = (1.0 - keep) / (k - 1);
  const Eigen::VectorXd total = grads.gradients.rowwise().sum();
  const Eigen::VectorXd weighted =
      flip * total + (keep - flip) * grads.gradients.col(y.value - 1);
  const double weighted_sq =
      flip * grads.gradients.colwise().squaredNorm().sum() +
      (keep - flip) * grads.gradients.col(y.value - 1).squaredNorm();
  return w.member_weight * w.member_weight * weighted_sq +
         2.0 * w.member_weight * w.total_weight * weighted.dot(total) +
         w.total_weight * w.total_weight * total.squaredNorm();
}

absl::StatusOr<MomentReport> EstimatorMomentsBruteForce(
    Mechanism mechanism, Label y, const PerLabelGradients& grads,
    const MechanismParams& params) {
  absl::StatusOr<DebiasingWeights> weights = WeightsFor(mechanism, params);
  if (!weights.ok()) return weights.status();
  if (absl::Status s = ValidateLabel(y, params.num_labels); !s.ok()) return s;
  if (grads.num_labels() != params.num_labels) {
    return absl::InvalidArgumentError(
        absl::StrCat("gradients cover ", grads.num_labels(),
                     " labels, params ", params.num_labels));
  }
  const int k = params.num_labels;
  const Eigen::VectorXd column_sum = grads.gradients.rowwise().sum();

  // Two labels other than y for the pairwise covariance term.
  int first = 0;
  int second = 0;
  for (int i = 1; i <= k && second == 0; ++i) {
    if (i == y.value) continue;
    (first == 0 ? first : second) = i;
  }
  const bool track_pair = mechanism == Mechanism::kDSubset && second != 0;

  CompensatedVectorSum mean(grads.dimension());
  CompensatedSum second_moment;
  CompensatedSum pair_probability;
  absl::Status error = absl::OkStatus();
  Eigen::VectorXd estimate;
  absl::Status visited =
      ForEachOutput(mechanism, params, [&](const SanitizedSubset& s) {
        if (!error.ok()) return;
        absl::StatusOr<double> p = Likelihood(mechanism, s, y, params);
        if (!p.ok()) {
          error = p.status();
          return;
        }
        ApplyDebiasing(s, grads.gradients, column_sum, *weights, estimate);
        mean.Add(*p * estimate);
        second_moment.Add(*p * estimate.squaredNorm());
        if (track_pair && s.Contains(first) && s.Contains(second)) {
          pair_probability.Add(*p);
        }
      });
  if (!visited.ok()) return visited;
  if (!error.ok()) return error;

  MomentReport report;
  report.mean = mean.value();
  report.second_moment = second_moment.value();
  report.mean_error =
      (report.mean - grads.gradients.col(y.value - 1)).cwiseAbs().maxCoeff();
  const double lipschitz = grads.lipschitz_bound;
  switch (mechanism) {
    case Mechanism::kBernoulliSubset:
      report.bound =
          BernoulliSubsetSecondMomentBound(k, params.epsilon, lipschitz);
      break;
    case Mechanism::kDSubset: {
      const int d = *params.subset_size;
      report.bound = DSubsetSecondMomentBound(k, d, params.epsilon, lipschitz);
      if (track_pair) {
        const double zeta = DSubsetInclusion(k, d, params.epsilon).zeta;
        report.pairwise_cov = pair_probability.value() - zeta * zeta;
      }
      break;
    }
    case Mechanism::kKrr:
      report.bound = KrrSecondMomentClosedForm(y, grads, params.epsilon);
      break;
    case Mechanism::kDjw:
      break;
  }
  return report;
}

}  // namespace labeldp
