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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "labeldp/estimation.h"
#include "labeldp/mechanisms.h"
#include "labeldp/vector_randomizer.h"

namespace labeldp {

namespace {

// Fills `out` with the step direction for step t (0-based) at iterate w.
using DirectionFunction = std::function<absl::Status(
    size_t, const Eigen::VectorXd&, Eigen::VectorXd&)>;

absl::Status CheckFeatureId(FeatureId id, const FeatureTable& features) {
  if (id < 0 || static_cast<size_t>(id) >= features.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "feature id ", id, " outside table of ", features.size()));
  }
  return absl::OkStatus();
}

absl::Status CheckSetup(const LossSpec& loss, const TrainConfig& config,
                        size_t num_steps) {
  if (num_steps == 0) return absl::InvalidArgumentError("empty dataset");
  if (absl::Status s = ValidateFor(config.mechanism, config.params); !s.ok()) {
    return s;
  }
  if (absl::Status s = config.domain.Validate(); !s.ok()) return s;
  if (loss.num_labels() != config.params.num_labels) {
    return absl::InvalidArgumentError(
        absl::StrCat("loss has ", loss.num_labels(), " labels, params ",
                     config.params.num_labels));
  }
  if (loss.dimension() != config.domain.dimension) {
    return absl::InvalidArgumentError(
        absl::StrCat("loss dimension ", loss.dimension(),
                     " does not match domain dimension ",
                     config.domain.dimension));
  }
  if (config.initial.has_value()) {
    if (config.initial->size() != config.domain.dimension) {
      return absl::InvalidArgumentError("initial iterate has wrong dimension");
    }
    if (!config.initial->allFinite() ||
        config.initial->norm() > config.domain.radius * (1.0 + 1e-12)) {
      return absl::InvalidArgumentError(
          "initial iterate lies outside the domain");
    }
  }
  return absl::OkStatus();
}

std::vector<size_t> VisitOrder(size_t n, const TrainConfig& config) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  if (config.shuffle) {
    RandomnessStream rng(config.seed, {0, Purpose::kShuffle});
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

// Projected SGD over `n` steps. The direction for step t comes from
// `direction`; the result carries the averaged iterate and step statistics.
absl::StatusOr<TrainResult> RunProjectedSgd(size_t n,
                                            const LossSpec& loss,
                                            const TrainConfig& config,
                                            const DirectionFunction& direction,
                                            const StepObserver& observer) {
  absl::StatusOr<double> eta =
      LearningRate(config.domain.radius, loss.lipschitz_bound(),
                   static_cast<int64_t>(n), config.params.num_labels,
                   config.params.epsilon);
  if (!eta.ok()) return eta.status();

  const int p = config.domain.dimension;
  const double radius = config.domain.radius;
  Eigen::VectorXd w = config.initial.value_or(Eigen::VectorXd::Zero(p));
  Eigen::VectorXd average = w;
  Eigen::VectorXd g(p);
  double norm_sum = 0.0;
  double norm_sq_sum = 0.0;
  double norm_max = 0.0;

  for (size_t t = 0; t < n; ++t) {
    if (absl::Status s = direction(t, w, g); !s.ok()) return s;
    const double gnorm = g.norm();
    norm_sum += gnorm;
    norm_sq_sum += gnorm * gnorm;
    norm_max = std::max(norm_max, gnorm);

    w.noalias() -= *eta * g;
    const double wnorm = w.norm();
    if (!std::isfinite(wnorm)) {
      return absl::InternalError(absl::StrCat("iterate diverged at step ",
                                              t + 1));
    }
    if (wnorm > radius) w *= radius / wnorm;
    average += (w - average) / static_cast<double>(t + 1);
    if (observer) observer(static_cast<int64_t>(t + 1), w);
  }

  TrainResult result;
  result.averaged_iterate = std::move(average);
  result.trajectory.mean = norm_sum / n;
  result.trajectory.mean_squared = norm_sq_sum / n;
  result.trajectory.max = norm_max;
  result.mechanism = config.mechanism;
  result.seed = config.seed;
  result.learning_rate = *eta;
  result.num_steps = static_cast<int64_t>(n);
  return result;
}

absl::StatusOr<TrainResult> TrainInteractiveDjw(
    const FeatureTable& features, std::span<const FeatureId> feature_ids,
    LabelStore& labels, const LossSpec& loss, const TrainConfig& config,
    const StepObserver& observer) {
  const int k = config.params.num_labels;
  const double l1_bound = loss.lipschitz_bound() * std::sqrt(k);
  const std::vector<size_t> order = VisitOrder(feature_ids.size(), config);
  Eigen::MatrixXd grads;
  auto direction = [&](size_t t, const Eigen::VectorXd& w,
                       Eigen::VectorXd& out) -> absl::Status {
    const size_t i = order[t];
    const Feature& x = features[feature_ids[i]];
    const Label y = labels.Read(i);
    if (absl::Status s = ValidateLabel(y, k); !s.ok()) return s;
    loss.PerLabelGradients(w, x, grads);
    const Eigen::MatrixXd basis = OrthonormalSpanBasis(grads);
    RandomnessStream rng(config.seed, {i, Purpose::kVectorRandomization});
    absl::StatusOr<Eigen::VectorXd> noisy = DjwVectorRandomize(
        grads.col(y.value - 1), basis, l1_bound, config.params.epsilon, rng);
    if (!noisy.ok()) return noisy.status();
    out = *std::move(noisy);
    return absl::OkStatus();
  };
  absl::StatusOr<TrainResult> result = RunProjectedSgd(
      feature_ids.size(), loss, config, direction, observer);
  labels.Seal();
  if (!result.ok()) return result;
  result->non_interactive = false;
  result->l1_bound = l1_bound;
  return result;
}

}  // namespace

absl::Status ParameterDomain::Validate() const {
  if (dimension < 1) {
    return absl::InvalidArgumentError("domain dimension must be >= 1");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError("domain radius must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<Eigen::VectorXd> ProjectBall(const Eigen::VectorXd& w,
                                            const ParameterDomain& domain) {
  if (!w.allFinite()) {
    return absl::InvalidArgumentError("cannot project a non-finite vector");
  }
  const double norm = w.norm();
  if (norm <= domain.radius) return w;
  return Eigen::VectorXd(w * (domain.radius / norm));
}

absl::StatusOr<double> LearningRate(double radius, double lipschitz,
                                    int64_t num_steps, int num_labels,
                                    double epsilon) {
  if (!(radius > 0.0) || !(lipschitz > 0.0) || num_steps < 1 ||
      num_labels < 2 || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "learning rate needs R, L, eps > 0, n >= 1, K >= 2; got R=", radius,
        " L=", lipschitz, " n=", num_steps, " K=", num_labels,
        " eps=", epsilon));
  }
  // (e^eps - 1)^2 / ((K + e^eps) e^eps) written in terms of e^-eps so that
  // neither small nor large eps loses precision or overflows.
  const double shrink = -std::expm1(-epsilon);  // (e^eps - 1) / e^eps
  const double ratio =
      shrink * shrink / (num_labels * std::exp(-epsilon) + 1.0);
  return (radius / lipschitz) *
         std::sqrt(ratio / (2.0 * static_cast<double>(num_steps)));
}

absl::StatusOr<std::vector<PrivatizedRecord>> PrivatizeLabels(
    std::span<const FeatureId> feature_ids, LabelStore& labels,
    Mechanism mechanism, const MechanismParams& params, uint64_t seed) {
  if (feature_ids.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(feature_ids.size(), " features but ", labels.size(),
                     " labels"));
  }
  std::vector<PrivatizedRecord> records;
  records.reserve(feature_ids.size());
  for (size_t i = 0; i < feature_ids.size(); ++i) {
    RandomnessStream rng(seed, {i, Purpose::kLabelRandomization});
    absl::StatusOr<SanitizedSubset> s =
        Randomize(mechanism, labels.Read(i), params, rng);
    if (!s.ok()) {
      return absl::Status(s.status().code(),
                          absl::StrCat("user ", i, ": ", s.status().message()));
    }
    records.push_back({feature_ids[i], *std::move(s)});
  }
  return records;
}

absl::StatusOr<TrainResult> LearnFromPrivatized(
    const FeatureTable& features, std::span<const PrivatizedRecord> records,
    const LossSpec& loss, const TrainConfig& config,
    const StepObserver& observer) {
  if (config.mechanism == Mechanism::kDjw) {
    return absl::InvalidArgumentError(
        "djw has no separate randomization stage");
  }
  if (absl::Status s = CheckSetup(loss, config, records.size()); !s.ok()) {
    return s;
  }
  for (const PrivatizedRecord& r : records) {
    if (absl::Status s = CheckFeatureId(r.feature_id, features); !s.ok()) {
      return s;
    }
    if (r.subset.tag() != config.mechanism ||
        r.subset.num_labels() != config.params.num_labels) {
      return absl::InvalidArgumentError(
          "record was not produced by the configured mechanism");
    }
  }
  absl::StatusOr<DebiasingWeights> weights =
      WeightsFor(config.mechanism, config.params);
  if (!weights.ok()) return weights.status();

  const std::vector<size_t> order = VisitOrder(records.size(), config);
  Eigen::MatrixXd grads;
  Eigen::VectorXd column_sum;
  auto direction = [&](size_t t, const Eigen::VectorXd& w,
                       Eigen::VectorXd& out) -> absl::Status {
    const PrivatizedRecord& record = records[order[t]];
    loss.PerLabelGradients(w, features[record.feature_id], grads);
    column_sum.noalias() = grads.rowwise().sum();
    ApplyDebiasing(record.subset, grads, column_sum, *weights, out);
    return absl::OkStatus();
  };
  return RunProjectedSgd(records.size(), loss, config, direction, observer);
}

absl::StatusOr<TrainResult> Train(const FeatureTable& features,
                                  std::span<const FeatureId> feature_ids,
                                  LabelStore& labels, const LossSpec& loss,
                                  const TrainConfig& config,
                                  const StepObserver& observer) {
  if (absl::Status s = CheckSetup(loss, config, feature_ids.size()); !s.ok()) {
    return s;
  }
  if (feature_ids.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(feature_ids.size(), " features but ", labels.size(),
                     " labels"));
  }
  for (FeatureId id : feature_ids) {
    if (absl::Status s = CheckFeatureId(id, features); !s.ok()) return s;
  }
  if (config.mechanism == Mechanism::kDjw) {
    return TrainInteractiveDjw(features, feature_ids, labels, loss, config,
                               observer);
  }
  absl::StatusOr<std::vector<PrivatizedRecord>> records = PrivatizeLabels(
      feature_ids, labels, config.mechanism, config.params, config.seed);
  labels.Seal();
  if (!records.ok()) return records.status();
  return LearnFromPrivatized(features, *records, loss, config, observer);
}

absl::StatusOr<TrainResult> Train(const Dataset& data, const LossSpec& loss,
                                  const TrainConfig& config,
                                  const StepObserver& observer) {
  std::vector<FeatureId> ids;
  ids.reserve(data.points.size());
  for (const DataPoint& point : data.points) ids.push_back(point.feature_id);
  DatasetLabelStore labels(data.points);
  return Train(data.features, ids, labels, loss, config, observer);
}

absl::StatusOr<TrainResult> TrainNonPrivate(const Dataset& data,
                                            const LossSpec& loss,
                                            const TrainConfig& config,
                                            const StepObserver& observer) {
  if (absl::Status s = CheckSetup(loss, config, data.points.size()); !s.ok()) {
    return s;
  }
  for (const DataPoint& point : data.points) {
    if (absl::Status s = CheckFeatureId(point.feature_id, data.features);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = ValidateLabel(point.label, config.params.num_labels);
        !s.ok()) {
      return s;
    }
  }
  const std::vector<size_t> order = VisitOrder(data.points.size(), config);
  auto direction = [&](size_t t, const Eigen::VectorXd& w,
                       Eigen::VectorXd& out) -> absl::Status {
    const DataPoint& point = data.points[order[t]];
    out.resize(w.size());
    loss.Gradient(w, data.features[point.feature_id], point.label, out);
    return absl::OkStatus();
  };
  return RunProjectedSgd(data.points.size(), loss, config, direction,
                         observer);
}

absl::StatusOr<RiskEstimate> ExcessRiskMonteCarlo(
    const Eigen::VectorXd& w, const ExampleSampler& sampler,
    const LossSpec& loss, int64_t num_samples,
    const Eigen::VectorXd& reference_w, RandomnessStream& rng) {
  if (num_samples < 1) {
    return absl::InvalidArgumentError("num_samples must be >= 1");
  }
  if (w.size() != loss.dimension() || reference_w.size() != loss.dimension()) {
    return absl::InvalidArgumentError("parameter dimension mismatch");
  }
  // Welford's running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (int64_t i = 1; i <= num_samples; ++i) {
    const LabeledExample z = sampler(rng);
    const double diff = loss.Value(w, z.feature, z.label) -
                        loss.Value(reference_w, z.feature, z.label);
    const double delta = diff - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (diff - mean);
  }
  RiskEstimate estimate;
  estimate.mean = mean;
  estimate.num_samples = num_samples;
  estimate.standard_error =
      num_samples > 1
          ? std::sqrt(m2 / static_cast<double>(num_samples - 1) /
                      static_cast<double>(num_samples))
          : 0.0;
  return estimate;
}

}  // namespace labeldp
