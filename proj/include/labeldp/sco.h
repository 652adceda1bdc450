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

// Projected SGD under local label differential privacy.
//
// Training runs in two stages. In the randomization stage every user's label
// is read exactly once and replaced by a SanitizedSubset drawn from that
// user's own randomness stream. The learning stage only ever sees
// (feature id, SanitizedSubset) records: it evaluates the loss gradient at
// every label, forms the mechanism's unbiased estimate g_hat_t and takes a
// projected step
//
//   w_t = Proj(w_{t-1} - eta * g_hat_t),
//   eta = (R/L) sqrt((e^eps - 1)^2 / (2 n (K + e^eps) e^eps)),
//
// returning the average of w_1..w_n. Each record is used once, in order.
//
// The "djw" mechanism cannot be split this way: it randomizes the gradient at
// the true label in the span of the per-label gradients at w_{t-1}, so the
// label of user t is read at step t. Results of such runs carry
// non_interactive = false.

#ifndef LABELDP_SCO_H_
#define LABELDP_SCO_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "labeldp/loss.h"
#include "labeldp/mechanism_types.h"
#include "labeldp/random.h"

namespace labeldp {

// Euclidean ball of `radius` centered at the origin.
struct ParameterDomain {
  int dimension = 1;
  double radius = 1.0;

  absl::Status Validate() const;
};

// Returns w when ||w|| <= R, else w * R / ||w||. Non-finite input is an
// error.
absl::StatusOr<Eigen::VectorXd> ProjectBall(const Eigen::VectorXd& w,
                                            const ParameterDomain& domain);

absl::StatusOr<double> LearningRate(double radius, double lipschitz,
                                    int64_t num_steps, int num_labels,
                                    double epsilon);

// Index into a FeatureTable.
using FeatureId = int64_t;
using FeatureTable = std::vector<Feature>;

struct DataPoint {
  FeatureId feature_id = 0;
  Label label;
};

struct Dataset {
  FeatureTable features;
  std::vector<DataPoint> points;
};

// Source of raw labels. Training calls Seal() once it will not read any more
// labels.
class LabelStore {
 public:
  virtual ~LabelStore() = default;
  virtual size_t size() const = 0;
  virtual Label Read(size_t index) = 0;
  virtual void Seal() {}
};

class DatasetLabelStore final : public LabelStore {
 public:
  explicit DatasetLabelStore(std::span<const DataPoint> points)
      : points_(points) {}
  size_t size() const override { return points_.size(); }
  Label Read(size_t index) override { return points_[index].label; }

 private:
  std::span<const DataPoint> points_;
};

// What a user sends to the analyzer.
struct PrivatizedRecord {
  FeatureId feature_id = 0;
  SanitizedSubset subset;
};

// Randomization stage. User i draws from
// RandomnessStream(seed, {i, Purpose::kLabelRandomization}).
absl::StatusOr<std::vector<PrivatizedRecord>> PrivatizeLabels(
    std::span<const FeatureId> feature_ids, LabelStore& labels,
    Mechanism mechanism, const MechanismParams& params, uint64_t seed);

struct TrainConfig {
  Mechanism mechanism = Mechanism::kBernoulliSubset;
  MechanismParams params;
  ParameterDomain domain;
  uint64_t seed = 0;
  // Defaults to the origin.
  std::optional<Eigen::VectorXd> initial;
  // Visit records in a seeded random order instead of input order.
  bool shuffle = false;
};

struct GradientNormSummary {
  double mean = 0.0;
  double max = 0.0;
  double mean_squared = 0.0;
};

struct TrainResult {
  Eigen::VectorXd averaged_iterate;
  GradientNormSummary trajectory;
  Mechanism mechanism = Mechanism::kBernoulliSubset;
  uint64_t seed = 0;
  double learning_rate = 0.0;
  int64_t num_steps = 0;
  bool non_interactive = true;
  // djw only: the l1 bound L * sqrt(K) given to the vector randomizer.
  std::optional<double> l1_bound;
};

// Called after every update with the step index t (1-based) and w_t.
using StepObserver = std::function<void(int64_t, const Eigen::VectorXd&)>;

// Learning stage. Has no access to raw labels.
absl::StatusOr<TrainResult> LearnFromPrivatized(
    const FeatureTable& features, std::span<const PrivatizedRecord> records,
    const LossSpec& loss, const TrainConfig& config,
    const StepObserver& observer = {});

absl::StatusOr<TrainResult> Train(const FeatureTable& features,
                                  std::span<const FeatureId> feature_ids,
                                  LabelStore& labels, const LossSpec& loss,
                                  const TrainConfig& config,
                                  const StepObserver& observer = {});
absl::StatusOr<TrainResult> Train(const Dataset& data, const LossSpec& loss,
                                  const TrainConfig& config,
                                  const StepObserver& observer = {});

// Same loop with the exact gradient at the true label, the same learning
// rate formula and the same visiting order. Reference point for private
// runs.
absl::StatusOr<TrainResult> TrainNonPrivate(const Dataset& data,
                                            const LossSpec& loss,
                                            const TrainConfig& config,
                                            const StepObserver& observer = {});

struct LabeledExample {
  Feature feature;
  Label label;
};
using ExampleSampler = std::function<LabeledExample(RandomnessStream&)>;

struct RiskEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int64_t num_samples = 0;
};

// Mean of l(w, z) - l(reference_w, z) over num_samples i.i.d. draws z.
absl::StatusOr<RiskEstimate> ExcessRiskMonteCarlo(
    const Eigen::VectorXd& w, const ExampleSampler& sampler,
    const LossSpec& loss, int64_t num_samples,
    const Eigen::VectorXd& reference_w, RandomnessStream& rng);

}  // namespace labeldp

#endif  // LABELDP_SCO_H_
