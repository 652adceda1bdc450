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

// Experiment grid configuration.
//
// Config files are flat "key = value" text; '#' starts a comment and lists
// are comma-separated:
//
//   mechanism = bernoulli-subset, krr
//   epsilon = 0.5, 1, lnK      # lnK resolves to ln(K) per cell
//   k = 4, 16, 64
//   n = 100000
//   trials = 50
//   seed = 7
//   c_gamma = 0.25
//   d_override = 2
//   out = results.csv

#ifndef LABELDP_TOOLS_BENCH_EXPERIMENT_CONFIG_H_
#define LABELDP_TOOLS_BENCH_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "labeldp/mechanism_types.h"

namespace labeldp::bench {

// A privacy budget, either fixed or ln(K) of the cell it is used in.
struct EpsilonSpec {
  double value = 1.0;
  bool log_k = false;

  double Resolve(int num_labels) const;
  std::string ToString() const;
  static absl::StatusOr<EpsilonSpec> Parse(const std::string& text);
};

enum class GradientFamily { kRandom, kBasis, kZero };

struct ExperimentConfig {
  std::vector<Mechanism> mechanisms = {Mechanism::kBernoulliSubset,
                                       Mechanism::kDSubset, Mechanism::kKrr};
  std::vector<EpsilonSpec> epsilons = {{0.5}, {1.0}, {2.0}};
  std::vector<int> num_labels = {2, 4, 8};
  std::vector<int64_t> sample_sizes = {1000};
  int trials = 1;
  uint64_t seed = 0;
  double c_gamma = 0.25;
  std::string out;
  std::optional<int> d_override;

  // Monte Carlo draws behind empirical_excess_risk.
  int64_t risk_samples = 10000;
  // Random gradient sets per verify-estimators cell.
  int gradient_sets = 100;
  GradientFamily gradient_family = GradientFamily::kRandom;
  // When false, wall_time_ms is written as 0 so output bytes depend only on
  // the config.
  bool wall_time = true;
  int threads = 1;

  // Test hooks.
  // reduce-demo: "optimum" or "zero" replaces the trained w_hat.
  std::string inject;
  // verify-privacy: inflates one likelihood so the check must fail.
  bool corrupt_likelihood = false;

  // Subset size used for d-subset cells: d_override, else
  // ceil(K / (2 e^eps)).
  int SubsetSizeFor(int num_labels, double epsilon) const;

  // Checks value ranges and that every (K, d) pair is valid for d-subset.
  // Lists may be empty.
  absl::Status Validate() const;
};

// Applies one "key = value" setting.
absl::Status ApplySetting(ExperimentConfig& config, const std::string& key,
                          const std::string& value);

absl::StatusOr<ExperimentConfig> ParseConfigText(const std::string& text,
                                                 ExperimentConfig base = {});
absl::StatusOr<ExperimentConfig> ReadConfigFile(const std::string& path,
                                                ExperimentConfig base = {});

}  // namespace labeldp::bench

#endif  // LABELDP_TOOLS_BENCH_EXPERIMENT_CONFIG_H_
