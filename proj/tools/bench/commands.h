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

#ifndef LABELDP_TOOLS_BENCH_COMMANDS_H_
#define LABELDP_TOOLS_BENCH_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "bench/experiment_config.h"
#include "labeldp/mechanism_types.h"

namespace labeldp::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// One (mechanism, K, eps, n) point of the grid. Cells are numbered in grid
// order: mechanism, then K, then eps, then n.
struct GridCell {
  int64_t index = 0;
  Mechanism mechanism = Mechanism::kBernoulliSubset;
  int num_labels = 2;
  double epsilon = 1.0;
  int64_t n = 1;
  // Set for d-subset cells only.
  std::optional<int> subset_size;

  MechanismParams params() const;
  std::string Name() const;
};

std::vector<GridCell> EnumerateCells(const ExperimentConfig& config);

uint64_t TrialSeed(uint64_t master_seed, int64_t cell_index, int trial);

// sqrt(max{K e^eps / (e^eps - 1)^2, 1}) / sqrt(n), with R = L = 1.
double TheoreticalBound(int num_labels, double epsilon, int64_t n);

struct ResultRow {
  Mechanism mechanism = Mechanism::kBernoulliSubset;
  int num_labels = 0;
  double epsilon = 0.0;
  int64_t n = 0;
  std::optional<int> subset_size;
  int trial = 0;
  uint64_t seed = 0;
  double empirical_excess_risk = 0.0;
  double empirical_standard_error = 0.0;
  double closed_form_risk = 0.0;
  double theoretical_bound = 0.0;
  double wall_time_ms = 0.0;
};

std::string ResultCsvHeader();
std::string FormatResultRow(const ResultRow& row);

// Builds the cell's hard instance, trains on a fresh sample and scores the
// averaged iterate.
absl::StatusOr<ResultRow> RunSweepTrial(const GridCell& cell, int trial,
                                        const ExperimentConfig& config);
// All rows in grid order. Uses config.threads workers.
absl::StatusOr<std::vector<ResultRow>> RunSweepGrid(
    const ExperimentConfig& config);

struct PrivacyCell {
  GridCell cell;
  double max_ratio = 0.0;
  bool skipped = false;
  bool passed = false;
  std::string note;
};

std::vector<PrivacyCell> VerifyPrivacyGrid(const ExperimentConfig& config);

struct MomentRecord {
  GridCell cell;
  // Worst case over gradient sets and true labels.
  double second_moment = 0.0;
  double bound = 0.0;
  double mean_error = 0.0;
  bool skipped = false;
  bool passed = false;
  std::string note;
};

// Gradient sets used for a verify-estimators cell, each p x K with p = K.
std::vector<Eigen::MatrixXd> GradientSetsFor(const GridCell& cell,
                                             const ExperimentConfig& config);
absl::StatusOr<std::vector<MomentRecord>> VerifyEstimatorsGrid(
    const ExperimentConfig& config);

struct ReductionRow {
  GridCell cell;
  int trial = 0;
  uint64_t seed = 0;
  double alpha = 0.0;
  double theta_error = 0.0;
  double scaled_w_error = 0.0;
};

absl::StatusOr<std::vector<ReductionRow>> ReduceDemoGrid(
    const ExperimentConfig& config);

// Subcommands. CSV goes to config.out when set, else to `out`; diagnostics
// go to `err`. Return values are process exit codes.
int RunVerifyPrivacy(const ExperimentConfig& config, std::ostream& out,
                     std::ostream& err);
int RunVerifyEstimators(const ExperimentConfig& config, std::ostream& out,
                        std::ostream& err);
int RunSweep(const ExperimentConfig& config, std::ostream& out,
             std::ostream& err);
int RunReduceDemo(const ExperimentConfig& config, std::ostream& out,
                  std::ostream& err);

}  // namespace labeldp::bench

#endif  // LABELDP_TOOLS_BENCH_COMMANDS_H_
