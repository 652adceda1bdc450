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

#include "bench/commands.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "labeldp/estimation.h"
#include "labeldp/hard_instances.h"
#include "labeldp/mechanisms.h"
#include "labeldp/random.h"
#include "labeldp/sco.h"

namespace labeldp::bench {

namespace {

constexpr double kRatioTolerance = 1e-9;
constexpr double kUnbiasednessTolerance = 1e-9;
constexpr double kReductionTolerance = 1e-12;

std::string Num(double x) { return absl::StrFormat("%.17g", x); }

std::string SubsetColumn(const std::optional<int>& d) {
  return d.has_value() ? absl::StrCat(*d) : std::string();
}

// Writes `text` to config.out, or to `out` when no path is configured.
bool Emit(const ExperimentConfig& config, const std::string& text,
          std::ostream& out, std::ostream& err) {
  if (config.out.empty()) {
    out << text;
    return static_cast<bool>(out);
  }
  std::ofstream file(config.out, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << config.out << "\n";
    return false;
  }
  return true;
}

// Runs body(i) for i in [0, count) on `threads` workers and returns the first
// error in index order.
absl::Status ParallelFor(int64_t count, int threads,
                         const std::function<absl::Status(int64_t)>& body) {
  std::vector<absl::Status> status(count);
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (int64_t i = next++; i < count; i = next++) status[i] = body(i);
  };
  const int extra = std::max(0, std::min<int>(threads, count) - 1);
  std::vector<std::jthread> pool;
  pool.reserve(extra);
  for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

struct TrainedTrial {
  HardInstance instance;
  Eigen::VectorXd w_bar;
};

absl::StatusOr<TrainedTrial> TrainOnHardInstance(const GridCell& cell,
                                                 uint64_t seed,
                                                 double c_gamma) {
  absl::StatusOr<LabelDistribution> theta =
      MakeHardTheta(cell.num_labels, cell.n, cell.epsilon, std::nullopt,
                    c_gamma);
  if (!theta.ok()) return theta.status();
  absl::StatusOr<HardInstance> instance = MakeHardInstance(*theta);
  if (!instance.ok()) return instance.status();
  const Dataset data = SampleHardDataset(*instance, cell.n, seed);
  const LinearLabelLoss loss(cell.num_labels);
  TrainConfig train;
  train.mechanism = cell.mechanism;
  train.params = cell.params();
  train.domain = {cell.num_labels, 1.0};
  train.seed = seed;
  absl::StatusOr<TrainResult> result = Train(data, loss, train);
  if (!result.ok()) return result.status();
  return TrainedTrial{*std::move(instance),
                      std::move(result->averaged_iterate)};
}

absl::Status CellError(const GridCell& cell, const absl::Status& s) {
  return absl::Status(s.code(),
                      absl::StrCat("cell ", cell.Name(), ": ", s.message()));
}

}  // namespace

MechanismParams GridCell::params() const {
  return MechanismParams{epsilon, num_labels, subset_size};
}

std::string GridCell::Name() const {
  std::string name = absl::StrCat(MechanismName(mechanism), " K=", num_labels,
                                  " eps=", Num(epsilon), " n=", n);
  if (subset_size.has_value()) absl::StrAppend(&name, " d=", *subset_size);
  return name;
}

std::vector<GridCell> EnumerateCells(const ExperimentConfig& config) {
  std::vector<GridCell> cells;
  int64_t index = 0;
  for (Mechanism m : config.mechanisms) {
    for (int k : config.num_labels) {
      for (const EpsilonSpec& eps_spec : config.epsilons) {
        for (int64_t n : config.sample_sizes) {
          GridCell cell;
          cell.index = index++;
          cell.mechanism = m;
          cell.num_labels = k;
          cell.epsilon = eps_spec.Resolve(k);
          cell.n = n;
          if (m == Mechanism::kDSubset) {
            cell.subset_size = config.SubsetSizeFor(k, cell.epsilon);
          }
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

uint64_t TrialSeed(uint64_t master_seed, int64_t cell_index, int trial) {
  return DeriveSeed(master_seed, static_cast<uint64_t>(cell_index),
                    static_cast<uint64_t>(trial));
}

double TheoreticalBound(int num_labels, double epsilon, int64_t n) {
  // K e^eps / (e^eps - 1)^2 = K e^-eps / (1 - e^-eps)^2.
  const double d = -std::expm1(-epsilon);
  const double factor = num_labels * std::exp(-epsilon) / (d * d);
  return std::sqrt(std::max(factor, 1.0)) / std::sqrt(static_cast<double>(n));
}

std::string ResultCsvHeader() {
  return "mechanism,K,epsilon,n,d,trial,seed,empirical_excess_risk,"
         "closed_form_risk,theoretical_bound,wall_time_ms\n";
}

std::string FormatResultRow(const ResultRow& row) {
  return absl::StrCat(MechanismName(row.mechanism), ",", row.num_labels, ",",
                      Num(row.epsilon), ",", row.n, ",",
                      SubsetColumn(row.subset_size), ",", row.trial, ",",
                      row.seed, ",", Num(row.empirical_excess_risk), ",",
                      Num(row.closed_form_risk), ",",
                      Num(row.theoretical_bound), ",", Num(row.wall_time_ms),
                      "\n");
}

absl::StatusOr<ResultRow> RunSweepTrial(const GridCell& cell, int trial,
                                        const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.mechanism = cell.mechanism;
  row.num_labels = cell.num_labels;
  row.epsilon = cell.epsilon;
  row.n = cell.n;
  row.subset_size = cell.subset_size;
  row.trial = trial;
  row.seed = TrialSeed(config.seed, cell.index, trial);

  absl::StatusOr<TrainedTrial> trained =
      TrainOnHardInstance(cell, row.seed, config.c_gamma);
  if (!trained.ok()) return CellError(cell, trained.status());
  absl::StatusOr<double> closed =
      ClosedFormExcessRisk(trained->w_bar, trained->instance);
  if (!closed.ok()) return CellError(cell, closed.status());
  row.closed_form_risk = *closed;

  const LinearLabelLoss loss(cell.num_labels);
  RandomnessStream rng(row.seed, {0, Purpose::kRiskEvaluation});
  absl::StatusOr<RiskEstimate> empirical = ExcessRiskMonteCarlo(
      trained->w_bar, HardInstanceSampler(trained->instance), loss,
      config.risk_samples, trained->instance.optimum, rng);
  if (!empirical.ok()) return CellError(cell, empirical.status());
  row.empirical_excess_risk = empirical->mean;
  row.empirical_standard_error = empirical->standard_error;
  row.theoretical_bound = TheoreticalBound(cell.num_labels, cell.epsilon,
                                           cell.n);
  if (config.wall_time) {
    row.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return row;
}

absl::StatusOr<std::vector<ResultRow>> RunSweepGrid(
    const ExperimentConfig& config) {
  const std::vector<GridCell> cells = EnumerateCells(config);
  const int64_t total = static_cast<int64_t>(cells.size()) * config.trials;
  std::vector<ResultRow> rows(total);
  absl::Status status =
      ParallelFor(total, config.threads, [&](int64_t i) -> absl::Status {
        absl::StatusOr<ResultRow> row = RunSweepTrial(
            cells[i / config.trials], static_cast<int>(i % config.trials),
            config);
        if (!row.ok()) return row.status();
        rows[i] = *std::move(row);
        return absl::OkStatus();
      });
  if (!status.ok()) return status;
  return rows;
}

std::vector<PrivacyCell> VerifyPrivacyGrid(const ExperimentConfig& config) {
  std::vector<PrivacyCell> report;
  ExperimentConfig grid = config;
  grid.sample_sizes = {1};
  for (const GridCell& cell : EnumerateCells(grid)) {
    PrivacyCell entry;
    entry.cell = cell;
    if (cell.mechanism == Mechanism::kDjw) {
      entry.skipped = true;
      entry.note = "djw has no enumerable output space";
      report.push_back(entry);
      continue;
    }
    const MechanismParams params = cell.params();
    LikelihoodFunction likelihood =
        [&](const SanitizedSubset& s, Label y) -> absl::StatusOr<double> {
      absl::StatusOr<double> p = Likelihood(cell.mechanism, s, y, params);
      if (p.ok() && config.corrupt_likelihood && y.value == 1 &&
          s.Contains(1)) {
        return *p * 1.5;
      }
      return p;
    };
    absl::StatusOr<double> ratio =
        MaxLikelihoodRatio(cell.mechanism, params, likelihood);
    if (!ratio.ok()) {
      entry.skipped =
          ratio.status().code() == absl::StatusCode::kResourceExhausted;
      entry.note = std::string(ratio.status().message());
    } else {
      entry.max_ratio = *ratio;
      entry.passed =
          *ratio <= std::exp(cell.epsilon) * (1.0 + kRatioTolerance);
    }
    report.push_back(entry);
  }
  return report;
}

std::vector<Eigen::MatrixXd> GradientSetsFor(const GridCell& cell,
                                             const ExperimentConfig& config) {
  const int k = cell.num_labels;
  switch (config.gradient_family) {
    case GradientFamily::kBasis:
      return {Eigen::MatrixXd::Identity(k, k)};
    case GradientFamily::kZero:
      return {Eigen::MatrixXd::Zero(k, k)};
    case GradientFamily::kRandom:
      break;
  }
  std::vector<Eigen::MatrixXd> sets;
  sets.reserve(config.gradient_sets);
  for (int set = 0; set < config.gradient_sets; ++set) {
    RandomnessStream rng(TrialSeed(config.seed, cell.index, set),
                         {0, Purpose::kTesting});
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(k, k);
    for (int col = 0; col < k; ++col) {
      for (int row = 0; row < k; ++row) g(row, col) = normal(rng);
      // Radius uniform in [0, 1] so the Lipschitz bound 1 holds.
      g.col(col) *= rng.UniformDouble() / g.col(col).norm();
    }
    sets.push_back(std::move(g));
  }
  return sets;
}

absl::StatusOr<std::vector<MomentRecord>> VerifyEstimatorsGrid(
    const ExperimentConfig& config) {
  std::vector<MomentRecord> report;
  ExperimentConfig grid = config;
  grid.sample_sizes = {1};
  for (const GridCell& cell : EnumerateCells(grid)) {
    MomentRecord record;
    record.cell = cell;
    if (cell.mechanism == Mechanism::kDjw) {
      record.skipped = true;
      record.note = "djw is checked by sampling, not enumeration";
      report.push_back(record);
      continue;
    }
    double worst_excess = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (Eigen::MatrixXd& g : GradientSetsFor(cell, config)) {
      PerLabelGradients grads{std::move(g), 1.0};
      for (int y = 1; y <= cell.num_labels; ++y) {
        absl::StatusOr<MomentReport> m = EstimatorMomentsBruteForce(
            cell.mechanism, Label{y}, grads, cell.params());
        if (!m.ok()) {
          if (m.status().code() == absl::StatusCode::kResourceExhausted) {
            record.skipped = true;
            record.note = std::string(m.status().message());
            break;
          }
          return CellError(cell, m.status());
        }
        record.mean_error = std::max(record.mean_error, m->mean_error);
        const double excess = m->second_moment - m->bound;
        if (first || excess > worst_excess) {
          worst_excess = excess;
          record.second_moment = m->second_moment;
          record.bound = m->bound;
          first = false;
        }
      }
      if (record.skipped) break;
    }
    if (!record.skipped) {
      record.passed =
          record.mean_error <= kUnbiasednessTolerance &&
          worst_excess <= kUnbiasednessTolerance *
                              std::max(1.0, std::abs(record.bound));
    }
    report.push_back(record);
  }
  return report;
}

absl::StatusOr<std::vector<ReductionRow>> ReduceDemoGrid(
    const ExperimentConfig& config) {
  const std::vector<GridCell> cells = EnumerateCells(config);
  const int64_t total = static_cast<int64_t>(cells.size()) * config.trials;
  std::vector<ReductionRow> rows(total);
  absl::Status status =
      ParallelFor(total, config.threads, [&](int64_t i) -> absl::Status {
        const GridCell& cell = cells[i / config.trials];
        ReductionRow& row = rows[i];
        row.cell = cell;
        row.trial = static_cast<int>(i % config.trials);
        row.seed = TrialSeed(config.seed, cell.index, row.trial);
        absl::StatusOr<TrainedTrial> trained =
            TrainOnHardInstance(cell, row.seed, config.c_gamma);
        if (!trained.ok()) return CellError(cell, trained.status());
        const HardInstance& instance = trained->instance;
        Eigen::VectorXd w_hat = trained->w_bar;
        if (config.inject == "optimum") {
          w_hat = instance.direction;
        } else if (config.inject == "zero") {
          w_hat.setZero();
        }
        const Eigen::VectorXd theta_hat = ReduceToThetaHat(
            w_hat, cell.num_labels, instance.distribution.gamma);
        row.alpha = instance.alpha;
        row.theta_error =
            (theta_hat - instance.distribution.probabilities).norm();
        row.scaled_w_error = instance.alpha * (w_hat - instance.direction).norm();
        return absl::OkStatus();
      });
  if (!status.ok()) return status;
  return rows;
}

int RunVerifyPrivacy(const ExperimentConfig& config, std::ostream& out,
                     std::ostream& err) {
  std::string csv = "mechanism,K,d,epsilon,max_ratio,exp_epsilon,status\n";
  int failures = 0;
  for (const PrivacyCell& entry : VerifyPrivacyGrid(config)) {
    const GridCell& cell = entry.cell;
    const char* status =
        entry.skipped ? "skipped" : (entry.passed ? "pass" : "fail");
    if (entry.skipped) {
      err << "warning: skipping " << cell.Name() << ": " << entry.note
          << "\n";
    } else if (!entry.note.empty()) {
      ++failures;
      err << "FAIL " << cell.Name() << ": " << entry.note << "\n";
    } else if (!entry.passed) {
      ++failures;
      err << "FAIL " << cell.Name() << ": max ratio " << Num(entry.max_ratio)
          << " > e^eps = " << Num(std::exp(cell.epsilon)) << "\n";
    }
    absl::StrAppend(&csv, MechanismName(cell.mechanism), ",", cell.num_labels,
                    ",", SubsetColumn(cell.subset_size), ",",
                    Num(cell.epsilon), ",",
                    entry.skipped ? "" : Num(entry.max_ratio), ",",
                    Num(std::exp(cell.epsilon)), ",", status, "\n");
  }
  if (!Emit(config, csv, out, err)) return kExitFailure;
  return failures == 0 ? kExitOk : kExitFailure;
}

int RunVerifyEstimators(const ExperimentConfig& config, std::ostream& out,
                        std::ostream& err) {
  absl::StatusOr<std::vector<MomentRecord>> report =
      VerifyEstimatorsGrid(config);
  if (!report.ok()) {
    err << "error: " << report.status().message() << "\n";
    return kExitFailure;
  }
  std::string csv = "mechanism,K,d,epsilon,second_moment,bound,mean_error\n";
  int failures = 0;
  for (const MomentRecord& record : *report) {
    const GridCell& cell = record.cell;
    if (record.skipped) {
      err << "warning: skipping " << cell.Name() << ": " << record.note
          << "\n";
      continue;
    }
    if (!record.passed) {
      ++failures;
      err << "FAIL " << cell.Name() << ": mean_error "
          << Num(record.mean_error) << ", second moment "
          << Num(record.second_moment) << " vs bound " << Num(record.bound)
          << "\n";
    }
    absl::StrAppend(&csv, MechanismName(cell.mechanism), ",", cell.num_labels,
                    ",", SubsetColumn(cell.subset_size), ",",
                    Num(cell.epsilon), ",", Num(record.second_moment), ",",
                    Num(record.bound), ",", Num(record.mean_error), "\n");
  }
  if (!Emit(config, csv, out, err)) return kExitFailure;
  return failures == 0 ? kExitOk : kExitFailure;
}

int RunSweep(const ExperimentConfig& config, std::ostream& out,
             std::ostream& err) {
  absl::StatusOr<std::vector<ResultRow>> rows = RunSweepGrid(config);
  if (!rows.ok()) {
    err << "error: " << rows.status().message() << "\n";
    return kExitFailure;
  }
  std::string csv = ResultCsvHeader();
  for (const ResultRow& row : *rows) absl::StrAppend(&csv, FormatResultRow(row));
  return Emit(config, csv, out, err) ? kExitOk : kExitFailure;
}

int RunReduceDemo(const ExperimentConfig& config, std::ostream& out,
                  std::ostream& err) {
  for (int k : config.num_labels) {
    if (k % 2 != 0) {
      err << "error: reduce-demo needs even K, got " << k << "\n";
      return kExitUsage;
    }
  }
  absl::StatusOr<std::vector<ReductionRow>> rows = ReduceDemoGrid(config);
  if (!rows.ok()) {
    err << "error: " << rows.status().message() << "\n";
    return kExitFailure;
  }
  std::string csv =
      "mechanism,K,epsilon,n,trial,seed,alpha,theta_error,scaled_w_error\n";
  int failures = 0;
  for (const ReductionRow& row : *rows) {
    if (std::abs(row.theta_error - row.scaled_w_error) > kReductionTolerance) {
      ++failures;
      err << "FAIL " << row.cell.Name() << " trial " << row.trial
          << ": |theta_hat - theta| = " << Num(row.theta_error)
          << " but alpha |w_hat - b| = " << Num(row.scaled_w_error) << "\n";
    }
    absl::StrAppend(&csv, MechanismName(row.cell.mechanism), ",",
                    row.cell.num_labels, ",", Num(row.cell.epsilon), ",",
                    row.cell.n, ",", row.trial, ",", row.seed, ",",
                    Num(row.alpha), ",", Num(row.theta_error), ",",
                    Num(row.scaled_w_error), "\n");
  }
  if (!Emit(config, csv, out, err)) return kExitFailure;
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace labeldp::bench
