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

#include "labeldp/hard_instances.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace labeldp {

double HardGamma(int num_labels, int64_t n, double epsilon, double c_gamma) {
  const double em1 = std::expm1(epsilon);
  const double scale = c_gamma * std::sqrt(std::exp(epsilon) / (em1 * em1) /
                                           static_cast<double>(n));
  return std::min(1.0 / (2.0 * num_labels), scale);
}

std::vector<bool> AlternatingSignPattern(int num_labels) {
  std::vector<bool> pattern(num_labels);
  for (int i = 0; i < num_labels; ++i) pattern[i] = (i % 2 == 0);
  return pattern;
}

std::vector<bool> RandomBalancedSignPattern(int num_labels, uint64_t seed) {
  std::vector<bool> pattern(num_labels, false);
  std::fill(pattern.begin(), pattern.begin() + num_labels / 2, true);
  RandomnessStream rng(seed, {0, Purpose::kSignPattern});
  // Fisher-Yates with the stream's own unbiased integer draws.
  for (int i = num_labels - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.UniformInt(i + 1));
    const bool tmp = pattern[i];
    pattern[i] = pattern[j];
    pattern[j] = tmp;
  }
  return pattern;
}

absl::StatusOr<LabelDistribution> MakeHardTheta(
    int num_labels, int64_t n, double epsilon,
    const std::optional<std::vector<bool>>& sign_pattern, double c_gamma) {
  if (num_labels < 2 || num_labels % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("hard instances need an even K >= 2, got ", num_labels));
  }
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  if (!(epsilon > 0.0) || !(c_gamma >= 0.0)) {
    return absl::InvalidArgumentError("need eps > 0 and c_gamma >= 0");
  }
  const std::vector<bool> pattern =
      sign_pattern.value_or(AlternatingSignPattern(num_labels));
  if (static_cast<int>(pattern.size()) != num_labels) {
    return absl::InvalidArgumentError("sign pattern length must equal K");
  }
  if (2 * std::count(pattern.begin(), pattern.end(), true) != num_labels) {
    return absl::InvalidArgumentError(
        "sign pattern must have exactly K/2 ones");
  }
  LabelDistribution theta;
  theta.gamma = HardGamma(num_labels, n, epsilon, c_gamma);
  theta.probabilities.resize(num_labels);
  const double base = 1.0 / num_labels;
  for (int i = 0; i < num_labels; ++i) {
    theta.probabilities[i] = pattern[i] ? base + theta.gamma
                                        : base - theta.gamma;
  }
  return theta;
}

absl::StatusOr<HardInstance> MakeHardInstance(const LabelDistribution& theta) {
  const auto k = static_cast<int>(theta.probabilities.size());
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("hard instances need an even K >= 2");
  }
  if (!(theta.gamma > 0.0)) {
    return absl::InvalidArgumentError(
        "gamma = 0 leaves the direction b undefined");
  }
  HardInstance instance;
  instance.distribution = theta;
  instance.alpha = theta.gamma * std::sqrt(static_cast<double>(k));
  instance.direction =
      (theta.probabilities.array() - 1.0 / k).matrix() / instance.alpha;
  instance.optimum = instance.direction;
  instance.fixed_feature = Feature::Zero(1);
  return instance;
}

double LinearLabelLoss::Value(const Eigen::VectorXd& w, const Feature&,
                              Label k) const {
  // <w, e_k - (1/K) 1> = w_k - mean(w).
  return -0.5 * (w[k.value - 1] - w.mean());
}

void LinearLabelLoss::Gradient(const Eigen::VectorXd&, const Feature&,
                               Label k, Eigen::Ref<Eigen::VectorXd> out) const {
  out.setConstant(0.5 / num_labels_);
  out[k.value - 1] -= 0.5;
}

void LinearLabelLoss::PerLabelGradients(const Eigen::VectorXd&,
                                        const Feature&,
                                        Eigen::MatrixXd& out) const {
  out.setConstant(num_labels_, num_labels_, 0.5 / num_labels_);
  out.diagonal().array() -= 0.5;
}

absl::StatusOr<double> ClosedFormExcessRisk(const Eigen::VectorXd& w,
                                            const HardInstance& instance) {
  if (w.size() != instance.direction.size()) {
    return absl::InvalidArgumentError("dimension mismatch");
  }
  if (w.norm() > 1.0 + 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("||w|| = ", w.norm(), " exceeds 1"));
  }
  return 0.5 * instance.alpha * (1.0 - w.dot(instance.direction));
}

Eigen::VectorXd ReduceToThetaHat(const Eigen::VectorXd& w_hat, int num_labels,
                                 double gamma) {
  const double alpha = gamma * std::sqrt(static_cast<double>(num_labels));
  return (Eigen::VectorXd::Constant(num_labels, 1.0 / num_labels) +
          alpha * w_hat)
      .eval();
}

namespace {

Label DrawLabel(const Eigen::VectorXd& cdf, RandomnessStream& rng) {
  const double u = rng.UniformDouble() * cdf[cdf.size() - 1];
  const double* begin = cdf.data();
  const double* it = std::upper_bound(begin, begin + cdf.size(), u);
  const auto index =
      std::min<Eigen::Index>(it - begin, cdf.size() - 1);
  return Label{static_cast<int>(index) + 1};
}

Eigen::VectorXd Cumulative(const Eigen::VectorXd& p) {
  Eigen::VectorXd cdf(p.size());
  std::partial_sum(p.data(), p.data() + p.size(), cdf.data());
  return cdf;
}

}  // namespace

Dataset SampleHardDataset(const HardInstance& instance, int64_t n,
                          uint64_t seed) {
  const Eigen::VectorXd cdf = Cumulative(instance.distribution.probabilities);
  Dataset data;
  data.features.push_back(instance.fixed_feature);
  data.points.reserve(n);
  RandomnessStream rng(seed, {0, Purpose::kDataSampling});
  for (int64_t i = 0; i < n; ++i) {
    data.points.push_back({0, DrawLabel(cdf, rng)});
  }
  return data;
}

ExampleSampler HardInstanceSampler(const HardInstance& instance) {
  return [cdf = Cumulative(instance.distribution.probabilities),
          x = instance.fixed_feature](RandomnessStream& rng) {
    return LabeledExample{x, DrawLabel(cdf, rng)};
  };
}

std::string HardInstanceSpec::ToString() const {
  std::string bits;
  for (bool b : pattern) bits.push_back(b ? '1' : '0');
  return absl::StrCat("K=", num_labels, ";c_gamma=", c_gamma,
                      ";pattern=", bits);
}

absl::StatusOr<HardInstanceSpec> HardInstanceSpec::Parse(
    const std::string& text) {
  HardInstanceSpec spec;
  bool have_k = false;
  bool have_pattern = false;
  for (absl::string_view field : absl::StrSplit(text, ';', absl::SkipEmpty())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(field, absl::MaxSplits('=', 1));
    if (kv.first == "K") {
      if (!absl::SimpleAtoi(kv.second, &spec.num_labels)) {
        return absl::InvalidArgumentError("bad K");
      }
      have_k = true;
    } else if (kv.first == "c_gamma") {
      if (!absl::SimpleAtod(kv.second, &spec.c_gamma)) {
        return absl::InvalidArgumentError("bad c_gamma");
      }
    } else if (kv.first == "pattern") {
      spec.pattern.clear();
      for (char c : kv.second) {
        if (c != '0' && c != '1') {
          return absl::InvalidArgumentError("pattern must be 0/1 digits");
        }
        spec.pattern.push_back(c == '1');
      }
      have_pattern = true;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown hard instance field '", kv.first, "'"));
    }
  }
  if (!have_k) return absl::InvalidArgumentError("missing K");
  if (!have_pattern) spec.pattern = AlternatingSignPattern(spec.num_labels);
  return spec;
}

absl::StatusOr<HardInstance> HardInstanceSpec::Build(int64_t n,
                                                     double epsilon) const {
  absl::StatusOr<LabelDistribution> theta =
      MakeHardTheta(num_labels, n, epsilon, pattern, c_gamma);
  if (!theta.ok()) return theta.status();
  return MakeHardInstance(*theta);
}

}  // namespace labeldp
