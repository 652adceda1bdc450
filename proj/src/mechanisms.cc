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

#include "labeldp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"

namespace labeldp {

namespace {

// Above this many labels likelihoods are accumulated in log space.
constexpr int kLogSpaceThreshold = 16;

absl::Status CheckInput(Mechanism mechanism, Label y,
                        const MechanismParams& params) {
  if (absl::Status s = ValidateFor(mechanism, params); !s.ok()) return s;
  return ValidateLabel(y, params.num_labels);
}

absl::Status CheckOutput(Mechanism mechanism, const SanitizedSubset& s,
                         const MechanismParams& params) {
  if (s.num_labels() != params.num_labels) {
    return absl::InvalidArgumentError(
        absl::StrCat("subset over K = ", s.num_labels(),
                     " does not match params K = ", params.num_labels));
  }
  if (s.tag() != mechanism) {
    return absl::InvalidArgumentError(
        absl::StrCat("subset produced by ", MechanismName(s.tag()),
                     ", expected ", MechanismName(mechanism)));
  }
  return absl::OkStatus();
}

double LogBinomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
         std::lgamma(n - k + 1.0);
}

}  // namespace

double BernoulliOtherInclusion(double epsilon) {
  return 1.0 / (std::exp(epsilon) + 1.0);
}

SubsetInclusion DSubsetInclusion(int num_labels, int subset_size,
                                 double epsilon) {
  const double k = num_labels;
  const double d = subset_size;
  SubsetInclusion p;
  p.gamma = 1.0 / (1.0 + std::exp(-epsilon) * (k - d) / d);
  p.zeta = (d - p.gamma) / (k - 1.0);
  return p;
}

int RecommendedSubsetSize(int num_labels, double epsilon) {
  const double raw = std::ceil(num_labels / (2.0 * std::exp(epsilon)));
  const int cap = std::min(num_labels - 1, 2 * num_labels / 3);
  return std::clamp(static_cast<int>(raw), 1, std::max(cap, 1));
}

double KrrKeepProbability(int num_labels, double epsilon) {
  const double e = std::exp(epsilon);
  return e / (e + num_labels - 1.0);
}

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return std::round(result);
}

absl::StatusOr<SanitizedSubset> BernoulliSubsetRandomize(
    Label y, const MechanismParams& params, RandomnessStream& rng) {
  if (absl::Status s = CheckInput(Mechanism::kBernoulliSubset, y, params);
      !s.ok()) {
    return s;
  }
  const double other = BernoulliOtherInclusion(params.epsilon);
  std::vector<int> members;
  for (int i = 1; i <= params.num_labels; ++i) {
    if (rng.Bernoulli(i == y.value ? 0.5 : other)) members.push_back(i);
  }
  return SanitizedSubset::Create(Mechanism::kBernoulliSubset,
                                 params.num_labels, std::move(members));
}

absl::StatusOr<double> BernoulliSubsetLikelihood(
    const SanitizedSubset& s, Label y, const MechanismParams& params) {
  if (absl::Status st = CheckInput(Mechanism::kBernoulliSubset, y, params);
      !st.ok()) {
    return st;
  }
  if (absl::Status st = CheckOutput(Mechanism::kBernoulliSubset, s, params);
      !st.ok()) {
    return st;
  }
  const double other = BernoulliOtherInclusion(params.epsilon);
  const int k = params.num_labels;
  const int others_in = s.size() - (s.Contains(y.value) ? 1 : 0);
  const int others_out = (k - 1) - others_in;
  // The true label contributes a factor 1/2 whether or not it is included.
  if (k > kLogSpaceThreshold) {
    return std::exp(std::log(0.5) + others_in * std::log(other) +
                    others_out * std::log1p(-other));
  }
  double p = 0.5;
  for (int i = 0; i < others_in; ++i) p *= other;
  for (int i = 0; i < others_out; ++i) p *= 1.0 - other;
  return p;
}

absl::StatusOr<SanitizedSubset> DSubsetRandomize(Label y,
                                                 const MechanismParams& params,
                                                 RandomnessStream& rng) {
  if (absl::Status s = CheckInput(Mechanism::kDSubset, y, params); !s.ok()) {
    return s;
  }
  const int k = params.num_labels;
  const int d = *params.subset_size;
  const SubsetInclusion inclusion = DSubsetInclusion(k, d, params.epsilon);

  std::vector<int> members;
  members.reserve(d);
  if (rng.Bernoulli(inclusion.gamma)) members.push_back(y.value);

  std::vector<int> others;
  others.reserve(k - 1);
  for (int i = 1; i <= k; ++i) {
    if (i != y.value) others.push_back(i);
  }
  // Partial Fisher-Yates: the first `fill` slots become a uniform sample.
  const int fill = d - static_cast<int>(members.size());
  for (int i = 0; i < fill; ++i) {
    const auto j = i + static_cast<int>(rng.UniformInt(others.size() - i));
    std::swap(others[i], others[j]);
    members.push_back(others[i]);
  }
  return SanitizedSubset::Create(Mechanism::kDSubset, k, std::move(members));
}

absl::StatusOr<double> DSubsetLikelihood(const SanitizedSubset& s, Label y,
                                         const MechanismParams& params) {
  if (absl::Status st = CheckInput(Mechanism::kDSubset, y, params); !st.ok()) {
    return st;
  }
  if (absl::Status st = CheckOutput(Mechanism::kDSubset, s, params); !st.ok()) {
    return st;
  }
  const int k = params.num_labels;
  const int d = *params.subset_size;
  if (s.size() != d) {
    return absl::InvalidArgumentError(
        absl::StrCat("d-subset output has ", s.size(), " members, expected ",
                     d));
  }
  const bool hit = s.Contains(y.value);
  if (k > kLogSpaceThreshold) {
    // e^eps C(K-1, d-1) + C(K-1, d) = C(K-1, d-1) (e^eps + (K-d)/d).
    const double log_denominator =
        LogBinomial(k - 1, d - 1) +
        std::log(std::exp(params.epsilon) + static_cast<double>(k - d) / d);
    return std::exp((hit ? params.epsilon : 0.0) - log_denominator);
  }
  const double e = std::exp(params.epsilon);
  const double denominator = e * Binomial(k - 1, d - 1) + Binomial(k - 1, d);
  return (hit ? e : 1.0) / denominator;
}

absl::StatusOr<SanitizedSubset> KrrRandomize(Label y,
                                             const MechanismParams& params,
                                             RandomnessStream& rng) {
  if (absl::Status s = CheckInput(Mechanism::kKrr, y, params); !s.ok()) {
    return s;
  }
  const int k = params.num_labels;
  int reported = y.value;
  if (!rng.Bernoulli(KrrKeepProbability(k, params.epsilon))) {
    // Uniform over the K - 1 other labels.
    reported = 1 + static_cast<int>(rng.UniformInt(k - 1));
    if (reported >= y.value) ++reported;
  }
  return SanitizedSubset::Create(Mechanism::kKrr, k, {reported});
}

absl::StatusOr<double> KrrLikelihood(const SanitizedSubset& s, Label y,
                                     const MechanismParams& params) {
  if (absl::Status st = CheckInput(Mechanism::kKrr, y, params); !st.ok()) {
    return st;
  }
  if (absl::Status st = CheckOutput(Mechanism::kKrr, s, params); !st.ok()) {
    return st;
  }
  if (s.size() != 1) {
    return absl::InvalidArgumentError("krr output must be a singleton");
  }
  const double e = std::exp(params.epsilon);
  const double denominator = e + params.num_labels - 1.0;
  return (s.Contains(y.value) ? e : 1.0) / denominator;
}

absl::StatusOr<SanitizedSubset> Randomize(Mechanism mechanism, Label y,
                                          const MechanismParams& params,
                                          RandomnessStream& rng) {
  switch (mechanism) {
    case Mechanism::kBernoulliSubset:
      return BernoulliSubsetRandomize(y, params, rng);
    case Mechanism::kDSubset:
      return DSubsetRandomize(y, params, rng);
    case Mechanism::kKrr:
      return KrrRandomize(y, params, rng);
    case Mechanism::kDjw:
      break;
  }
  return absl::InvalidArgumentError("djw randomizes gradients, not labels");
}

absl::StatusOr<double> Likelihood(Mechanism mechanism,
                                  const SanitizedSubset& s, Label y,
                                  const MechanismParams& params) {
  switch (mechanism) {
    case Mechanism::kBernoulliSubset:
      return BernoulliSubsetLikelihood(s, y, params);
    case Mechanism::kDSubset:
      return DSubsetLikelihood(s, y, params);
    case Mechanism::kKrr:
      return KrrLikelihood(s, y, params);
    case Mechanism::kDjw:
      break;
  }
  return absl::InvalidArgumentError("djw has no discrete output law");
}

absl::Status ForEachOutput(
    Mechanism mechanism, const MechanismParams& params,
    const std::function<void(const SanitizedSubset&)>& visit) {
  if (absl::Status s = ValidateFor(mechanism, params); !s.ok()) return s;
  const int k = params.num_labels;
  switch (mechanism) {
    case Mechanism::kBernoulliSubset: {
      if (k > kMaxEnumeratedLabels) {
        return absl::ResourceExhaustedError(
            absl::StrCat("2^", k, " outputs exceed the enumeration guard"));
      }
      for (unsigned long long mask = 0; mask < (1ULL << k); ++mask) {
        visit(SanitizedSubset::FromMask(mechanism, k, mask));
      }
      return absl::OkStatus();
    }
    case Mechanism::kDSubset: {
      const int d = *params.subset_size;
      if (Binomial(k, d) > kMaxEnumeratedSubsets) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "C(", k, ",", d, ") outputs exceed the enumeration guard"));
      }
      std::vector<int> members(d);
      std::iota(members.begin(), members.end(), 1);
      while (true) {
        visit(*SanitizedSubset::Create(mechanism, k, members));
        // Advance to the next combination in lexicographic order.
        int i = d - 1;
        while (i >= 0 && members[i] == k - d + i + 1) --i;
        if (i < 0) break;
        ++members[i];
        for (int j = i + 1; j < d; ++j) members[j] = members[j - 1] + 1;
      }
      return absl::OkStatus();
    }
    case Mechanism::kKrr:
      for (int i = 1; i <= k; ++i) {
        visit(*SanitizedSubset::Create(mechanism, k, {i}));
      }
      return absl::OkStatus();
    case Mechanism::kDjw:
      break;
  }
  return absl::InvalidArgumentError("djw has no enumerable output space");
}

absl::StatusOr<double> MaxLikelihoodRatio(
    Mechanism mechanism, const MechanismParams& params,
    const LikelihoodFunction& likelihood) {
  const int k = params.num_labels;
  if (mechanism != Mechanism::kKrr && k > kMaxEnumeratedLabels) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "K = ", k, " exceeds the enumeration guard of ",
        kMaxEnumeratedLabels));
  }
  double max_ratio = 0.0;
  absl::Status error = absl::OkStatus();
  std::vector<double> per_label(k);
  absl::Status visited = ForEachOutput(
      mechanism, params, [&](const SanitizedSubset& s) {
        if (!error.ok()) return;
        for (int y = 1; y <= k; ++y) {
          absl::StatusOr<double> p = likelihood(s, Label{y});
          if (!p.ok()) {
            error = p.status();
            return;
          }
          per_label[y - 1] = *p;
        }
        const auto [lo, hi] =
            std::minmax_element(per_label.begin(), per_label.end());
        if (*hi == 0.0) return;
        const double ratio = *lo == 0.0
                                 ? std::numeric_limits<double>::infinity()
                                 : *hi / *lo;
        max_ratio = std::max(max_ratio, ratio);
      });
  if (!visited.ok()) return visited;
  if (!error.ok()) return error;
  return max_ratio;
}

absl::StatusOr<double> VerifyLdpRatio(Mechanism mechanism,
                                      const MechanismParams& params) {
  return MaxLikelihoodRatio(
      mechanism, params, [&](const SanitizedSubset& s, Label y) {
        return Likelihood(mechanism, s, y, params);
      });
}

}  // namespace labeldp
