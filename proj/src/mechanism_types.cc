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

#include "labeldp/mechanism_types.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace labeldp {

const std::string& MechanismName(Mechanism mechanism) {
  // Indexed by the enumerator values.
  static const std::string kNames[] = {"bernoulli-subset", "d-subset", "krr",
                                       "djw"};
  return kNames[static_cast<int>(mechanism)];
}

absl::StatusOr<Mechanism> ParseMechanism(absl::string_view name) {
  for (Mechanism m : {Mechanism::kBernoulliSubset, Mechanism::kDSubset,
                      Mechanism::kKrr, Mechanism::kDjw}) {
    if (MechanismName(m) == name) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", name, "'"));
}

absl::Status ValidateLabel(Label y, int num_labels) {
  if (y.value < 1 || y.value > num_labels) {
    return absl::InvalidArgumentError(absl::StrCat(
        "label ", y.value, " outside [1, ", num_labels, "]"));
  }
  return absl::OkStatus();
}

absl::Status MechanismParams::Validate() const {
  if (!std::isfinite(epsilon) || epsilon < kMinEpsilon) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and >= ", kMinEpsilon,
                     ", got ", epsilon));
  }
  if (num_labels < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("num_labels must be >= 2, got ", num_labels));
  }
  if (subset_size.has_value()) {
    const int d = *subset_size;
    if (d < 1 || d > num_labels - 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "subset_size must lie in [1, ", num_labels - 1, "], got ", d));
    }
    if (3 * d > 2 * num_labels) {
      return absl::InvalidArgumentError(absl::StrCat(
          "subset_size ", d, " exceeds 2K/3 for K = ", num_labels));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateFor(Mechanism mechanism, const MechanismParams& params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (mechanism == Mechanism::kDSubset && !params.subset_size.has_value()) {
    return absl::InvalidArgumentError("d-subset requires subset_size");
  }
  if (mechanism == Mechanism::kBernoulliSubset &&
      params.subset_size.has_value()) {
    return absl::InvalidArgumentError(
        "bernoulli-subset does not take a subset_size");
  }
  return absl::OkStatus();
}

absl::StatusOr<SanitizedSubset> SanitizedSubset::Create(
    Mechanism tag, int num_labels, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    return absl::InvalidArgumentError("duplicate label in subset");
  }
  for (int m : members) {
    if (absl::Status s = ValidateLabel(Label{m}, num_labels); !s.ok()) {
      return s;
    }
  }
  if (tag == Mechanism::kKrr && members.size() != 1) {
    return absl::InvalidArgumentError("krr output must be a singleton");
  }
  if (tag == Mechanism::kDjw) {
    return absl::InvalidArgumentError("djw does not produce label subsets");
  }
  return SanitizedSubset(tag, num_labels, std::move(members));
}

SanitizedSubset SanitizedSubset::FromMask(Mechanism tag, int num_labels,
                                          unsigned long long mask) {
  std::vector<int> members;
  for (int i = 0; i < num_labels; ++i) {
    if ((mask >> i) & 1ULL) members.push_back(i + 1);
  }
  return SanitizedSubset(tag, num_labels, std::move(members));
}

bool SanitizedSubset::Contains(int label) const {
  return std::binary_search(members_.begin(), members_.end(), label);
}

std::string SanitizedSubset::DebugString() const {
  return absl::StrCat("{", absl::StrJoin(members_, ","), "}");
}

}  // namespace labeldp
