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

#ifndef LABELDP_MECHANISM_TYPES_H_
#define LABELDP_MECHANISM_TYPES_H_

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace labeldp {

// Smallest privacy budget accepted by any mechanism. The subset estimators
// divide by e^epsilon - 1.
inline constexpr double kMinEpsilon = 1e-6;

enum class Mechanism {
  kBernoulliSubset,
  kDSubset,
  kKrr,
  kDjw,
};

// Stable names: "bernoulli-subset", "d-subset", "krr", "djw".
const std::string& MechanismName(Mechanism mechanism);
absl::StatusOr<Mechanism> ParseMechanism(absl::string_view name);

// A class label in [1, K].
struct Label {
  int value = 1;

  friend auto operator<=>(const Label&, const Label&) = default;
};

absl::Status ValidateLabel(Label y, int num_labels);

struct MechanismParams {
  double epsilon = 1.0;
  int num_labels = 2;
  // Only meaningful for the d-subset mechanism.
  std::optional<int> subset_size;

  // epsilon >= kMinEpsilon and finite, num_labels >= 2, and if present
  // 1 <= subset_size <= min(num_labels - 1, 2 * num_labels / 3).
  absl::Status Validate() const;
};

// Checks that `params` fits `mechanism`: subset_size is required for
// d-subset and must be absent for bernoulli-subset.
absl::Status ValidateFor(Mechanism mechanism, const MechanismParams& params);

// The privatized label a user sends: a set of labels over [K]. Members are
// kept sorted ascending so equal subsets compare equal.
class SanitizedSubset {
 public:
  // Sorts `members`; fails on out-of-range or duplicate labels, or a KRR
  // output that is not a singleton.
  static absl::StatusOr<SanitizedSubset> Create(Mechanism tag, int num_labels,
                                                std::vector<int> members);
  // Bit i of `mask` selects label i + 1. Requires num_labels <= 64.
  static SanitizedSubset FromMask(Mechanism tag, int num_labels,
                                  unsigned long long mask);

  Mechanism tag() const { return tag_; }
  int num_labels() const { return num_labels_; }
  std::span<const int> members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool Contains(int label) const;

  // "{1,3}" style rendering.
  std::string DebugString() const;

  friend bool operator==(const SanitizedSubset&,
                         const SanitizedSubset&) = default;

 private:
  SanitizedSubset(Mechanism tag, int num_labels, std::vector<int> members)
      : tag_(tag), num_labels_(num_labels), members_(std::move(members)) {}

  Mechanism tag_;
  int num_labels_;
  std::vector<int> members_;
};

}  // namespace labeldp

#endif  // LABELDP_MECHANISM_TYPES_H_
