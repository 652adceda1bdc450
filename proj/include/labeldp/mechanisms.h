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

// Local label randomizers and their exact output laws.
//
// Three discrete mechanisms map a label y in [K] to a SanitizedSubset:
//
//   bernoulli-subset  every label is included independently, y with
//                     probability 1/2 and every other label with
//                     probability 1/(e^eps + 1).
//   d-subset          a subset of exactly d labels; subsets containing y are
//                     e^eps times more likely than subsets that do not.
//   krr               K-ary randomized response, a singleton.
//
// Each has a likelihood function giving the exact probability of an output,
// and VerifyLdpRatio() checks the e^eps likelihood-ratio bound by
// enumerating the whole output space.

#ifndef LABELDP_MECHANISMS_H_
#define LABELDP_MECHANISMS_H_

#include <cstdint>
#include <functional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "labeldp/mechanism_types.h"
#include "labeldp/random.h"

namespace labeldp {

// Subset mechanisms enumerate at most 2^kMaxEnumeratedLabels outputs.
inline constexpr int kMaxEnumeratedLabels = 20;
// Cap on C(K, d) when enumerating d-subset outputs.
inline constexpr double kMaxEnumeratedSubsets = 1e6;

// Probability that a label other than y lands in a bernoulli-subset output.
double BernoulliOtherInclusion(double epsilon);

// Marginal inclusion probabilities of the d-subset mechanism: gamma for the
// true label, zeta for each other label.
struct SubsetInclusion {
  double gamma = 0.0;
  double zeta = 0.0;
};
SubsetInclusion DSubsetInclusion(int num_labels, int subset_size,
                                 double epsilon);

// d = ceil(K / (2 e^eps)), clamped into the valid range [1, 2K/3].
int RecommendedSubsetSize(int num_labels, double epsilon);

// Probability that krr reports the true label.
double KrrKeepProbability(int num_labels, double epsilon);

// Binomial coefficient as a double (exact while it fits in 53 bits).
double Binomial(int n, int k);

absl::StatusOr<SanitizedSubset> BernoulliSubsetRandomize(
    Label y, const MechanismParams& params, RandomnessStream& rng);
absl::StatusOr<double> BernoulliSubsetLikelihood(const SanitizedSubset& s,
                                                 Label y,
                                                 const MechanismParams& params);

// Two-stage sampler: y is included with probability gamma, the remaining
// slots are filled uniformly without replacement from [K] \ {y}.
absl::StatusOr<SanitizedSubset> DSubsetRandomize(Label y,
                                                 const MechanismParams& params,
                                                 RandomnessStream& rng);
absl::StatusOr<double> DSubsetLikelihood(const SanitizedSubset& s, Label y,
                                         const MechanismParams& params);

absl::StatusOr<SanitizedSubset> KrrRandomize(Label y,
                                             const MechanismParams& params,
                                             RandomnessStream& rng);
absl::StatusOr<double> KrrLikelihood(const SanitizedSubset& s, Label y,
                                     const MechanismParams& params);

// Dispatch on `mechanism`. kDjw is rejected: it randomizes gradients, not
// labels (see vector_randomizer.h).
absl::StatusOr<SanitizedSubset> Randomize(Mechanism mechanism, Label y,
                                          const MechanismParams& params,
                                          RandomnessStream& rng);
absl::StatusOr<double> Likelihood(Mechanism mechanism,
                                  const SanitizedSubset& s, Label y,
                                  const MechanismParams& params);

// Calls `visit` on every output of `mechanism` in canonical order: binary
// counter order for bernoulli-subset, lexicographic for d-subset, ascending
// singletons for krr. Fails when the output space exceeds the enumeration
// caps above.
absl::Status ForEachOutput(
    Mechanism mechanism, const MechanismParams& params,
    const std::function<void(const SanitizedSubset&)>& visit);

using LikelihoodFunction =
    std::function<absl::StatusOr<double>(const SanitizedSubset&, Label)>;

// Max over outputs s and label pairs (y, y') of
// likelihood(s | y) / likelihood(s | y'). Outputs that are impossible under
// every label are skipped; an output possible under some labels and not
// others yields +infinity.
absl::StatusOr<double> MaxLikelihoodRatio(Mechanism mechanism,
                                          const MechanismParams& params,
                                          const LikelihoodFunction& likelihood);

// MaxLikelihoodRatio() with the mechanism's own likelihood. An eps-L-LDP
// randomizer returns at most e^eps. Requires K <= kMaxEnumeratedLabels for
// the subset mechanisms.
absl::StatusOr<double> VerifyLdpRatio(Mechanism mechanism,
                                      const MechanismParams& params);

}  // namespace labeldp

#endif  // LABELDP_MECHANISMS_H_
