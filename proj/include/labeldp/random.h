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

#ifndef LABELDP_RANDOM_H_
#define LABELDP_RANDOM_H_

#include <cstdint>
#include <limits>

namespace labeldp {

// What a derived stream is used for. Streams for different purposes of the
// same user never overlap.
enum class Purpose : uint64_t {
  kLabelRandomization = 1,
  kVectorRandomization = 2,
  kDataSampling = 3,
  kShuffle = 4,
  kRiskEvaluation = 5,
  kSignPattern = 6,
  kTesting = 7,
};

struct DerivationPath {
  uint64_t index = 0;
  Purpose purpose = Purpose::kTesting;
};

// Stateless 64-bit mixer (SplitMix64 finalizer).
uint64_t Mix64(uint64_t x);

// Combines a seed with further key words into a new seed. Used for
// per-user, per-cell and per-trial derivation.
uint64_t DeriveSeed(uint64_t seed, uint64_t a);
uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b);

// Pseudorandom stream keyed by (master seed, derivation path). Satisfies
// std::uniform_random_bit_generator so it can drive <random> distributions.
// Construction is O(1), which matters because training derives one stream
// per user.
class RandomnessStream {
 public:
  using result_type = uint64_t;

  explicit RandomnessStream(uint64_t seed) : state_(Mix64(seed)) {}
  RandomnessStream(uint64_t master_seed, DerivationPath path)
      : RandomnessStream(DeriveSeed(master_seed, path.index,
                                    static_cast<uint64_t>(path.purpose))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble();
  bool Bernoulli(double p) { return UniformDouble() < p; }
  // Uniform integer in [0, bound). bound must be positive.
  uint64_t UniformInt(uint64_t bound);

 private:
  uint64_t state_;
};

}  // namespace labeldp

#endif  // LABELDP_RANDOM_H_
