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

#include "labeldp/random.h"

namespace labeldp {

namespace {
constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}  // namespace

uint64_t Mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t seed, uint64_t a) {
  return Mix64(Mix64(seed + kGoldenGamma) ^ (a + 2 * kGoldenGamma));
}

uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b) {
  return Mix64(DeriveSeed(seed, a) ^ (b + 3 * kGoldenGamma));
}

RandomnessStream::result_type RandomnessStream::operator()() {
  state_ += kGoldenGamma;
  return Mix64(state_);
}

double RandomnessStream::UniformDouble() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

uint64_t RandomnessStream::UniformInt(uint64_t bound) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const uint64_t limit = max() - max() % bound;
  uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % bound;
}

}  // namespace labeldp
