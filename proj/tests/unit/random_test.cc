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

#include <cmath>
#include <set>

#include "gtest/gtest.h"

namespace labeldp {
namespace {

TEST(RandomnessStreamTest, SameSeedSameSequence) {
  RandomnessStream a(42, {7, Purpose::kLabelRandomization});
  RandomnessStream b(42, {7, Purpose::kLabelRandomization});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomnessStreamTest, PathsAreIndependent) {
  std::set<uint64_t> firsts;
  for (uint64_t index = 0; index < 50; ++index) {
    for (Purpose p : {Purpose::kLabelRandomization, Purpose::kDataSampling,
                      Purpose::kRiskEvaluation}) {
      RandomnessStream rng(1, {index, p});
      firsts.insert(rng());
    }
  }
  EXPECT_EQ(firsts.size(), 150u);
}

TEST(RandomnessStreamTest, DeriveSeedSeparatesArguments) {
  EXPECT_NE(DeriveSeed(0, 1, 2), DeriveSeed(0, 2, 1));
  EXPECT_NE(DeriveSeed(0, 1), DeriveSeed(1, 0));
  EXPECT_EQ(DeriveSeed(9, 3, 4), DeriveSeed(9, 3, 4));
}

TEST(RandomnessStreamTest, UniformDoubleMoments) {
  RandomnessStream rng(3);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.UniformDouble();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sd of U(0,1) is 1/sqrt(12).
  EXPECT_NEAR(sum / n, 0.5, 4.0 / std::sqrt(12.0 * n));
}

TEST(RandomnessStreamTest, UniformIntCoversRangeEvenly) {
  RandomnessStream rng(11);
  const int bound = 7;
  const int n = 70000;
  int counts[bound] = {};
  for (int i = 0; i < n; ++i) {
    const uint64_t v = rng.UniformInt(bound);
    ASSERT_LT(v, static_cast<uint64_t>(bound));
    ++counts[v];
  }
  const double p = 1.0 / bound;
  const double se = std::sqrt(n * p * (1 - p));
  for (int c : counts) EXPECT_NEAR(c, n * p, 4 * se);
}

}  // namespace
}  // namespace labeldp
