/*
 * Copyright 2026 The WelfareLens Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"

namespace wl = welfarelens;

TEST(Random, SameSeedSameStream) {
  wl::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(Random, DerivedSeedsSeparateStreamsAndKeys) {
  const wl::SeedSpec s{7};
  std::set<std::uint64_t> seen;
  for (auto stream : {wl::Stream::kDgp, wl::Stream::kNuisanceFolds, wl::Stream::kSolverInit,
                      wl::Stream::kMonteCarlo}) {
    for (std::uint64_t a = 0; a < 4; ++a) {
      for (std::uint64_t b = 0; b < 4; ++b) seen.insert(s.Derive(stream, a, b));
    }
  }
  EXPECT_EQ(seen.size(), 64u);
  EXPECT_EQ(s.Derive(wl::Stream::kDgp, 3), wl::SeedSpec{7}.Derive(wl::Stream::kDgp, 3));
  EXPECT_NE(s.ForReplication(0).master_seed, s.ForReplication(1).master_seed);
}

TEST(Random, UniformRanges) {
  wl::Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.UniformOpen();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    ASSERT_LT(rng.UniformIndex(7), 7u);
  }
}

// Moments of 200k normal draws against N(0, 1) with 6-sigma slack.
TEST(Random, NormalMoments) {
  wl::Rng rng(3);
  const int m = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < m; ++i) {
    const double z = rng.Normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / m, 0.0, 6.0 / std::sqrt(m));
  EXPECT_NEAR(s2 / m, 1.0, 6.0 * std::sqrt(2.0 / m));
}

TEST(Random, UniformIndexCoversAllValues) {
  wl::Rng rng(5);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.UniformIndex(5)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 600);
}
