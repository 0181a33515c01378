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

#include "support.hpp"

namespace wl = welfarelens;

namespace {

wl::DgpSpec LinearSpec(std::size_t n) {
  wl::DgpSpec spec;
  spec.dim = 2;
  spec.n = n;
  spec.baseline_intercept = 0.5;
  spec.baseline_slopes = {1.0, -0.5};
  spec.cate_intercept = -0.25;
  spec.cate_slopes = {1.0, 0.0};
  spec.noise_sd = 1.0;
  return spec;
}

}  // namespace

TEST(Dgp, ZeroNoiseConstantEffectGivesExactContrast) {
  wl::DgpSpec spec;
  spec.n = 50;
  spec.noise_sd = 0.0;
  spec.cate_intercept = 1.5;
  spec.cate_slopes = {};
  const auto ods = wl::Generate(spec, wl::SeedSpec{3});
  for (std::size_t i = 0; i < ods.size(); ++i) {
    EXPECT_DOUBLE_EQ(ods.y1[i] - ods.y0[i], 1.5);
  }
}

TEST(Dgp, ArmFractionWithinBinomialBand) {
  wl::DgpSpec spec;
  spec.n = 10000;
  const auto ods = wl::Generate(spec, wl::SeedSpec{11});
  double treated = 0;
  for (int d : ods.base.d) treated += d;
  const double frac = treated / 10000.0;
  const double sigma = std::sqrt(0.25 / 10000.0);
  EXPECT_LE(std::abs(frac - 0.5), 5.0 * sigma);
}

TEST(Dgp, SameSeedSameBytes) {
  const auto spec = LinearSpec(200);
  const auto a = wl::Generate(spec, wl::SeedSpec{5});
  const auto b = wl::Generate(spec, wl::SeedSpec{5});
  EXPECT_EQ(a.base.x, b.base.x);
  EXPECT_EQ(a.base.d, b.base.d);
  EXPECT_EQ(a.base.y, b.base.y);
  EXPECT_EQ(a.y0, b.y0);
  const auto c = wl::Generate(spec, wl::SeedSpec{6});
  EXPECT_NE(a.base.y, c.base.y);
}

// Property: over random logistic specs, propensities stay inside the overlap
// band, outcomes respect y_max, and the observed outcome matches its arm.
TEST(Dgp, PropertyBoundsAndConsistency) {
  wl::Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    wl::DgpSpec spec;
    spec.n = 300;
    spec.dim = 1 + rng.UniformIndex(3);
    spec.propensity = wl::PropensityFamily::kLogistic;
    spec.propensity_intercept = rng.Uniform(-3, 3);
    spec.propensity_slopes.resize(spec.dim);
    for (double& a : spec.propensity_slopes) a = rng.Uniform(-8, 8);
    spec.overlap = rng.Uniform(0.01, 0.2);
    spec.baseline_slopes = {rng.Uniform(-2, 2)};
    spec.cate = rng.Bernoulli(0.5) ? wl::CateFamily::kThreshold : wl::CateFamily::kSmooth;
    spec.cate_amplitude = rng.Uniform(0.1, 2);
    spec.noise_sd = rng.Uniform(0.5, 5);
    spec.y_max = 8.0;
    const auto ods = wl::Generate(spec, wl::SeedSpec{rng.NextU64()});
    ASSERT_EQ(ods.size(), 300u);
    for (std::size_t i = 0; i < ods.size(); ++i) {
      EXPECT_GE(ods.e_true[i], spec.overlap);
      EXPECT_LE(ods.e_true[i], 1.0 - spec.overlap);
      EXPECT_LE(std::abs(ods.y0[i]), spec.y_max);
      EXPECT_LE(std::abs(ods.y1[i]), spec.y_max);
      EXPECT_EQ(ods.base.y[i], ods.base.d[i] == 1 ? ods.y1[i] : ods.y0[i]);
      EXPECT_DOUBLE_EQ(ods.tau_true[i], wl::TrueCate(spec, ods.base.Row(i)));
    }
  }
}

TEST(Dgp, RejectsNoiseBoundBelowMeanRange) {
  auto spec = LinearSpec(10);
  spec.y_max = 1.0;  // |m| can reach 2.25
  EXPECT_THROW(wl::Generate(spec, wl::SeedSpec{1}), wl::Error);
}

// On the uniform box with linear m0 and τ, W(1{x1 >= c}) has the closed form
// b0 + t0 (1 - c)/2 + t1 (1 - c²)/4.
TEST(Dgp, MonteCarloWelfareMatchesClosedForm) {
  const auto spec = LinearSpec(10);
  for (double c : {-0.5, 0.0, 0.25, 0.75}) {
    const auto policy = [c](std::span<const double> x) { return x[0] >= c ? 1.0 : 0.0; };
    const auto w = wl::TrueWelfare(spec, policy, 200000, wl::SeedSpec{21});
    const double exact = 0.5 + (-0.25) * (1 - c) / 2 + (1 - c * c) / 4;
    EXPECT_LE(std::abs(w.mean - exact), 4.0 * w.standard_error + 1e-12) << "c=" << c;
  }
}

TEST(Dgp, FirstBestDominatesTreatAll) {
  const auto spec = LinearSpec(10);
  const auto sample = wl::DrawMonteCarloSample(spec, 50000, wl::SeedSpec{2});
  const auto fb = wl::WelfareOnSample(sample, wl::FirstBestPolicy(spec));
  const auto all = wl::WelfareOnSample(sample, [](std::span<const double>) { return 1.0; });
  const auto none = wl::WelfareOnSample(sample, [](std::span<const double>) { return 0.0; });
  EXPECT_GE(fb.mean, all.mean);
  EXPECT_GE(fb.mean, none.mean);
}

TEST(Dgp, FirstBestTreatsZeroEffect) {
  auto spec = LinearSpec(10);
  spec.cate_intercept = 0.0;
  spec.cate_slopes = {1.0, 0.0};
  const std::vector<double> at_zero{0.0, 0.3};
  EXPECT_EQ(wl::FirstBestPolicy(spec)(at_zero), 1.0);
}
