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

TEST(ClipPropensity, RaisesSmallPredictions) {
  EXPECT_DOUBLE_EQ(wl::ClipPropensity(0.01, 0.05), 0.05);
  EXPECT_DOUBLE_EQ(wl::ClipPropensity(0.99, 0.05), 0.95);
  EXPECT_DOUBLE_EQ(wl::ClipPropensity(0.3, 0.05), 0.3);
}

TEST(ClipPropensity, RejectsClipOutsideRange) {
  EXPECT_THROW(wl::RequireClip(0.0), wl::Error);
  EXPECT_THROW(wl::RequireClip(0.5), wl::Error);
}

// Perfect separation drives the raw fit to the edges; clipping keeps every
// stored value inside [clip, 1 - clip].
TEST(FitPropensity, SeparationIsClipped) {
  wl::ObservedDataset ds;
  ds.dim = 1;
  for (int i = 0; i < 40; ++i) {
    const double x = -1.0 + 2.0 * i / 39.0;
    ds.x.push_back(x);
    ds.d.push_back(x > 0 ? 1 : 0);
    ds.y.push_back(0.0);
  }
  wl::LogisticOptions opts;
  opts.penalty = 1e-3;
  const auto fit = wl::FitPropensity(ds, wl::BasisSpec{1, {}}, {}, 0.05, opts);
  bool clipped = false;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_GE(fit.e_hat[i], 0.05);
    EXPECT_LE(fit.e_hat[i], 0.95);
    clipped = clipped || fit.raw[i] < 0.05 || fit.raw[i] > 0.95;
  }
  EXPECT_TRUE(clipped);
}

TEST(FitPropensity, RecoversConstantHalf) {
  wl::DgpSpec spec;
  spec.n = 4000;
  const auto ods = wl::Generate(spec, wl::SeedSpec{4});
  const auto fit = wl::FitPropensity(ods.base, wl::BasisSpec{1, {}}, {}, 0.01);
  for (double e : fit.e_hat) EXPECT_NEAR(e, 0.5, 0.05);
}

// Intercept-only fits on large samples: the predicted loss decrease falls
// below the rounding error of the summed loss before the gradient meets its
// tolerance. The fit must still land on the treated share, whose gap is the
// intercept gradient.
TEST(FitPropensity, InterceptOnlyConvergesOnLargeSamples) {
  for (std::size_t n : {2000u, 8000u, 20000u}) {
    for (std::size_t treated_per_mille : {80u, 313u, 495u, 507u, 874u}) {
      wl::ObservedDataset ds;
      ds.dim = 1;
      std::size_t treated = 0;
      for (std::size_t i = 0; i < n; ++i) {
        ds.x.push_back(static_cast<double>(i % 17) / 17.0);
        const int d = (i * 7919) % 1000 < treated_per_mille ? 1 : 0;
        ds.d.push_back(d);
        treated += static_cast<std::size_t>(d);
        ds.y.push_back(0.0);
      }
      const auto fit = wl::FitPropensity(ds, wl::BasisSpec{0, {}}, {}, 0.01);
      const double share = static_cast<double>(treated) / static_cast<double>(n);
      EXPECT_NEAR(fit.raw[0], share, wl::LogisticOptions{}.gradient_tolerance)
          << "n=" << n << " treated/1000=" << treated_per_mille;
    }
  }
}

TEST(FitPropensity, MissingArmIsDataError) {
  wl::ObservedDataset ds{1, {0.0, 1.0, 2.0}, {1, 1, 1}, {1.0, 2.0, 3.0}};
  try {
    wl::FitPropensity(ds, wl::BasisSpec{1, {}}, {}, 0.01);
    FAIL();
  } catch (const wl::Error& e) {
    EXPECT_EQ(e.code(), wl::ErrorCode::kData);
  }
}

TEST(FitOutcomes, ConstantOutcomeGivesIntercept) {
  wl::Rng rng(1);
  auto ds = wltest::RandomDataset(rng, 60, 2);
  for (double& y : ds.y) y = 3.0;
  const auto models = wl::FitOutcomeModels(ds, wl::BasisSpec{1, {}}, 0.0);
  EXPECT_NEAR(models.arm0.coefficients(0), 3.0, 1e-10);
  EXPECT_NEAR(models.arm1.coefficients(0), 3.0, 1e-10);
  for (Eigen::Index j = 1; j < models.arm1.coefficients.size(); ++j) {
    EXPECT_NEAR(models.arm1.coefficients(j), 0.0, 1e-10);
  }
}

TEST(FitOutcomes, ExactLinearSignalRecovered) {
  wl::Rng rng(2);
  auto ds = wltest::RandomDataset(rng, 80, 1);
  for (std::size_t i = 0; i < ds.size(); ++i) ds.y[i] = 2.0 * ds.x[i];
  const auto models = wl::FitOutcomeModels(ds, wl::BasisSpec{1, {}}, 0.0);
  for (const auto* arm : {&models.arm0, &models.arm1}) {
    EXPECT_NEAR(arm->coefficients(0), 0.0, 1e-10);
    EXPECT_NEAR(arm->coefficients(1), 2.0, 1e-10);
    EXPECT_LE(arm->normal_equation_residual, 1e-8);
  }
}

// Cross-fitting: a row's prediction must not depend on its own outcome.
TEST(FitOutcomes, CrossFitPredictionIgnoresOwnRow) {
  wl::Rng rng(3);
  auto ds = wltest::RandomDataset(rng, 100, 2);
  const auto folds = wl::SplitFolds(ds.size(), 5, wl::SeedSpec{9});
  const auto before = wl::FitOutcomeRegressions(ds, wl::BasisSpec{1, {}}, 0.0, folds);
  auto perturbed = ds;
  perturbed.y[17] += 1000.0;
  const auto after = wl::FitOutcomeRegressions(perturbed, wl::BasisSpec{1, {}}, 0.0, folds);
  EXPECT_EQ(before.m0_hat[17], after.m0_hat[17]);
  EXPECT_EQ(before.m1_hat[17], after.m1_hat[17]);
  // Rows outside fold(17) were trained on row 17 and should move.
  bool moved = false;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (folds[i] != folds[17]) {
      moved = moved || before.m0_hat[i] != after.m0_hat[i] || before.m1_hat[i] != after.m1_hat[i];
    }
  }
  EXPECT_TRUE(moved);
}

TEST(FitPropensity, CrossFitPredictionIgnoresOwnTreatment) {
  wl::Rng rng(4);
  auto ds = wltest::RandomDataset(rng, 120, 1);
  const auto folds = wl::SplitFolds(ds.size(), 4, wl::SeedSpec{10});
  const auto before = wl::FitPropensity(ds, wl::BasisSpec{1, {}}, folds, 0.01);
  auto flipped = ds;
  flipped.d[30] = 1 - flipped.d[30];
  const auto after = wl::FitPropensity(flipped, wl::BasisSpec{1, {}}, folds, 0.01);
  EXPECT_EQ(before.e_hat[30], after.e_hat[30]);
}

TEST(EstimateNuisance, KnownPropensityIsClippedTruth) {
  wl::DgpSpec spec;
  spec.n = 50;
  const auto ods = wl::Generate(spec, wl::SeedSpec{8});
  wl::NuisanceConfig config;
  config.known_propensity = true;
  config.clip = 0.1;
  const auto nuis = wl::EstimateNuisance(ods.base, config, wl::SeedSpec{8}, ods.e_true);
  for (double e : nuis.e_hat) EXPECT_DOUBLE_EQ(e, 0.5);
  EXPECT_EQ(nuis.provenance, wl::NuisanceProvenance::kKnownPropensity);
  EXPECT_THROW(wl::EstimateNuisance(ods.base, config, wl::SeedSpec{8}), wl::Error);
}

TEST(EstimateNuisance, MisspecifiedBasisIsInterceptOnly) {
  wl::NuisanceConfig config;
  config.outcome_basis = wl::BasisSpec{2, {}};
  config.misspecify_outcome = true;
  EXPECT_EQ(wl::EffectiveOutcomeBasis(config), (wl::BasisSpec{0, {}}));
  EXPECT_EQ(wl::EffectivePropensityBasis(config), config.propensity_basis);
}
