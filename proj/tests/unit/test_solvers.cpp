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

#include <algorithm>
#include <cmath>
#include <set>

#include "support.hpp"

namespace wl = welfarelens;

namespace {

wl::ObservedDataset LineData(std::size_t n) {
  wl::ObservedDataset ds;
  ds.dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    ds.x.push_back(0.1 * static_cast<double>(i + 1));
    ds.d.push_back(static_cast<int>(i % 2));
    ds.y.push_back(0.0);
  }
  return ds;
}

wl::EnumerablePolicyClass ThresholdOnData(const wl::ObservedDataset& ds) {
  return wl::EnumerablePolicyClass::SignedThreshold({0}, {wl::QuantileGrid(ds, 0)});
}

bool Contains(const std::vector<std::size_t>& set, std::size_t k) {
  return std::find(set.begin(), set.end(), k) != set.end();
}

// Integer-valued pseudo-outcomes produce many exact ties.
wl::PseudoOutcomes IntegerPseudo(wl::Rng& rng, std::size_t n) {
  std::vector<double> g0(n), g1(n);
  for (std::size_t i = 0; i < n; ++i) {
    g0[i] = static_cast<double>(rng.UniformIndex(5)) - 2.0;
    g1[i] = static_cast<double>(rng.UniformIndex(5)) - 2.0;
  }
  return wl::PseudoOutcomes::FromComponents(wl::PseudoKind::kDr, g0, g1);
}

}  // namespace

TEST(Route, NamesRoundTrip) {
  for (auto r : {wl::Route::kEwm, wl::Route::kEwmRegularized, wl::Route::kLs,
                 wl::Route::kLsRegularized, wl::Route::kPluginTLearner,
                 wl::Route::kPluginIpwRegression}) {
    EXPECT_EQ(wl::ParseRoute(wl::RouteName(r)), r);
  }
  EXPECT_FALSE(wl::ParseRoute("gradient-boosting").has_value());
}

TEST(EwmEnumerate, PositiveEffectsChooseTreatAll) {
  const auto ds = LineData(8);
  const auto ps = wltest::PseudoFromGamma({1, 2, 0.5, 3, 1, 1, 2, 4});
  const auto fit = wl::EwmEnumerate(ps, ThresholdOnData(ds), ds);
  EXPECT_TRUE(Contains(fit.argopt, 0));
}

TEST(EwmEnumerate, NegativeEffectsChooseTreatNone) {
  const auto ds = LineData(8);
  const auto ps = wltest::PseudoFromGamma({-1, -2, -0.5, -3, -1, -1, -2, -4});
  const auto fit = wl::EwmEnumerate(ps, ThresholdOnData(ds), ds);
  EXPECT_TRUE(Contains(fit.argopt, 1));
  EXPECT_EQ(fit.index, 1u);
}

// Six rows: the class optimum equals the best of all 2⁶ assignments that the
// threshold rule can produce, found without the library.
TEST(EwmEnumerate, SixRowsMatchBruteForce) {
  const auto ds = LineData(6);
  const auto ps = wl::PseudoOutcomes::FromComponents(wl::PseudoKind::kIpw, {0.3, -1, 2, 0, 0.5, -0.2},
                                                     {1, 0.4, -1.5, 2, -0.1, 1.2});
  std::set<unsigned> in_class{0u, 63u};
  for (double t : ds.x) {
    unsigned up = 0, down = 0;
    for (int i = 0; i < 6; ++i) {
      if (ds.x[i] >= t) up |= 1u << i;
      if (-(ds.x[i] - t) >= 0) down |= 1u << i;
    }
    in_class.insert(up);
    in_class.insert(down);
  }
  double best = -1e300;
  std::set<unsigned> best_masks;
  for (unsigned mask = 0; mask < 64; ++mask) {
    if (!in_class.count(mask)) continue;
    double w = 0;
    for (int i = 0; i < 6; ++i) w += (mask >> i & 1u) ? ps.gamma1[i] : ps.gamma0[i];
    w /= 6;
    if (w > best + 1e-12) {
      best = w;
      best_masks = {mask};
    } else if (std::abs(w - best) <= 1e-12) {
      best_masks.insert(mask);
    }
  }
  const auto fit = wl::EwmEnumerate(ps, ThresholdOnData(ds), ds);
  EXPECT_NEAR(fit.objective, best, 1e-12);
  unsigned chosen = 0;
  for (int i = 0; i < 6; ++i) chosen |= (fit.decisions[i] == 1.0 ? 1u : 0u) << i;
  EXPECT_TRUE(best_masks.count(chosen));
}

TEST(LsEnumerate, UnitTargetChoosesTreatAll) {
  const auto ds = LineData(5);
  const auto fit = wl::LsEnumerate(wltest::PseudoFromGamma({1, 1, 1, 1, 1}), ThresholdOnData(ds), ds);
  EXPECT_TRUE(Contains(fit.argopt, 0));
  EXPECT_NEAR(fit.objective, 0.0, 1e-15);
}

TEST(LsEnumerate, LargeNegativeTargetChoosesTreatNone) {
  const auto ds = LineData(5);
  const auto fit = wl::LsEnumerate(wltest::PseudoFromGamma({-3, -3, -3, -3, -3}), ThresholdOnData(ds), ds);
  EXPECT_TRUE(Contains(fit.argopt, 1));
  EXPECT_NEAR(fit.objective, 4.0, 1e-15);
}

// Property: for random data, pseudo-outcomes and classes, the EWM argmax set
// and the LS argmin set are the same set of class indices.
TEST(Equivalence, PropertyArgoptimumSetsCoincide) {
  wl::Rng rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 3 + rng.UniformIndex(60);
    const auto ds = wltest::RandomDataset(rng, n, 2);
    const auto ps = trial % 2 == 0 ? IntegerPseudo(rng, n) : wltest::RandomPseudo(rng, n, 3.0);
    const auto cls =
        trial % 3 == 0
            ? wl::EnumerablePolicyClass::AxisRectangle(
                  {wl::QuantileGrid(ds, 0, 4, false), wl::QuantileGrid(ds, 1, 4, false)})
            : wl::EnumerablePolicyClass::SignedThreshold({0, 1}, {wl::QuantileGrid(ds, 0),
                                                                  wl::QuantileGrid(ds, 1)});
    const auto ewm = wl::EwmEnumerate(ps, cls, ds);
    const auto ls = wl::LsEnumerate(ps, cls, ds);
    ASSERT_EQ(ewm.argopt, ls.argopt) << "trial " << trial;
    EXPECT_EQ(ewm.index, ls.index);
    // Re-evaluation and exhaustiveness.
    EXPECT_NEAR(ewm.objective, wl::EmpiricalWelfare(ps, ewm.decisions), 1e-12);
    for (double v : ewm.candidate_objectives) EXPECT_GE(ewm.objective, v - wl::WelfareTieTolerance(ps));
  }
}

TEST(Degenerate, ZeroEffectTreatsEveryone) {
  wl::Rng rng(8);
  const auto ds = wltest::RandomDataset(rng, 20, 2);
  const auto ps = wltest::PseudoFromGamma(std::vector<double>(20, 0.0));
  const auto cls = wl::EnumerablePolicyClass::SignedThreshold({0}, {wl::QuantileGrid(ds, 0)});
  EXPECT_EQ(wl::EwmEnumerate(ps, cls, ds).index, 0u);
  EXPECT_EQ(wl::LsEnumerate(ps, cls, ds).index, 0u);
  for (double v : wl::EwmRegularizedPointwise(ps, 0.0).decisions) EXPECT_EQ(v, 1.0);
  for (double v : wl::PluginIpwRegression(ps, ds, wl::BasisSpec{1, {}}).decisions) EXPECT_EQ(v, 1.0);
  for (double v : wl::LsLinear(ps, ds, wl::BasisSpec{1, {}}).decisions) EXPECT_EQ(v, 1.0);
}

// Pointwise regularized EWM: closed form against a dense numeric search of
// p ↦ Γp - μ(2p - 1)² on [0, 1].
TEST(EwmRegularizedPointwise, ClosedFormMatchesNumericSearch) {
  wl::Rng rng(9);
  const auto ps = wltest::RandomPseudo(rng, 40, 3.0);
  for (double mu : {0.1, 0.5, 2.0, 50.0}) {
    const auto fit = wl::EwmRegularizedPointwise(ps, mu);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      double best_p = 0, best_v = -1e300;
      for (int k = 0; k <= 200000; ++k) {
        const double p = k / 200000.0;
        const double v = ps.gamma[i] * p - mu * (2 * p - 1) * (2 * p - 1);
        if (v > best_v) {
          best_v = v;
          best_p = p;
        }
      }
      EXPECT_NEAR(fit.decisions[i], best_p, 1e-5);
      EXPECT_NEAR(fit.decisions[i], std::clamp(0.5 + ps.gamma[i] / (8 * mu), 0.0, 1.0), 1e-15);
    }
  }
}

TEST(EwmRegularizedPointwise, ZeroPenaltyIsSignRule) {
  const auto ps = wltest::PseudoFromGamma({-1, 0, 2, -0.5});
  EXPECT_EQ(wl::EwmRegularizedPointwise(ps, 0.0).decisions, (std::vector<double>{0, 1, 1, 0}));
}

TEST(LsRegularizedPointwise, ClampedRatio) {
  const auto ps = wltest::PseudoFromGamma({-5, -0.5, 0, 0.3, 4});
  const auto fit = wl::LsRegularizedPointwise(ps, 2.0);
  const std::vector<double> g{-1, -0.25, 0, 0.15, 1};
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(2 * fit.decisions[i] - 1, g[i], 1e-15);
}

// Constant Γ = c: the pointwise optima are 1/2 + c/(8μ) and 1/2 + c/(2λ),
// which meet exactly at μ = λ/4.
TEST(Scale, ConstantGammaPointwiseOptimaMeetAtQuarter) {
  const auto ps = wltest::PseudoFromGamma(std::vector<double>(4, 0.3));
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto ls = wl::LsRegularizedPointwise(ps, lambda);
    const auto quarter = wl::EwmRegularizedPointwise(ps, lambda / 4);
    const auto four = wl::EwmRegularizedPointwise(ps, 4 * lambda);
    EXPECT_NEAR(ls.decisions[0], quarter.decisions[0], 1e-15);
    EXPECT_GT(std::abs(ls.decisions[0] - four.decisions[0]), 1e-3);
  }
  const auto cands = wl::CandidateSet::AllGridAssignments(2, 10);
  const std::vector<wl::PseudoOutcomes> draws{wltest::PseudoFromGamma({0.3, 0.3})};
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto res = wl::ResolveLambdaScale(draws, cands, grid);
  EXPECT_NEAR(res.ratio, 0.25, 1e-9);
  EXPECT_EQ(res.match, "1/4");
}

TEST(Scale, RandomDrawsGiveOneConsistentRatio) {
  wl::Rng rng(10);
  std::vector<wl::PseudoOutcomes> draws;
  for (int d = 0; d < 5; ++d) draws.push_back(wltest::RandomPseudo(rng, 3));
  const auto cands = wl::CandidateSet::AllGridAssignments(3, 6);
  const std::vector<double> grid{0.25, 1.0, 4.0};
  const auto res = wl::ResolveLambdaScale(draws, cands, grid);
  EXPECT_TRUE(res.consistent);
  EXPECT_LE(res.dispersion, wl::kScaleDispersionTolerance);
  for (const auto& e : res.entries) EXPECT_TRUE(e.sets_match_at_quarter);
}

// λ only shifts and rescales the objective on 0/1 candidates, so the argmin
// set is the plain LS set along a decreasing λ grid.
TEST(LsRegularized, SmallLambdaLimitOnBinaryClass) {
  wl::Rng rng(11);
  const auto ds = wltest::RandomDataset(rng, 25, 1);
  const auto ps = wltest::RandomPseudo(rng, 25);
  const auto cls = ThresholdOnData(ds);
  const auto plain = wl::LsEnumerate(ps, cls, ds);
  const auto cands = wl::CandidateSet::FromPolicyMatrix(cls.Enumerate(ds));
  for (double lambda : {1.0, 0.1, 1e-2, 1e-3}) {
    EXPECT_EQ(wl::LsRegularized(ps, cands, lambda).argopt, plain.argopt) << lambda;
  }
}

TEST(MinimizeBoxed, QuadraticWithActiveBound) {
  auto f = [](const std::vector<double>& t, std::vector<double>& g) {
    g[0] = 2 * (t[0] - 3);
    g[1] = 2 * (t[1] + 20);
    return (t[0] - 3) * (t[0] - 3) + (t[1] + 20) * (t[1] + 20);
  };
  const auto r = wl::MinimizeBoxed(2, f, wl::GradientOptions{});
  EXPECT_NEAR(r.theta[0], 3.0, 1e-8);
  EXPECT_EQ(r.theta[1], -15.0);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.saturated);
}

TEST(EwmRegularizedParametric, ConstantPositiveEffectSaturates) {
  wl::Rng rng(12);
  const auto ds = wltest::RandomDataset(rng, 30, 1);
  const auto ps = wltest::PseudoFromGamma(std::vector<double>(30, 0.7));
  const wl::ParametricPolicyClass cls(wl::Basis(1, wl::BasisSpec{0, {}}));
  const auto fit = wl::EwmRegularizedParametric(ps, ds, cls, 0.0);
  EXPECT_TRUE(fit.saturated);
  EXPECT_EQ(fit.theta[0], 15.0);
}

// The returned θ is a stationary point of an independently coded objective.
TEST(EwmRegularizedParametric, StationaryByFiniteDifferences) {
  wl::Rng rng(13);
  const auto ds = wltest::RandomDataset(rng, 80, 2);
  const auto ps = wltest::RandomPseudo(rng, 80);
  const wl::ParametricPolicyClass cls(wl::Basis(2, wl::BasisSpec{1, {}}));
  const double mu = 1.0;
  const auto fit = wl::EwmRegularizedParametric(ps, ds, cls, mu);
  ASSERT_TRUE(fit.converged);
  ASSERT_FALSE(fit.saturated);
  auto value = [&](std::vector<double> t) {
    double s = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto x = ds.Row(i);
      const double z = t[0] + t[1] * x[0] + t[2] * x[1];
      const double p = 1 / (1 + std::exp(-z));
      s += ps.gamma1[i] * p + ps.gamma0[i] * (1 - p) - mu * (2 * p - 1) * (2 * p - 1);
    }
    return s / static_cast<double>(ds.size());
  };
  for (std::size_t j = 0; j < 3; ++j) {
    auto up = fit.theta, down = fit.theta;
    up[j] += 1e-5;
    down[j] -= 1e-5;
    EXPECT_NEAR((value(up) - value(down)) / 2e-5, 0.0, 1e-6);
  }
  EXPECT_NEAR(fit.objective, value(fit.theta), 1e-12);
}

// Penalized EWM at μ = λ/4 and scaled LS at λ share their optimizer.
TEST(Parametric, QuarterScaleGivesSameTheta) {
  wl::Rng rng(14);
  const auto ds = wltest::RandomDataset(rng, 60, 1);
  const auto ps = wltest::RandomPseudo(rng, 60);
  const wl::ParametricPolicyClass cls(wl::Basis(1, wl::BasisSpec{1, {}}));
  for (double lambda : {0.5, 2.0}) {
    const auto ewm = wl::EwmRegularizedParametric(ps, ds, cls, lambda / 4);
    const auto ls = wl::LsRegularizedParametric(ps, ds, cls, lambda);
    ASSERT_TRUE(ewm.converged && ls.converged);
    for (std::size_t j = 0; j < ewm.theta.size(); ++j) EXPECT_NEAR(ewm.theta[j], ls.theta[j], 1e-6);
  }
}

TEST(PluginTLearner, ConstantArmsAndTie) {
  wl::NuisanceEstimates nuis;
  nuis.e_hat.assign(3, 0.5);
  nuis.m1_hat.assign(3, 2.0);
  nuis.m0_hat.assign(3, 1.0);
  for (double v : wl::PluginTLearner(nuis).decisions) EXPECT_EQ(v, 1.0);
  nuis.m0_hat.assign(3, 2.0);
  for (double v : wl::PluginTLearner(nuis).decisions) EXPECT_EQ(v, 1.0);
}

TEST(PluginTLearner, NoiselessLinearRecoversFirstBest) {
  wl::DgpSpec spec;
  spec.n = 400;
  spec.noise_sd = 0.0;
  spec.baseline_slopes = {0.5, -1.0};
  spec.cate_intercept = 0.2;
  spec.cate_slopes = {1.0, -0.7};
  const auto ods = wl::Generate(spec, wl::SeedSpec{15});
  const auto models = wl::FitOutcomeModels(ods.base, wl::BasisSpec{1, {}}, 0.0);
  const auto policy = wl::PluginTLearner(models, ods.base).AsFunction();
  const auto fb = wl::FirstBestPolicy(spec);
  const auto sample = wl::DrawMonteCarloSample(spec, 2000, wl::SeedSpec{16});
  for (std::size_t i = 0; i < sample.size(); ++i) {
    EXPECT_EQ(policy(sample.Row(i)), fb(sample.Row(i)));
  }
}

TEST(PluginIpwRegression, InterceptOnlyIsConstant) {
  wl::Rng rng(17);
  const auto ds = wltest::RandomDataset(rng, 30, 1);
  const auto ps = wltest::RandomPseudo(rng, 30);
  const auto fit = wl::PluginIpwRegression(ps, ds, wl::BasisSpec{0, {}});
  const double expected = wl::Mean(ps.gamma) >= 0 ? 1.0 : 0.0;
  for (double v : fit.decisions) EXPECT_EQ(v, expected);
}

TEST(PluginIpwRegression, RejectsOracleKind) {
  wl::Rng rng(18);
  const auto ds = wltest::RandomDataset(rng, 10, 1);
  auto ps = wltest::RandomPseudo(rng, 10);
  ps.kind = wl::PseudoKind::kOracle;
  EXPECT_THROW(wl::PluginIpwRegression(ps, ds, wl::BasisSpec{1, {}}), wl::Error);
}

// With X on three support points a quadratic basis is saturated; the fit
// reproduces per-point means, so the policy is the per-point sign rule.
TEST(PluginIpwRegression, SaturatedBasisOnDiscreteSupport) {
  wl::Rng rng(19);
  auto ds = wltest::RandomDataset(rng, 90, 1);
  for (std::size_t i = 0; i < ds.size(); ++i) ds.x[i] = static_cast<double>(i % 3);
  const auto ps = wltest::RandomPseudo(rng, 90);
  double sums[3] = {0, 0, 0};
  for (std::size_t i = 0; i < ds.size(); ++i) sums[i % 3] += ps.gamma[i];
  const auto fit = wl::PluginIpwRegression(ps, ds, wl::BasisSpec{2, {}});
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(fit.decisions[i], sums[i % 3] >= 0 ? 1.0 : 0.0);
  }
}

TEST(PluginIpwRegression, AgreesWithThresholdedLinearLs) {
  wl::Rng rng(20);
  const auto ds = wltest::RandomDataset(rng, 70, 2);
  const auto ps = wltest::RandomPseudo(rng, 70);
  EXPECT_EQ(wl::PluginIpwRegression(ps, ds, wl::BasisSpec{2, {}}, 0.1).decisions,
            wl::LsLinear(ps, ds, wl::BasisSpec{2, {}}, 0.1).decisions);
}

// Noiseless linear τ with the true propensity: the IPW regression slope is
// unbiased, so its replication mean lies within 4 standard errors of truth.
TEST(PluginIpwRegression, CoefficientRecovery) {
  wl::DgpSpec spec;
  spec.dim = 1;
  spec.n = 2000;
  spec.noise_sd = 0.0;
  spec.baseline_intercept = 0.5;
  spec.cate_intercept = 0.25;
  spec.cate_slopes = {1.0};
  std::vector<double> b0, b1;
  for (std::uint64_t r = 0; r < 60; ++r) {
    const auto ods = wl::Generate(spec, wl::SeedSpec{500}.ForReplication(r));
    const auto ps = wl::IpwPseudo(ods.base, ods.e_true);
    const auto fit = wl::PluginIpwRegression(ps, ods.base, wl::BasisSpec{1, {}});
    b0.push_back(fit.theta[0]);
    b1.push_back(fit.theta[1]);
  }
  const auto m0 = wl::MeanWithError(b0), m1 = wl::MeanWithError(b1);
  EXPECT_LE(std::abs(m0.mean - 0.25), 4 * m0.standard_error);
  EXPECT_LE(std::abs(m1.mean - 1.0), 4 * m1.standard_error);
}

TEST(CandidateSet, GridAssignmentsCapAndOrder) {
  EXPECT_THROW(wl::CandidateSet::AllGridAssignments(5, 10, 10000), wl::Error);
  const auto c = wl::CandidateSet::AllGridAssignments(2, 2);
  ASSERT_EQ(c.size(), 9u);
  EXPECT_EQ(c.Candidate(1)[0], 0.0);
  EXPECT_EQ(c.Candidate(1)[1], 0.5);
  EXPECT_EQ(c.Candidate(3)[0], 0.5);
}
