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
#include <cstring>

#include "support.hpp"

namespace wl = welfarelens;

namespace {

wl::ObservedDataset OneRow(double y, int d) { return wl::ObservedDataset{1, {0.0}, {d}, {y}}; }

wl::NuisanceEstimates OneNuisance(double e, double m0, double m1) {
  wl::NuisanceEstimates nuis;
  nuis.e_hat = {e};
  nuis.m0_hat = {m0};
  nuis.m1_hat = {m1};
  return nuis;
}

bool BitwiseEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(IpwPseudo, TreatedRow) {
  const std::vector<double> e{0.5};
  const auto ps = wl::IpwPseudo(OneRow(2.0, 1), e);
  EXPECT_EQ(ps.gamma1[0], 4.0);
  EXPECT_EQ(ps.gamma0[0], 0.0);
  EXPECT_EQ(ps.gamma[0], 4.0);
}

TEST(IpwPseudo, ControlRow) {
  const std::vector<double> e{0.25};
  const auto ps = wl::IpwPseudo(OneRow(3.0, 0), e);
  EXPECT_EQ(ps.gamma1[0], 0.0);
  EXPECT_EQ(ps.gamma0[0], 4.0);
  EXPECT_EQ(ps.gamma[0], -4.0);
}

TEST(IpwPseudo, RejectsDegeneratePropensity) {
  for (double e : {0.0, 1.0}) {
    const std::vector<double> ev{e};
    EXPECT_THROW(wl::IpwPseudo(OneRow(1.0, 1), ev), wl::Error);
  }
}

TEST(DrPseudo, ZeroResidualRow) {
  const auto ps = wl::DrPseudo(OneRow(1.0, 1), OneNuisance(0.5, 0.0, 1.0));
  EXPECT_DOUBLE_EQ(ps.gamma[0], 1.0);
}

TEST(DrPseudo, ControlRowHandEvaluation) {
  const auto ps = wl::DrPseudo(OneRow(0.0, 0), OneNuisance(0.5, 1.0, 2.0));
  // Residual form: m1 - m0 + (D - e)/(e(1 - e))·(Y - m0) = 1 + (-2)(-1).
  const double residual_form = (2.0 - 1.0) + (0.0 - 0.5) / (0.5 * 0.5) * (0.0 - 1.0);
  EXPECT_DOUBLE_EQ(residual_form, 3.0);
  EXPECT_DOUBLE_EQ(ps.gamma[0], residual_form);
}

// Property: the arm-wise DR components agree with the single-line residual
// form on random rows, and collapse to IPW bit for bit at m̂ ≡ 0.
TEST(DrPseudo, PropertyResidualFormAndCollapse) {
  wl::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.UniformIndex(40);
    auto ds = wltest::RandomDataset(rng, std::max<std::size_t>(n, 2), 1);
    wl::NuisanceEstimates nuis;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      nuis.e_hat.push_back(rng.Uniform(0.02, 0.98));
      nuis.m0_hat.push_back(rng.Normal());
      nuis.m1_hat.push_back(rng.Normal());
    }
    const auto dr = wl::DrPseudo(ds, nuis);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double e = nuis.e_hat[i];
      const double m_d = ds.d[i] == 1 ? nuis.m1_hat[i] : nuis.m0_hat[i];
      const double expected =
          nuis.m1_hat[i] - nuis.m0_hat[i] + (ds.d[i] - e) / (e * (1 - e)) * (ds.y[i] - m_d);
      EXPECT_NEAR(dr.gamma[i], expected, 1e-9 * (1 + std::abs(expected)));
      EXPECT_EQ(dr.gamma[i], dr.gamma1[i] - dr.gamma0[i]);
    }
    std::fill(nuis.m0_hat.begin(), nuis.m0_hat.end(), 0.0);
    std::fill(nuis.m1_hat.begin(), nuis.m1_hat.end(), 0.0);
    const auto collapsed = wl::DrPseudo(ds, nuis);
    const auto ipw = wl::IpwPseudo(ds, nuis.e_hat);
    EXPECT_TRUE(BitwiseEqual(collapsed.gamma0, ipw.gamma0));
    EXPECT_TRUE(BitwiseEqual(collapsed.gamma1, ipw.gamma1));
    EXPECT_TRUE(BitwiseEqual(collapsed.gamma, ipw.gamma));
  }
}

TEST(OraclePseudo, ComponentsArePotentialOutcomes) {
  wl::OracleDataset ods;
  ods.base = OneRow(2.0, 0);
  ods.y0 = {2.0};
  ods.y1 = {5.0};
  const auto ps = wl::OraclePseudo(ods);
  EXPECT_EQ(ps.kind, wl::PseudoKind::kOracle);
  EXPECT_EQ(ps.gamma[0], 3.0);
}

TEST(OraclePseudo, NoiselessUnitEffect) {
  wl::DgpSpec spec;
  spec.n = 100;
  spec.noise_sd = 0.0;
  spec.cate_intercept = 1.0;
  const auto ps = wl::OraclePseudo(wl::Generate(spec, wl::SeedSpec{2}));
  for (double g : ps.gamma) EXPECT_DOUBLE_EQ(g, 1.0);
}

// IPW with the true propensity is unbiased for the oracle mean: over 200
// datasets the mean difference lies within 4 standard errors of zero.
TEST(IpwPseudo, UnbiasedUnderTruePropensity) {
  wl::DgpSpec spec;
  spec.n = 400;
  spec.propensity = wl::PropensityFamily::kLogistic;
  spec.propensity_slopes = {1.0, -0.5};
  spec.baseline_slopes = {1.0, 1.0};
  spec.cate_intercept = 0.3;
  spec.cate_slopes = {1.0, 0.0};
  std::vector<double> diffs;
  for (std::uint64_t r = 0; r < 200; ++r) {
    const auto ods = wl::Generate(spec, wl::SeedSpec{1000}.ForReplication(r));
    const auto ipw = wl::IpwPseudo(ods.base, ods.e_true);
    const auto oracle = wl::OraclePseudo(ods);
    diffs.push_back(wl::Mean(ipw.gamma) - wl::Mean(oracle.gamma));
  }
  const auto summary = wl::MeanWithError(diffs);
  EXPECT_LE(std::abs(summary.mean), 4.0 * summary.standard_error);
}

TEST(PseudoOutcomes, ComponentIdentityExact) {
  wl::Rng rng(5);
  const auto ps = wltest::RandomPseudo(rng, 100, 7.0);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_EQ(ps.gamma[i], ps.gamma1[i] - ps.gamma0[i]);
  }
}

TEST(PseudoOutcomes, NonFiniteComponentIsDataError) {
  EXPECT_THROW(wl::PseudoOutcomes::FromComponents(wl::PseudoKind::kIpw, {1.0}, {NAN}), wl::Error);
}
