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

#ifndef WELFARELENS_DGP_HPP_
#define WELFARELENS_DGP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/dataset.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/numeric.hpp"
#include "welfarelens/random.hpp"

namespace welfarelens {

enum class CovariateLaw { kUniformBox, kTruncatedGaussian };
enum class PropensityFamily { kConstant, kLogistic };
enum class BaselineFamily { kLinear, kQuadratic };
enum class CateFamily { kLinear, kThreshold, kSmooth };

// Synthetic data-generating process with known e(x), m0(x) and τ(x).
//
//   X ~ uniform on [box_low, box_high]^dim, or a standard gaussian truncated
//       to that box;
//   e(x) = constant, or sigmoid(a0 + aᵀx), clipped to [overlap, 1 - overlap];
//   m0(x) = b0 + bᵀx (+ Σ c_j x_j² for the quadratic family);
//   τ(x) = t0 + tᵀx                          (linear)
//        = +amp if x_j >= cut, -amp otherwise (threshold)
//        = t0 + amp·sin(freq·x_j)            (smooth);
//   Y0 = m0(X) + ε0, Y1 = m0(X) + τ(X) + ε1, D ~ Bernoulli(e(X)).
//
// The noise is a N(0, σ²) draw truncated symmetrically so that |Y_d| never
// exceeds y_max; symmetry keeps E[ε_d | X] = 0.
struct DgpSpec {
  std::size_t dim = 2;
  std::size_t n = 500;

  CovariateLaw covariate_law = CovariateLaw::kUniformBox;
  double box_low = -1.0;
  double box_high = 1.0;

  PropensityFamily propensity = PropensityFamily::kConstant;
  double propensity_constant = 0.5;
  double propensity_intercept = 0.0;
  std::vector<double> propensity_slopes;
  double overlap = 0.05;

  BaselineFamily baseline = BaselineFamily::kLinear;
  double baseline_intercept = 0.0;
  std::vector<double> baseline_slopes;
  std::vector<double> baseline_quadratic;

  CateFamily cate = CateFamily::kLinear;
  double cate_intercept = 0.0;
  std::vector<double> cate_slopes;
  std::size_t cate_coordinate = 0;
  double cate_cut = 0.0;
  double cate_amplitude = 1.0;
  double cate_frequency = 3.0;

  double noise_sd = 1.0;
  double y_max = 20.0;
};

// Evaluable [0,1]-valued policy on raw covariates.
using PolicyFunction = std::function<double(std::span<const double>)>;

namespace dgp_internal {

inline double Coefficient(const std::vector<double>& v, std::size_t j) {
  return j < v.size() ? v[j] : 0.0;
}

inline double BoxAbsMax(const DgpSpec& spec) {
  return std::max(std::abs(spec.box_low), std::abs(spec.box_high));
}

inline double LinearBound(double intercept, const std::vector<double>& slopes,
                          double abs_max) {
  double bound = std::abs(intercept);
  for (double s : slopes) bound += std::abs(s) * abs_max;
  return bound;
}

inline double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace dgp_internal

inline double TruePropensity(const DgpSpec& spec, std::span<const double> x) {
  double e = spec.propensity_constant;
  if (spec.propensity == PropensityFamily::kLogistic) {
    double z = spec.propensity_intercept;
    for (std::size_t j = 0; j < x.size(); ++j) {
      z += dgp_internal::Coefficient(spec.propensity_slopes, j) * x[j];
    }
    e = dgp_internal::Sigmoid(z);
  }
  return std::clamp(e, spec.overlap, 1.0 - spec.overlap);
}

inline double TrueBaseline(const DgpSpec& spec, std::span<const double> x) {
  double m = spec.baseline_intercept;
  for (std::size_t j = 0; j < x.size(); ++j) {
    m += dgp_internal::Coefficient(spec.baseline_slopes, j) * x[j];
    if (spec.baseline == BaselineFamily::kQuadratic) {
      m += dgp_internal::Coefficient(spec.baseline_quadratic, j) * x[j] * x[j];
    }
  }
  return m;
}

inline double TrueCate(const DgpSpec& spec, std::span<const double> x) {
  switch (spec.cate) {
    case CateFamily::kLinear: {
      double t = spec.cate_intercept;
      for (std::size_t j = 0; j < x.size(); ++j) {
        t += dgp_internal::Coefficient(spec.cate_slopes, j) * x[j];
      }
      return t;
    }
    case CateFamily::kThreshold:
      return x[spec.cate_coordinate] >= spec.cate_cut ? spec.cate_amplitude
                                                       : -spec.cate_amplitude;
    case CateFamily::kSmooth:
      return spec.cate_intercept +
             spec.cate_amplitude * std::sin(spec.cate_frequency * x[spec.cate_coordinate]);
  }
  return 0.0;
}

// Upper bound of max(|m0|, |m0 + τ|) over the covariate box.
inline double MeanOutcomeBound(const DgpSpec& spec) {
  const double a = dgp_internal::BoxAbsMax(spec);
  double m_bound =
      dgp_internal::LinearBound(spec.baseline_intercept, spec.baseline_slopes, a);
  if (spec.baseline == BaselineFamily::kQuadratic) {
    for (double c : spec.baseline_quadratic) m_bound += std::abs(c) * a * a;
  }
  double t_bound = 0.0;
  switch (spec.cate) {
    case CateFamily::kLinear:
      t_bound = dgp_internal::LinearBound(spec.cate_intercept, spec.cate_slopes, a);
      break;
    case CateFamily::kThreshold:
      t_bound = std::abs(spec.cate_amplitude);
      break;
    case CateFamily::kSmooth:
      t_bound = std::abs(spec.cate_intercept) + std::abs(spec.cate_amplitude);
      break;
  }
  return m_bound + t_bound;
}

// Half-width of the symmetric noise truncation.
inline double NoiseBound(const DgpSpec& spec) { return spec.y_max - MeanOutcomeBound(spec); }

inline void ValidateDgpSpec(const DgpSpec& spec) {
  auto bad = [](const std::string& m) { Fail(ErrorCode::kConfig, "dgp: " + m); };
  if (spec.n == 0) bad("n must be >= 1");
  if (spec.dim == 0) bad("dim must be >= 1");
  if (!(spec.box_low < spec.box_high)) bad("box_low must be < box_high");
  if (!(spec.overlap > 0.0 && spec.overlap < 0.5)) bad("overlap must lie in (0, 1/2)");
  if (!(spec.propensity_constant > 0.0 && spec.propensity_constant < 1.0)) {
    bad("propensity constant must lie in (0, 1)");
  }
  if (spec.propensity_slopes.size() > spec.dim || spec.baseline_slopes.size() > spec.dim ||
      spec.baseline_quadratic.size() > spec.dim || spec.cate_slopes.size() > spec.dim) {
    bad("coefficient vector longer than dim");
  }
  if (spec.cate_coordinate >= spec.dim) bad("cate coordinate out of range");
  if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.noise_sd)) bad("noise_sd must be >= 0");
  if (!(NoiseBound(spec) > 0.0)) {
    bad("y_max must exceed the bound on |m_d(x)| over the covariate box (" +
        std::to_string(MeanOutcomeBound(spec)) + ")");
  }
}

inline void DrawCovariates(const DgpSpec& spec, Rng& rng, std::span<double> row) {
  for (double& v : row) {
    if (spec.covariate_law == CovariateLaw::kUniformBox) {
      v = rng.Uniform(spec.box_low, spec.box_high);
    } else {
      do {
        v = rng.Normal();
      } while (v < spec.box_low || v > spec.box_high);
    }
  }
}

inline double DrawNoise(const DgpSpec& spec, Rng& rng) {
  if (spec.noise_sd == 0.0) return 0.0;
  const double bound = NoiseBound(spec);
  double v;
  do {
    v = spec.noise_sd * rng.Normal();
  } while (std::abs(v) > bound);
  return v;
}

// Simulates spec.n rows. Covariates, treatment and the two noise terms come
// from four separate streams, so D is independent of (ε0, ε1) given X.
inline OracleDataset Generate(const DgpSpec& spec, const SeedSpec& seed) {
  ValidateDgpSpec(spec);
  Rng covariate_rng(seed.Derive(Stream::kDgp, 0));
  Rng treatment_rng(seed.Derive(Stream::kDgp, 1));
  Rng noise0_rng(seed.Derive(Stream::kDgp, 2));
  Rng noise1_rng(seed.Derive(Stream::kDgp, 3));

  const std::size_t n = spec.n;
  OracleDataset out;
  ObservedDataset& ds = out.base;
  ds.dim = spec.dim;
  ds.x.resize(n * spec.dim);
  ds.d.resize(n);
  ds.y.resize(n);
  out.y0.resize(n);
  out.y1.resize(n);
  out.e_true.resize(n);
  out.tau_true.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> row(ds.x.data() + i * spec.dim, spec.dim);
    DrawCovariates(spec, covariate_rng, row);
    const double m0 = TrueBaseline(spec, row);
    const double tau = TrueCate(spec, row);
    const double e = TruePropensity(spec, row);
    out.y0[i] = m0 + DrawNoise(spec, noise0_rng);
    out.y1[i] = m0 + tau + DrawNoise(spec, noise1_rng);
    out.e_true[i] = e;
    out.tau_true[i] = tau;
    ds.d[i] = treatment_rng.Bernoulli(e) ? 1 : 0;
    ds.y[i] = ds.d[i] == 1 ? out.y1[i] : out.y0[i];
  }
  return out;
}

// Fresh covariate draws with m0 and τ evaluated on them. Evaluating several
// policies on one sample (common random numbers) makes welfare differences
// exact functions of where the policies disagree.
struct MonteCarloSample {
  std::size_t dim = 0;
  std::vector<double> x;
  std::vector<double> m0;
  std::vector<double> tau;

  std::size_t size() const { return m0.size(); }
  std::span<const double> Row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * dim, dim);
  }
};

inline MonteCarloSample DrawMonteCarloSample(const DgpSpec& spec, std::size_t m,
                                             const SeedSpec& seed) {
  ValidateDgpSpec(spec);
  if (m == 0) Fail(ErrorCode::kInvalidArgument, "monte carlo size must be >= 1");
  MonteCarloSample sample;
  sample.dim = spec.dim;
  sample.x.resize(m * spec.dim);
  sample.m0.resize(m);
  sample.tau.resize(m);
  Rng rng(seed.Derive(Stream::kMonteCarlo));
  for (std::size_t i = 0; i < m; ++i) {
    std::span<double> row(sample.x.data() + i * spec.dim, spec.dim);
    DrawCovariates(spec, rng, row);
    sample.m0[i] = TrueBaseline(spec, row);
    sample.tau[i] = TrueCate(spec, row);
  }
  return sample;
}

// W(π) on a Monte Carlo sample from per-draw treatment probabilities.
// Noise is mean zero in both arms, so only m0 + τπ needs averaging.
inline MeanAndError WelfareOnSample(const MonteCarloSample& sample,
                                    std::span<const double> treat) {
  std::vector<double> values(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    values[i] = sample.m0[i] + sample.tau[i] * treat[i];
  }
  return MeanWithError(values);
}

inline MeanAndError WelfareOnSample(const MonteCarloSample& sample, const PolicyFunction& policy) {
  std::vector<double> treat(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) treat[i] = policy(sample.Row(i));
  return WelfareOnSample(sample, treat);
}

// Monte Carlo estimate of W(π) = E[m0(X) + τ(X)π(X)] with its standard error.
inline MeanAndError TrueWelfare(const DgpSpec& spec, const PolicyFunction& policy,
                                std::size_t m, const SeedSpec& seed) {
  return WelfareOnSample(DrawMonteCarloSample(spec, m, seed), policy);
}

// π_FB(x) = 1{τ(x) >= 0}; ties go to treatment.
inline PolicyFunction FirstBestPolicy(const DgpSpec& spec) {
  return [spec](std::span<const double> x) { return TrueCate(spec, x) >= 0.0 ? 1.0 : 0.0; };
}

}  // namespace welfarelens

#endif  // WELFARELENS_DGP_HPP_
