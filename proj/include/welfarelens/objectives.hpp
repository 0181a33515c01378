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

#ifndef WELFARELENS_OBJECTIVES_HPP_
#define WELFARELENS_OBJECTIVES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "welfarelens/error.hpp"
#include "welfarelens/numeric.hpp"
#include "welfarelens/pseudo.hpp"

namespace welfarelens {

namespace objectives_internal {

inline void RequireLength(const PseudoOutcomes& ps, std::size_t n) {
  if (ps.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "length mismatch: " + std::to_string(ps.size()) +
                                          " pseudo-outcomes vs " + std::to_string(n) + " values");
  }
}

inline void RequireLambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    Fail(ErrorCode::kInvalidArgument, "least-squares scale lambda must be > 0");
  }
}

}  // namespace objectives_internal

// Ŵ(π) = (1/n) Σ [Γ1_i π_i + Γ0_i (1 - π_i)].
inline double EmpiricalWelfare(const PseudoOutcomes& ps, std::span<const double> pi) {
  objectives_internal::RequireLength(ps, pi.size());
  CompensatedSum sum;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    sum.Add(ps.gamma1[i] * pi[i] + ps.gamma0[i] * (1.0 - pi[i]));
  }
  return sum.Total() / static_cast<double>(pi.size());
}

inline double EmpiricalWelfare(const PseudoOutcomes& ps, std::span<const std::uint8_t> pi) {
  objectives_internal::RequireLength(ps, pi.size());
  CompensatedSum sum;
  for (std::size_t i = 0; i < pi.size(); ++i) sum.Add(pi[i] ? ps.gamma1[i] : ps.gamma0[i]);
  return sum.Total() / static_cast<double>(pi.size());
}

// (1/n) Σ (Γ_i/√λ - √λ·g_i)²; λ = 1 gives the plain mean squared error.
inline double EmpiricalMse(const PseudoOutcomes& ps, std::span<const double> g,
                           double lambda = 1.0) {
  objectives_internal::RequireLength(ps, g.size());
  objectives_internal::RequireLambda(lambda);
  const double root = std::sqrt(lambda);
  CompensatedSum sum;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= -1.0 && g[i] <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "g value outside [-1, 1]");
    }
    const double r = ps.gamma[i] / root - root * g[i];
    sum.Add(r * r);
  }
  return sum.Total() / static_cast<double>(g.size());
}

// Plain MSE for a 0/1 policy, with g = 2π - 1 formed on the fly.
inline double EmpiricalMseOfPolicy(const PseudoOutcomes& ps, std::span<const std::uint8_t> pi) {
  objectives_internal::RequireLength(ps, pi.size());
  CompensatedSum sum;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double r = ps.gamma[i] - (pi[i] ? 1.0 : -1.0);
    sum.Add(r * r);
  }
  return sum.Total() / static_cast<double>(pi.size());
}

// Ŵ(π) - μ·(1/n) Σ (2π_i - 1)².
inline double RegularizedWelfare(const PseudoOutcomes& ps, std::span<const double> pi,
                                 double penalty) {
  if (!(penalty >= 0.0)) Fail(ErrorCode::kInvalidArgument, "penalty must be >= 0");
  CompensatedSum sq;
  for (double p : pi) sq.Add((2.0 * p - 1.0) * (2.0 * p - 1.0));
  return EmpiricalWelfare(ps, pi) -
         penalty * sq.Total() / static_cast<double>(std::max<std::size_t>(pi.size(), 1));
}

// For every 0/1 policy π, Ŵ(π) + MSE(2π - 1)/4 equals
//   C_n = mean(Γ0) + mean(Γ)/2 + mean(Γ²)/4 + 1/4,
// independent of π. Expanding with π = (g+1)/2 and g² = 1:
//   Ŵ = mean(Γ0) + mean(Γ)/2 + mean(Γg)/2,
//   MSE/4 = mean(Γ²)/4 - mean(Γg)/2 + 1/4.
inline double AffineConstant(const PseudoOutcomes& ps) {
  CompensatedSum g0, g, g2;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    g0.Add(ps.gamma0[i]);
    g.Add(ps.gamma[i]);
    g2.Add(ps.gamma[i] * ps.gamma[i]);
  }
  const double n = static_cast<double>(ps.size());
  return g0.Total() / n + 0.5 * g.Total() / n + 0.25 * g2.Total() / n + 0.25;
}

// Ŵ(π) + MSE(2π - 1)/4 - C_n for a 0/1 policy.
inline double AffineResidual(const PseudoOutcomes& ps, std::span<const std::uint8_t> pi,
                             double constant) {
  return EmpiricalWelfare(ps, pi) + 0.25 * EmpiricalMseOfPolicy(ps, pi) - constant;
}

// Regularized analogue on [0,1]-valued π: with μ = λ/4,
//   Ŵ(π) - μ·mean(g²) + MSE_λ(g)/4 = mean(Γ0) + mean(Γ)/2 + mean(Γ²)/(4λ).
inline double RegularizedAffineConstant(const PseudoOutcomes& ps, double lambda) {
  objectives_internal::RequireLambda(lambda);
  CompensatedSum g0, g, g2;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    g0.Add(ps.gamma0[i]);
    g.Add(ps.gamma[i]);
    g2.Add(ps.gamma[i] * ps.gamma[i]);
  }
  const double n = static_cast<double>(ps.size());
  return g0.Total() / n + 0.5 * g.Total() / n + g2.Total() / (4.0 * lambda * n);
}

}  // namespace welfarelens

#endif  // WELFARELENS_OBJECTIVES_HPP_
