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

#ifndef WELFARELENS_PSEUDO_HPP_
#define WELFARELENS_PSEUDO_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/csv.hpp"
#include "welfarelens/dataset.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/nuisance.hpp"

namespace welfarelens {

enum class PseudoKind { kOracle, kIpw, kDr };

inline const char* PseudoKindName(PseudoKind kind) {
  switch (kind) {
    case PseudoKind::kOracle:
      return "oracle";
    case PseudoKind::kIpw:
      return "ipw";
    case PseudoKind::kDr:
      return "dr";
  }
  return "unknown";
}

// Per-row arm-wise welfare components. gamma1[i] stands in for Y1_i and
// gamma0[i] for Y0_i; gamma[i] = gamma1[i] - gamma0[i] is the regression
// target for Y1 - Y0. Empirical welfare of π is mean(gamma1·π + gamma0·(1-π)).
struct PseudoOutcomes {
  PseudoKind kind = PseudoKind::kIpw;
  std::vector<double> gamma0;
  std::vector<double> gamma1;
  std::vector<double> gamma;

  std::size_t size() const { return gamma.size(); }

  // Builds the record from its components; gamma is derived, never stored
  // independently.
  static PseudoOutcomes FromComponents(PseudoKind kind, std::vector<double> gamma0,
                                       std::vector<double> gamma1) {
    if (gamma0.size() != gamma1.size()) {
      Fail(ErrorCode::kInvalidArgument, "pseudo-outcome component length mismatch");
    }
    PseudoOutcomes out;
    out.kind = kind;
    out.gamma.resize(gamma0.size());
    for (std::size_t i = 0; i < gamma0.size(); ++i) {
      if (!std::isfinite(gamma0[i]) || !std::isfinite(gamma1[i])) {
        Fail(ErrorCode::kData, "non-finite pseudo-outcome at row " + std::to_string(i));
      }
      out.gamma[i] = gamma1[i] - gamma0[i];
    }
    out.gamma0 = std::move(gamma0);
    out.gamma1 = std::move(gamma1);
    return out;
  }
};

// Γ1 = Y·D/e, Γ0 = Y·(1-D)/(1-e).
inline PseudoOutcomes IpwPseudo(const ObservedDataset& ds, std::span<const double> e_hat) {
  RequireValid(ds);
  const std::size_t n = ds.size();
  if (e_hat.size() != n) Fail(ErrorCode::kInvalidArgument, "propensity length mismatch");
  std::vector<double> g0(n), g1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = e_hat[i];
    if (!(e > 0.0 && e < 1.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "propensity " + FormatDouble(e) + " at row " + std::to_string(i) +
               " would divide by zero; propensities must lie in (0, 1)");
    }
    // The untreated component is an exact zero rather than Y·0, which could
    // produce -0.0 for negative Y.
    g1[i] = ds.d[i] == 1 ? ds.y[i] / e : 0.0;
    g0[i] = ds.d[i] == 0 ? ds.y[i] / (1.0 - e) : 0.0;
  }
  return PseudoOutcomes::FromComponents(PseudoKind::kIpw, std::move(g0), std::move(g1));
}

// Γ1 = m̂1 + D(Y - m̂1)/ê, Γ0 = m̂0 + (1-D)(Y - m̂0)/(1-ê). With m̂ ≡ 0 this
// reproduces IpwPseudo bit for bit.
inline PseudoOutcomes DrPseudo(const ObservedDataset& ds, const NuisanceEstimates& nuis) {
  RequireValid(ds);
  const std::size_t n = ds.size();
  if (nuis.e_hat.size() != n || nuis.m0_hat.size() != n || nuis.m1_hat.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "nuisance length mismatch");
  }
  std::vector<double> g0(n), g1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = nuis.e_hat[i];
    const double m0 = nuis.m0_hat[i];
    const double m1 = nuis.m1_hat[i];
    if (!(e > 0.0 && e < 1.0) || !std::isfinite(m0) || !std::isfinite(m1)) {
      Fail(ErrorCode::kInvalidArgument, "invalid nuisance estimate at row " + std::to_string(i));
    }
    g1[i] = m1 + (ds.d[i] == 1 ? (ds.y[i] - m1) / e : 0.0);
    g0[i] = m0 + (ds.d[i] == 0 ? (ds.y[i] - m0) / (1.0 - e) : 0.0);
  }
  return PseudoOutcomes::FromComponents(PseudoKind::kDr, std::move(g0), std::move(g1));
}

// Γ1 = Y1, Γ0 = Y0.
inline PseudoOutcomes OraclePseudo(const OracleDataset& ods) {
  const std::size_t n = ods.size();
  if (ods.y0.size() != n || ods.y1.size() != n) {
    Fail(ErrorCode::kData, "oracle dataset lacks potential outcomes");
  }
  return PseudoOutcomes::FromComponents(PseudoKind::kOracle, ods.y0, ods.y1);
}

inline std::string PseudoToCsv(const PseudoOutcomes& ps) {
  std::string out = "i,gamma0,gamma1,gamma,kind\n";
  const std::string kind = PseudoKindName(ps.kind);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out += std::to_string(i) + "," + FormatDouble(ps.gamma0[i]) + "," +
           FormatDouble(ps.gamma1[i]) + "," + FormatDouble(ps.gamma[i]) + "," + kind + "\n";
  }
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_PSEUDO_HPP_
