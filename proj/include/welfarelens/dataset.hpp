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

#ifndef WELFARELENS_DATASET_HPP_
#define WELFARELENS_DATASET_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/error.hpp"
#include "welfarelens/random.hpp"

namespace welfarelens {

// Observed rows (Y, D, X). Covariates are stored row-major.
struct ObservedDataset {
  std::size_t dim = 0;
  std::vector<double> x;
  std::vector<int> d;
  std::vector<double> y;

  std::size_t size() const { return y.size(); }

  std::span<const double> Row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * dim, dim);
  }
};

// Simulator output: the observed data plus the hidden potential outcomes,
// true propensity and true CATE.
struct OracleDataset {
  ObservedDataset base;
  std::vector<double> y0;
  std::vector<double> y1;
  std::vector<double> e_true;
  std::vector<double> tau_true;

  std::size_t size() const { return base.size(); }
};

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::size_t n0 = 0;
  std::size_t n1 = 0;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  bool both_arms() const { return n0 > 0 && n1 > 0; }

  const ValidationCheck* Find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  std::string Summary() const {
    std::string out;
    for (const auto& c : checks) {
      if (c.passed) continue;
      if (!out.empty()) out += "; ";
      out += c.message;
    }
    return out;
  }
};

inline ValidationReport ValidateDataset(const ObservedDataset& ds) {
  ValidationReport report;
  const std::size_t n = ds.size();

  auto add = [&](std::string name, bool passed, std::string message) {
    report.checks.push_back({std::move(name), passed,
                             passed ? std::string() : std::move(message)});
  };

  add("nonempty", n >= 1, "dataset has no rows");
  add("dimension", ds.dim >= 1, "covariate dimension must be >= 1");
  const bool shapes = ds.d.size() == n && ds.x.size() == n * ds.dim;
  add("shape", shapes, "rows have inconsistent covariate dimension or length");

  bool binary = true;
  for (int v : ds.d) {
    if (v != 0 && v != 1) binary = false;
    if (v == 0) ++report.n0;
    if (v == 1) ++report.n1;
  }
  add("treatment_binary", binary, "treatment not binary");

  bool y_finite = true;
  for (double v : ds.y) y_finite = y_finite && std::isfinite(v);
  add("outcome_finite", y_finite, "outcome not finite");

  bool x_finite = true;
  for (double v : ds.x) x_finite = x_finite && std::isfinite(v);
  add("covariates_finite", x_finite, "covariate not finite");
  return report;
}

// Throws kData unless the dataset passes every check.
inline void RequireValid(const ObservedDataset& ds) {
  const ValidationReport report = ValidateDataset(ds);
  if (!report.ok()) Fail(ErrorCode::kData, report.Summary());
}

inline void RequireBothArms(const ObservedDataset& ds, const char* what) {
  const ValidationReport report = ValidateDataset(ds);
  if (!report.both_arms()) {
    Fail(ErrorCode::kData, std::string(what) + ": both treatment arms required (n0=" +
                               std::to_string(report.n0) +
                               ", n1=" + std::to_string(report.n1) + ")");
  }
}

// Oracle-level invariants: consistency, overlap and bounded outcomes.
inline ValidationReport ValidateOracle(const OracleDataset& ods, double overlap,
                                       double y_max) {
  ValidationReport report = ValidateDataset(ods.base);
  const std::size_t n = ods.size();
  const bool shapes = ods.y0.size() == n && ods.y1.size() == n &&
                      ods.e_true.size() == n && ods.tau_true.size() == n;
  report.checks.push_back({"oracle_shape", shapes, shapes ? "" : "oracle column length mismatch"});
  if (!shapes) return report;

  bool consistent = true;
  bool overlapping = true;
  bool bounded = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double dd = static_cast<double>(ods.base.d[i]);
    const double implied = dd * ods.y1[i] + (1.0 - dd) * ods.y0[i];
    consistent = consistent && (ods.base.y[i] - implied == 0.0);
    overlapping = overlapping && ods.e_true[i] >= overlap && ods.e_true[i] <= 1.0 - overlap;
    bounded = bounded && std::abs(ods.y0[i]) <= y_max && std::abs(ods.y1[i]) <= y_max;
  }
  report.checks.push_back({"consistency", consistent, consistent ? "" : "Y != D*Y1 + (1-D)*Y0"});
  report.checks.push_back({"overlap", overlapping, overlapping ? "" : "propensity outside [eps, 1-eps]"});
  report.checks.push_back({"bounded", bounded, bounded ? "" : "|Y_d| exceeds y_max"});
  return report;
}

// Assigns each of n rows to one of k folds; fold sizes differ by at most one.
inline std::vector<int> SplitFolds(std::size_t n, std::size_t k, const SeedSpec& seed) {
  if (k < 2 || k > n) {
    Fail(ErrorCode::kInvalidArgument, "invalid fold count " + std::to_string(k) +
                                          " for n=" + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed.Derive(Stream::kNuisanceFolds, n, k));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.UniformIndex(i));
    std::swap(order[i - 1], order[j]);
  }
  std::vector<int> folds(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    folds[order[pos]] = static_cast<int>(pos % k);
  }
  return folds;
}

// Rows of `ds` selected by `rows`, in the given order.
inline ObservedDataset Subset(const ObservedDataset& ds, std::span<const std::size_t> rows) {
  ObservedDataset out;
  out.dim = ds.dim;
  out.x.reserve(rows.size() * ds.dim);
  out.d.reserve(rows.size());
  out.y.reserve(rows.size());
  for (std::size_t i : rows) {
    const auto row = ds.Row(i);
    out.x.insert(out.x.end(), row.begin(), row.end());
    out.d.push_back(ds.d[i]);
    out.y.push_back(ds.y[i]);
  }
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_DATASET_HPP_
