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

#ifndef WELFARELENS_POLICIES_HPP_
#define WELFARELENS_POLICIES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "welfarelens/basis.hpp"
#include "welfarelens/csv.hpp"
#include "welfarelens/dataset.hpp"
#include "welfarelens/error.hpp"

namespace welfarelens {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Per-policy, per-row 0/1 decisions of an enumerated class, policy-major.
class PolicyMatrix {
 public:
  PolicyMatrix() = default;
  PolicyMatrix(std::size_t policies, std::size_t rows)
      : policies_(policies), rows_(rows), data_(policies * rows, 0) {}

  std::size_t policies() const { return policies_; }
  std::size_t rows() const { return rows_; }

  std::span<const std::uint8_t> Policy(std::size_t k) const {
    return std::span<const std::uint8_t>(data_).subspan(k * rows_, rows_);
  }
  std::span<std::uint8_t> MutablePolicy(std::size_t k) {
    return std::span<std::uint8_t>(data_).subspan(k * rows_, rows_);
  }

 private:
  std::size_t policies_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::uint8_t> data_;
};

enum class PolicyFamily { kSignedThreshold, kAxisRectangle, kExplicitList };

inline const char* PolicyFamilyName(PolicyFamily family) {
  switch (family) {
    case PolicyFamily::kSignedThreshold:
      return "signed-threshold";
    case PolicyFamily::kAxisRectangle:
      return "axis-rectangle";
    case PolicyFamily::kExplicitList:
      return "explicit-list";
  }
  return "unknown";
}

// Sorted distinct values of one covariate, optionally thinned to at most
// `max_points` evenly spaced order statistics, with ±∞ sentinels appended.
inline std::vector<double> QuantileGrid(const ObservedDataset& ds, std::size_t coordinate,
                                        std::size_t max_points = 0, bool sentinels = true) {
  if (coordinate >= ds.dim) Fail(ErrorCode::kInvalidArgument, "grid coordinate out of range");
  std::vector<double> values(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) values[i] = ds.Row(i)[coordinate];
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> grid;
  if (max_points == 0 || values.size() <= max_points) {
    grid = values;
  } else if (max_points == 1) {
    grid.push_back(values[(values.size() - 1) / 2]);
  } else {
    for (std::size_t q = 0; q < max_points; ++q) {
      const std::size_t rank = q * (values.size() - 1) / (max_points - 1);
      if (grid.empty() || grid.back() != values[rank]) grid.push_back(values[rank]);
    }
  }
  if (sentinels) {
    grid.insert(grid.begin(), -kInf);
    grid.push_back(kInf);
  }
  return grid;
}

// `points` evenly spaced values over [low, high].
inline std::vector<double> FixedGrid(double low, double high, std::size_t points) {
  std::vector<double> grid;
  if (points == 1) return {0.5 * (low + high)};
  for (std::size_t k = 0; k < points; ++k) {
    grid.push_back(low + (high - low) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  return grid;
}

// A finite family of 0/1 policies in a stable canonical order:
//   index 0: π ≡ 1, index 1: π ≡ 0, then the family members.
//
// signed-threshold: for each coordinate j (in the given order), each grid
//   point t, and sign s ∈ {+1, -1} (in that order), π(x) = 1{s·(x_j - t) >= 0}.
// axis-rectangle: one option per coordinate, either "unrestricted" or an
//   interval [g_a, g_b] with a <= b from that coordinate's grid; the
//   coordinate-0 option varies slowest. π(x) = 1{x in the box}.
// explicit-list: stored per-row 0/1 vectors (defined only on the rows they
//   were built for).
class EnumerablePolicyClass {
 public:
  struct Member {
    PolicyFamily family = PolicyFamily::kSignedThreshold;
    bool constant = false;
    int constant_value = 0;
    // signed-threshold
    std::size_t coordinate = 0;
    double threshold = 0.0;
    int sign = 1;
    // axis-rectangle: per-coordinate [low, high] (±∞ when unrestricted)
    std::vector<double> lower;
    std::vector<double> upper;
    // explicit-list
    std::size_t list_index = 0;
  };

  static EnumerablePolicyClass SignedThreshold(std::vector<std::size_t> coordinates,
                                               std::vector<std::vector<double>> grids) {
    if (coordinates.size() != grids.size()) {
      Fail(ErrorCode::kInvalidArgument, "one threshold grid per coordinate required");
    }
    EnumerablePolicyClass out;
    out.family_ = PolicyFamily::kSignedThreshold;
    out.threshold_coordinates_ = std::move(coordinates);
    out.grids_ = std::move(grids);
    std::size_t total = 0;
    for (const auto& g : out.grids_) {
      out.offsets_.push_back(total);
      total += 2 * g.size();
    }
    out.family_size_ = total;
    return out;
  }

  static EnumerablePolicyClass AxisRectangle(std::vector<std::vector<double>> grids) {
    EnumerablePolicyClass out;
    out.family_ = PolicyFamily::kAxisRectangle;
    for (auto& g : grids) {
      if (!std::is_sorted(g.begin(), g.end())) {
        Fail(ErrorCode::kInvalidArgument, "rectangle grids must be sorted");
      }
    }
    out.grids_ = std::move(grids);
    // Saturating product; a class this large is refused at enumeration time.
    std::size_t total = 1;
    for (const auto& g : out.grids_) {
      const std::size_t options = RectangleOptionsPerCoordinate(g.size());
      total = total > std::numeric_limits<std::size_t>::max() / options
                  ? std::numeric_limits<std::size_t>::max()
                  : total * options;
    }
    out.family_size_ = total;
    return out;
  }

  static EnumerablePolicyClass ExplicitList(std::vector<std::vector<std::uint8_t>> assignments) {
    EnumerablePolicyClass out;
    out.family_ = PolicyFamily::kExplicitList;
    for (const auto& a : assignments) {
      if (!assignments.empty() && a.size() != assignments.front().size()) {
        Fail(ErrorCode::kInvalidArgument, "explicit policies must share one row count");
      }
      for (auto v : a) {
        if (v > 1) Fail(ErrorCode::kInvalidArgument, "explicit policies must be 0/1");
      }
    }
    out.explicit_ = std::move(assignments);
    out.family_size_ = out.explicit_.size();
    return out;
  }

  // C(m, 2) + m intervals plus the unrestricted option.
  static std::size_t RectangleOptionsPerCoordinate(std::size_t m) { return m * (m + 1) / 2 + 1; }

  PolicyFamily family() const { return family_; }
  std::size_t size() const {
    return family_size_ > std::numeric_limits<std::size_t>::max() - 2
               ? std::numeric_limits<std::size_t>::max()
               : family_size_ + 2;
  }

  const std::vector<std::vector<double>>& grids() const { return grids_; }
  const std::vector<std::size_t>& threshold_coordinates() const { return threshold_coordinates_; }

  Member Describe(std::size_t k) const {
    if (k >= size()) Fail(ErrorCode::kInvalidArgument, "policy index out of range");
    Member m;
    m.family = family_;
    if (k < 2) {
      m.constant = true;
      m.constant_value = k == 0 ? 1 : 0;
      return m;
    }
    const std::size_t local = k - 2;
    switch (family_) {
      case PolicyFamily::kSignedThreshold: {
        std::size_t c = 0;
        while (c + 1 < offsets_.size() && local >= offsets_[c + 1]) ++c;
        const std::size_t within = local - offsets_[c];
        m.coordinate = threshold_coordinates_[c];
        m.threshold = grids_[c][within / 2];
        m.sign = within % 2 == 0 ? 1 : -1;
        break;
      }
      case PolicyFamily::kAxisRectangle: {
        const std::size_t d = grids_.size();
        m.lower.assign(d, -kInf);
        m.upper.assign(d, kInf);
        std::size_t rest = local;
        for (std::size_t jj = d; jj-- > 0;) {
          const std::size_t options = RectangleOptionsPerCoordinate(grids_[jj].size());
          const std::size_t option = rest % options;
          rest /= options;
          if (option == 0) continue;
          // Options 1.. enumerate pairs (a, b), a <= b, a-major.
          std::size_t idx = option - 1;
          const std::size_t mm = grids_[jj].size();
          std::size_t a = 0;
          while (idx >= mm - a) {
            idx -= mm - a;
            ++a;
          }
          m.lower[jj] = grids_[jj][a];
          m.upper[jj] = grids_[jj][a + idx];
        }
        break;
      }
      case PolicyFamily::kExplicitList:
        m.list_index = local;
        break;
    }
    return m;
  }

  static int Decide(const Member& m, std::span<const double> x) {
    if (m.constant) return m.constant_value;
    switch (m.family) {
      case PolicyFamily::kSignedThreshold:
        return static_cast<double>(m.sign) * (x[m.coordinate] - m.threshold) >= 0.0 ? 1 : 0;
      case PolicyFamily::kAxisRectangle:
        for (std::size_t j = 0; j < m.lower.size(); ++j) {
          if (x[j] < m.lower[j] || x[j] > m.upper[j]) return 0;
        }
        return 1;
      case PolicyFamily::kExplicitList:
        Fail(ErrorCode::kInvalidArgument, "explicit-list policies cannot be evaluated on new covariates");
    }
    return 0;
  }

  int Decide(std::size_t k, std::span<const double> x) const { return Decide(Describe(k), x); }

  std::string DescribeText(std::size_t k) const {
    const Member m = Describe(k);
    if (m.constant) return m.constant_value ? "treat-all" : "treat-none";
    switch (m.family) {
      case PolicyFamily::kSignedThreshold:
        return std::string("1{") + (m.sign > 0 ? "+" : "-") + "(x" +
               std::to_string(m.coordinate + 1) + " - " + FormatDouble(m.threshold) + ") >= 0}";
      case PolicyFamily::kAxisRectangle: {
        std::string out = "1{";
        for (std::size_t j = 0; j < m.lower.size(); ++j) {
          if (j) out += " & ";
          out += "x" + std::to_string(j + 1) + " in [" + FormatDouble(m.lower[j]) + ", " +
                 FormatDouble(m.upper[j]) + "]";
        }
        return out + "}";
      }
      case PolicyFamily::kExplicitList:
        return "explicit#" + std::to_string(m.list_index);
    }
    return "";
  }

  // Evaluates every member on `rows` rows of covariates (row-major, `dim`
  // columns). Refuses when policies × rows exceeds `cap`.
  PolicyMatrix Enumerate(std::span<const double> x, std::size_t dim, std::size_t rows,
                         std::size_t cap = kDefaultEnumerationCap) const {
    CheckCap(rows, cap);
    PolicyMatrix out(size(), rows);
    if (family_ == PolicyFamily::kExplicitList && !explicit_.empty() &&
        explicit_.front().size() != rows) {
      Fail(ErrorCode::kInvalidArgument, "explicit policies were built for a different row count");
    }
    for (std::size_t k = 0; k < size(); ++k) {
      auto dest = out.MutablePolicy(k);
      if (k >= 2 && family_ == PolicyFamily::kExplicitList) {
        std::copy(explicit_[k - 2].begin(), explicit_[k - 2].end(), dest.begin());
        continue;
      }
      const Member m = Describe(k);
      for (std::size_t i = 0; i < rows; ++i) {
        dest[i] = static_cast<std::uint8_t>(Decide(m, x.subspan(i * dim, dim)));
      }
    }
    return out;
  }

  PolicyMatrix Enumerate(const ObservedDataset& ds, std::size_t cap = kDefaultEnumerationCap) const {
    return Enumerate(ds.x, ds.dim, ds.size(), cap);
  }

  // Number of policy-row evaluations enumeration would perform.
  double EvaluationCount(std::size_t rows) const {
    return static_cast<double>(size()) * static_cast<double>(rows);
  }

  void CheckCap(std::size_t rows, std::size_t cap) const {
    if (EvaluationCount(rows) > static_cast<double>(cap)) {
      Fail(ErrorCode::kCapExceeded,
           std::string(PolicyFamilyName(family_)) + " class of " +
               FormatDouble(static_cast<double>(size())) + " policies on " +
               std::to_string(rows) + " rows needs " + FormatDouble(EvaluationCount(rows)) +
               " evaluations, above the cap of " + std::to_string(cap));
    }
  }

 private:
  PolicyFamily family_ = PolicyFamily::kSignedThreshold;
  std::vector<std::size_t> threshold_coordinates_;
  std::vector<std::vector<double>> grids_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::uint8_t>> explicit_;
  std::size_t family_size_ = 0;
};

// π_θ(x) = sigmoid(θᵀφ(x)); equivalently g_θ(x) = 2π_θ(x) - 1 = tanh(θᵀφ(x)/2).
class ParametricPolicyClass {
 public:
  explicit ParametricPolicyClass(Basis basis) : basis_(std::move(basis)) {}

  const Basis& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }

  double Index(std::span<const double> theta, std::span<const double> x) const {
    return basis_.Dot(x, theta);
  }

  double Probability(std::span<const double> theta, std::span<const double> x) const {
    const double z = Index(theta, x);
    return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  }

  double G(std::span<const double> theta, std::span<const double> x) const {
    return std::tanh(0.5 * Index(theta, x));
  }

 private:
  Basis basis_;
};

// g = 2π - 1.
inline std::vector<double> ToG(std::span<const double> pi) {
  std::vector<double> g(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (!(pi[i] >= 0.0 && pi[i] <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "policy value outside [0, 1]: " + FormatDouble(pi[i]));
    }
    g[i] = 2.0 * pi[i] - 1.0;
  }
  return g;
}

// π = (g + 1)/2.
inline std::vector<double> FromG(std::span<const double> g) {
  std::vector<double> pi(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= -1.0 && g[i] <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "g value outside [-1, 1]: " + FormatDouble(g[i]));
    }
    pi[i] = (g[i] + 1.0) / 2.0;
  }
  return pi;
}

inline std::vector<double> ToDouble(std::span<const std::uint8_t> decisions) {
  return std::vector<double>(decisions.begin(), decisions.end());
}

// π = 1{score >= 0}; a zero score means treat.
inline std::vector<std::uint8_t> ThresholdPolicyFromScores(std::span<const double> scores) {
  std::vector<std::uint8_t> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= 0.0 ? 1 : 0;
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_POLICIES_HPP_
