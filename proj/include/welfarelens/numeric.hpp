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

#ifndef WELFARELENS_NUMERIC_HPP_
#define WELFARELENS_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "welfarelens/error.hpp"

namespace welfarelens {

// Neumaier-compensated running sum. Accumulation order is the call order.
class CompensatedSum {
 public:
  void Add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double Mean(std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum.Add(v);
  return values.empty() ? 0.0 : sum.Total() / static_cast<double>(values.size());
}

// Mean and standard error of the mean.
struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline MeanAndError MeanWithError(std::span<const double> values) {
  MeanAndError out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  out.mean = Mean(values);
  if (n < 2) return out;
  CompensatedSum ss;
  for (double v : values) ss.Add((v - out.mean) * (v - out.mean));
  const double variance = ss.Total() / static_cast<double>(n - 1);
  out.standard_error = std::sqrt(variance / static_cast<double>(n));
  return out;
}

inline double Median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct RidgeSolution {
  Vector coefficients;
  bool rank_deficient = false;
  // ‖(BᵀB + λP)β − BᵀY‖ where P zeroes the unpenalized columns.
  double normal_equation_residual = 0.0;
};

// Solves min ‖y − Bβ‖² + λ Σ_{j penalized} β_j². Columns flagged in
// `unpenalized` (typically the intercept) carry no penalty. When the system
// is singular the minimum-norm solution is returned and flagged.
inline RidgeSolution SolveRidge(const Matrix& design, const Vector& target,
                                double ridge,
                                const std::vector<bool>& unpenalized) {
  if (ridge < 0.0 || !std::isfinite(ridge)) {
    Fail(ErrorCode::kInvalidArgument, "ridge penalty must be finite and >= 0");
  }
  if (design.rows() != target.size()) {
    Fail(ErrorCode::kInvalidArgument, "design/target row mismatch");
  }
  const Eigen::Index p = design.cols();
  Matrix gram = design.transpose() * design;
  for (Eigen::Index j = 0; j < p; ++j) {
    const bool free = static_cast<std::size_t>(j) < unpenalized.size() &&
                      unpenalized[static_cast<std::size_t>(j)];
    if (!free) gram(j, j) += ridge;
  }
  const Vector rhs = design.transpose() * target;

  RidgeSolution out;
  Eigen::CompleteOrthogonalDecomposition<Matrix> decomposition(gram);
  out.rank_deficient = decomposition.rank() < p;
  out.coefficients = decomposition.solve(rhs);
  out.normal_equation_residual = (gram * out.coefficients - rhs).norm();
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_NUMERIC_HPP_
