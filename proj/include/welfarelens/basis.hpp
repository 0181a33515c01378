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

#ifndef WELFARELENS_BASIS_HPP_
#define WELFARELENS_BASIS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/dataset.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/numeric.hpp"

namespace welfarelens {

// What a polynomial feature map is built from: total degree and the subset
// of covariates it may use (empty = all). Degree 0 is the intercept alone.
struct BasisSpec {
  int degree = 1;
  std::vector<std::size_t> columns;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

// Polynomial feature map φ(x): every monomial of total degree <= `degree` in
// the selected covariates, ordered by degree and then lexicographically.
// Feature 0 is always the intercept.
class Basis {
 public:
  Basis() : Basis(1, BasisSpec{0, {}}) {}

  Basis(std::size_t dim, BasisSpec spec) : dim_(dim), spec_(std::move(spec)) {
    if (spec_.degree < 0) Fail(ErrorCode::kInvalidArgument, "basis degree must be >= 0");
    std::vector<std::size_t> cols = spec_.columns;
    if (cols.empty()) {
      for (std::size_t j = 0; j < dim; ++j) cols.push_back(j);
    }
    for (std::size_t c : cols) {
      if (c >= dim) Fail(ErrorCode::kInvalidArgument, "basis column out of range");
    }
    terms_.push_back({});
    std::vector<std::vector<std::size_t>> frontier{{}};
    for (int deg = 1; deg <= spec_.degree; ++deg) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& term : frontier) {
        // Non-decreasing positions within `cols` keep each monomial unique.
        std::size_t first = 0;
        if (!term.empty()) {
          for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == term.back()) first = k;
          }
        }
        for (std::size_t k = first; k < cols.size(); ++k) {
          auto extended = term;
          extended.push_back(cols[k]);
          next.push_back(std::move(extended));
        }
      }
      terms_.insert(terms_.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  const BasisSpec& spec() const { return spec_; }

  void Evaluate(std::span<const double> x, std::span<double> out) const {
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      double v = 1.0;
      for (std::size_t c : terms_[t]) v *= x[c];
      out[t] = v;
    }
  }

  std::vector<double> Evaluate(std::span<const double> x) const {
    std::vector<double> out(size());
    Evaluate(x, out);
    return out;
  }

  double Dot(std::span<const double> x, std::span<const double> coefficients) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      // Same operation order as Evaluate followed by a dot product, so
      // predictions match design-matrix evaluations bit for bit.
      double v = 1.0;
      for (std::size_t c : terms_[t]) v *= x[c];
      sum += v * coefficients[t];
    }
    return sum;
  }

  Matrix Design(const ObservedDataset& ds) const {
    Matrix out(static_cast<Eigen::Index>(ds.size()), static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < ds.size(); ++i) {
      Evaluate(ds.Row(i), std::span<double>(out.row(static_cast<Eigen::Index>(i)).data(), size()));
    }
    return out;
  }

  Matrix Design(const ObservedDataset& ds, std::span<const std::size_t> rows) const {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Evaluate(ds.Row(rows[r]), std::span<double>(out.row(static_cast<Eigen::Index>(r)).data(), size()));
    }
    return out;
  }

  // Intercept is the only unpenalized column.
  std::vector<bool> UnpenalizedMask() const {
    std::vector<bool> mask(size(), false);
    mask[0] = true;
    return mask;
  }

  std::string Describe() const {
    std::string out;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      if (t) out += " ";
      if (terms_[t].empty()) {
        out += "1";
        continue;
      }
      for (std::size_t k = 0; k < terms_[t].size(); ++k) {
        if (k) out += "*";
        out += "x" + std::to_string(terms_[t][k] + 1);
      }
    }
    return out;
  }

 private:
  std::size_t dim_ = 0;
  BasisSpec spec_;
  std::vector<std::vector<std::size_t>> terms_;
};

}  // namespace welfarelens

#endif  // WELFARELENS_BASIS_HPP_
