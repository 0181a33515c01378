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

#ifndef WELFARELENS_NUISANCE_HPP_
#define WELFARELENS_NUISANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/basis.hpp"
#include "welfarelens/csv.hpp"
#include "welfarelens/dataset.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/numeric.hpp"
#include "welfarelens/random.hpp"

namespace welfarelens {

enum class NuisanceProvenance { kKnownPropensity, kFitted, kCrossFitted };

inline const char* ProvenanceName(NuisanceProvenance p) {
  switch (p) {
    case NuisanceProvenance::kKnownPropensity:
      return "known-propensity";
    case NuisanceProvenance::kFitted:
      return "fitted";
    case NuisanceProvenance::kCrossFitted:
      return "cross-fitted";
  }
  return "unknown";
}

struct NuisanceEstimates {
  std::vector<double> e_hat;
  std::vector<double> m0_hat;
  std::vector<double> m1_hat;
  NuisanceProvenance provenance = NuisanceProvenance::kFitted;
  std::size_t folds = 0;
  double clip = 0.01;

  std::size_t size() const { return e_hat.size(); }
};

inline void RequireClip(double clip) {
  if (!(clip > 0.0 && clip < 0.5)) {
    Fail(ErrorCode::kInvalidArgument, "propensity clip must lie in (0, 1/2)");
  }
}

inline double ClipPropensity(double e, double clip) { return std::clamp(e, clip, 1.0 - clip); }

// ---------------------------------------------------------------------------
// Propensity: L2-penalized logistic regression in a basis, fitted by damped
// Newton iterations. The intercept is unpenalized.

struct LogisticOptions {
  double penalty = 1e-4;
  int max_iterations = 200;
  double gradient_tolerance = 1e-9;
};

struct LogisticModel {
  Basis basis;
  Vector coefficients;
  int iterations = 0;
  double gradient_norm = 0.0;

  double Predict(std::span<const double> x) const {
    const double z = basis.Dot(x, std::span<const double>(coefficients.data(),
                                                          static_cast<std::size_t>(coefficients.size())));
    return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  }
};

namespace nuisance_internal {

inline double LogisticLoss(const Matrix& design, const Vector& labels, const Vector& beta,
                           double penalty) {
  const Vector z = design * beta;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // log(1 + e^z) - y z, evaluated stably.
    const double zi = z(i);
    const double softplus = zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
    loss += softplus - labels(i) * zi;
  }
  loss /= static_cast<double>(z.size());
  loss += 0.5 * penalty * beta.tail(beta.size() - 1).squaredNorm();
  return loss;
}

}  // namespace nuisance_internal

inline LogisticModel FitLogistic(const ObservedDataset& ds, std::span<const std::size_t> rows,
                                 const Basis& basis, const LogisticOptions& options) {
  const Matrix design = basis.Design(ds, rows);
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  Vector labels(n);
  for (Eigen::Index r = 0; r < n; ++r) labels(r) = ds.d[rows[static_cast<std::size_t>(r)]];

  Vector penalty_diag = Vector::Constant(p, options.penalty);
  penalty_diag(0) = 0.0;

  LogisticModel model;
  model.basis = basis;
  Vector beta = Vector::Zero(p);
  const double inv_n = 1.0 / static_cast<double>(n);
  bool full_step_taken = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Vector z = design * beta;
    Vector prob(n), weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double zi = z(i);
      prob(i) = zi >= 0 ? 1.0 / (1.0 + std::exp(-zi)) : std::exp(zi) / (1.0 + std::exp(zi));
      weight(i) = prob(i) * (1.0 - prob(i));
    }
    const Vector gradient =
        inv_n * (design.transpose() * (prob - labels)) + penalty_diag.cwiseProduct(beta);
    const double previous_norm = model.gradient_norm;
    model.gradient_norm = gradient.norm();
    model.iterations = iter;
    if (model.gradient_norm <= options.gradient_tolerance) {
      model.coefficients = beta;
      return model;
    }
    // A full Newton step that failed to shrink the gradient means the
    // gradient itself is at its rounding floor.
    if (full_step_taken && model.gradient_norm >= previous_norm) {
      model.coefficients = beta;
      return model;
    }
    Matrix hessian = inv_n * (design.transpose() * weight.asDiagonal() * design);
    hessian.diagonal() += penalty_diag;
    hessian.diagonal().array() += 1e-12;
    const Vector step = hessian.ldlt().solve(gradient);

    // Deep in the quadratic region the predicted decrease drops below the
    // rounding error of the summed loss, so Armijo can no longer see progress;
    // the full Newton step is safe there.
    const double current =
        nuisance_internal::LogisticLoss(design, labels, beta, options.penalty);
    full_step_taken = gradient.dot(step) <= 1e-10 * (1.0 + current);
    if (full_step_taken) {
      beta -= step;
      continue;
    }
    // Backtracking on the penalized loss.
    double scale = 1.0;
    Vector candidate = beta - step;
    for (int k = 0; k < 50; ++k) {
      candidate = beta - scale * step;
      if (nuisance_internal::LogisticLoss(design, labels, candidate, options.penalty) <=
          current - 1e-4 * scale * gradient.dot(step)) {
        break;
      }
      scale *= 0.5;
    }
    beta = candidate;
  }
  model.coefficients = beta;
  Fail(ErrorCode::kNonConvergence,
       "propensity fit did not converge after " + std::to_string(options.max_iterations) +
           " iterations; final gradient norm " + FormatDouble(model.gradient_norm));
}

struct PropensityFit {
  std::vector<double> e_hat;
  std::vector<double> raw;
  int max_iterations_used = 0;
  double max_gradient_norm = 0.0;
};

namespace nuisance_internal {

inline std::vector<std::size_t> AllRows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

inline std::size_t FoldCount(std::span<const int> folds) {
  int k = 0;
  for (int f : folds) k = std::max(k, f + 1);
  return static_cast<std::size_t>(k);
}

}  // namespace nuisance_internal

// Per-row propensity predictions clipped to [clip, 1 - clip]. With `folds`
// non-empty, row i is predicted by a model fitted without fold(i).
inline PropensityFit FitPropensity(const ObservedDataset& ds, const BasisSpec& basis_spec,
                                   std::span<const int> folds, double clip,
                                   const LogisticOptions& options = {}) {
  RequireValid(ds);
  RequireClip(clip);
  RequireBothArms(ds, "propensity fit");
  const Basis basis(ds.dim, basis_spec);
  const std::size_t n = ds.size();
  PropensityFit out;
  out.e_hat.resize(n);
  out.raw.resize(n);

  auto record = [&](const LogisticModel& model, std::span<const std::size_t> predict_rows) {
    out.max_iterations_used = std::max(out.max_iterations_used, model.iterations);
    out.max_gradient_norm = std::max(out.max_gradient_norm, model.gradient_norm);
    for (std::size_t i : predict_rows) {
      out.raw[i] = model.Predict(ds.Row(i));
      out.e_hat[i] = ClipPropensity(out.raw[i], clip);
    }
  };

  if (folds.empty()) {
    const auto rows = nuisance_internal::AllRows(n);
    record(FitLogistic(ds, rows, basis, options), rows);
    return out;
  }
  if (folds.size() != n) Fail(ErrorCode::kInvalidArgument, "fold vector length mismatch");
  const std::size_t k = nuisance_internal::FoldCount(folds);
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train, test;
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (folds[i] == static_cast<int>(fold)) {
        test.push_back(i);
      } else {
        train.push_back(i);
        has0 = has0 || ds.d[i] == 0;
        has1 = has1 || ds.d[i] == 1;
      }
    }
    if (test.empty()) continue;
    if (!has0 || !has1) {
      Fail(ErrorCode::kData, "propensity fit: fold " + std::to_string(fold) +
                                 " training rows lack a treatment arm");
    }
    record(FitLogistic(ds, train, basis, options), test);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Outcome means: per-arm ridge least squares in a basis.

struct ArmModel {
  Basis basis;
  Vector coefficients;
  bool rank_deficient = false;
  double normal_equation_residual = 0.0;

  double Predict(std::span<const double> x) const {
    return basis.Dot(x, std::span<const double>(coefficients.data(),
                                                static_cast<std::size_t>(coefficients.size())));
  }
};

inline ArmModel FitArm(const ObservedDataset& ds, std::span<const std::size_t> rows,
                       const Basis& basis, double ridge) {
  if (rows.empty()) Fail(ErrorCode::kData, "cannot fit outcome mean on an empty arm");
  const Matrix design = basis.Design(ds, rows);
  Vector target(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) target(static_cast<Eigen::Index>(r)) = ds.y[rows[r]];
  const RidgeSolution solution = SolveRidge(design, target, ridge, basis.UnpenalizedMask());
  return ArmModel{basis, solution.coefficients, solution.rank_deficient,
                  solution.normal_equation_residual};
}

struct OutcomeModels {
  ArmModel arm0;
  ArmModel arm1;

  double Cate(std::span<const double> x) const { return arm1.Predict(x) - arm0.Predict(x); }
};

// Full-sample fit of both arms on the given rows.
inline OutcomeModels FitOutcomeModels(const ObservedDataset& ds,
                                      std::span<const std::size_t> rows, const Basis& basis,
                                      double ridge) {
  std::vector<std::size_t> rows0, rows1;
  for (std::size_t i : rows) (ds.d[i] == 1 ? rows1 : rows0).push_back(i);
  if (rows0.empty()) Fail(ErrorCode::kData, "cannot fit m_0: no control rows");
  if (rows1.empty()) Fail(ErrorCode::kData, "cannot fit m_1: no treated rows");
  return OutcomeModels{FitArm(ds, rows0, basis, ridge), FitArm(ds, rows1, basis, ridge)};
}

inline OutcomeModels FitOutcomeModels(const ObservedDataset& ds, const BasisSpec& basis_spec,
                                      double ridge) {
  RequireValid(ds);
  return FitOutcomeModels(ds, nuisance_internal::AllRows(ds.size()), Basis(ds.dim, basis_spec),
                          ridge);
}

struct OutcomeFit {
  std::vector<double> m0_hat;
  std::vector<double> m1_hat;
  bool rank_deficient = false;
  double max_normal_equation_residual = 0.0;
};

inline OutcomeFit FitOutcomeRegressions(const ObservedDataset& ds, const BasisSpec& basis_spec,
                                        double ridge, std::span<const int> folds) {
  RequireValid(ds);
  const Basis basis(ds.dim, basis_spec);
  const std::size_t n = ds.size();
  OutcomeFit out;
  out.m0_hat.resize(n);
  out.m1_hat.resize(n);

  auto record = [&](const OutcomeModels& models, std::span<const std::size_t> predict_rows) {
    out.rank_deficient =
        out.rank_deficient || models.arm0.rank_deficient || models.arm1.rank_deficient;
    out.max_normal_equation_residual =
        std::max({out.max_normal_equation_residual, models.arm0.normal_equation_residual,
                  models.arm1.normal_equation_residual});
    for (std::size_t i : predict_rows) {
      out.m0_hat[i] = models.arm0.Predict(ds.Row(i));
      out.m1_hat[i] = models.arm1.Predict(ds.Row(i));
    }
  };

  if (folds.empty()) {
    const auto rows = nuisance_internal::AllRows(n);
    record(FitOutcomeModels(ds, rows, basis, ridge), rows);
    return out;
  }
  if (folds.size() != n) Fail(ErrorCode::kInvalidArgument, "fold vector length mismatch");
  const std::size_t k = nuisance_internal::FoldCount(folds);
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      (folds[i] == static_cast<int>(fold) ? test : train).push_back(i);
    }
    if (test.empty()) continue;
    record(FitOutcomeModels(ds, train, basis, ridge), test);
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-call nuisance estimation from a configuration.

struct NuisanceConfig {
  bool known_propensity = false;
  BasisSpec propensity_basis{1, {}};
  BasisSpec outcome_basis{1, {}};
  // Replace the corresponding basis by the intercept alone.
  bool misspecify_propensity = false;
  bool misspecify_outcome = false;
  double ridge = 0.0;
  double clip = 0.01;
  bool cross_fit = false;
  std::size_t folds = 5;
  LogisticOptions logistic;
  bool fit_outcomes = true;
};

inline BasisSpec EffectivePropensityBasis(const NuisanceConfig& config) {
  return config.misspecify_propensity ? BasisSpec{0, {}} : config.propensity_basis;
}

inline BasisSpec EffectiveOutcomeBasis(const NuisanceConfig& config) {
  return config.misspecify_outcome ? BasisSpec{0, {}} : config.outcome_basis;
}

// `known_e` supplies the true propensity when config.known_propensity is set.
inline NuisanceEstimates EstimateNuisance(const ObservedDataset& ds, const NuisanceConfig& config,
                                          const SeedSpec& seed,
                                          std::span<const double> known_e = {}) {
  RequireValid(ds);
  RequireClip(config.clip);
  const std::size_t n = ds.size();
  std::vector<int> folds;
  if (config.cross_fit) folds = SplitFolds(n, config.folds, seed);

  NuisanceEstimates out;
  out.clip = config.clip;
  out.folds = config.cross_fit ? config.folds : 0;
  if (config.known_propensity) {
    if (known_e.size() != n) {
      Fail(ErrorCode::kData, "known propensity requested but true propensities unavailable");
    }
    out.e_hat.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.e_hat[i] = ClipPropensity(known_e[i], config.clip);
    out.provenance = NuisanceProvenance::kKnownPropensity;
  } else {
    out.e_hat = FitPropensity(ds, EffectivePropensityBasis(config), folds, config.clip,
                              config.logistic)
                    .e_hat;
    out.provenance =
        config.cross_fit ? NuisanceProvenance::kCrossFitted : NuisanceProvenance::kFitted;
  }
  if (config.fit_outcomes) {
    OutcomeFit fit = FitOutcomeRegressions(ds, EffectiveOutcomeBasis(config), config.ridge, folds);
    out.m0_hat = std::move(fit.m0_hat);
    out.m1_hat = std::move(fit.m1_hat);
  } else {
    out.m0_hat.assign(n, 0.0);
    out.m1_hat.assign(n, 0.0);
  }
  return out;
}

inline std::string NuisanceToCsv(const NuisanceEstimates& nuis) {
  std::string out = "i,e_hat,m0_hat,m1_hat\n";
  for (std::size_t i = 0; i < nuis.size(); ++i) {
    out += std::to_string(i) + "," + FormatDouble(nuis.e_hat[i]) + "," +
           FormatDouble(nuis.m0_hat[i]) + "," + FormatDouble(nuis.m1_hat[i]) + "\n";
  }
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_NUISANCE_HPP_
