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

#ifndef WELFARELENS_SOLVERS_HPP_
#define WELFARELENS_SOLVERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/basis.hpp"
#include "welfarelens/dataset.hpp"
#include "welfarelens/dgp.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/nuisance.hpp"
#include "welfarelens/numeric.hpp"
#include "welfarelens/objectives.hpp"
#include "welfarelens/parallel.hpp"
#include "welfarelens/policies.hpp"
#include "welfarelens/pseudo.hpp"

namespace welfarelens {

enum class Route {
  kEwm,
  kEwmRegularized,
  kLs,
  kLsRegularized,
  kPluginTLearner,
  kPluginIpwRegression,
};

inline const char* RouteName(Route route) {
  switch (route) {
    case Route::kEwm:
      return "ewm";
    case Route::kEwmRegularized:
      return "ewm-regularized";
    case Route::kLs:
      return "ls";
    case Route::kLsRegularized:
      return "ls-regularized";
    case Route::kPluginTLearner:
      return "plugin-tlearner";
    case Route::kPluginIpwRegression:
      return "plugin-ipwreg";
  }
  return "unknown";
}

inline std::optional<Route> ParseRoute(const std::string& name) {
  for (Route r : {Route::kEwm, Route::kEwmRegularized, Route::kLs, Route::kLsRegularized,
                  Route::kPluginTLearner, Route::kPluginIpwRegression}) {
    if (name == RouteName(r)) return r;
  }
  return std::nullopt;
}

enum class PolicyRepresentation {
  kEnumerableIndex,  // member of an EnumerablePolicyClass
  kCandidateIndex,   // row of a CandidateSet
  kParametric,       // θ over a basis
  kPerRow,           // explicit per-row decisions only
};

inline const char* RepresentationName(PolicyRepresentation r) {
  switch (r) {
    case PolicyRepresentation::kEnumerableIndex:
      return "enumerable-index";
    case PolicyRepresentation::kCandidateIndex:
      return "candidate-index";
    case PolicyRepresentation::kParametric:
      return "parametric";
    case PolicyRepresentation::kPerRow:
      return "per-row";
  }
  return "unknown";
}

// kLinearThreshold: π(x) = 1{θᵀφ(x) >= 0}; kSigmoid: π(x) = sigmoid(θᵀφ(x)).
enum class Link { kLinearThreshold, kSigmoid };

struct TrainedPolicy {
  Route route = Route::kEwm;
  PolicyRepresentation representation = PolicyRepresentation::kPerRow;

  std::size_t index = 0;
  std::string description;
  std::optional<EnumerablePolicyClass::Member> member;

  std::vector<double> theta;
  std::optional<Basis> basis;
  Link link = Link::kLinearThreshold;

  // π values on the training rows.
  std::vector<double> decisions;

  double objective = 0.0;
  std::vector<std::size_t> argopt;
  double lambda = 0.0;
  double scale_constant = std::numeric_limits<double>::quiet_NaN();

  bool converged = true;
  bool saturated = false;
  int iterations = 0;
  double gradient_norm = 0.0;

  // Objective at every enumerated candidate (not serialized).
  std::vector<double> candidate_objectives;

  // π as a function of raw covariates. Unavailable for per-row policies.
  PolicyFunction AsFunction() const {
    switch (representation) {
      case PolicyRepresentation::kEnumerableIndex: {
        if (!member) break;
        const auto m = *member;
        return [m](std::span<const double> x) {
          return static_cast<double>(EnumerablePolicyClass::Decide(m, x));
        };
      }
      case PolicyRepresentation::kParametric: {
        if (!basis) break;
        const Basis b = *basis;
        const std::vector<double> t = theta;
        if (link == Link::kLinearThreshold) {
          return [b, t](std::span<const double> x) { return b.Dot(x, t) >= 0.0 ? 1.0 : 0.0; };
        }
        return [b, t](std::span<const double> x) {
          const double z = b.Dot(x, t);
          return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        };
      }
      default:
        break;
    }
    Fail(ErrorCode::kInvalidArgument,
         std::string("policy with ") + RepresentationName(representation) +
             " representation cannot be evaluated on new covariates");
  }
};

// ---------------------------------------------------------------------------
// Argoptimum sets.

// Relative tie tolerance. Objective values within `tolerance` of the optimum
// are treated as tied; the tolerance is set from the rounding scale of each
// objective, orders of magnitude below any genuine gap.
inline constexpr double kTieRelativeTolerance = 1e-12;

inline double WelfareTieTolerance(const PseudoOutcomes& ps, double penalty = 0.0) {
  CompensatedSum s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    s.Add(std::abs(ps.gamma0[i]) + std::abs(ps.gamma1[i]));
  }
  const double n = static_cast<double>(std::max<std::size_t>(ps.size(), 1));
  return kTieRelativeTolerance * (1.0 + s.Total() / n + penalty);
}

inline double MseTieTolerance(const PseudoOutcomes& ps, double lambda = 1.0) {
  CompensatedSum sq, ab;
  for (double g : ps.gamma) {
    sq.Add(g * g);
    ab.Add(std::abs(g));
  }
  const double n = static_cast<double>(std::max<std::size_t>(ps.size(), 1));
  return kTieRelativeTolerance * (1.0 + sq.Total() / (n * lambda) + 2.0 * ab.Total() / n + lambda);
}

// Indices within `tolerance` of the best value, in ascending order.
inline std::vector<std::size_t> ArgOptimumSet(std::span<const double> values, bool maximize,
                                              double tolerance) {
  std::vector<std::size_t> out;
  if (values.empty()) return out;
  double best = values[0];
  for (double v : values) best = maximize ? std::max(best, v) : std::min(best, v);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double gap = maximize ? best - values[k] : values[k] - best;
    if (gap <= tolerance) out.push_back(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact routes over an enumerable 0/1 class.

struct EnumerationResult {
  std::vector<double> objectives;
  std::vector<std::size_t> argopt;
  std::size_t representative = 0;
};

inline EnumerationResult EwmOnMatrix(const PseudoOutcomes& ps, const PolicyMatrix& matrix) {
  EnumerationResult out;
  out.objectives.resize(matrix.policies());
  ParallelFor(matrix.policies(), [&](std::size_t k) {
    out.objectives[k] = EmpiricalWelfare(ps, matrix.Policy(k));
  });
  out.argopt = ArgOptimumSet(out.objectives, true, WelfareTieTolerance(ps));
  out.representative = out.argopt.empty() ? 0 : out.argopt.front();
  return out;
}

inline EnumerationResult LsOnMatrix(const PseudoOutcomes& ps, const PolicyMatrix& matrix) {
  EnumerationResult out;
  out.objectives.resize(matrix.policies());
  ParallelFor(matrix.policies(), [&](std::size_t k) {
    out.objectives[k] = EmpiricalMseOfPolicy(ps, matrix.Policy(k));
  });
  out.argopt = ArgOptimumSet(out.objectives, false, MseTieTolerance(ps));
  out.representative = out.argopt.empty() ? 0 : out.argopt.front();
  return out;
}

namespace solvers_internal {

inline TrainedPolicy FromEnumeration(Route route, const EnumerationResult& result,
                                     const EnumerablePolicyClass& cls,
                                     const PolicyMatrix& matrix) {
  TrainedPolicy out;
  out.route = route;
  out.representation = PolicyRepresentation::kEnumerableIndex;
  out.index = result.representative;
  out.member = cls.Describe(out.index);
  out.description = cls.DescribeText(out.index);
  out.decisions = ToDouble(matrix.Policy(out.index));
  out.objective = result.objectives[out.index];
  out.argopt = result.argopt;
  out.candidate_objectives = result.objectives;
  return out;
}

}  // namespace solvers_internal

// argmax over Π of Ŵ(π); the representative is the first argmax in canonical
// order and the full set is reported.
inline TrainedPolicy EwmEnumerate(const PseudoOutcomes& ps, const EnumerablePolicyClass& cls,
                                  const ObservedDataset& ds,
                                  std::size_t cap = kDefaultEnumerationCap) {
  const PolicyMatrix matrix = cls.Enumerate(ds, cap);
  return solvers_internal::FromEnumeration(Route::kEwm, EwmOnMatrix(ps, matrix), cls, matrix);
}

// argmin over G_Π of (1/n) Σ (Γ_i - g(X_i))², reported as π-indices.
inline TrainedPolicy LsEnumerate(const PseudoOutcomes& ps, const EnumerablePolicyClass& cls,
                                 const ObservedDataset& ds,
                                 std::size_t cap = kDefaultEnumerationCap) {
  const PolicyMatrix matrix = cls.Enumerate(ds, cap);
  return solvers_internal::FromEnumeration(Route::kLs, LsOnMatrix(ps, matrix), cls, matrix);
}

// ---------------------------------------------------------------------------
// [0,1]-valued candidate sets for the regularized routes.

class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(std::size_t candidates, std::size_t rows)
      : candidates_(candidates), rows_(rows), values_(candidates * rows, 0.0) {}

  std::size_t size() const { return candidates_; }
  std::size_t rows() const { return rows_; }

  std::span<const double> Candidate(std::size_t k) const {
    return std::span<const double>(values_).subspan(k * rows_, rows_);
  }
  std::span<double> MutableCandidate(std::size_t k) {
    return std::span<double>(values_).subspan(k * rows_, rows_);
  }

  // Every assignment of {0, 1/L, ..., 1} to each of `rows` rows; row 0 varies
  // slowest.
  static CandidateSet AllGridAssignments(std::size_t rows, std::size_t levels,
                                         std::size_t cap = 10'000) {
    if (levels == 0) Fail(ErrorCode::kInvalidArgument, "grid needs L >= 1");
    double count = std::pow(static_cast<double>(levels + 1), static_cast<double>(rows));
    if (count > static_cast<double>(cap)) {
      Fail(ErrorCode::kCapExceeded, "per-row grid has " + FormatDouble(count) +
                                        " candidates, above the cap of " + std::to_string(cap));
    }
    const std::size_t total = static_cast<std::size_t>(count);
    CandidateSet out(total, rows);
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rest = k;
      auto dest = out.MutableCandidate(k);
      for (std::size_t i = rows; i-- > 0;) {
        dest[i] = static_cast<double>(rest % (levels + 1)) / static_cast<double>(levels);
        rest /= levels + 1;
      }
    }
    return out;
  }

  static CandidateSet FromPolicyMatrix(const PolicyMatrix& matrix) {
    CandidateSet out(matrix.policies(), matrix.rows());
    for (std::size_t k = 0; k < matrix.policies(); ++k) {
      auto src = matrix.Policy(k);
      auto dest = out.MutableCandidate(k);
      for (std::size_t i = 0; i < src.size(); ++i) dest[i] = src[i];
    }
    return out;
  }

  // Shrunken class members π' = 1/2 + v·(π - 1/2), i.e. g' = v·g, for
  // v ∈ {0, 1/L, ..., 1} and the first `max_policies` members of `matrix`.
  // Candidate index = member * (L + 1) + level.
  static CandidateSet Shrunken(const PolicyMatrix& matrix, std::size_t levels,
                               std::size_t max_policies) {
    if (levels == 0) Fail(ErrorCode::kInvalidArgument, "grid needs L >= 1");
    const std::size_t members = std::min(matrix.policies(), max_policies);
    CandidateSet out(members * (levels + 1), matrix.rows());
    for (std::size_t k = 0; k < members; ++k) {
      auto src = matrix.Policy(k);
      for (std::size_t v = 0; v <= levels; ++v) {
        const double shrink = static_cast<double>(v) / static_cast<double>(levels);
        auto dest = out.MutableCandidate(k * (levels + 1) + v);
        for (std::size_t i = 0; i < src.size(); ++i) {
          dest[i] = 0.5 + shrink * (static_cast<double>(src[i]) - 0.5);
        }
      }
    }
    return out;
  }

 private:
  std::size_t candidates_ = 0;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

namespace solvers_internal {

inline TrainedPolicy FromCandidates(Route route, const CandidateSet& candidates,
                                    std::vector<double> objectives, bool maximize,
                                    double tolerance) {
  TrainedPolicy out;
  out.route = route;
  out.representation = PolicyRepresentation::kCandidateIndex;
  out.argopt = ArgOptimumSet(objectives, maximize, tolerance);
  out.index = out.argopt.empty() ? 0 : out.argopt.front();
  out.description = "candidate#" + std::to_string(out.index);
  auto chosen = candidates.Candidate(out.index);
  out.decisions.assign(chosen.begin(), chosen.end());
  out.objective = objectives[out.index];
  out.candidate_objectives = std::move(objectives);
  return out;
}

}  // namespace solvers_internal

// argmax over the candidates of Ŵ(π) - μ·mean((2π - 1)²).
inline TrainedPolicy EwmRegularized(const PseudoOutcomes& ps, const CandidateSet& candidates,
                                    double penalty) {
  if (!(penalty >= 0.0)) Fail(ErrorCode::kInvalidArgument, "penalty must be >= 0");
  std::vector<double> objectives(candidates.size());
  ParallelFor(candidates.size(), [&](std::size_t k) {
    objectives[k] = RegularizedWelfare(ps, candidates.Candidate(k), penalty);
  });
  TrainedPolicy out = solvers_internal::FromCandidates(
      Route::kEwmRegularized, candidates, std::move(objectives), true,
      WelfareTieTolerance(ps, penalty));
  out.lambda = penalty;
  return out;
}

// argmin over the candidates of (1/n) Σ (Γ_i/√λ - √λ·g_i)², g = 2π - 1.
inline TrainedPolicy LsRegularized(const PseudoOutcomes& ps, const CandidateSet& candidates,
                                   double lambda) {
  if (!(lambda > 0.0)) Fail(ErrorCode::kInvalidArgument, "lambda_ls must be > 0");
  std::vector<double> objectives(candidates.size());
  ParallelFor(candidates.size(), [&](std::size_t k) {
    const auto pi = candidates.Candidate(k);
    std::vector<double> g(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) g[i] = 2.0 * pi[i] - 1.0;
    objectives[k] = EmpiricalMse(ps, g, lambda);
  });
  TrainedPolicy out = solvers_internal::FromCandidates(
      Route::kLsRegularized, candidates, std::move(objectives), false,
      MseTieTolerance(ps, lambda));
  out.lambda = lambda;
  return out;
}

// Regularized EWM over unrestricted per-row policies, solved row by row.
// With levels == 0 each π_i ranges over [0, 1]: π_i = clamp(1/2 + Γ_i/(8μ))
// for μ > 0 and 1{Γ_i >= 0} for μ = 0. With levels = L, π_i ranges over
// {0, 1/L, ..., 1} and ties go to the larger value.
inline TrainedPolicy EwmRegularizedPointwise(const PseudoOutcomes& ps, double penalty,
                                             std::size_t levels = 0) {
  if (!(penalty >= 0.0)) Fail(ErrorCode::kInvalidArgument, "penalty must be >= 0");
  const std::size_t n = ps.size();
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma = ps.gamma[i];
    if (levels == 0) {
      pi[i] = penalty == 0.0 ? (gamma >= 0.0 ? 1.0 : 0.0)
                             : std::clamp(0.5 + gamma / (8.0 * penalty), 0.0, 1.0);
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v <= levels; ++v) {
      const double p = static_cast<double>(v) / static_cast<double>(levels);
      const double value = gamma * p - penalty * (2.0 * p - 1.0) * (2.0 * p - 1.0);
      if (value >= best) {
        best = value;
        pi[i] = p;
      }
    }
  }
  TrainedPolicy out;
  out.route = Route::kEwmRegularized;
  out.representation = PolicyRepresentation::kPerRow;
  out.description = "pointwise";
  out.objective = RegularizedWelfare(ps, pi, penalty);
  out.decisions = std::move(pi);
  out.lambda = penalty;
  return out;
}

// Scaled least squares over unrestricted per-row g_i ∈ [-1, 1]:
// g_i = clamp(Γ_i/λ, -1, 1), or the best grid value (ties to the larger).
inline TrainedPolicy LsRegularizedPointwise(const PseudoOutcomes& ps, double lambda,
                                            std::size_t levels = 0) {
  if (!(lambda > 0.0)) Fail(ErrorCode::kInvalidArgument, "lambda_ls must be > 0");
  const std::size_t n = ps.size();
  std::vector<double> g(n);
  const double root = std::sqrt(lambda);
  for (std::size_t i = 0; i < n; ++i) {
    if (levels == 0) {
      g[i] = std::clamp(ps.gamma[i] / lambda, -1.0, 1.0);
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v <= levels; ++v) {
      const double gv = 2.0 * static_cast<double>(v) / static_cast<double>(levels) - 1.0;
      const double r = ps.gamma[i] / root - root * gv;
      if (r * r <= best) {
        best = r * r;
        g[i] = gv;
      }
    }
  }
  TrainedPolicy out;
  out.route = Route::kLsRegularized;
  out.representation = PolicyRepresentation::kPerRow;
  out.description = "pointwise";
  out.objective = EmpiricalMse(ps, g, lambda);
  out.decisions = FromG(g);
  out.lambda = lambda;
  return out;
}

// ---------------------------------------------------------------------------
// Parametric routes.

struct GradientOptions {
  double tolerance = 1e-8;
  int max_iterations = 100'000;
  // Box constraint |θ_j| <= theta_bound; reaching it flags saturation.
  double theta_bound = 15.0;
  double initial_step = 1.0;
};

struct GradientResult {
  std::vector<double> theta;
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  bool saturated = false;
};

// Projected gradient descent from θ = 0 with Barzilai-Borwein step lengths
// and Armijo backtracking. Deterministic: no randomness, iteration-ordered.
// `objective(θ, grad)` returns the value and fills the gradient.
template <typename Objective>
GradientResult MinimizeBoxed(std::size_t dimension, Objective&& objective,
                             const GradientOptions& options) {
  const double bound = options.theta_bound;
  auto project = [bound](std::vector<double>& t) {
    for (double& v : t) v = std::clamp(v, -bound, bound);
  };
  // Gradient with components that push against an active bound removed.
  auto projected_norm = [bound](const std::vector<double>& t, const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      const bool blocked = (t[j] >= bound && g[j] < 0.0) || (t[j] <= -bound && g[j] > 0.0);
      if (!blocked) s += g[j] * g[j];
    }
    return std::sqrt(s);
  };

  GradientResult out;
  std::vector<double> theta(dimension, 0.0), grad(dimension), trial(dimension),
      trial_grad(dimension);
  double value = objective(theta, grad);
  double step = options.initial_step;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    out.iterations = iter;
    out.gradient_norm = projected_norm(theta, grad);
    if (out.gradient_norm <= options.tolerance) {
      out.converged = true;
      break;
    }
    double trial_value = value;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (std::size_t j = 0; j < dimension; ++j) trial[j] = theta[j] - step * grad[j];
      project(trial);
      double decrease = 0.0;
      for (std::size_t j = 0; j < dimension; ++j) decrease += grad[j] * (theta[j] - trial[j]);
      trial_value = objective(trial, trial_grad);
      if (trial_value <= value - 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    double ss = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < dimension; ++j) {
      const double s = trial[j] - theta[j];
      const double y = trial_grad[j] - grad[j];
      ss += s * s;
      sy += s * y;
    }
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e12) : std::min(step * 2.0, 1e12);
    theta.swap(trial);
    grad.swap(trial_grad);
    value = trial_value;
  }
  if (!out.converged) out.gradient_norm = projected_norm(theta, grad);
  out.converged = out.converged || out.gradient_norm <= options.tolerance;
  for (double v : theta) out.saturated = out.saturated || std::abs(v) >= bound;
  out.theta = std::move(theta);
  out.value = value;
  return out;
}

namespace solvers_internal {

inline TrainedPolicy FromGradient(Route route, const ParametricPolicyClass& cls,
                                  const Matrix& design, GradientResult result) {
  TrainedPolicy out;
  out.route = route;
  out.representation = PolicyRepresentation::kParametric;
  out.basis = cls.basis();
  out.link = Link::kSigmoid;
  out.description = "sigmoid(theta . phi(x)), phi = " + cls.basis().Describe();
  out.decisions.resize(static_cast<std::size_t>(design.rows()));
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    double z = 0.0;
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
      z += design(i, j) * result.theta[static_cast<std::size_t>(j)];
    }
    out.decisions[static_cast<std::size_t>(i)] =
        z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  }
  out.theta = std::move(result.theta);
  out.converged = result.converged;
  out.saturated = result.saturated;
  out.iterations = result.iterations;
  out.gradient_norm = result.gradient_norm;
  return out;
}

inline double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace solvers_internal

// Maximizes Ŵ(π_θ) - μ·mean((2π_θ - 1)²) over θ for π_θ = sigmoid(θᵀφ).
inline TrainedPolicy EwmRegularizedParametric(const PseudoOutcomes& ps, const ObservedDataset& ds,
                                              const ParametricPolicyClass& cls, double penalty,
                                              const GradientOptions& options = {}) {
  if (!(penalty >= 0.0)) Fail(ErrorCode::kInvalidArgument, "penalty must be >= 0");
  if (ps.size() != ds.size()) Fail(ErrorCode::kInvalidArgument, "pseudo-outcome length mismatch");
  const Matrix design = cls.basis().Design(ds);
  const std::size_t n = ds.size();
  const std::size_t p = cls.dimension();
  const double inv_n = 1.0 / static_cast<double>(n);
  auto objective = [&](const std::vector<double>& theta, std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    CompensatedSum value;
    for (std::size_t i = 0; i < n; ++i) {
      double z = 0.0;
      for (std::size_t j = 0; j < p; ++j) z += design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * theta[j];
      const double pi = solvers_internal::Sigmoid(z);
      const double g = 2.0 * pi - 1.0;
      value.Add(ps.gamma1[i] * pi + ps.gamma0[i] * (1.0 - pi) - penalty * g * g);
      const double coef = (ps.gamma[i] - 4.0 * penalty * g) * pi * (1.0 - pi);
      for (std::size_t j = 0; j < p; ++j) grad[j] -= inv_n * coef * design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return -value.Total() * inv_n;
  };
  GradientResult result = MinimizeBoxed(p, objective, options);
  TrainedPolicy out =
      solvers_internal::FromGradient(Route::kEwmRegularized, cls, design, std::move(result));
  out.objective = RegularizedWelfare(ps, out.decisions, penalty);
  out.lambda = penalty;
  return out;
}

// Minimizes (1/n) Σ (Γ_i/√λ - √λ·g_θ(X_i))² for g_θ = tanh(θᵀφ/2).
inline TrainedPolicy LsRegularizedParametric(const PseudoOutcomes& ps, const ObservedDataset& ds,
                                             const ParametricPolicyClass& cls, double lambda,
                                             const GradientOptions& options = {}) {
  if (!(lambda > 0.0)) Fail(ErrorCode::kInvalidArgument, "lambda_ls must be > 0");
  if (ps.size() != ds.size()) Fail(ErrorCode::kInvalidArgument, "pseudo-outcome length mismatch");
  const Matrix design = cls.basis().Design(ds);
  const std::size_t n = ds.size();
  const std::size_t p = cls.dimension();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double root = std::sqrt(lambda);
  auto objective = [&](const std::vector<double>& theta, std::vector<double>& grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    CompensatedSum value;
    for (std::size_t i = 0; i < n; ++i) {
      double z = 0.0;
      for (std::size_t j = 0; j < p; ++j) z += design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * theta[j];
      const double g = std::tanh(0.5 * z);
      const double r = ps.gamma[i] / root - root * g;
      value.Add(r * r);
      const double coef = (ps.gamma[i] - lambda * g) * (1.0 - g * g);
      for (std::size_t j = 0; j < p; ++j) grad[j] -= inv_n * coef * design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return value.Total() * inv_n;
  };
  GradientResult result = MinimizeBoxed(p, objective, options);
  TrainedPolicy out =
      solvers_internal::FromGradient(Route::kLsRegularized, cls, design, std::move(result));
  out.objective = EmpiricalMse(ps, ToG(out.decisions), lambda);
  out.lambda = lambda;
  return out;
}

namespace solvers_internal {

inline TrainedPolicy LinearScorePolicy(Route route, const Basis& basis, const Vector& coef,
                                       const ObservedDataset& ds) {
  TrainedPolicy out;
  out.route = route;
  out.representation = PolicyRepresentation::kParametric;
  out.basis = basis;
  out.link = Link::kLinearThreshold;
  out.theta.assign(coef.data(), coef.data() + coef.size());
  out.description = "1{theta . phi(x) >= 0}, phi = " + basis.Describe();
  out.decisions.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.decisions[i] = basis.Dot(ds.Row(i), out.theta) >= 0.0 ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace solvers_internal

// Least squares over the linear-in-parameters class g(x) = θᵀφ(x), scaled by
// λ: θ = (ridge LS of Γ on φ)/λ. Convex and solved in closed form; the policy
// is 1{θᵀφ(x) >= 0}. The stored objective is the scaled squared error of the
// fitted score.
inline TrainedPolicy LsLinear(const PseudoOutcomes& ps, const ObservedDataset& ds,
                              const BasisSpec& basis_spec, double ridge = 0.0,
                              double lambda = 1.0) {
  if (!(lambda > 0.0)) Fail(ErrorCode::kInvalidArgument, "lambda_ls must be > 0");
  if (ps.size() != ds.size()) Fail(ErrorCode::kInvalidArgument, "pseudo-outcome length mismatch");
  const Basis basis(ds.dim, basis_spec);
  const Matrix design = basis.Design(ds);
  const Vector target = Eigen::Map<const Vector>(ps.gamma.data(), static_cast<Eigen::Index>(ps.size()));
  const RidgeSolution fit = SolveRidge(design, target, ridge, basis.UnpenalizedMask());
  const Vector coef = fit.coefficients / lambda;
  TrainedPolicy out = solvers_internal::LinearScorePolicy(
      lambda == 1.0 ? Route::kLs : Route::kLsRegularized, basis, coef, ds);
  const Vector fitted = design * coef;
  const double root = std::sqrt(lambda);
  CompensatedSum sum;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double r = ps.gamma[i] / root - root * fitted(static_cast<Eigen::Index>(i));
    sum.Add(r * r);
  }
  out.objective = sum.Total() / static_cast<double>(ps.size());
  out.lambda = lambda;
  return out;
}

// ---------------------------------------------------------------------------
// Plug-in routes.

// π_i = 1{m̂1_i - m̂0_i >= 0} on the rows of `nuis`. The objective is the
// direct-method welfare mean(m̂1·π + m̂0·(1 - π)).
inline TrainedPolicy PluginTLearner(const NuisanceEstimates& nuis) {
  const std::size_t n = nuis.size();
  if (nuis.m0_hat.size() != n || nuis.m1_hat.size() != n) {
    Fail(ErrorCode::kData, "plug-in T-learner needs both outcome fits");
  }
  TrainedPolicy out;
  out.route = Route::kPluginTLearner;
  out.representation = PolicyRepresentation::kPerRow;
  out.description = "1{m1_hat - m0_hat >= 0}";
  out.decisions.resize(n);
  CompensatedSum value;
  for (std::size_t i = 0; i < n; ++i) {
    out.decisions[i] = nuis.m1_hat[i] - nuis.m0_hat[i] >= 0.0 ? 1.0 : 0.0;
    value.Add(out.decisions[i] == 1.0 ? nuis.m1_hat[i] : nuis.m0_hat[i]);
  }
  out.objective = value.Total() / static_cast<double>(std::max<std::size_t>(n, 1));
  return out;
}

// T-learner from fitted arm models sharing one basis: τ̂(x) = θᵀφ(x) with
// θ = β1 - β0, evaluable on new covariates.
inline TrainedPolicy PluginTLearner(const OutcomeModels& models, const ObservedDataset& ds) {
  if (!(models.arm0.basis.spec() == models.arm1.basis.spec())) {
    Fail(ErrorCode::kInvalidArgument, "arm models must share a basis");
  }
  const Vector coef = models.arm1.coefficients - models.arm0.coefficients;
  TrainedPolicy out =
      solvers_internal::LinearScorePolicy(Route::kPluginTLearner, models.arm1.basis, coef, ds);
  CompensatedSum value;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    value.Add(out.decisions[i] == 1.0 ? models.arm1.Predict(ds.Row(i))
                                      : models.arm0.Predict(ds.Row(i)));
  }
  out.objective = value.Total() / static_cast<double>(std::max<std::size_t>(ds.size(), 1));
  return out;
}

// τ̂ = ridge least squares of the IPW (or DR) pseudo-outcome on φ; π = 1{τ̂ >= 0}.
// The objective is Ŵ of the resulting policy.
inline TrainedPolicy PluginIpwRegression(const PseudoOutcomes& ps, const ObservedDataset& ds,
                                         const BasisSpec& basis_spec, double ridge = 0.0) {
  if (ps.kind == PseudoKind::kOracle) {
    Fail(ErrorCode::kInvalidArgument, "plug-in IPW regression needs ipw or dr pseudo-outcomes");
  }
  if (ps.size() != ds.size()) Fail(ErrorCode::kInvalidArgument, "pseudo-outcome length mismatch");
  const Basis basis(ds.dim, basis_spec);
  const Vector target = Eigen::Map<const Vector>(ps.gamma.data(), static_cast<Eigen::Index>(ps.size()));
  const RidgeSolution fit = SolveRidge(basis.Design(ds), target, ridge, basis.UnpenalizedMask());
  TrainedPolicy out = solvers_internal::LinearScorePolicy(Route::kPluginIpwRegression, basis,
                                                          fit.coefficients, ds);
  out.objective = EmpiricalWelfare(ps, out.decisions);
  return out;
}

// ---------------------------------------------------------------------------
// Empirical resolution of the λ scale between regularized EWM and scaled LS.

struct ScaleEntry {
  std::size_t draw = 0;
  double lambda_ls = 0.0;
  // μ such that Ŵ(π) - μ·mean(g²) = α - β·MSE_λ(g) over every candidate.
  double fitted_penalty = 0.0;
  double ratio = 0.0;  // fitted_penalty / lambda_ls
  double fit_residual = 0.0;
  bool sets_match = false;
  bool sets_match_at_4x = false;
  bool sets_match_at_quarter = false;
  // Range of ratios r on a geometric scan for which the argoptimum sets
  // coincide with λ_EWM = r·λ_LS.
  double bracket_low = std::numeric_limits<double>::quiet_NaN();
  double bracket_high = std::numeric_limits<double>::quiet_NaN();
};

struct ScaleResolution {
  std::vector<ScaleEntry> entries;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double dispersion = std::numeric_limits<double>::infinity();
  std::string match = "other";
  bool consistent = false;
};

inline constexpr double kScaleDispersionTolerance = 1e-6;

inline std::string ClassifyScale(double ratio) {
  if (std::abs(ratio - 4.0) <= kScaleDispersionTolerance * 4.0) return "4";
  if (std::abs(ratio - 0.25) <= kScaleDispersionTolerance * 0.25) return "1/4";
  return "other";
}

inline ScaleEntry ResolveScaleEntry(const PseudoOutcomes& ps, const CandidateSet& candidates,
                                    double lambda_ls) {
  if (!(lambda_ls > 0.0)) Fail(ErrorCode::kInvalidArgument, "lambda_ls must be > 0");
  const std::size_t k_count = candidates.size();
  std::vector<double> welfare(k_count), sq(k_count), mse(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto pi = candidates.Candidate(k);
    std::vector<double> g(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) g[i] = 2.0 * pi[i] - 1.0;
    welfare[k] = EmpiricalWelfare(ps, pi);
    CompensatedSum s;
    for (double v : g) s.Add(v * v);
    sq[k] = s.Total() / static_cast<double>(g.size());
    mse[k] = EmpiricalMse(ps, g, lambda_ls);
  }

  // welfare = α - β·mse + μ·sq, fitted over all candidates.
  Matrix design(static_cast<Eigen::Index>(k_count), 3);
  Vector target(static_cast<Eigen::Index>(k_count));
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    design(r, 0) = 1.0;
    design(r, 1) = -mse[k];
    design(r, 2) = sq[k];
    target(r) = welfare[k];
  }
  const Vector coef = design.completeOrthogonalDecomposition().solve(target);
  ScaleEntry entry;
  entry.lambda_ls = lambda_ls;
  entry.fitted_penalty = coef(2);
  entry.ratio = coef(2) / lambda_ls;
  entry.fit_residual = (design * coef - target).cwiseAbs().maxCoeff();

  const auto ls_set = ArgOptimumSet(mse, false, MseTieTolerance(ps, lambda_ls));
  auto ewm_set_at = [&](double penalty) {
    std::vector<double> values(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      values[k] = RegularizedWelfare(ps, candidates.Candidate(k), penalty);
    }
    return ArgOptimumSet(values, true, WelfareTieTolerance(ps, penalty));
  };
  entry.sets_match = ewm_set_at(entry.fitted_penalty) == ls_set;
  entry.sets_match_at_4x = ewm_set_at(4.0 * lambda_ls) == ls_set;
  entry.sets_match_at_quarter = ewm_set_at(0.25 * lambda_ls) == ls_set;

  // Geometric scan of r = 2^(j/8); uses welfare - μ·sq for speed.
  for (int j = -48; j <= 48; ++j) {
    const double r = std::pow(2.0, j / 8.0);
    const double penalty = r * lambda_ls;
    std::vector<double> values(k_count);
    for (std::size_t k = 0; k < k_count; ++k) values[k] = welfare[k] - penalty * sq[k];
    if (ArgOptimumSet(values, true, WelfareTieTolerance(ps, penalty)) == ls_set) {
      if (std::isnan(entry.bracket_low)) entry.bracket_low = r;
      entry.bracket_high = r;
    }
  }
  return entry;
}

// For each pseudo-outcome draw and each λ_LS, fits the penalty λ_EWM that
// makes the two objectives affinely related over the whole candidate set
// and checks that the argoptimum sets then coincide. The ratio λ_EWM/λ_LS is
// reported with its dispersion and classified as 4, 1/4, or other.
inline ScaleResolution ResolveLambdaScale(std::span<const PseudoOutcomes> draws,
                                          const CandidateSet& candidates,
                                          std::span<const double> lambda_grid,
                                          std::size_t cap = 10'000) {
  if (candidates.size() > cap) {
    Fail(ErrorCode::kCapExceeded, "scale resolution needs an exhaustive candidate set of at most " +
                                      std::to_string(cap) + " candidates");
  }
  if (candidates.size() < 3) {
    Fail(ErrorCode::kInvalidArgument, "scale resolution needs at least 3 candidates");
  }
  ScaleResolution out;
  const std::size_t total = draws.size() * lambda_grid.size();
  out.entries.resize(total);
  ParallelFor(total, [&](std::size_t idx) {
    const std::size_t d = idx / lambda_grid.size();
    const std::size_t l = idx % lambda_grid.size();
    out.entries[idx] = ResolveScaleEntry(draws[d], candidates, lambda_grid[l]);
    out.entries[idx].draw = d;
  });
  if (total == 0) return out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  CompensatedSum sum;
  bool all_match = true;
  for (const auto& e : out.entries) {
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
    sum.Add(e.ratio);
    all_match = all_match && e.sets_match;
  }
  out.ratio = sum.Total() / static_cast<double>(total);
  out.dispersion = (hi - lo) / std::abs(out.ratio);
  out.match = ClassifyScale(out.ratio);
  out.consistent = all_match && out.dispersion <= kScaleDispersionTolerance;
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_SOLVERS_HPP_
