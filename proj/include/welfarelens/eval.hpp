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

#ifndef WELFARELENS_EVAL_HPP_
#define WELFARELENS_EVAL_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "welfarelens/csv.hpp"
#include "welfarelens/dataset.hpp"
#include "welfarelens/dgp.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/nuisance.hpp"
#include "welfarelens/numeric.hpp"
#include "welfarelens/objectives.hpp"
#include "welfarelens/parallel.hpp"
#include "welfarelens/policies.hpp"
#include "welfarelens/pseudo.hpp"
#include "welfarelens/random.hpp"
#include "welfarelens/solvers.hpp"

namespace welfarelens {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Doubly robust welfare in its residual-weighted form:
//   mean(m̂1·π + m̂0·(1-π) + (D-ê)/(ê(1-ê))·(Y - m̂_D)·(π - 1/2)).
// It differs from EmpiricalWelfare(DrPseudo) by DrFormOffset, a quantity that
// does not depend on π.
inline double DrResidualFormWelfare(const ObservedDataset& ds, const NuisanceEstimates& nuis,
                                    std::span<const double> pi) {
  if (pi.size() != ds.size() || nuis.size() != ds.size()) {
    Fail(ErrorCode::kInvalidArgument, "length mismatch");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double e = nuis.e_hat[i];
    const double m = ds.d[i] == 1 ? nuis.m1_hat[i] : nuis.m0_hat[i];
    const double weight = (ds.d[i] - e) / (e * (1.0 - e));
    sum.Add(nuis.m1_hat[i] * pi[i] + nuis.m0_hat[i] * (1.0 - pi[i]) +
            weight * (ds.y[i] - m) * (pi[i] - 0.5));
  }
  return sum.Total() / static_cast<double>(pi.size());
}

// mean(D·r/(2ê) + (1-D)·r/(2(1-ê))) with r = Y - m̂_D.
inline double DrFormOffset(const ObservedDataset& ds, const NuisanceEstimates& nuis) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double e = nuis.e_hat[i];
    const double r = ds.y[i] - (ds.d[i] == 1 ? nuis.m1_hat[i] : nuis.m0_hat[i]);
    sum.Add(ds.d[i] == 1 ? r / (2.0 * e) : r / (2.0 * (1.0 - e)));
  }
  return sum.Total() / static_cast<double>(ds.size());
}

inline PseudoOutcomes BuildPseudo(PseudoKind kind, const OracleDataset& ods,
                                  const NuisanceEstimates& nuis) {
  switch (kind) {
    case PseudoKind::kOracle:
      return OraclePseudo(ods);
    case PseudoKind::kIpw:
      return IpwPseudo(ods.base, nuis.e_hat);
    case PseudoKind::kDr:
      return DrPseudo(ods.base, nuis);
  }
  Fail(ErrorCode::kInvalidArgument, "unknown pseudo-outcome kind");
}

// ---------------------------------------------------------------------------
// Policy class construction from a declarative spec.

enum class GridKind { kQuantile, kFixed };

struct PolicyClassSpec {
  PolicyFamily family = PolicyFamily::kSignedThreshold;
  std::vector<std::size_t> coordinates;  // empty: every covariate
  GridKind grid = GridKind::kQuantile;
  std::size_t points = 9;
  double low = -1.0;
  double high = 1.0;
  std::size_t cap = kDefaultEnumerationCap;
};

// Quantile grids come from `ds`; fixed grids ignore it, so a fixed-grid class
// is the same set of functions for every sample.
inline EnumerablePolicyClass BuildPolicyClass(const PolicyClassSpec& spec, std::size_t dim,
                                              const ObservedDataset* ds = nullptr) {
  std::vector<std::size_t> coords = spec.coordinates;
  if (coords.empty()) {
    for (std::size_t j = 0; j < dim; ++j) coords.push_back(j);
  }
  for (std::size_t c : coords) {
    if (c >= dim) Fail(ErrorCode::kConfig, "policy class coordinate out of range");
  }
  if (spec.points == 0) Fail(ErrorCode::kConfig, "policy class grid needs at least one point");
  std::vector<std::vector<double>> grids;
  for (std::size_t c : coords) {
    if (spec.grid == GridKind::kFixed) {
      grids.push_back(FixedGrid(spec.low, spec.high, spec.points));
    } else {
      if (ds == nullptr) Fail(ErrorCode::kConfig, "quantile grid needs a dataset");
      grids.push_back(QuantileGrid(*ds, c, spec.points, false));
    }
  }
  switch (spec.family) {
    case PolicyFamily::kSignedThreshold:
      return EnumerablePolicyClass::SignedThreshold(coords, grids);
    case PolicyFamily::kAxisRectangle:
      if (coords.size() != dim) {
        Fail(ErrorCode::kConfig, "rectangle classes use every covariate");
      }
      return EnumerablePolicyClass::AxisRectangle(grids);
    case PolicyFamily::kExplicitList:
      break;
  }
  Fail(ErrorCode::kConfig, "explicit-list classes cannot be built from a config");
}

// ---------------------------------------------------------------------------
// Equivalence audit.

struct AuditOptions {
  std::size_t cap = kDefaultEnumerationCap;
  std::size_t affine_policies = 100;
  // Regularized pair: shrunken class members g' = v·g on a grid of L levels.
  std::vector<double> lambda_grid;
  std::size_t regularized_levels = 10;
  std::size_t regularized_members = 900;
};

struct EquivalenceReport {
  std::size_t class_size = 0;
  std::size_t rows = 0;
  std::vector<std::size_t> ewm_set;
  std::vector<std::size_t> ls_set;
  bool sets_equal = false;
  std::size_t ewm_index = 0;
  std::size_t ls_index = 0;
  std::string ewm_description;
  double ewm_objective = 0.0;
  double ls_objective = 0.0;

  std::size_t affine_policies = 0;
  double affine_constant = 0.0;
  double max_affine_residual = 0.0;
  bool affine_ok = false;

  bool has_scale = false;
  ScaleResolution scale;

  double ewm_seconds = 0.0;
  double ls_seconds = 0.0;
  double regularized_seconds = 0.0;
};

inline constexpr double kAffineTolerance = 1e-10;

namespace eval_internal {

inline double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Median wall time of one call. Calls are batched so that each timed sample
// lasts at least `min_sample` seconds, keeping clock granularity and
// scheduler noise small relative to the measurement.
template <typename Fn>
double MedianCallSeconds(Fn&& fn, std::size_t samples, double min_sample = 0.005) {
  auto start = std::chrono::steady_clock::now();
  fn();
  const double once = std::max(Seconds(start), 1e-9);
  const auto batch = static_cast<std::size_t>(std::ceil(min_sample / once));
  std::vector<double> times;
  for (std::size_t s = 0; s < samples; ++s) {
    start = std::chrono::steady_clock::now();
    for (std::size_t b = 0; b < batch; ++b) fn();
    times.push_back(Seconds(start) / static_cast<double>(batch));
  }
  return Median(times);
}

}  // namespace eval_internal

// Runs both exact routes over the enumerated class, compares their full
// argoptimum sets, checks the affine identity on random members, and, when a
// λ grid is given, resolves the regularized scale on shrunken members.
inline EquivalenceReport AuditEquivalence(const PseudoOutcomes& ps,
                                          const EnumerablePolicyClass& cls,
                                          const ObservedDataset& ds, const AuditOptions& options,
                                          const SeedSpec& seed) {
  EquivalenceReport report;
  const PolicyMatrix matrix = cls.Enumerate(ds, options.cap);
  report.class_size = matrix.policies();
  report.rows = matrix.rows();

  auto start = std::chrono::steady_clock::now();
  const EnumerationResult ewm = EwmOnMatrix(ps, matrix);
  report.ewm_seconds = eval_internal::Seconds(start);
  start = std::chrono::steady_clock::now();
  const EnumerationResult ls = LsOnMatrix(ps, matrix);
  report.ls_seconds = eval_internal::Seconds(start);

  report.ewm_set = ewm.argopt;
  report.ls_set = ls.argopt;
  report.sets_equal = ewm.argopt == ls.argopt;
  report.ewm_index = ewm.representative;
  report.ls_index = ls.representative;
  report.ewm_description = cls.DescribeText(ewm.representative);
  report.ewm_objective = ewm.objectives[ewm.representative];
  report.ls_objective = ls.objectives[ls.representative];

  report.affine_constant = AffineConstant(ps);
  Rng rng(seed.Derive(Stream::kSolverInit, 1));
  report.affine_policies = options.affine_policies;
  for (std::size_t s = 0; s < options.affine_policies; ++s) {
    const std::size_t k = rng.UniformIndex(matrix.policies());
    const double r = std::abs(AffineResidual(ps, matrix.Policy(k), report.affine_constant));
    report.max_affine_residual = std::max(report.max_affine_residual, r);
  }
  report.affine_ok =
      report.max_affine_residual <= kAffineTolerance * (1.0 + std::abs(report.affine_constant));

  if (!options.lambda_grid.empty()) {
    start = std::chrono::steady_clock::now();
    const CandidateSet candidates = CandidateSet::Shrunken(
        matrix, options.regularized_levels, options.regularized_members);
    report.scale = ResolveLambdaScale(std::span<const PseudoOutcomes>(&ps, 1), candidates,
                                      options.lambda_grid);
    report.has_scale = true;
    report.regularized_seconds = eval_internal::Seconds(start);
  }
  return report;
}

// Random pseudo-outcome draws on `rows` rows for scale resolution; Γ0 and Γ1
// are independent N(0, spread²).
inline std::vector<PseudoOutcomes> RandomPseudoDraws(std::size_t draws, std::size_t rows,
                                                     double spread, const SeedSpec& seed) {
  std::vector<PseudoOutcomes> out;
  for (std::size_t d = 0; d < draws; ++d) {
    Rng rng(seed.Derive(Stream::kSolverInit, 2, d));
    std::vector<double> g0(rows), g1(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      g0[i] = spread * rng.Normal();
      g1[i] = spread * rng.Normal();
    }
    out.push_back(PseudoOutcomes::FromComponents(PseudoKind::kOracle, g0, g1));
  }
  return out;
}

struct ScaleStudyOptions {
  std::size_t draws = 20;
  std::size_t rows = 3;
  std::size_t levels = 10;
  double spread = 2.0;
  std::vector<double> lambda_grid{0.25, 0.5, 1.0, 2.0, 4.0};
};

// resolve_lambda_scale on exhaustive per-row fractional-grid candidates.
inline ScaleResolution RunScaleStudy(const ScaleStudyOptions& options, const SeedSpec& seed) {
  const auto draws = RandomPseudoDraws(options.draws, options.rows, options.spread, seed);
  const CandidateSet candidates = CandidateSet::AllGridAssignments(options.rows, options.levels);
  return ResolveLambdaScale(draws, candidates, options.lambda_grid);
}

inline std::string ScaleEntriesToCsv(const ScaleResolution& scale) {
  std::string out =
      "draw,lambda_ls,lambda_ewm,ratio,fit_residual,sets_match,match_at_4x,match_at_quarter,"
      "bracket_low,bracket_high\n";
  for (const auto& e : scale.entries) {
    out += std::to_string(e.draw) + "," + FormatDouble(e.lambda_ls) + "," +
           FormatDouble(e.fitted_penalty) + "," + FormatDouble(e.ratio) + "," +
           FormatDouble(e.fit_residual) + "," + (e.sets_match ? "1" : "0") + "," +
           (e.sets_match_at_4x ? "1" : "0") + "," + (e.sets_match_at_quarter ? "1" : "0") + "," +
           FormatDouble(e.bracket_low) + "," + FormatDouble(e.bracket_high) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// True welfare of every class member on one Monte Carlo sample.

inline std::vector<MeanAndError> ClassTrueWelfare(const EnumerablePolicyClass& cls,
                                                  const MonteCarloSample& sample) {
  std::vector<MeanAndError> out(cls.size());
  ParallelFor(cls.size(), [&](std::size_t k) {
    const auto member = cls.Describe(k);
    std::vector<double> treat(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      treat[i] = EnumerablePolicyClass::Decide(member, sample.Row(i));
    }
    out[k] = WelfareOnSample(sample, treat);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Regret experiment.

struct RegretConfig {
  DgpSpec dgp;
  NuisanceConfig nuisance;
  PseudoKind pseudo = PseudoKind::kIpw;
  PolicyClassSpec policy_class{PolicyFamily::kSignedThreshold, {}, GridKind::kFixed, 17, -1.0, 1.0,
                               kDefaultEnumerationCap};
  std::vector<Route> routes{Route::kEwm, Route::kLs, Route::kPluginTLearner,
                            Route::kPluginIpwRegression};
  std::vector<std::size_t> n_grid{500, 2000, 8000};
  std::size_t replications = 50;
  // λ_LS for the regularized routes; λ_EWM = scale·λ_LS.
  double lambda = 1.0;
  BasisSpec policy_basis{1, {}};
  BasisSpec plugin_basis{1, {}};
  double plugin_ridge = 0.0;
  GradientOptions gradient;
  std::size_t monte_carlo = 1'000'000;
  std::size_t affine_policies = 100;
  SeedSpec seed;
};

struct RegretRecord {
  std::uint64_t seed = 0;
  Route route = Route::kEwm;
  std::size_t n = 0;
  double lambda = 0.0;
  double w_emp = 0.0;
  double w_true = 0.0;
  double se_true = 0.0;
  double w_star_class = 0.0;
  double w_fb = 0.0;
  double regret_class = 0.0;
  double regret_fb = 0.0;
  bool equiv_flag = false;
  double affine_resid = 0.0;
  double scale_const = kNaN;
};

struct RegretSummaryRow {
  Route route = Route::kEwm;
  std::size_t n = 0;
  std::size_t replications = 0;
  double median_regret_class = 0.0;
  double median_regret_fb = 0.0;
};

struct RegretResult {
  std::vector<RegretRecord> records;
  std::vector<RegretSummaryRow> summary;
  std::size_t star_index = 0;
  std::string star_description;
  MeanAndError w_star;
  MeanAndError w_fb;
  double scale_const = kNaN;
};

inline constexpr const char* kRegretHeader =
    "seed,route,n,lambda,w_emp,w_true,se_true,w_star_class,w_fb,regret_class,regret_fb,"
    "equiv_flag,affine_resid,scale_const";

inline std::string RegretRecordsToCsv(std::span<const RegretRecord> records) {
  std::string out = std::string(kRegretHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.seed) + "," + RouteName(r.route) + "," + std::to_string(r.n) + "," +
           FormatDouble(r.lambda) + "," + FormatDouble(r.w_emp) + "," + FormatDouble(r.w_true) +
           "," + FormatDouble(r.se_true) + "," + FormatDouble(r.w_star_class) + "," +
           FormatDouble(r.w_fb) + "," + FormatDouble(r.regret_class) + "," +
           FormatDouble(r.regret_fb) + "," + (r.equiv_flag ? "1" : "0") + "," +
           FormatDouble(r.affine_resid) + "," + FormatDouble(r.scale_const) + "\n";
  }
  return out;
}

inline std::string RegretSummaryToCsv(std::span<const RegretSummaryRow> rows) {
  std::string out = "route,n,replications,median_regret_class,median_regret_fb\n";
  for (const auto& r : rows) {
    out += std::string(RouteName(r.route)) + "," + std::to_string(r.n) + "," +
           std::to_string(r.replications) + "," + FormatDouble(r.median_regret_class) + "," +
           FormatDouble(r.median_regret_fb) + "\n";
  }
  return out;
}

namespace eval_internal {

inline bool NeedsScale(std::span<const Route> routes) {
  return std::any_of(routes.begin(), routes.end(), [](Route r) {
    return r == Route::kEwmRegularized || r == Route::kLsRegularized;
  });
}

}  // namespace eval_internal

// Simulates, trains every route, and scores each trained policy by Monte
// Carlo true welfare on one common sample. Replications run in parallel;
// records are ordered by (n, replication, route) as listed in the config.
inline RegretResult RegretExperiment(const RegretConfig& config) {
  if (config.n_grid.empty() || config.replications == 0 || config.routes.empty()) {
    Fail(ErrorCode::kConfig, "regret experiment needs n values, replications and routes");
  }
  if (config.policy_class.grid != GridKind::kFixed) {
    Fail(ErrorCode::kConfig, "regret experiments need a fixed-grid class");
  }
  const EnumerablePolicyClass cls = BuildPolicyClass(config.policy_class, config.dgp.dim);
  const MonteCarloSample sample =
      DrawMonteCarloSample(config.dgp, config.monte_carlo, config.seed);
  const std::vector<MeanAndError> class_welfare = ClassTrueWelfare(cls, sample);

  RegretResult result;
  for (std::size_t k = 0; k < class_welfare.size(); ++k) {
    if (class_welfare[k].mean > class_welfare[result.star_index].mean) result.star_index = k;
  }
  result.star_description = cls.DescribeText(result.star_index);
  result.w_star = class_welfare[result.star_index];
  result.w_fb = WelfareOnSample(sample, FirstBestPolicy(config.dgp));

  if (eval_internal::NeedsScale(config.routes)) {
    result.scale_const = RunScaleStudy({}, config.seed).ratio;
  }

  const std::size_t reps = config.replications;
  const std::size_t jobs = config.n_grid.size() * reps;
  std::vector<std::vector<RegretRecord>> per_job(jobs);
  ParallelFor(jobs, [&](std::size_t job) {
    const std::size_t n = config.n_grid[job / reps];
    const std::size_t rep = job % reps;
    const SeedSpec rep_seed = config.seed.ForReplication(rep).ForReplication(n);
    DgpSpec spec = config.dgp;
    spec.n = n;
    const OracleDataset ods = Generate(spec, rep_seed);
    const ObservedDataset& ds = ods.base;
    RequireBothArms(ds, "regret replication");
    const NuisanceEstimates nuis = EstimateNuisance(ds, config.nuisance, rep_seed, ods.e_true);
    const PseudoOutcomes ps = BuildPseudo(config.pseudo, ods, nuis);

    const PolicyMatrix matrix = cls.Enumerate(ds, config.policy_class.cap);
    const EnumerationResult ewm = EwmOnMatrix(ps, matrix);
    const EnumerationResult ls = LsOnMatrix(ps, matrix);
    const bool equiv = ewm.argopt == ls.argopt;
    const double constant = AffineConstant(ps);
    double resid = 0.0;
    Rng rng(rep_seed.Derive(Stream::kSolverInit, 1));
    for (std::size_t s = 0; s < config.affine_policies; ++s) {
      const std::size_t k = rng.UniformIndex(matrix.policies());
      resid = std::max(resid, std::abs(AffineResidual(ps, matrix.Policy(k), constant)));
    }

    for (Route route : config.routes) {
      RegretRecord rec;
      rec.seed = rep_seed.master_seed;
      rec.route = route;
      rec.n = n;
      rec.equiv_flag = equiv;
      rec.affine_resid = resid;
      MeanAndError truth;
      switch (route) {
        case Route::kEwm:
        case Route::kLs: {
          const EnumerationResult& chosen = route == Route::kEwm ? ewm : ls;
          rec.w_emp = EmpiricalWelfare(ps, matrix.Policy(chosen.representative));
          truth = class_welfare[chosen.representative];
          break;
        }
        case Route::kEwmRegularized:
        case Route::kLsRegularized: {
          const ParametricPolicyClass pcls(Basis(ds.dim, config.policy_basis));
          const TrainedPolicy p =
              route == Route::kEwmRegularized
                  ? EwmRegularizedParametric(ps, ds, pcls, result.scale_const * config.lambda,
                                             config.gradient)
                  : LsRegularizedParametric(ps, ds, pcls, config.lambda, config.gradient);
          rec.lambda = config.lambda;
          rec.scale_const = result.scale_const;
          rec.w_emp = EmpiricalWelfare(ps, p.decisions);
          truth = WelfareOnSample(sample, p.AsFunction());
          break;
        }
        case Route::kPluginTLearner: {
          const OutcomeModels models =
              FitOutcomeModels(ds, EffectiveOutcomeBasis(config.nuisance), config.nuisance.ridge);
          const TrainedPolicy p = PluginTLearner(models, ds);
          rec.w_emp = EmpiricalWelfare(ps, p.decisions);
          truth = WelfareOnSample(sample, p.AsFunction());
          break;
        }
        case Route::kPluginIpwRegression: {
          const TrainedPolicy p = PluginIpwRegression(
              ps.kind == PseudoKind::kOracle ? IpwPseudo(ds, nuis.e_hat) : ps, ds,
              config.plugin_basis, config.plugin_ridge);
          rec.w_emp = EmpiricalWelfare(ps, p.decisions);
          truth = WelfareOnSample(sample, p.AsFunction());
          break;
        }
      }
      rec.w_true = truth.mean;
      rec.se_true = truth.standard_error;
      rec.w_star_class = result.w_star.mean;
      rec.w_fb = result.w_fb.mean;
      rec.regret_class = rec.w_star_class - rec.w_true;
      rec.regret_fb = rec.w_fb - rec.w_true;
      per_job[job].push_back(rec);
    }
  });
  for (auto& block : per_job) {
    result.records.insert(result.records.end(), block.begin(), block.end());
  }

  for (std::size_t n : config.n_grid) {
    for (Route route : config.routes) {
      std::vector<double> rc, rf;
      for (const auto& r : result.records) {
        if (r.n == n && r.route == route) {
          rc.push_back(r.regret_class);
          rf.push_back(r.regret_fb);
        }
      }
      result.summary.push_back({route, n, rc.size(), Median(rc), Median(rf)});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Double robustness of the DR welfare estimate for a constant policy.

struct DoubleRobustnessConfig {
  DgpSpec dgp;
  NuisanceConfig nuisance;
  double policy_value = 1.0;  // π ≡ policy_value
  std::size_t small_n = 500;
  std::size_t large_n = 8000;
  std::size_t replications = 50;
  std::size_t monte_carlo = 1'000'000;
  SeedSpec seed;
};

struct DoubleRobustnessCase {
  std::string name;
  bool misspecify_propensity = false;
  bool misspecify_outcome = false;
  std::vector<double> error_small;  // Ŵ - W per replication
  std::vector<double> error_large;
  std::size_t shrink_count = 0;
  double shrink_fraction = 0.0;
  MeanAndError bias_large;
  double bias_in_se = 0.0;  // |mean error| / SE at the large n
};

struct DoubleRobustnessResult {
  double true_welfare = 0.0;
  bool exact_truth = false;
  std::vector<DoubleRobustnessCase> cases;
};

// E[m0(X) + v·τ(X)] in closed form for the uniform box with polynomial m0 and
// linear τ; empty otherwise.
inline std::optional<double> ExactConstantPolicyWelfare(const DgpSpec& spec, double value) {
  if (spec.covariate_law != CovariateLaw::kUniformBox || spec.cate != CateFamily::kLinear) {
    return std::nullopt;
  }
  const double a = spec.box_low, b = spec.box_high;
  const double ex = 0.5 * (a + b);
  const double ex2 = (a * a + a * b + b * b) / 3.0;
  double w = spec.baseline_intercept + value * spec.cate_intercept;
  for (std::size_t j = 0; j < spec.dim; ++j) {
    w += dgp_internal::Coefficient(spec.baseline_slopes, j) * ex;
    if (spec.baseline == BaselineFamily::kQuadratic) {
      w += dgp_internal::Coefficient(spec.baseline_quadratic, j) * ex2;
    }
    w += value * dgp_internal::Coefficient(spec.cate_slopes, j) * ex;
  }
  return w;
}

inline DoubleRobustnessResult DoubleRobustnessExperiment(const DoubleRobustnessConfig& config) {
  DoubleRobustnessResult result;
  if (auto exact = ExactConstantPolicyWelfare(config.dgp, config.policy_value)) {
    result.true_welfare = *exact;
    result.exact_truth = true;
  } else {
    const double v = config.policy_value;
    result.true_welfare =
        TrueWelfare(config.dgp, [v](std::span<const double>) { return v; }, config.monte_carlo,
                    config.seed)
            .mean;
  }

  const struct {
    const char* name;
    bool prop;
    bool outcome;
  } kinds[] = {{"propensity-misspecified", true, false},
               {"outcome-misspecified", false, true},
               {"both-misspecified", true, true}};
  for (const auto& kind : kinds) {
    DoubleRobustnessCase c;
    c.name = kind.name;
    c.misspecify_propensity = kind.prop;
    c.misspecify_outcome = kind.outcome;
    c.error_small.resize(config.replications);
    c.error_large.resize(config.replications);
    NuisanceConfig nc = config.nuisance;
    nc.known_propensity = false;
    nc.fit_outcomes = true;
    nc.misspecify_propensity = kind.prop;
    nc.misspecify_outcome = kind.outcome;
    ParallelFor(2 * config.replications, [&](std::size_t job) {
      const std::size_t rep = job / 2;
      const bool large = job % 2 == 1;
      const std::size_t n = large ? config.large_n : config.small_n;
      const SeedSpec rep_seed = config.seed.ForReplication(rep).ForReplication(n);
      DgpSpec spec = config.dgp;
      spec.n = n;
      const OracleDataset ods = Generate(spec, rep_seed);
      const NuisanceEstimates nuis = EstimateNuisance(ods.base, nc, rep_seed);
      const PseudoOutcomes ps = DrPseudo(ods.base, nuis);
      const std::vector<double> pi(n, config.policy_value);
      const double err = EmpiricalWelfare(ps, pi) - result.true_welfare;
      (large ? c.error_large : c.error_small)[rep] = err;
    });
    for (std::size_t r = 0; r < config.replications; ++r) {
      if (std::abs(c.error_large[r]) < std::abs(c.error_small[r])) ++c.shrink_count;
    }
    c.shrink_fraction =
        static_cast<double>(c.shrink_count) / static_cast<double>(config.replications);
    c.bias_large = MeanWithError(c.error_large);
    c.bias_in_se = std::abs(c.bias_large.mean) / c.bias_large.standard_error;
    result.cases.push_back(std::move(c));
  }
  return result;
}

inline std::string DoubleRobustnessToCsv(const DoubleRobustnessResult& result) {
  std::string out = "case,replication,error_small,error_large\n";
  for (const auto& c : result.cases) {
    for (std::size_t r = 0; r < c.error_small.size(); ++r) {
      out += c.name + "," + std::to_string(r) + "," + FormatDouble(c.error_small[r]) + "," +
             FormatDouble(c.error_large[r]) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration cost against the convex parametric route.

struct BenchConfig {
  DgpSpec dgp;
  NuisanceConfig nuisance;
  PseudoKind pseudo = PseudoKind::kIpw;
  std::vector<std::size_t> grid_sizes{3, 5, 7};
  std::size_t repeats = 11;
  BasisSpec parametric_basis{1, {}};
  double ridge = 0.0;
  std::size_t cap = 100'000'000;
  SeedSpec seed;
};

struct BenchRow {
  std::size_t grid_points = 0;
  std::size_t class_size = 0;
  double enum_seconds = 0.0;
  double param_seconds = 0.0;
  double w_emp_enum = 0.0;
  double w_emp_param = 0.0;
  double welfare_gap = 0.0;
};

// One dataset; for each grid size m, axis rectangles over m quantile points
// per covariate are enumerated and solved exactly, and the linear scaled-LS
// route is solved on the same pseudo-outcomes. Times are medians over
// `repeats` runs. The gap is Ŵ(exact) - Ŵ(parametric), never negative when
// the parametric policy is in the class, otherwise either sign.
inline std::vector<BenchRow> RunBench(const BenchConfig& config) {
  if (config.repeats == 0) Fail(ErrorCode::kConfig, "bench needs repeats >= 1");
  const OracleDataset ods = Generate(config.dgp, config.seed);
  const ObservedDataset& ds = ods.base;
  RequireBothArms(ds, "bench");
  const NuisanceEstimates nuis = EstimateNuisance(ds, config.nuisance, config.seed, ods.e_true);
  const PseudoOutcomes ps = BuildPseudo(config.pseudo, ods, nuis);

  std::vector<BenchRow> rows;
  for (std::size_t m : config.grid_sizes) {
    std::vector<std::vector<double>> grids;
    for (std::size_t c = 0; c < ds.dim; ++c) grids.push_back(QuantileGrid(ds, c, m, false));
    const EnumerablePolicyClass cls = EnumerablePolicyClass::AxisRectangle(grids);
    BenchRow row;
    row.grid_points = m;
    row.class_size = cls.size();
    TrainedPolicy exact, param;
    // Separate loops, each with an untimed warm-up, so neither route runs on
    // caches just flushed by the other.
    const double enum_seconds =
        eval_internal::MedianCallSeconds([&] { exact = EwmEnumerate(ps, cls, ds, config.cap); },
                                         config.repeats);
    const double param_seconds = eval_internal::MedianCallSeconds(
        [&] { param = LsLinear(ps, ds, config.parametric_basis, config.ridge); }, config.repeats);
    row.enum_seconds = enum_seconds;
    row.param_seconds = param_seconds;
    row.w_emp_enum = EmpiricalWelfare(ps, exact.decisions);
    row.w_emp_param = EmpiricalWelfare(ps, param.decisions);
    row.welfare_gap = row.w_emp_enum - row.w_emp_param;
    rows.push_back(row);
  }
  return rows;
}

inline std::string BenchToCsv(std::span<const BenchRow> rows) {
  std::string out =
      "grid_points,class_size,enum_seconds,param_seconds,w_emp_enum,w_emp_param,welfare_gap\n";
  for (const auto& r : rows) {
    out += std::to_string(r.grid_points) + "," + std::to_string(r.class_size) + "," +
           FormatDouble(r.enum_seconds) + "," + FormatDouble(r.param_seconds) + "," +
           FormatDouble(r.w_emp_enum) + "," + FormatDouble(r.w_emp_param) + "," +
           FormatDouble(r.welfare_gap) + "\n";
  }
  return out;
}

}  // namespace welfarelens

#endif  // WELFARELENS_EVAL_HPP_
