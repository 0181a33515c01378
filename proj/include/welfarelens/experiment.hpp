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

#ifndef WELFARELENS_EXPERIMENT_HPP_
#define WELFARELENS_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "welfarelens/csv.hpp"
#include "welfarelens/dgp.hpp"
#include "welfarelens/error.hpp"
#include "welfarelens/eval.hpp"
#include "welfarelens/io.hpp"
#include "welfarelens/nuisance.hpp"
#include "welfarelens/policies.hpp"
#include "welfarelens/pseudo.hpp"
#include "welfarelens/random.hpp"
#include "welfarelens/solvers.hpp"

namespace welfarelens {

struct BenchSettings {
  std::vector<std::size_t> grid_sizes{3, 5, 7};
  std::size_t repeats = 11;
  BasisSpec parametric_basis{1, {}};
  std::size_t cap = 100'000'000;
};

struct ExperimentConfig {
  DgpSpec dgp;
  NuisanceConfig nuisance;
  PseudoKind pseudo = PseudoKind::kIpw;
  PolicyClassSpec policy_class;
  std::vector<Route> routes{Route::kEwm, Route::kLs};
  double lambda = 1.0;
  std::vector<double> lambda_grid;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 1;
  BasisSpec policy_basis{1, {}};
  BasisSpec plugin_basis{1, {}};
  double plugin_ridge = 0.0;
  GradientOptions gradient;
  std::size_t monte_carlo = 1'000'000;
  std::size_t affine_policies = 100;
  SeedSpec seed{0};
  std::string output_dir = "out";
  // Optional dataset CSV for train and audit; relative to the config file.
  std::string data;
  BenchSettings bench;
};

// ---------------------------------------------------------------------------
// Strict reader: every key must be consumed, so typos surface as errors.

class ConfigReader {
 public:
  ConfigReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) Fail(ErrorCode::kConfig, Where() + " must be an object");
  }

  bool Has(const std::string& key) const { return node_.contains(key); }

  template <typename T>
  void Read(const std::string& key, T& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    try {
      out = node_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      Fail(ErrorCode::kConfig, "bad value for " + Path(key) + ": " + node_.at(key).dump());
    }
  }

  void ReadReal(const std::string& key, double& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    if (!node_.at(key).is_number()) {
      Fail(ErrorCode::kConfig, Path(key) + " must be a number");
    }
    out = node_.at(key).get<double>();
  }

  void ReadCount(const std::string& key, std::size_t& out) {
    if (!node_.contains(key)) return;
    seen_.insert(key);
    const Json& v = node_.at(key);
    if (v.is_number_unsigned()) {
      out = v.get<std::size_t>();
    } else if (v.is_number_float() && v.get<double>() >= 0 &&
               v.get<double>() == std::floor(v.get<double>()) && v.get<double>() < 1e18) {
      out = static_cast<std::size_t>(v.get<double>());
    } else {
      Fail(ErrorCode::kConfig, Path(key) + " must be a non-negative integer");
    }
  }

  template <typename Enum>
  void ReadEnum(const std::string& key, Enum& out,
                const std::vector<std::pair<std::string, Enum>>& names) {
    if (!node_.contains(key)) return;
    std::string value;
    Read(key, value);
    for (const auto& [name, e] : names) {
      if (name == value) {
        out = e;
        return;
      }
    }
    std::string allowed;
    for (const auto& [name, e] : names) allowed += (allowed.empty() ? "" : "|") + name;
    Fail(ErrorCode::kConfig, Path(key) + ": '" + value + "' is not one of " + allowed);
  }

  std::optional<ConfigReader> Child(const std::string& key) {
    if (!node_.contains(key)) return std::nullopt;
    seen_.insert(key);
    return ConfigReader(node_.at(key), Path(key));
  }

  void Finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) {
        Fail(ErrorCode::kConfig, "unknown key " + Path(item.key()));
      }
    }
  }

 private:
  std::string Where() const { return path_.empty() ? "config" : path_; }
  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

namespace experiment_internal {

inline void ReadBasis(ConfigReader& parent, const std::string& key, BasisSpec& out) {
  auto r = parent.Child(key);
  if (!r) return;
  r->Read("degree", out.degree);
  r->Read("columns", out.columns);
  r->Finish();
  if (out.degree < 0) Fail(ErrorCode::kConfig, key + ".degree must be >= 0");
}

inline void ReadDgp(ConfigReader& r, DgpSpec& d) {
  r.ReadCount("dim", d.dim);
  r.ReadCount("n", d.n);
  r.ReadEnum<CovariateLaw>("covariates", d.covariate_law,
                           {{"uniform-box", CovariateLaw::kUniformBox},
                            {"truncated-gaussian", CovariateLaw::kTruncatedGaussian}});
  r.ReadReal("box_low", d.box_low);
  r.ReadReal("box_high", d.box_high);
  r.ReadReal("overlap", d.overlap);
  r.ReadReal("noise_sd", d.noise_sd);
  r.ReadReal("y_max", d.y_max);
  if (auto p = r.Child("propensity")) {
    p->ReadEnum<PropensityFamily>(
        "family", d.propensity,
        {{"constant", PropensityFamily::kConstant}, {"logistic", PropensityFamily::kLogistic}});
    p->ReadReal("constant", d.propensity_constant);
    p->ReadReal("intercept", d.propensity_intercept);
    p->Read("slopes", d.propensity_slopes);
    p->Finish();
  }
  if (auto b = r.Child("baseline")) {
    b->ReadEnum<BaselineFamily>(
        "family", d.baseline,
        {{"linear", BaselineFamily::kLinear}, {"quadratic", BaselineFamily::kQuadratic}});
    b->ReadReal("intercept", d.baseline_intercept);
    b->Read("slopes", d.baseline_slopes);
    b->Read("quadratic", d.baseline_quadratic);
    b->Finish();
  }
  if (auto c = r.Child("cate")) {
    c->ReadEnum<CateFamily>("family", d.cate,
                            {{"linear", CateFamily::kLinear},
                             {"threshold", CateFamily::kThreshold},
                             {"smooth", CateFamily::kSmooth}});
    c->ReadReal("intercept", d.cate_intercept);
    c->Read("slopes", d.cate_slopes);
    c->ReadCount("coordinate", d.cate_coordinate);
    c->ReadReal("cut", d.cate_cut);
    c->ReadReal("amplitude", d.cate_amplitude);
    c->ReadReal("frequency", d.cate_frequency);
    c->Finish();
  }
  r.Finish();
}

inline void ReadNuisance(ConfigReader& r, NuisanceConfig& n) {
  r.Read("known_propensity", n.known_propensity);
  ReadBasis(r, "propensity_basis", n.propensity_basis);
  ReadBasis(r, "outcome_basis", n.outcome_basis);
  r.Read("misspecify_propensity", n.misspecify_propensity);
  r.Read("misspecify_outcome", n.misspecify_outcome);
  r.ReadReal("ridge", n.ridge);
  r.ReadReal("clip", n.clip);
  r.Read("cross_fit", n.cross_fit);
  r.ReadCount("folds", n.folds);
  r.Finish();
  if (!(n.clip > 0.0 && n.clip < 0.5)) Fail(ErrorCode::kConfig, "nuisance.clip must lie in (0, 1/2)");
  if (!(n.ridge >= 0.0)) Fail(ErrorCode::kConfig, "nuisance.ridge must be >= 0");
  if (n.cross_fit && n.folds < 2) Fail(ErrorCode::kConfig, "nuisance.folds must be >= 2");
}

inline void ReadPolicyClass(ConfigReader& r, PolicyClassSpec& p) {
  r.ReadEnum<PolicyFamily>("family", p.family,
                           {{"threshold", PolicyFamily::kSignedThreshold},
                            {"rectangle", PolicyFamily::kAxisRectangle}});
  r.Read("coordinates", p.coordinates);
  r.ReadEnum<GridKind>("grid", p.grid, {{"quantile", GridKind::kQuantile}, {"fixed", GridKind::kFixed}});
  r.ReadCount("points", p.points);
  r.ReadReal("low", p.low);
  r.ReadReal("high", p.high);
  r.ReadCount("cap", p.cap);
  r.Finish();
  if (p.points == 0) Fail(ErrorCode::kConfig, "policy_class.points must be >= 1");
  if (p.grid == GridKind::kFixed && !(p.low <= p.high)) {
    Fail(ErrorCode::kConfig, "policy_class.low must be <= high");
  }
}

}  // namespace experiment_internal

inline ExperimentConfig ParseExperimentConfig(const Json& root) {
  using namespace experiment_internal;
  ExperimentConfig c;
  ConfigReader r(root, "");
  if (auto d = r.Child("dgp")) ReadDgp(*d, c.dgp);
  if (auto n = r.Child("nuisance")) ReadNuisance(*n, c.nuisance);
  r.ReadEnum<PseudoKind>("pseudo", c.pseudo,
                         {{"ipw", PseudoKind::kIpw}, {"dr", PseudoKind::kDr}, {"oracle", PseudoKind::kOracle}});
  if (auto p = r.Child("policy_class")) ReadPolicyClass(*p, c.policy_class);
  if (r.Has("routes")) {
    std::vector<std::string> names;
    r.Read("routes", names);
    c.routes.clear();
    for (const auto& name : names) {
      const auto route = ParseRoute(name);
      if (!route) Fail(ErrorCode::kConfig, "unknown route '" + name + "'");
      c.routes.push_back(*route);
    }
  }
  r.ReadReal("lambda", c.lambda);
  r.Read("lambda_grid", c.lambda_grid);
  r.Read("n_grid", c.n_grid);
  r.ReadCount("replications", c.replications);
  ReadBasis(r, "policy_basis", c.policy_basis);
  ReadBasis(r, "plugin_basis", c.plugin_basis);
  r.ReadReal("plugin_ridge", c.plugin_ridge);
  if (auto g = r.Child("gradient")) {
    g->ReadReal("tolerance", c.gradient.tolerance);
    g->Read("max_iterations", c.gradient.max_iterations);
    g->ReadReal("theta_bound", c.gradient.theta_bound);
    g->Finish();
  }
  r.ReadCount("monte_carlo", c.monte_carlo);
  r.ReadCount("affine_policies", c.affine_policies);
  std::uint64_t seed = 0;
  r.Read("seed", seed);
  c.seed = SeedSpec{seed};
  r.Read("output_dir", c.output_dir);
  r.Read("data", c.data);
  if (auto b = r.Child("bench")) {
    b->Read("grid_sizes", c.bench.grid_sizes);
    b->ReadCount("repeats", c.bench.repeats);
    ReadBasis(*b, "parametric_basis", c.bench.parametric_basis);
    b->ReadCount("cap", c.bench.cap);
    b->Finish();
  }
  r.Finish();

  ValidateDgpSpec(c.dgp);
  if (c.routes.empty()) Fail(ErrorCode::kConfig, "routes must not be empty");
  if (!(c.lambda > 0.0)) Fail(ErrorCode::kConfig, "lambda must be > 0");
  for (double l : c.lambda_grid) {
    if (!(l > 0.0)) Fail(ErrorCode::kConfig, "lambda_grid values must be > 0");
  }
  for (std::size_t n : c.n_grid) {
    if (n == 0) Fail(ErrorCode::kConfig, "n_grid values must be >= 1");
  }
  if (c.replications == 0) Fail(ErrorCode::kConfig, "replications must be >= 1");
  if (c.monte_carlo == 0) Fail(ErrorCode::kConfig, "monte_carlo must be >= 1");
  if (!(c.gradient.tolerance > 0.0) || c.gradient.max_iterations <= 0 ||
      !(c.gradient.theta_bound > 0.0)) {
    Fail(ErrorCode::kConfig, "gradient settings must be positive");
  }
  return c;
}

inline ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  ExperimentConfig c = ParseExperimentConfig(root);
  if (!c.data.empty() && std::filesystem::path(c.data).is_relative()) {
    c.data = (path.parent_path() / c.data).string();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Subcommands. Each writes its primary outputs atomically under `out`; files
// carrying wall-clock timings are kept separate from the reproducible ones.

using Logger = std::function<void(const std::string&)>;

namespace experiment_internal {

inline std::filesystem::path Prepare(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + out.string() + ": " + ec.message());
  return out;
}

struct Input {
  OracleDataset oracle;
  bool has_oracle = false;
};

// Replication `rep`: the configured dataset file or a fresh simulation.
inline Input LoadOrSimulate(const ExperimentConfig& c, std::size_t rep) {
  Input in;
  if (!c.data.empty()) {
    LoadedDataset loaded = LoadDatasetCsv(c.data);
    in.has_oracle = loaded.has_oracle;
    if (loaded.has_oracle) {
      in.oracle = std::move(loaded.oracle);
    } else {
      in.oracle.base = std::move(loaded.observed);
    }
  } else {
    in.oracle = Generate(c.dgp, c.seed.ForReplication(rep));
    in.has_oracle = true;
  }
  RequireValid(in.oracle.base);
  return in;
}

inline PseudoOutcomes PseudoFor(const ExperimentConfig& c, const Input& in,
                                const NuisanceEstimates& nuis) {
  if (c.pseudo == PseudoKind::kOracle && !in.has_oracle) {
    Fail(ErrorCode::kData, "oracle pseudo-outcomes need potential-outcome columns");
  }
  return BuildPseudo(c.pseudo, in.oracle, nuis);
}

inline NuisanceEstimates NuisanceFor(const ExperimentConfig& c, const Input& in,
                                     const SeedSpec& seed) {
  RequireBothArms(in.oracle.base, "nuisance estimation");
  std::span<const double> known;
  if (in.has_oracle) known = in.oracle.e_true;
  return EstimateNuisance(in.oracle.base, c.nuisance, seed, known);
}

inline std::size_t InputCount(const ExperimentConfig& c) { return c.data.empty() ? c.replications : 1; }

}  // namespace experiment_internal

inline void CmdSimulate(const ExperimentConfig& c, const std::filesystem::path& out,
                        const Logger& log) {
  experiment_internal::Prepare(out);
  for (std::size_t rep = 0; rep < c.replications; ++rep) {
    const OracleDataset ods = Generate(c.dgp, c.seed.ForReplication(rep));
    WriteFileAtomic(out / ("observed_" + std::to_string(rep) + ".csv"), DatasetToCsv(ods.base));
    WriteFileAtomic(out / ("oracle_" + std::to_string(rep) + ".csv"), OracleToCsv(ods));
  }
  log("simulate: wrote " + std::to_string(c.replications) + " replication(s) of n=" +
      std::to_string(c.dgp.n) + " to " + out.string());
}

// Trains one route on one input; the nuisance and pseudo-outcomes are shared
// across routes by the caller.
inline TrainedPolicy TrainRoute(const ExperimentConfig& c, Route route, const OracleDataset& ods,
                                const NuisanceEstimates& nuis, const PseudoOutcomes& ps,
                                double scale) {
  const ObservedDataset& ds = ods.base;
  switch (route) {
    case Route::kEwm:
    case Route::kLs: {
      const EnumerablePolicyClass cls = BuildPolicyClass(c.policy_class, ds.dim, &ds);
      return route == Route::kEwm ? EwmEnumerate(ps, cls, ds, c.policy_class.cap)
                                  : LsEnumerate(ps, cls, ds, c.policy_class.cap);
    }
    case Route::kEwmRegularized:
    case Route::kLsRegularized: {
      const ParametricPolicyClass pcls(Basis(ds.dim, c.policy_basis));
      TrainedPolicy p = route == Route::kEwmRegularized
                            ? EwmRegularizedParametric(ps, ds, pcls, scale * c.lambda, c.gradient)
                            : LsRegularizedParametric(ps, ds, pcls, c.lambda, c.gradient);
      p.scale_constant = scale;
      p.lambda = c.lambda;
      if (!p.converged && !p.saturated) {
        Fail(ErrorCode::kNonConvergence,
             std::string(RouteName(route)) + " stopped after " + std::to_string(p.iterations) +
                 " iterations with gradient norm " + FormatDouble(p.gradient_norm));
      }
      return p;
    }
    case Route::kPluginTLearner:
      return PluginTLearner(FitOutcomeModels(ds, EffectiveOutcomeBasis(c.nuisance), c.nuisance.ridge), ds);
    case Route::kPluginIpwRegression:
      return PluginIpwRegression(ps.kind == PseudoKind::kOracle ? IpwPseudo(ds, nuis.e_hat) : ps, ds,
                                 c.plugin_basis, c.plugin_ridge);
  }
  Fail(ErrorCode::kInvalidArgument, "unknown route");
}

inline void CmdTrain(const ExperimentConfig& c, const std::filesystem::path& out,
                     const Logger& log) {
  using namespace experiment_internal;
  Prepare(out);
  const bool regularized = eval_internal::NeedsScale(c.routes);
  const double scale = regularized ? RunScaleStudy({}, c.seed).ratio : kNaN;
  for (std::size_t rep = 0; rep < InputCount(c); ++rep) {
    const Input in = LoadOrSimulate(c, rep);
    const SeedSpec rep_seed = c.seed.ForReplication(rep);
    const NuisanceEstimates nuis = NuisanceFor(c, in, rep_seed);
    const PseudoOutcomes ps = PseudoFor(c, in, nuis);
    for (Route route : c.routes) {
      const TrainedPolicy p = TrainRoute(c, route, in.oracle, nuis, ps, scale);
      const std::string name =
          "policy_" + std::string(RouteName(route)) + "_" + std::to_string(rep) + ".json";
      WriteFileAtomic(out / name, TrainedPolicyToJson(p).dump(2) + "\n");
      log("train: " + std::string(RouteName(route)) + " rep " + std::to_string(rep) + " -> " +
          p.description + " (objective " + FormatDouble(p.objective) + ")");
    }
  }
}

inline void CmdAudit(const ExperimentConfig& c, const std::filesystem::path& out,
                     const Logger& log) {
  using namespace experiment_internal;
  Prepare(out);
  Json reports = Json::array();
  std::string scale_csv;
  std::string timing = "replication,ewm_seconds,ls_seconds,regularized_seconds\n";
  AuditOptions options;
  options.cap = c.policy_class.cap;
  options.affine_policies = c.affine_policies;
  options.lambda_grid = c.lambda_grid;
  bool all_equal = true;
  for (std::size_t rep = 0; rep < InputCount(c); ++rep) {
    const Input in = LoadOrSimulate(c, rep);
    const SeedSpec rep_seed = c.seed.ForReplication(rep);
    const NuisanceEstimates nuis = NuisanceFor(c, in, rep_seed);
    const PseudoOutcomes ps = PseudoFor(c, in, nuis);
    const ObservedDataset& ds = in.oracle.base;
    const EnumerablePolicyClass cls = BuildPolicyClass(c.policy_class, ds.dim, &ds);
    const EquivalenceReport report = AuditEquivalence(ps, cls, ds, options, rep_seed);
    Json j = EquivalenceReportToJson(report);
    j["replication"] = rep;
    j["pseudo"] = PseudoKindName(ps.kind);
    reports.push_back(j);
    all_equal = all_equal && report.sets_equal;
    if (report.has_scale) {
      std::string table = ScaleEntriesToCsv(report.scale);
      if (!scale_csv.empty()) table = table.substr(table.find('\n') + 1);
      // Prefix each row with the replication.
      std::string prefixed;
      std::size_t pos = 0;
      bool header = scale_csv.empty();
      while (pos < table.size()) {
        const std::size_t end = table.find('\n', pos);
        const std::string line = table.substr(pos, end - pos);
        prefixed += (header ? "replication," : std::to_string(rep) + ",") + line + "\n";
        header = false;
        pos = end + 1;
      }
      scale_csv += prefixed;
    }
    timing += std::to_string(rep) + "," + FormatDouble(report.ewm_seconds) + "," +
              FormatDouble(report.ls_seconds) + "," + FormatDouble(report.regularized_seconds) +
              "\n";
    log("audit: rep " + std::to_string(rep) + " |class|=" + std::to_string(report.class_size) +
        " equiv_flag=" + (report.sets_equal ? "true" : "false") +
        " max_affine_resid=" + FormatDouble(report.max_affine_residual) +
        (report.has_scale ? " scale=" + FormatDouble(report.scale.ratio) + " (" +
                                report.scale.match + ")"
                          : ""));
  }
  WriteFileAtomic(out / "audit.json", reports.dump(2) + "\n");
  if (!scale_csv.empty()) WriteFileAtomic(out / "audit_scale.csv", scale_csv);
  WriteFileAtomic(out / "timing.csv", timing);
  log(std::string("audit: equiv_flag ") + (all_equal ? "true" : "false") + " on every input");
}

inline RegretConfig ToRegretConfig(const ExperimentConfig& c) {
  RegretConfig r;
  r.dgp = c.dgp;
  r.nuisance = c.nuisance;
  r.pseudo = c.pseudo;
  r.policy_class = c.policy_class;
  r.routes = c.routes;
  if (!c.n_grid.empty()) r.n_grid = c.n_grid;
  r.replications = c.replications;
  r.lambda = c.lambda;
  r.policy_basis = c.policy_basis;
  r.plugin_basis = c.plugin_basis;
  r.plugin_ridge = c.plugin_ridge;
  r.gradient = c.gradient;
  r.monte_carlo = c.monte_carlo;
  r.affine_policies = c.affine_policies;
  r.seed = c.seed;
  return r;
}

inline void CmdSweep(const ExperimentConfig& c, const std::filesystem::path& out,
                     const Logger& log) {
  experiment_internal::Prepare(out);
  const RegretResult result = RegretExperiment(ToRegretConfig(c));
  WriteFileAtomic(out / "regret.csv", RegretRecordsToCsv(result.records));
  WriteFileAtomic(out / "regret_summary.csv", RegretSummaryToCsv(result.summary));
  log("sweep: " + std::to_string(result.records.size()) + " rows; in-class best " +
      result.star_description + " with W=" + FormatDouble(result.w_star.mean));
  for (const auto& s : result.summary) {
    log("  " + std::string(RouteName(s.route)) + " n=" + std::to_string(s.n) +
        " median regret vs class best " + FormatDouble(s.median_regret_class));
  }
}

inline void CmdBench(const ExperimentConfig& c, const std::filesystem::path& out,
                     const Logger& log) {
  experiment_internal::Prepare(out);
  BenchConfig b;
  b.dgp = c.dgp;
  b.nuisance = c.nuisance;
  b.pseudo = c.pseudo;
  b.grid_sizes = c.bench.grid_sizes;
  b.repeats = c.bench.repeats;
  b.parametric_basis = c.bench.parametric_basis;
  b.cap = c.bench.cap;
  b.seed = c.seed;
  const std::vector<BenchRow> rows = RunBench(b);
  WriteFileAtomic(out / "bench.csv", BenchToCsv(rows));
  for (const auto& r : rows) {
    log("bench: m=" + std::to_string(r.grid_points) + " |class|=" + std::to_string(r.class_size) +
        " enum " + FormatDouble(r.enum_seconds) + "s, parametric " +
        FormatDouble(r.param_seconds) + "s, welfare gap " + FormatDouble(r.welfare_gap));
  }
}

}  // namespace welfarelens

#endif  // WELFARELENS_EXPERIMENT_HPP_
