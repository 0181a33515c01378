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

// Command-line front end: simulate | train | audit | sweep | bench.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "welfarelens/welfarelens.hpp"

namespace {

namespace wl = welfarelens;

// Exit statuses: 2 usage/config, 3 data, 4 cap exceeded, 5 non-convergence,
// 6 i/o, 1 anything else.
int ExitCodeFor(wl::ErrorCode code) {
  switch (code) {
    case wl::ErrorCode::kConfig:
    case wl::ErrorCode::kInvalidArgument:
      return 2;
    case wl::ErrorCode::kData:
      return 3;
    case wl::ErrorCode::kCapExceeded:
      return 4;
    case wl::ErrorCode::kNonConvergence:
      return 5;
    case wl::ErrorCode::kIo:
      return 6;
  }
  return 1;
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::string data;
  std::string route;
};

void AddCommon(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", o.out, "output directory (overrides config output_dir)");
  cmd->add_option("--seed", o.seed, "master seed (overrides config seed)");
  cmd->add_flag("--quiet", o.quiet, "suppress progress messages");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"welfarelens: empirical welfare maximization and least-squares policy learning"};
  app.require_subcommand(1, 1);
  Options o;
  auto* simulate = app.add_subcommand("simulate", "write simulated observed and oracle datasets");
  auto* train = app.add_subcommand("train", "train policies and write TrainedPolicy records");
  auto* audit = app.add_subcommand("audit", "check EWM/least-squares equivalence");
  auto* sweep = app.add_subcommand("sweep", "regret experiment over an n grid");
  auto* bench = app.add_subcommand("bench", "enumeration cost versus the convex route");
  for (auto* cmd : {simulate, train, audit, sweep, bench}) AddCommon(cmd, o);
  for (auto* cmd : {train, audit}) {
    cmd->add_option("--data", o.data, "dataset CSV (overrides config data)");
  }
  train->add_option("--route", o.route, "train only this route");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    wl::ExperimentConfig config = wl::LoadExperimentConfig(o.config);
    if (o.seed) config.seed = wl::SeedSpec{*o.seed};
    if (!o.data.empty()) config.data = o.data;
    if (!o.route.empty()) {
      const auto route = wl::ParseRoute(o.route);
      if (!route) {
        std::cerr << "error: unknown route '" << o.route << "'\n";
        return 2;
      }
      config.routes = {*route};
    }
    const std::filesystem::path out = o.out.empty() ? config.output_dir : o.out;
    const bool quiet = o.quiet;
    const wl::Logger log = [quiet](const std::string& line) {
      if (!quiet) std::cerr << line << "\n";
    };
    if (*simulate) wl::CmdSimulate(config, out, log);
    if (*train) wl::CmdTrain(config, out, log);
    if (*audit) wl::CmdAudit(config, out, log);
    if (*sweep) wl::CmdSweep(config, out, log);
    if (*bench) wl::CmdBench(config, out, log);
  } catch (const wl::Error& e) {
    std::cerr << "error (" << wl::ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
