// Copyright 2026 The labeldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// labeldp_bench: verification suites and risk sweeps.
//
//   labeldp_bench verify-privacy --k 2,4,8 --epsilon 0.5,1,lnK
//   labeldp_bench sweep --config sweep.cfg --out results.csv

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bench/commands.h"
#include "bench/experiment_config.h"

namespace {

using labeldp::bench::ExperimentConfig;

struct Flags {
  std::string config_path;
  std::optional<std::string> seed, out, mechanism, epsilon, k, n, trials;
  // Settings not covered by a dedicated flag, as key=value.
  std::vector<std::string> settings;
};

void AddFlags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "key = value config file");
  cmd->add_option("--seed", flags.seed, "master seed (u64)");
  cmd->add_option("--out", flags.out, "CSV output path (default stdout)");
  cmd->add_option("--mechanism", flags.mechanism,
                  "bernoulli-subset,d-subset,krr,djw");
  cmd->add_option("--epsilon", flags.epsilon, "privacy budgets; lnK allowed");
  cmd->add_option("--k", flags.k, "label counts");
  cmd->add_option("--n", flags.n, "sample sizes");
  cmd->add_option("--trials", flags.trials, "trials per cell");
  cmd->add_option("--set", flags.settings,
                  "extra config setting key=value (repeatable)");
}

// Config file first, then flags on top.
int BuildConfig(const Flags& flags, ExperimentConfig& config) {
  if (!flags.config_path.empty()) {
    auto parsed = labeldp::bench::ReadConfigFile(flags.config_path);
    if (!parsed.ok()) {
      std::cerr << "error: " << parsed.status().message() << "\n";
      return labeldp::bench::kExitUsage;
    }
    config = *std::move(parsed);
  }
  std::vector<std::pair<std::string, std::string>> overrides;
  auto add = [&](const char* key, const std::optional<std::string>& v) {
    if (v.has_value()) overrides.emplace_back(key, *v);
  };
  add("seed", flags.seed);
  add("out", flags.out);
  add("mechanism", flags.mechanism);
  add("epsilon", flags.epsilon);
  add("k", flags.k);
  add("n", flags.n);
  add("trials", flags.trials);
  for (const std::string& s : flags.settings) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << s << "'\n";
      return labeldp::bench::kExitUsage;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [key, value] : overrides) {
    if (absl::Status s = labeldp::bench::ApplySetting(config, key, value);
        !s.ok()) {
      std::cerr << "error: --" << key << ": " << s.message() << "\n";
      return labeldp::bench::kExitUsage;
    }
  }
  if (absl::Status s = config.Validate(); !s.ok()) {
    std::cerr << "error: " << s.message() << "\n";
    return labeldp::bench::kExitUsage;
  }
  return labeldp::bench::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-private SCO verification and benchmark harness"};
  app.require_subcommand(1);
  Flags flags;
  using Runner = int (*)(const ExperimentConfig&, std::ostream&,
                         std::ostream&);
  const std::pair<const char*, Runner> commands[] = {
      {"verify-privacy", labeldp::bench::RunVerifyPrivacy},
      {"verify-estimators", labeldp::bench::RunVerifyEstimators},
      {"sweep", labeldp::bench::RunSweep},
      {"reduce-demo", labeldp::bench::RunReduceDemo},
  };
  std::vector<std::pair<CLI::App*, Runner>> subcommands;
  for (const auto& [name, runner] : commands) {
    CLI::App* cmd = app.add_subcommand(name);
    AddFlags(cmd, flags);
    subcommands.emplace_back(cmd, runner);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return labeldp::bench::kExitUsage;
  }

  ExperimentConfig config;
  if (int code = BuildConfig(flags, config); code != 0) return code;
  for (const auto& [cmd, runner] : subcommands) {
    if (cmd->parsed()) return runner(config, std::cout, std::cerr);
  }
  return labeldp::bench::kExitUsage;
}
