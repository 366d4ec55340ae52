// Copyright 2020 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "leadersel/errors.hpp"
#include "leadersel/experiments.hpp"
#include "leadersel/io.hpp"

namespace {

using namespace leadersel;

struct Args {
  std::string config;
  std::string out{"."};
  std::optional<int> algorithm;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> report;
  bool followers_only{false};
};

int dispatch(const std::string& command, const Args& args) {
  NetworkConfig cfg = load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  if (args.algorithm) cfg.algorithm = *args.algorithm;
  if (args.followers_only) cfg.simulate.followers_only = true;
  if (command == "select") {
    return cmd_select(cfg, args.out, cfg.algorithm, std::cout);
  }
  if (command == "simulate") {
    return cmd_simulate(cfg, args.out, args.report, std::cout);
  }
  if (command == "compare") return cmd_compare(cfg, args.out, std::cout);
  if (command == "sweep-dwell") {
    return cmd_sweep_dwell(cfg, args.out, std::cout);
  }
  return cmd_modes_table(cfg, args.out, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader selection for switched multi-agent networks"};
  app.fallthrough();
  app.require_subcommand(1);
  Args args;
  app.add_option("--config", args.config, "Network configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", args.out, "Output directory");
  app.add_option("--algorithm", args.algorithm, "Selection algorithm")
      ->check(CLI::IsMember({1, 2}));
  app.add_option("--seed", args.seed, "Master seed (overrides the config)");
  for (const char* name :
       {"select", "simulate", "compare", "sweep-dwell", "modes-table"}) {
    app.add_subcommand(name);
  }
  app.get_subcommand("select")->description("Choose and certify a leader set");
  CLI::App* sim = app.get_subcommand("simulate");
  sim->description("Propagate the certified closed loop");
  sim->add_option("--report", args.report,
                  "Existing report.json (default: run selection)")
      ->check(CLI::ExistingFile);
  sim->add_flag("--followers-only", args.followers_only,
                "Omit leader columns from trajectory.csv");
  app.get_subcommand("compare")
      ->description("Greedy, f_max-greedy and random traces");
  app.get_subcommand("sweep-dwell")
      ->description("Leader count against dwell-time increments");
  app.get_subcommand("modes-table")
      ->description("Leader sets as topologies are forced stable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), args);
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const DegenerateInstance& e) {
    std::cerr << "degenerate instance: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid report: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
