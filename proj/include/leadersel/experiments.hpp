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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leadersel/io.hpp"
#include "leadersel/select.hpp"
#include "leadersel/simulate.hpp"

namespace leadersel {

// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUncertified = 2;
inline constexpr int kExitInvalidInput = 3;

// algorithm1 or algorithm2 with the beta re-run loop on the configured instance.
SelectionReport run_selection(const NetworkConfig& cfg, int algorithm);

// Closed-loop model (leaders and certified gains) described by a report.
// Throws InputError when the report carries no passing certificate.
SwitchedModel certified_model(const NetworkConfig& cfg,
                              const SelectionReport& report);

// Switching windows inside both the requested and the certified windows.
DwellWindows simulation_windows(const NetworkConfig& cfg,
                            const SelectionReport& report);

// Signal and initial state drawn from the "signal" and "initial-state"
// substreams of the config seed; index selects the member of each family.
Trajectory simulate_report(const NetworkConfig& cfg,
                           const SelectionReport& report,
                           std::uint64_t signal_index,
                           std::uint64_t state_index);

struct CompareRow {
  int size{0};
  double greedy{0.0};
  double fmax_greedy{0.0};
  double fmax_value{0.0};
  double random_mean{0.0};
};

// f after each addition for the greedy, f_max-greedy and random methods,
// aligned by leader count from |S_0| to N.
std::vector<CompareRow> compare_methods(const NetworkConfig& cfg);

struct SweepRow {
  double increment{0.0};
  std::vector<int> leaders;
  SelectStatus status{SelectStatus::kNoneForTddt};
  SelectionReport report;
};

// Extends every tau_max by each increment, retunes positive rates so that
// log(mu) + eta tau_max = -epsilon, and reruns algorithm1. When that does
// not certify, leaders are added until a certificate passes.
std::vector<SweepRow> sweep_dwell(const NetworkConfig& cfg);

struct ModesRow {
  int stable_modes{0};
  SelectionReport report;
};

// Forces the first c topologies onto negative rates for c = 0..m and
// reruns algorithm1.
std::vector<ModesRow> modes_table(const NetworkConfig& cfg);

int cmd_select(const NetworkConfig& cfg, const std::string& out_dir,
               int algorithm, std::ostream& log);
int cmd_simulate(const NetworkConfig& cfg, const std::string& out_dir,
                 const std::optional<std::string>& report_path,
                 std::ostream& log);
int cmd_compare(const NetworkConfig& cfg, const std::string& out_dir,
                std::ostream& log);
int cmd_sweep_dwell(const NetworkConfig& cfg, const std::string& out_dir,
                    std::ostream& log);
int cmd_modes_table(const NetworkConfig& cfg, const std::string& out_dir,
                    std::ostream& log);

std::string trajectory_csv(const Trajectory& traj,
                           const std::vector<int>& leaders,
                           bool followers_only, bool include_state);

}  // namespace leadersel
