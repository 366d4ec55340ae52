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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "leadersel/certify.hpp"
#include "leadersel/select.hpp"
#include "leadersel/simulate.hpp"
#include "leadersel/sysmodel.hpp"

namespace leadersel {

struct SimulateOptions {
  double horizon{30.0};
  double sample_dt{0.01};
  SwitchLaw law{SwitchLaw::kAperiodic};
  bool followers_only{false};
  bool include_state{false};
  int signals{1};
};

struct CompareOptions {
  int trials{100};
  std::vector<double> trial_gains;  // empty: 1.0 per topology
};

struct SweepOptions {
  std::vector<double> increments;  // empty: 0.0, 0.2, ..., 2.4
  double epsilon{1e-3};
};

struct ModesTableOptions {
  std::vector<double> stable_eta;  // empty: -|eta_p|
};

struct NetworkConfig {
  SwitchedModel model;
  int k{0};
  int z_max{10};
  std::uint64_t seed{0};
  int algorithm{1};
  std::vector<CertificateParams> proposals;  // empty: default_proposals
  SimulateOptions simulate;
  CompareOptions compare;
  SweepOptions sweep;
  ModesTableOptions modes_table;

  std::vector<CertificateParams> effective_proposals() const;
};

// Throws InputError with a "line L: ..." prefix locating the bad value.
NetworkConfig parse_config(const std::string& text);
NetworkConfig load_config(const std::string& path);

nlohmann::json params_to_json(const CertificateParams& p);
CertificateParams params_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SelectionReport& r);
SelectionReport report_from_json(const nlohmann::json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace leadersel
