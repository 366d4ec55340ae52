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

#include <string>

#include <gtest/gtest.h>

#include "leadersel/errors.hpp"
#include "leadersel/experiments.hpp"
#include "leadersel/io.hpp"

namespace leadersel {
namespace {

const char* kMinimal = R"({
  "agents": 3,
  "A": [[0.5]],
  "topologies": [[[1, 2], [2, 3]]],
  "tddt": [{"tau_min": 1.0, "tau_max": 2.0}],
  "params": {"l": [1], "mu": [0.5], "eta": [1.0], "phi": 0.1},
  "k": 2
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

std::string replaced(std::string s, const std::string& from,
                     const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

TEST(Config, MinimalDefaults) {
  const NetworkConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.model.n_agents(), 3);
  EXPECT_EQ(c.model.agent_dim(), 1);
  EXPECT_EQ(c.k, 2);
  EXPECT_EQ(c.z_max, 10);
  EXPECT_EQ(c.algorithm, 1);
  EXPECT_DOUBLE_EQ(c.model.params.beta_setting, 1.0);
  EXPECT_DOUBLE_EQ(c.simulate.horizon, 30.0);
  EXPECT_EQ(c.effective_proposals().size(), 10u);
}

TEST(Config, ErrorsCarryLineAndPointer) {
  EXPECT_EQ(error_of(replaced(kMinimal, "\"mu\": [0.5]", "\"mu\": [-0.5]")),
            "line 6: /params/mu/0: mu must be positive");
  EXPECT_EQ(error_of(replaced(kMinimal, "[2, 3]", "[2, 7]")).rfind("line 4: ", 0),
            0u);
  EXPECT_EQ(error_of(replaced(kMinimal, "\"tau_max\": 2.0", "\"tau_max\": 0.5")),
            "line 5: /tddt/0/tau_max: tau_max must be >= tau_min");
  EXPECT_NE(error_of(replaced(kMinimal, "\"k\": 2", "\"k\": \"two\"")).find("/k"),
            std::string::npos);
  EXPECT_NE(error_of(replaced(kMinimal, "\"tddt\"", "\"dwell\"")).find("missing"),
            std::string::npos);
  EXPECT_NE(error_of("{\"agents\": 3,,}").find("line 1"), std::string::npos);
  EXPECT_NE(error_of(replaced(kMinimal, "[[0.5]]", "[[0.5, 1.0]]")).find("/A"),
            std::string::npos);
  EXPECT_NE(error_of(replaced(kMinimal, "[1, 2]", "[2, 2]")).find("self-loop"),
            std::string::npos);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"six_agent.json", "six_agent_sparse.json",
                           "sweep_reference.json"}) {
    EXPECT_NO_THROW(load_config(std::string(LEADERSEL_CONFIG_DIR) + "/" + name))
        << name;
  }
  EXPECT_THROW(load_config("/nonexistent/leadersel.json"), InputError);
}

TEST(Json, ParamsRoundTrip) {
  CertificateParams p;
  p.l = {1, 3};
  p.mu = {0.1, 2.5};
  p.eta = {-0.7, 1.25};
  p.phi = 0.3;
  p.beta_setting = 0.45;
  const auto j = params_to_json(p);
  EXPECT_EQ(params_to_json(params_from_json(j)), j);
}

TEST(Json, ReportRoundTripIsFixpoint) {
  const NetworkConfig cfg =
      load_config(std::string(LEADERSEL_CONFIG_DIR) + "/six_agent.json");
  const SelectionReport rep = run_selection(cfg, 1);
  const auto j = report_to_json(rep);
  const SelectionReport back = report_from_json(j);
  EXPECT_EQ(report_to_json(back), j);
  EXPECT_EQ(back.leaders, rep.leaders);
  ASSERT_TRUE(back.certificate);
  EXPECT_EQ(back.certificate->pass, rep.certificate->pass);
  // The reloaded report still drives the closed-loop model.
  EXPECT_NO_THROW(certified_model(cfg, back));
  const auto cj = certificate_to_json(*rep.certificate);
  EXPECT_EQ(certificate_to_json(certificate_from_json(cj)), cj);
}

}  // namespace
}  // namespace leadersel
