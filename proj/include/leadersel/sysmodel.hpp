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

#include <vector>

#include <Eigen/Dense>

#include "leadersel/graph.hpp"

namespace leadersel {

// Per-topology scalars of the dwell-time certificate. A topology is treated
// as an unstable mode when eta > 0 and as a stable mode when eta < 0.
struct CertificateParams {
  std::vector<int> l;        // Lyapunov discretization count
  std::vector<double> mu;    // jump factor at switches
  std::vector<double> eta;   // growth (> 0) or decay (< 0) rate, 1/s
  double phi{0.0};           // small positive slack; <= 0 means "use default"
  double beta_setting{1.0};  // assumed normality factor in (0, 1]
};

struct DwellWindows {
  std::vector<double> tau_min;
  std::vector<double> tau_max;
};

// Agent dynamics, topologies, dwell windows and certificate parameters.
// Leaders are 1-based agent indices; gains, when present, hold one n x n
// matrix per topology. Topology indices are 0-based throughout the API.
struct SwitchedModel {
  Eigen::MatrixXd A;
  std::vector<Digraph> topologies;
  DwellWindows tddt;
  CertificateParams params;
  std::vector<int> leaders;
  std::vector<Eigen::MatrixXd> gains;

  int n_agents() const;
  int agent_dim() const { return static_cast<int>(A.rows()); }
  int n_modes() const { return static_cast<int>(topologies.size()); }
  int dim() const { return n_agents() * agent_dim(); }

  // Throws InputError describing the first violated invariant.
  void validate() const;
  // The phi actually used: params.phi when positive, else
  // 1e-3 * min_p(l_p / tau_min_p).
  double phi() const;
};

// D = diag(d_1..d_N) with d_i = 1 iff i is in the leader set.
Eigen::MatrixXd leader_matrix(int n_agents, const std::vector<int>& leaders);

// I_N (x) A - L_p (x) I_n.
Eigen::MatrixXd open_loop(const SwitchedModel& model, int p);

// I_N (x) A - L_p (x) I_n - D (x) K_p with the model's leaders and gains.
Eigen::MatrixXd mode_matrix(const SwitchedModel& model, int p);

// Open loop shifted by (l_p / tau_min_p - eta_p) / 2.
Eigen::MatrixXd shifted_open_loop(const SwitchedModel& model, int p);

// mode - (l_p / tau_min_p + eta_p) / 2 * I.
Eigen::MatrixXd shift_1(const Eigen::MatrixXd& mode, int p,
                        const CertificateParams& params, const DwellWindows& tddt);

// mode + (l_p / tau_min_p - eta_p) / 2 * I.
Eigen::MatrixXd shift_2(const Eigen::MatrixXd& mode, int p,
                        const CertificateParams& params, const DwellWindows& tddt);

// Scalar offsets used by shift_1 and shift_2 (shift_1 subtracts the first,
// shift_2 adds the second).
double shift_1_amount(int p, const CertificateParams& params, const DwellWindows& tddt);
double shift_2_amount(int p, const CertificateParams& params, const DwellWindows& tddt);

}  // namespace leadersel
