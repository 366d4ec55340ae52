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
#include <vector>

#include <Eigen/Dense>

#include "leadersel/sysmodel.hpp"

namespace leadersel {

enum class SwitchLaw { kAperiodic, kCyclic };

struct Segment {
  int topology{0};
  double duration{0.0};
};

// Every segment but the last lies inside its dwell window; the last one is
// cut at the horizon. Consecutive topologies differ.
struct SwitchingSignal {
  std::vector<Segment> segments;
  double total_horizon{0.0};

  // Active topology at time t (segments are closed on the left).
  int topology_at(double t) const;
};

// Windows are [tau_min, tau_max] per topology and must be finite and
// nonempty. A single topology yields one segment covering the horizon.
SwitchingSignal gen_signal(const DwellWindows& windows, double horizon,
                           std::uint64_t seed, SwitchLaw law);

// exp(M t). Throws NumericalError when the result overflows.
Eigen::MatrixXd expm(const Eigen::MatrixXd& M, double t);

struct Trajectory {
  int n_agents{0};
  int agent_dim{0};
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<int> topology;  // active topology at each sample
};

// Exact piecewise propagation of the closed-loop error dynamics with the
// model's leaders and gains, sampled every sample_dt and at the horizon.
Trajectory propagate(const SwitchedModel& model, const SwitchingSignal& signal,
                     const Eigen::VectorXd& eps0, double sample_dt);

// norms[k][i]: Euclidean norm of agent i+1's block at sample k.
std::vector<std::vector<double>> error_norms(const Trajectory& traj);

// Uniform draw in (-bound, bound) for every entry.
Eigen::VectorXd random_initial_state(int dim, std::uint64_t seed,
                                     double bound = 100.0);

}  // namespace leadersel
