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

#include "leadersel/sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "leadersel/errors.hpp"

namespace leadersel {

int SwitchedModel::n_agents() const {
  return topologies.empty() ? 0 : topologies.front().n_agents();
}

void SwitchedModel::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) {
    throw InputError("agent matrix A must be square and nonempty");
  }
  if (!A.allFinite()) throw InputError("agent matrix A has non-finite entries");
  if (topologies.empty()) throw InputError("at least one topology is required");
  const int m = n_modes();
  const int N = n_agents();
  for (int p = 0; p < m; ++p) {
    if (topologies[p].n_agents() != N) {
      throw InputError("topology " + std::to_string(p + 1) +
                       " has a different agent count");
    }
  }
  if (static_cast<int>(tddt.tau_min.size()) != m ||
      static_cast<int>(tddt.tau_max.size()) != m) {
    throw InputError("need one dwell window per topology");
  }
  for (int p = 0; p < m; ++p) {
    if (!(tddt.tau_min[p] > 0.0) || !(tddt.tau_min[p] <= tddt.tau_max[p])) {
      throw InputError("dwell window of topology " + std::to_string(p + 1) +
                       " must satisfy 0 < tau_min <= tau_max");
    }
  }
  if (static_cast<int>(params.l.size()) != m ||
      static_cast<int>(params.mu.size()) != m ||
      static_cast<int>(params.eta.size()) != m) {
    throw InputError("need l, mu and eta for every topology");
  }
  for (int p = 0; p < m; ++p) {
    if (params.l[p] < 1) throw InputError("l must be a positive integer");
    if (!(params.mu[p] > 0.0)) throw InputError("mu must be positive");
    if (!std::isfinite(params.eta[p]) || params.eta[p] == 0.0) {
      throw InputError("eta must be finite and nonzero");
    }
  }
  if (params.phi < 0.0) throw InputError("phi must be positive");
  if (!(params.beta_setting > 0.0 && params.beta_setting <= 1.0)) {
    throw InputError("beta_setting must lie in (0, 1]");
  }
  std::vector<int> s = leaders;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw InputError("leader set has duplicates");
  }
  for (int i : s) {
    if (i < 1 || i > N) throw InputError("leader index out of range");
  }
  if (!gains.empty()) {
    if (static_cast<int>(gains.size()) != m) {
      throw InputError("need one gain matrix per topology");
    }
    for (const auto& K : gains) {
      if (K.rows() != A.rows() || K.cols() != A.cols()) {
        throw InputError("gain matrices must match the agent dimension");
      }
    }
  }
}

double SwitchedModel::phi() const {
  if (params.phi > 0.0) return params.phi;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < n_modes(); ++p) {
    best = std::min(best, params.l[p] / tddt.tau_min[p]);
  }
  return 1e-3 * best;
}

Eigen::MatrixXd leader_matrix(int n_agents, const std::vector<int>& leaders) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n_agents, n_agents);
  for (int i : leaders) {
    if (i < 1 || i > n_agents) throw InputError("leader index out of range");
    D(i - 1, i - 1) = 1.0;
  }
  return D;
}

Eigen::MatrixXd open_loop(const SwitchedModel& model, int p) {
  const int N = model.n_agents();
  const int n = model.agent_dim();
  const Eigen::MatrixXd L = laplacian(model.topologies.at(p));
  Eigen::MatrixXd M(N * n, N * n);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      M.block(i * n, j * n, n, n) =
          -L(i, j) * Eigen::MatrixXd::Identity(n, n);
    }
    M.block(i * n, i * n, n, n) += model.A;
  }
  return M;
}

Eigen::MatrixXd mode_matrix(const SwitchedModel& model, int p) {
  if (static_cast<int>(model.gains.size()) <= p) {
    throw InputError("mode matrix needs a gain for topology " +
                     std::to_string(p + 1));
  }
  const int n = model.agent_dim();
  Eigen::MatrixXd M = open_loop(model, p);
  for (int i : model.leaders) {
    M.block((i - 1) * n, (i - 1) * n, n, n) -= model.gains[p];
  }
  return M;
}

double shift_1_amount(int p, const CertificateParams& params,
                      const DwellWindows& tddt) {
  return 0.5 * (params.l.at(p) / tddt.tau_min.at(p) + params.eta.at(p));
}

double shift_2_amount(int p, const CertificateParams& params,
                      const DwellWindows& tddt) {
  return 0.5 * (params.l.at(p) / tddt.tau_min.at(p) - params.eta.at(p));
}

Eigen::MatrixXd shifted_open_loop(const SwitchedModel& model, int p) {
  Eigen::MatrixXd M = open_loop(model, p);
  M.diagonal().array() += shift_2_amount(p, model.params, model.tddt);
  return M;
}

Eigen::MatrixXd shift_1(const Eigen::MatrixXd& mode, int p,
                        const CertificateParams& params, const DwellWindows& tddt) {
  Eigen::MatrixXd M = mode;
  M.diagonal().array() -= shift_1_amount(p, params, tddt);
  return M;
}

Eigen::MatrixXd shift_2(const Eigen::MatrixXd& mode, int p,
                        const CertificateParams& params, const DwellWindows& tddt) {
  Eigen::MatrixXd M = mode;
  M.diagonal().array() += shift_2_amount(p, params, tddt);
  return M;
}

}  // namespace leadersel
