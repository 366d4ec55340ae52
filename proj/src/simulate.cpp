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

#include "leadersel/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "leadersel/errors.hpp"

namespace leadersel {

int SwitchingSignal::topology_at(double t) const {
  double start = 0.0;
  for (const auto& s : segments) {
    if (t < start + s.duration) return s.topology;
    start += s.duration;
  }
  return segments.empty() ? -1 : segments.back().topology;
}

SwitchingSignal gen_signal(const DwellWindows& windows, double horizon,
                           std::uint64_t seed, SwitchLaw law) {
  const int m = static_cast<int>(windows.tau_min.size());
  if (m == 0 || static_cast<int>(windows.tau_max.size()) != m) {
    throw InputError("signal generation needs one window per topology");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InputError("horizon must be positive and finite");
  }
  for (int p = 0; p < m; ++p) {
    const double lo = windows.tau_min[p];
    const double hi = windows.tau_max[p];
    if (!(lo > 0.0) || !std::isfinite(hi) || hi < lo) {
      throw InputError("dwell window of topology " + std::to_string(p + 1) +
                       " is empty or unbounded");
    }
  }
  SwitchingSignal sig;
  sig.total_horizon = horizon;
  if (m == 1) {
    sig.segments.push_back({0, horizon});
    return sig;
  }
  std::mt19937_64 rng(seed);
  int p = 0;
  if (law == SwitchLaw::kAperiodic) {
    p = std::uniform_int_distribution<int>(0, m - 1)(rng);
  }
  double t = 0.0;
  while (t < horizon) {
    const double lo = windows.tau_min[p];
    const double hi = windows.tau_max[p];
    double d = 0.5 * (lo + hi);
    if (law == SwitchLaw::kAperiodic && hi > lo) {
      d = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    d = std::min(d, horizon - t);
    sig.segments.push_back({p, d});
    t += d;
    if (law == SwitchLaw::kCyclic) {
      p = (p + 1) % m;
    } else {
      const int k = std::uniform_int_distribution<int>(0, m - 2)(rng);
      p = k >= p ? k + 1 : k;
    }
  }
  return sig;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& M, double t) {
  if (M.rows() != M.cols()) throw InputError("expm needs a square matrix");
  if (!M.allFinite() || !std::isfinite(t)) {
    throw InputError("expm input has non-finite entries");
  }
  const Eigen::MatrixXd X = M * t;
  Eigen::MatrixXd E = X.exp();
  if (!E.allFinite()) {
    std::ostringstream s;
    s << "expm overflow: ||M t||_1 = "
      << X.cwiseAbs().colwise().sum().maxCoeff();
    throw NumericalError(s.str());
  }
  return E;
}

Trajectory propagate(const SwitchedModel& model, const SwitchingSignal& signal,
                     const Eigen::VectorXd& eps0, double sample_dt) {
  if (eps0.size() != model.dim()) {
    throw InputError("initial state must have length N n");
  }
  if (!(sample_dt > 0.0)) throw InputError("sample_dt must be positive");
  if (signal.segments.empty()) throw InputError("empty switching signal");
  const int m = model.n_modes();
  std::vector<Eigen::MatrixXd> modes;
  for (int p = 0; p < m; ++p) modes.push_back(mode_matrix(model, p));
  std::vector<Eigen::MatrixXd> step_cache(m);
  auto advance = [&](int p, double dt, const Eigen::VectorXd& x) {
    if (std::abs(dt - sample_dt) <= 1e-15 * sample_dt) {
      if (step_cache[p].size() == 0) step_cache[p] = expm(modes[p], sample_dt);
      return Eigen::VectorXd(step_cache[p] * x);
    }
    return Eigen::VectorXd(expm(modes[p], dt) * x);
  };

  std::vector<double> seg_end;
  double acc = 0.0;
  for (const auto& s : signal.segments) {
    if (s.topology < 0 || s.topology >= m) {
      throw InputError("signal refers to an unknown topology");
    }
    acc += s.duration;
    seg_end.push_back(acc);
  }
  const double horizon = signal.total_horizon;
  seg_end.back() = std::max(seg_end.back(), horizon);

  Trajectory tr;
  tr.n_agents = model.n_agents();
  tr.agent_dim = model.agent_dim();
  const auto steps = static_cast<long>(std::floor(horizon / sample_dt + 1e-9));
  std::vector<double> grid;
  for (long k = 0; k <= steps; ++k) grid.push_back(k * sample_dt);
  if (horizon - grid.back() > 1e-12) grid.push_back(horizon);

  Eigen::VectorXd x = eps0;
  double now = 0.0;
  size_t seg = 0;
  for (double ts : grid) {
    while (now < ts) {
      while (seg + 1 < seg_end.size() && seg_end[seg] <= now) ++seg;
      const double stop = std::min(ts, seg_end[seg]);
      x = advance(signal.segments[seg].topology, stop - now, x);
      now = stop;
    }
    tr.times.push_back(ts);
    tr.states.push_back(x);
    tr.topology.push_back(signal.topology_at(ts));
  }
  return tr;
}

std::vector<std::vector<double>> error_norms(const Trajectory& traj) {
  std::vector<std::vector<double>> out;
  out.reserve(traj.states.size());
  for (const auto& x : traj.states) {
    std::vector<double> row(traj.n_agents);
    for (int i = 0; i < traj.n_agents; ++i) {
      row[i] = x.segment(i * traj.agent_dim, traj.agent_dim).norm();
    }
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::VectorXd random_initial_state(int dim, std::uint64_t seed,
                                     double bound) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-bound, bound);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) {
    double v = u(rng);
    while (v == -bound) v = u(rng);
    x(i) = v;
  }
  return x;
}

}  // namespace leadersel
