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

#include "leadersel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "leadersel/errors.hpp"
#include "leadersel/graph.hpp"
#include "leadersel/rng.hpp"

namespace leadersel {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<int>& v, char sep = ' ') {
  std::ostringstream s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s << sep;
    s << v[i];
  }
  return s.str();
}

std::string fmt_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

void pad(std::vector<double>& v, size_t n) {
  if (v.empty()) return;
  v.resize(std::max(v.size(), n), v.back());
  v.resize(n);
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw InputError("cannot create output directory " + p.string());
  return p;
}

SelectionReport degenerate_report(const NetworkConfig& cfg) {
  SelectionReport rep;
  rep.algorithm = "algorithm1";
  rep.leaders = initial_leader_set(cfg.model.topologies);
  rep.k_used = cfg.k;
  rep.params_used = cfg.model.params;
  rep.status = SelectStatus::kNoneForTddt;
  return rep;
}

void print_summary(const SelectionReport& r, std::ostream& log) {
  log << "status: " << to_string(r.status) << '\n';
  log << "leaders: " << join(r.leaders) << '\n';
  log << "f trace:";
  for (double f : r.f_trace) log << ' ' << fmt_num(f);
  log << '\n';
  log << "gamma_delta: "
      << (r.gamma_delta ? fmt_num(*r.gamma_delta) : std::string("n/a"))
      << (r.gamma_delta && !r.gamma_delta_sparse ? " (whole-matrix bound)" : "")
      << '\n';
  log << "gamma_0: " << (r.gamma_0 ? fmt_num(*r.gamma_0) : std::string("n/a"))
      << '\n';
  if (r.xi) log << "xi: " << *r.xi << '\n';
  if (r.certificate) {
    for (size_t p = 0; p < r.certificate->modes.size(); ++p) {
      const ModeRecord& m = r.certificate->modes[p];
      log << "topology " << p + 1 << ": window [" << fmt_num(m.window.lower)
          << ", " << fmt_num(m.window.upper) << "], kappa "
          << fmt_num(m.gain.kappa) << '\n';
    }
    log << render_text(*r.certificate);
  }
}

// Adds agents past the point where f vanishes, weakest-damped follower first
// (smallest in-degree in any topology, ties to the lowest index), until a
// certificate passes or every agent leads.
SelectionReport grow_until_certified(const NetworkConfig& cfg,
                                     SelectionReport rep) {
  const SwitchedModel& model = cfg.model;
  const int N = model.n_agents();
  const auto proposals = cfg.effective_proposals();
  const int tries = std::max(
      1, std::min<int>(cfg.z_max, static_cast<int>(proposals.size())));
  std::vector<int> leaders = rep.leaders;
  while (static_cast<int>(leaders.size()) < N) {
    int pick = -1;
    int pick_deg = 0;
    for (int i = 1; i <= N; ++i) {
      if (std::find(leaders.begin(), leaders.end(), i) != leaders.end()) {
        continue;
      }
      int deg = N;
      for (const auto& g : model.topologies) deg = std::min(deg, g.in_degree(i));
      if (pick < 0 || deg < pick_deg) {
        pick = i;
        pick_deg = deg;
      }
    }
    leaders.push_back(pick);
    std::sort(leaders.begin(), leaders.end());
    for (int z = 0; z < tries; ++z) {
      SwitchedModel m = model;
      m.params = proposals[z];
      Certificate cert = full_certificate(m, leaders, proposals[z]);
      if (cert.pass) {
        rep.leaders = leaders;
        rep.params_used = cert.params;
        rep.certificate = std::move(cert);
        rep.retries = z;
        rep.status = SelectStatus::kCertified;
        return rep;
      }
    }
  }
  rep.leaders = leaders;
  rep.status = SelectStatus::kUncertifiedBudget;
  return rep;
}

}  // namespace

SelectionReport run_selection(const NetworkConfig& cfg, int algorithm) {
  return select_with_beta_loop(cfg.model, algorithm, cfg.k, cfg.z_max,
                               cfg.effective_proposals());
}

SwitchedModel certified_model(const NetworkConfig& cfg,
                              const SelectionReport& report) {
  if (report.status != SelectStatus::kCertified || !report.certificate ||
      !report.certificate->pass) {
    throw InputError("report does not carry a passing certificate");
  }
  SwitchedModel m = cfg.model;
  m.params = report.certificate->params;
  m.leaders = report.certificate->leaders;
  m.gains = report.certificate->gains();
  m.validate();
  return m;
}

DwellWindows simulation_windows(const NetworkConfig& cfg,
                            const SelectionReport& report) {
  DwellWindows w;
  const auto& modes = report.certificate->modes;
  for (int p = 0; p < cfg.model.n_modes(); ++p) {
    const double lo = std::max(cfg.model.tddt.tau_min[p], modes[p].window.lower);
    const double hi = std::min(cfg.model.tddt.tau_max[p], modes[p].window.upper);
    if (hi < lo) {
      throw InputError("certified window of topology " + std::to_string(p + 1) +
                       " misses the requested one");
    }
    w.tau_min.push_back(lo);
    w.tau_max.push_back(hi);
  }
  return w;
}

Trajectory simulate_report(const NetworkConfig& cfg,
                           const SelectionReport& report,
                           std::uint64_t signal_index,
                           std::uint64_t state_index) {
  const SwitchedModel m = certified_model(cfg, report);
  const SwitchingSignal sig = gen_signal(
      simulation_windows(cfg, report), cfg.simulate.horizon,
      indexed_seed(substream_seed(cfg.seed, "signal"), signal_index),
      cfg.simulate.law);
  const Eigen::VectorXd x0 = random_initial_state(
      m.dim(),
      indexed_seed(substream_seed(cfg.seed, "initial-state"), state_index));
  return propagate(m, sig, x0, cfg.simulate.sample_dt);
}

std::vector<CompareRow> compare_methods(const NetworkConfig& cfg) {
  SwitchedModel m = cfg.model;
  m.leaders.clear();
  m.gains.clear();
  const int N = m.n_agents();
  const std::vector<int> S0 = initial_leader_set(m.topologies);
  const size_t rows = static_cast<size_t>(N) - S0.size() + 1;
  const MetricContext ctx(m);

  std::vector<double> greedy = greedy_f(ctx, N, S0).f_trace;
  pad(greedy, rows);

  std::vector<double> kappas = cfg.compare.trial_gains;
  if (kappas.empty()) kappas.assign(m.n_modes(), 1.0);
  const SelectionReport fm = fmax_greedy(m, N, kappas);
  std::vector<double> fmax_f;
  for (size_t i = S0.size(); i <= fm.leaders.size(); ++i) {
    fmax_f.push_back(ctx.f(std::vector<int>(fm.leaders.begin(),
                                            fm.leaders.begin() +
                                                static_cast<std::ptrdiff_t>(i))));
  }
  std::vector<double> fmax_v = fm.f_trace;
  pad(fmax_f, rows);
  pad(fmax_v, rows);

  std::vector<double> random = random_select(m, N, cfg.compare.trials, cfg.seed);
  pad(random, rows);

  std::vector<CompareRow> out;
  for (size_t i = 0; i < rows; ++i) {
    out.push_back({static_cast<int>(S0.size() + i), greedy[i], fmax_f[i],
                   fmax_v[i], random[i]});
  }
  return out;
}

std::vector<SweepRow> sweep_dwell(const NetworkConfig& cfg) {
  std::vector<double> incs = cfg.sweep.increments;
  if (incs.empty()) {
    for (int i = 0; i <= 12; ++i) incs.push_back(0.2 * i);
  }
  const double eps = cfg.sweep.epsilon;
  std::vector<SweepRow> out;
  for (double d : incs) {
    NetworkConfig c = cfg;
    auto retune = [&](CertificateParams& q) {
      for (int p = 0; p < c.model.n_modes(); ++p) {
        if (q.eta[p] > 0.0 && q.mu[p] < 1.0) {
          q.eta[p] = (-std::log(q.mu[p]) - eps) / c.model.tddt.tau_max[p];
        }
      }
    };
    for (double& t : c.model.tddt.tau_max) t += d;
    retune(c.model.params);
    for (auto& q : c.proposals) retune(q);
    SweepRow row;
    row.increment = d;
    try {
      row.report = run_selection(c, 1);
      if (row.report.status != SelectStatus::kCertified) {
        // Greedy on f alone cannot demand more leaders than controllability
        // needs; grow the set until the certificate passes instead.
        row.report = grow_until_certified(c, row.report);
      }
    } catch (const DegenerateInstance&) {
      row.report = degenerate_report(c);
    }
    row.leaders = row.report.leaders;
    row.status = row.report.status;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ModesRow> modes_table(const NetworkConfig& cfg) {
  const int m = cfg.model.n_modes();
  std::vector<ModesRow> out;
  for (int c = 0; c <= m; ++c) {
    NetworkConfig nc = cfg;
    auto force = [&](CertificateParams& q) {
      for (int p = 0; p < c; ++p) {
        q.eta[p] = cfg.modes_table.stable_eta.empty()
                       ? -std::abs(q.eta[p])
                       : cfg.modes_table.stable_eta[p];
      }
    };
    force(nc.model.params);
    for (auto& q : nc.proposals) force(q);
    ModesRow row;
    row.stable_modes = c;
    try {
      row.report = run_selection(nc, 1);
    } catch (const DegenerateInstance&) {
      row.report = degenerate_report(nc);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj,
                           const std::vector<int>& leaders,
                           bool followers_only, bool include_state) {
  std::vector<int> agents;
  for (int i = 1; i <= traj.n_agents; ++i) {
    const bool leader =
        std::find(leaders.begin(), leaders.end(), i) != leaders.end();
    if (!(followers_only && leader)) agents.push_back(i);
  }
  const auto norms = error_norms(traj);
  std::ostringstream s;
  s << std::setprecision(12);
  s << "time,topology";
  for (int i : agents) s << ",agent_" << i << "_norm";
  if (include_state) {
    for (Eigen::Index j = 0; j < traj.n_agents * traj.agent_dim; ++j) {
      s << ",x_" << j + 1;
    }
  }
  s << '\n';
  for (size_t k = 0; k < traj.times.size(); ++k) {
    s << traj.times[k] << ',' << traj.topology[k] + 1;
    for (int i : agents) s << ',' << norms[k][i - 1];
    if (include_state) {
      for (Eigen::Index j = 0; j < traj.states[k].size(); ++j) {
        s << ',' << traj.states[k](j);
      }
    }
    s << '\n';
  }
  return s.str();
}

int cmd_select(const NetworkConfig& cfg, const std::string& out_dir,
               int algorithm, std::ostream& log) {
  const SelectionReport rep = run_selection(cfg, algorithm);
  const fs::path dir = ensure_dir(out_dir);
  write_file((dir / "report.json").string(), report_to_json(rep).dump(2) + "\n");
  print_summary(rep, log);
  return rep.status == SelectStatus::kCertified ? kExitOk : kExitUncertified;
}

int cmd_simulate(const NetworkConfig& cfg, const std::string& out_dir,
                 const std::optional<std::string>& report_path,
                 std::ostream& log) {
  const fs::path dir = ensure_dir(out_dir);
  SelectionReport rep;
  if (report_path) {
    rep = report_from_json(nlohmann::json::parse(read_file(*report_path)));
  } else {
    rep = run_selection(cfg, cfg.algorithm);
    write_file((dir / "report.json").string(),
               report_to_json(rep).dump(2) + "\n");
  }
  if (rep.status != SelectStatus::kCertified || !rep.certificate ||
      !rep.certificate->pass) {
    log << "report is not certified; nothing to simulate\n";
    return kExitUncertified;
  }
  for (int s = 0; s < cfg.simulate.signals; ++s) {
    const Trajectory traj = simulate_report(cfg, rep, s, s);
    const std::string name =
        s == 0 ? "trajectory.csv" : "trajectory_" + std::to_string(s) + ".csv";
    write_file((dir / name).string(),
               trajectory_csv(traj, rep.leaders, cfg.simulate.followers_only,
                              cfg.simulate.include_state));
    log << name << ": ||e(T)|| / ||e(0)|| = "
        << fmt_num(traj.states.back().norm() / traj.states.front().norm())
        << '\n';
  }
  return kExitOk;
}

int cmd_compare(const NetworkConfig& cfg, const std::string& out_dir,
                std::ostream& log) {
  const auto rows = compare_methods(cfg);
  std::ostringstream s;
  s << "leaders,greedy_f,fmax_greedy_f,fmax_value,random_f\n";
  for (const auto& r : rows) {
    s << r.size << ',' << fmt_num(r.greedy) << ',' << fmt_num(r.fmax_greedy)
      << ',' << fmt_num(r.fmax_value) << ',' << fmt_num(r.random_mean) << '\n';
  }
  const fs::path dir = ensure_dir(out_dir);
  write_file((dir / "compare.csv").string(), s.str());
  log << s.str();
  return kExitOk;
}

int cmd_sweep_dwell(const NetworkConfig& cfg, const std::string& out_dir,
                    std::ostream& log) {
  const auto rows = sweep_dwell(cfg);
  const fs::path dir = ensure_dir(out_dir);
  const fs::path archive = ensure_dir((dir / "sweep").string());
  std::ostringstream s;
  s << "increment,leader_count,status,leaders\n";
  size_t prev = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    s << fmt_num(r.increment) << ',' << r.leaders.size() << ','
      << to_string(r.status) << ',' << join(r.leaders) << '\n';
    if (i > 0 && r.leaders.size() < prev) {
      log << "warning: leader count drops at increment "
          << fmt_num(r.increment) << '\n';
    }
    prev = r.leaders.size();
    write_file((archive / ("report_" + std::to_string(i) + ".json")).string(),
               report_to_json(r.report).dump(2) + "\n");
  }
  write_file((dir / "sweep.csv").string(), s.str());
  log << s.str();
  return kExitOk;
}

int cmd_modes_table(const NetworkConfig& cfg, const std::string& out_dir,
                    std::ostream& log) {
  const auto rows = modes_table(cfg);
  const int m = cfg.model.n_modes();
  std::ostringstream s;
  s << "stable_modes,leader_count,status,leaders";
  for (int p = 1; p <= m; ++p) {
    s << ",tau_lower_" << p << ",tau_upper_" << p;
  }
  s << '\n';
  for (const auto& r : rows) {
    s << r.stable_modes << ',' << r.report.leaders.size() << ','
      << to_string(r.report.status) << ',' << join(r.report.leaders);
    for (int p = 0; p < m; ++p) {
      const bool have = r.report.certificate && r.report.certificate->pass;
      s << ','
        << (have ? fmt_num(r.report.certificate->modes[p].window.lower) : "")
        << ','
        << (have ? fmt_num(r.report.certificate->modes[p].window.upper) : "");
    }
    s << '\n';
  }
  const fs::path dir = ensure_dir(out_dir);
  write_file((dir / "modes_table.csv").string(), s.str());
  log << s.str();
  return kExitOk;
}

}  // namespace leadersel
