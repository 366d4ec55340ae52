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

#include "leadersel/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "leadersel/errors.hpp"
#include "leadersel/graph.hpp"
#include "leadersel/parallel.hpp"
#include "leadersel/rng.hpp"

namespace leadersel {

namespace {

std::vector<int> with(std::vector<int> S, int v) {
  S.push_back(v);
  return S;
}

bool contains(const std::vector<int>& S, int v) {
  return std::find(S.begin(), S.end(), v) != S.end();
}

SwitchedModel with_params(const SwitchedModel& model,
                          const CertificateParams& params) {
  SwitchedModel m = model;
  m.params = params;
  m.leaders.clear();
  m.gains.clear();
  m.validate();
  return m;
}

// Fills the optimality fields once the leader set is final.
void attach_optimality(SelectionReport& rep, const SwitchedModel& model,
                       const MetricContext& ctx, int n_initial, int k) {
  rep.f_empty = ctx.f({});
  rep.f_initial = rep.f_trace.empty() ? rep.f_empty : rep.f_trace.front();
  try {
    if (auto gd = gamma_delta_bound(
            model, 2 * static_cast<int>(rep.leaders.size()))) {
      rep.gamma_delta = gd->value;
      rep.gamma_delta_sparse = gd->sparse;
    }
  } catch (const CapabilityError&) {
    rep.gamma_delta.reset();
  }
  if (!rep.gamma_delta || rep.f_trace.size() < 2) return;
  const double f_pen = rep.f_trace[rep.f_trace.size() - 2];
  const int k_min = n_initial > 0 ? n_initial : 1;
  try {
    const Optimality o =
        optimality_certificate(rep.f_empty, f_pen, *rep.gamma_delta, k_min, k);
    rep.gamma_0 = o.gamma_0;
    rep.bound_holds = o.bound_holds;
  } catch (const InputError&) {
    rep.gamma_0.reset();
  }
}

bool beta_rerun_requested(const Certificate& cert) {
  return cert.failed_condition == "beta" && cert.beta && cert.beta->rerun;
}

}  // namespace

const char* to_string(SelectStatus s) {
  switch (s) {
    case SelectStatus::kCertified:
      return "certified";
    case SelectStatus::kUncertifiedBudget:
      return "uncertified_budget";
    case SelectStatus::kNoneForTddt:
      return "none_for_tddt";
  }
  return "none_for_tddt";
}

std::map<int, double> marginal_gains(const MetricContext& ctx, int n_agents,
                                     const std::vector<int>& S) {
  std::vector<int> cand;
  for (int v = 1; v <= n_agents; ++v) {
    if (!contains(S, v)) cand.push_back(v);
  }
  const double base = ctx.f(S);
  std::vector<double> gain(cand.size());
  parallel_for(cand.size(),
               [&](std::size_t i) { gain[i] = base - ctx.f(with(S, cand[i])); });
  std::map<int, double> out;
  for (size_t i = 0; i < cand.size(); ++i) out[cand[i]] = gain[i];
  return out;
}

GreedyRun greedy_f(const MetricContext& ctx, int n_agents,
                   const std::vector<int>& initial) {
  GreedyRun run;
  run.leaders = initial;
  double f = ctx.f(run.leaders);
  run.f_trace.push_back(f);
  while (f > kFZero && static_cast<int>(run.leaders.size()) < n_agents) {
    const auto gains = marginal_gains(ctx, n_agents, run.leaders);
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (const auto& [v, g] : gains) {
      if (g > best_gain) {
        best = v;
        best_gain = g;
      }
    }
    run.leaders.push_back(best);
    f = ctx.f(run.leaders);
    run.f_trace.push_back(f);
  }
  return run;
}

std::vector<CertificateParams> default_proposals(const CertificateParams& params,
                                             int z_max) {
  std::vector<CertificateParams> out;
  for (int z = 0; z < std::max(1, z_max); ++z) {
    CertificateParams q = params;
    const double scale = std::pow(1.2, z);
    for (double& e : q.eta) e *= scale;
    out.push_back(std::move(q));
  }
  return out;
}

void check_selection_premise(const SwitchedModel& model) {
  const MetricContext ctx(model);
  if (ctx.max_rightmost() < 0.0) {
    throw DegenerateInstance(
        "every shifted open-loop mode is already Hurwitz; the metric is zero "
        "without leaders, so there is nothing for the selection to capture");
  }
}

SelectionReport algorithm1(const SwitchedModel& model, int k, int z_max,
                           const std::vector<CertificateParams>& proposals) {
  if (proposals.empty()) throw InputError("empty parameter proposal sequence");
  if (k < 1) throw InputError("budget k must be positive");
  const int N = model.n_agents();
  const std::vector<int> S0 = initial_leader_set(model.topologies);
  check_selection_premise(with_params(model, proposals.front()));

  SelectionReport rep;
  rep.algorithm = "algorithm1";
  rep.k_used = k;
  rep.beta_history.push_back(proposals.front().beta_setting);
  const int tries = std::min<int>(z_max, static_cast<int>(proposals.size()));
  for (int z = 0; z < std::max(1, tries); ++z) {
    const SwitchedModel m = with_params(model, proposals[z]);
    const MetricContext ctx(m);
    GreedyRun run = greedy_f(ctx, N, S0);
    rep.leaders = run.leaders;
    rep.f_trace = run.f_trace;
    rep.params_used = proposals[z];
    rep.retries = z;
    if (static_cast<int>(run.leaders.size()) <= k) {
      rep.certificate = full_certificate(m, run.leaders, proposals[z]);
      rep.params_used = rep.certificate->params;
      if (rep.certificate->pass) {
        rep.status = SelectStatus::kCertified;
        attach_optimality(rep, m, ctx, static_cast<int>(S0.size()), k);
        return rep;
      }
      if (beta_rerun_requested(*rep.certificate)) {
        rep.beta_rerun_setting = rep.certificate->beta->final_setting;
        rep.status = SelectStatus::kNoneForTddt;
        attach_optimality(rep, m, ctx, static_cast<int>(S0.size()), k);
        return rep;
      }
    }
    if (z + 1 == std::max(1, tries)) {
      attach_optimality(rep, m, ctx, static_cast<int>(S0.size()), k);
    }
  }
  rep.status = SelectStatus::kNoneForTddt;
  return rep;
}

SelectionReport algorithm2(const SwitchedModel& model, int k, int z_max,
                           const std::vector<CertificateParams>& proposals) {
  if (proposals.empty()) throw InputError("empty parameter proposal sequence");
  if (k < 1) throw InputError("budget k must be positive");
  const int N = model.n_agents();
  const std::vector<int> S0 = initial_leader_set(model.topologies);
  const SwitchedModel base = with_params(model, proposals.front());
  check_selection_premise(base);
  const MetricContext ctx(base);

  SelectionReport rep;
  rep.algorithm = "algorithm2";
  rep.k_used = k;
  rep.beta_history.push_back(proposals.front().beta_setting);
  rep.leaders = S0;
  rep.params_used = proposals.front();
  double f = ctx.f(rep.leaders);
  rep.f_trace.push_back(f);
  const int tries = std::max(
      1, std::min<int>(z_max, static_cast<int>(proposals.size())));
  while (static_cast<int>(rep.leaders.size()) <= k) {
    for (int z = 0; z < tries; ++z) {
      const SwitchedModel m = with_params(model, proposals[z]);
      Certificate cert = full_certificate(m, rep.leaders, proposals[z]);
      rep.retries = z;
      const bool pass = cert.pass;
      const bool rerun = beta_rerun_requested(cert);
      if (pass || rerun || !rep.certificate ||
          rep.certificate->failed_condition == "gain_synthesis") {
        rep.certificate = std::move(cert);
      }
      if (pass) {
        rep.params_used = rep.certificate->params;
        rep.status = SelectStatus::kCertified;
        rep.xi = static_cast<int>(rep.leaders.size() - S0.size()) + 1;
        attach_optimality(rep, m, MetricContext(m),
                          static_cast<int>(S0.size()), k);
        return rep;
      }
      if (rerun) {
        rep.beta_rerun_setting = rep.certificate->beta->final_setting;
        rep.status = SelectStatus::kNoneForTddt;
        attach_optimality(rep, base, ctx, static_cast<int>(S0.size()), k);
        return rep;
      }
    }
    if (f <= kFZero || static_cast<int>(rep.leaders.size()) == N) {
      rep.status = SelectStatus::kNoneForTddt;
      attach_optimality(rep, base, ctx, static_cast<int>(S0.size()), k);
      return rep;
    }
    const auto gains = marginal_gains(ctx, N, rep.leaders);
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (const auto& [v, g] : gains) {
      if (g > best_gain) {
        best = v;
        best_gain = g;
      }
    }
    rep.leaders.push_back(best);
    f = ctx.f(rep.leaders);
    rep.f_trace.push_back(f);
  }
  rep.status = SelectStatus::kUncertifiedBudget;
  attach_optimality(rep, base, ctx, static_cast<int>(S0.size()), k);
  return rep;
}

SelectionReport select_with_beta_loop(const SwitchedModel& model, int algorithm,
                                      int k, int z_max,
                                      std::vector<CertificateParams> proposals) {
  if (proposals.empty()) throw InputError("empty parameter proposal sequence");
  std::vector<double> history;
  while (true) {
    history.push_back(proposals.front().beta_setting);
    SelectionReport rep = algorithm == 2
                              ? algorithm2(model, k, z_max, proposals)
                              : algorithm1(model, k, z_max, proposals);
    if (!rep.beta_rerun_setting) {
      rep.beta_history = history;
      return rep;
    }
    const double next = *rep.beta_rerun_setting;
    if (next >= proposals.front().beta_setting) {
      rep.beta_history = history;
      return rep;
    }
    for (auto& q : proposals) q.beta_setting = next;
  }
}

std::vector<double> random_select(const SwitchedModel& model, int k,
                                  int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("trials must be at least 1");
  const int N = model.n_agents();
  SwitchedModel m = model;
  m.leaders.clear();
  m.gains.clear();
  const MetricContext ctx(m);
  const std::vector<int> S0 = initial_leader_set(model.topologies);
  const int steps = std::max(0, std::min(k, N) - static_cast<int>(S0.size()));
  std::vector<std::vector<double>> traces(trials);
  const std::uint64_t base = substream_seed(seed, "random-select");
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    std::mt19937_64 rng(indexed_seed(base, t));
    std::vector<int> S = S0;
    std::vector<int> pool;
    for (int v = 1; v <= N; ++v) {
      if (!contains(S, v)) pool.push_back(v);
    }
    std::vector<double> tr{ctx.f(S)};
    while (tr.back() > kFZero && static_cast<int>(S.size()) < k &&
           !pool.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const std::size_t i = pick(rng);
      S.push_back(pool[i]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
      tr.push_back(ctx.f(S));
    }
    tr.resize(static_cast<std::size_t>(steps) + 1, tr.back());
    traces[t] = std::move(tr);
  });
  std::vector<double> mean(static_cast<std::size_t>(steps) + 1, 0.0);
  for (const auto& tr : traces) {
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += tr[i];
  }
  for (double& v : mean) v /= trials;
  return mean;
}

SelectionReport fmax_greedy(const SwitchedModel& model, int k,
                            const std::vector<double>& trial_kappas) {
  const int N = model.n_agents();
  if (static_cast<int>(trial_kappas.size()) != model.n_modes()) {
    throw InputError("need one trial gain per topology");
  }
  SelectionReport rep;
  rep.algorithm = "fmax_greedy";
  rep.k_used = k;
  rep.params_used = model.params;
  rep.leaders = initial_leader_set(model.topologies);
  const int n = model.agent_dim();
  std::vector<Eigen::MatrixXd> gains;
  for (double kappa : trial_kappas) {
    gains.push_back(kappa * Eigen::MatrixXd::Identity(n, n));
  }
  auto all_hurwitz = [&](const std::vector<int>& S) {
    SwitchedModel m = model;
    m.leaders = S;
    m.gains = gains;
    for (int p = 0; p < m.n_modes(); ++p) {
      const Eigen::MatrixXd A2 =
          shift_2(mode_matrix(m, p), p, m.params, m.tddt);
      if (rightmost_real(A2) >= 0.0) return false;
    }
    return true;
  };
  rep.f_trace.push_back(metric_fmax(model, rep.leaders, gains));
  while (!all_hurwitz(rep.leaders)) {
    if (static_cast<int>(rep.leaders.size()) >= std::min(k, N)) {
      rep.status = SelectStatus::kUncertifiedBudget;
      return rep;
    }
    std::vector<int> cand;
    for (int v = 1; v <= N; ++v) {
      if (!contains(rep.leaders, v)) cand.push_back(v);
    }
    std::vector<double> val(cand.size());
    parallel_for(cand.size(), [&](std::size_t i) {
      val[i] = metric_fmax(model, with(rep.leaders, cand[i]), gains);
    });
    const auto it = std::min_element(val.begin(), val.end());
    rep.leaders.push_back(cand[static_cast<size_t>(it - val.begin())]);
    rep.f_trace.push_back(*it);
  }
  rep.status = SelectStatus::kCertified;
  return rep;
}

Optimality optimality_certificate(double f_empty, double f_penultimate,
                                  double gamma_delta, int k_min, int k) {
  if (!(f_empty > f_penultimate && f_penultimate > 0.0)) {
    throw InputError("optimality ratio needs f(empty) > f(penultimate) > 0");
  }
  if (!(gamma_delta > 0.0)) {
    throw InputError("optimality ratio needs a positive gamma_delta");
  }
  if (k_min < 1 || k < 1) throw InputError("set sizes must be positive");
  Optimality o;
  o.gamma_0 = std::log(f_empty / f_penultimate) / gamma_delta;
  o.bound_holds =
      std::exp(-(static_cast<double>(k_min) / k) * gamma_delta) * f_empty >=
      f_penultimate - 1e-12;
  return o;
}

std::optional<GammaDelta> gamma_delta_bound(const SwitchedModel& model,
                                            int s) {
  std::optional<double> sparse_min;
  double global_min = std::numeric_limits<double>::infinity();
  bool all_sparse = true;
  for (int p = 0; p < model.n_modes(); ++p) {
    const SubmodBounds b = submod_ratio_lower_bounds(model, p, s);
    global_min = std::min(global_min, b.lambda_min_global);
    if (b.lambda_min_sparse) {
      sparse_min = std::min(sparse_min.value_or(*b.lambda_min_sparse),
                            *b.lambda_min_sparse);
    } else {
      all_sparse = false;
    }
  }
  if (!std::isfinite(global_min)) return std::nullopt;
  if (all_sparse && sparse_min) return GammaDelta{*sparse_min, true};
  return GammaDelta{global_min, false};
}

std::optional<std::vector<int>> optimal_leader_set(
    const MetricContext& ctx, int n_agents, const std::vector<int>& initial) {
  if (n_agents > 20) {
    throw CapabilityError("exhaustive leader search needs N <= 20");
  }
  std::vector<int> rest;
  for (int v = 1; v <= n_agents; ++v) {
    if (!contains(initial, v)) rest.push_back(v);
  }
  const int r = static_cast<int>(rest.size());
  for (int size = 0; size <= r; ++size) {
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<int> S = initial;
      for (int i : pick) S.push_back(rest[i]);
      if (ctx.f(S) <= kFZero) return S;
      int i = size - 1;
      while (i >= 0 && pick[i] == r - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace leadersel
