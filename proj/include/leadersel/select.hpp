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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leadersel/certify.hpp"
#include "leadersel/spectral.hpp"
#include "leadersel/sysmodel.hpp"

namespace leadersel {

// Loop guard for "f > 0".
inline constexpr double kFZero = 1e-8;

enum class SelectStatus { kCertified, kUncertifiedBudget, kNoneForTddt };
const char* to_string(SelectStatus s);

struct GammaDelta {
  double value{0.0};
  bool sparse{false};  // false: whole-matrix fallback
};

struct SelectionReport {
  std::vector<int> leaders;     // initial set first, then selection order
  std::vector<double> f_trace;  // starts at f(S_0)
  std::optional<double> gamma_delta;
  bool gamma_delta_sparse{false};
  std::optional<double> gamma_0;
  std::optional<bool> bound_holds;
  int k_used{0};
  CertificateParams params_used;
  SelectStatus status{SelectStatus::kNoneForTddt};

  std::string algorithm;  // "algorithm1", "algorithm2", "fmax_greedy"
  int retries{0};         // proposals tried before the outcome
  std::optional<int> xi;  // algorithm2 only
  double f_empty{0.0};
  double f_initial{0.0};
  std::optional<Certificate> certificate;
  std::vector<double> beta_history;
  // Set when a certificate failed on beta and a lower setting should be
  // tried by re-running the selection.
  std::optional<double> beta_rerun_setting;
};

// f(S) - f(S + {v}) for every v outside S, evaluated concurrently.
std::map<int, double> marginal_gains(const MetricContext& ctx, int n_agents,
                                     const std::vector<int>& S);

struct GreedyRun {
  std::vector<int> leaders;
  std::vector<double> f_trace;
};

// Adds the agent of largest marginal gain (lowest index on ties) until
// f <= kFZero or every agent is a leader.
GreedyRun greedy_f(const MetricContext& ctx, int n_agents,
                   const std::vector<int>& initial);

// Proposal z scales every eta by 1.2^z; proposal 0 is params itself.
std::vector<CertificateParams> default_proposals(const CertificateParams& params,
                                             int z_max);

// Throws DegenerateInstance when every shifted open loop is Hurwitz.
void check_selection_premise(const SwitchedModel& model);

SelectionReport algorithm1(const SwitchedModel& model, int k, int z_max,
                           const std::vector<CertificateParams>& proposals);

SelectionReport algorithm2(const SwitchedModel& model, int k, int z_max,
                           const std::vector<CertificateParams>& proposals);

// Runs algorithm1 or algorithm2 and, when a certificate rejects the normality
// factor, lowers beta_setting and repeats.
SelectionReport select_with_beta_loop(const SwitchedModel& model, int algorithm,
                                      int k, int z_max,
                                      std::vector<CertificateParams> proposals);

// Mean f after each random addition, padded with each trial's final value
// to k - |S_0| additions.
std::vector<double> random_select(const SwitchedModel& model, int k,
                                  int trials, std::uint64_t seed);

// Greedy on decrements of metric_fmax with fixed scalar gains per topology.
SelectionReport fmax_greedy(const SwitchedModel& model, int k,
                            const std::vector<double>& trial_kappas);

struct Optimality {
  double gamma_0{0.0};
  bool bound_holds{false};
};

// Throws InputError unless f_empty > f_penultimate > 0 and gamma_delta > 0.
Optimality optimality_certificate(double f_empty, double f_penultimate,
                                  double gamma_delta, int k_min, int k);

// min over topologies of the normalized Gram bound on sets of size s;
// absent when the Gram matrix is too large to form.
std::optional<GammaDelta> gamma_delta_bound(const SwitchedModel& model, int s);

// Smallest superset of the initial set with f <= kFZero, by exhaustive
// search in order of size then lexicographic order. N <= 20.
std::optional<std::vector<int>> optimal_leader_set(const MetricContext& ctx,
                                                   int n_agents,
                                                   const std::vector<int>& initial);

}  // namespace leadersel
