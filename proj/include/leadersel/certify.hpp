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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "leadersel/sysmodel.hpp"

namespace leadersel {

// Strict matrix inequalities pass when the symmetrized left-hand side has
// lambda_max <= -kStrictTol.
inline constexpr double kStrictTol = 1e-9;

enum class ModeClass { kStable, kUnstable };
const char* to_string(ModeClass c);

struct GainResult {
  Eigen::MatrixXd K;      // n x n, kappa * I when structured
  double kappa{0.0};
  bool structured{true};  // false: only the unstructured fallback worked
  // |S|n x Nn feedback on the leader inputs; set only by the fallback.
  Eigen::MatrixXd K_unstructured;
  double achieved{0.0};   // Re lambda_r of the shifted closed loop
};

// Smallest kappa in (0, 2^16] with Re lambda_r(A_p^(2)(kappa I)) <
// -shift_target, by doubling then bisection. Falls back to pole-shift
// Lyapunov feedback on the controllable part when no scalar gain works.
// Throws SynthesisError when an unstable eigenvector is not controllable.
GainResult synthesize_gain(const SwitchedModel& model,
                           const std::vector<int>& leaders, int p,
                           double shift_target);

// Target used by the certificate pipeline: the larger of 1e-6, the margin
// that keeps P' inside the unit box and the margin that makes the A1 margin
// follow from the A2 margin.
double default_shift_target(const SwitchedModel& model, int p);

struct Margins {
  double margin_a1{0.0};
  double margin_a2{0.0};
  std::optional<double> beta_computed;  // absent when beta is singular
  double rightmost_mode{0.0};
  double rightmost_1{0.0};
  double rightmost_2{0.0};
};

// Uses model.leaders and model.gains.
Margins check_margins(const SwitchedModel& model, int p);

struct BetaDecision {
  bool accepted{false};
  bool rerun{false};
  bool floor_reached{false};
  double final_setting{1.0};
  std::vector<double> history;  // settings tried, in order
};

BetaDecision beta_verification_loop(double beta_computed, double beta_setting);

// Symmetric P with M^T P + P M + Q = 0 (complex Schur, Bartels-Stewart).
// Throws NumericalError when M and -M share an eigenvalue.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& M,
                               const Eigen::MatrixXd& Q);

struct PFamily {
  std::vector<Eigen::MatrixXd> P;  // P_0 .. P_l
  double rhs_first{0.0};           // (l + phi) / tau_min
  double rhs_last{0.0};            // phi
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
  // Upper bound on lambda_max(P_0) implied by beta; absent when beta <= 0.
  std::optional<double> lambda_max_bound;
  bool in_box{false};
  int first_bad_index{-1};
};

// Constructs P_x, P_x' and the linear interpolants for topology p of a
// closed-loop model. Throws NumericalError if a Lyapunov solve fails.
PFamily construct_p_family(const SwitchedModel& model, int p);

struct LmiMargins {
  std::vector<double> flow_start;  // l entries
  std::vector<double> flow_end;  // l entries
  std::vector<double> stable_decay;  // l + 1 entries, filled for stable routes
  bool pass() const;
};

LmiMargins check_discretized_lmis(const Eigen::MatrixXd& Ap, int l,
                                  double tau_min, double eta,
                                  const PFamily& family, bool stable_route);

// lambda_max(0.5 (M + M^T)).
double sym_lambda_max(const Eigen::MatrixXd& M);

struct MuResult {
  Eigen::MatrixXd pairwise;  // (q, p) = minimal mu, NaN on the diagonal
  std::vector<double> mu;    // per q, max over p != q
};

// Largest generalized eigenvalue of (P_{q,0}, P_{p,l}) over ordered pairs.
// With a single topology the self pair is used. Throws NumericalError when
// some P_{p,l} is not positive definite.
MuResult mu_feasibility(const std::vector<PFamily>& families);

struct Window {
  double lower{0.0};
  double upper{0.0};  // +inf for stable routes
  bool empty() const { return upper < lower; }
};

// Unstable route (eta > 0): [tau_min, -log(mu)/eta - 1e-9].
// Stable route (eta < 0): [max(tau_min, -log(mu)/eta + 1e-9), inf).
Window tddt_window(double tau_min, double eta, double mu);

// kStable iff Re lambda_r(A_p) < -1e-9, using model.gains.
std::vector<ModeClass> classify_modes(const SwitchedModel& model);

struct ModeRecord {
  ModeClass mode_class{ModeClass::kUnstable};
  bool stable_route{false};  // eta < 0
  GainResult gain;
  double shift_target{0.0};  // decay target the gain was synthesized for
  Margins margins;
  std::vector<double> p_family_lambda_min;
  std::vector<double> p_family_lambda_max;
  std::optional<double> p_lambda_max_bound;
  LmiMargins lmi;
  double mu{0.0};
  Window window;
};

struct Certificate {
  std::vector<int> leaders;
  CertificateParams params;
  double phi{0.0};
  std::vector<ModeRecord> modes;
  Eigen::MatrixXd mu_required;
  std::optional<BetaDecision> beta;
  std::vector<std::string> warnings;
  bool pass{false};
  std::string failed_condition;  // empty on pass
  std::string failure_detail;

  std::vector<Eigen::MatrixXd> gains() const;
};

// Runs the whole pipeline for leader set S with the given parameters.
// Stage failures are recorded, not thrown; only invalid input throws.
Certificate full_certificate(const SwitchedModel& model,
                             const std::vector<int>& leaders,
                             const CertificateParams& params);

// Human-readable listing of every condition with pass/fail.
std::string render_text(const Certificate& cert);

}  // namespace leadersel
