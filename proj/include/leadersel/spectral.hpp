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

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "leadersel/sysmodel.hpp"

namespace leadersel {

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;  // unit 2-norm
};

// Full spectrum sorted by descending real part, then descending imaginary
// part, then solver order. Element 0 is the rightmost eigenvalue.
std::vector<EigenPair> eig(const Eigen::MatrixXd& M);

// Re of the rightmost eigenvalue.
double rightmost_real(const Eigen::MatrixXd& M);

// 2-norm condition number of the eigenvector matrix returned by eig().
double eigenvector_condition(const Eigen::MatrixXd& M);

// [B, AB, ..., A^(r-1) B] with r = A.rows().
Eigen::MatrixXd ctrb(const Eigen::MatrixXd& Ahat, const Eigen::MatrixXd& Bhat);

// Columns of D (x) I_n belonging to the leaders, in increasing agent order.
Eigen::MatrixXd leader_input(int n_agents, int agent_dim,
                             const std::vector<int>& leaders);

struct SpanBasis {
  Eigen::MatrixXd basis;  // orthonormal columns
  int rank{0};
  double tolerance_used{0.0};
};

// Orthonormal basis of range(M); singular values above
// rel_tol * sigma_max count toward the rank.
SpanBasis span_basis(const Eigen::MatrixXd& M, double rel_tol = 1e-8);

// Orthonormal basis of the controllable subspace range(ctrb(Ahat, Bhat)),
// built by block Krylov iteration with re-orthogonalization. Same span as
// span_basis(ctrb(...)) without forming high matrix powers.
SpanBasis controllable_basis(const Eigen::MatrixXd& Ahat,
                             const Eigen::MatrixXd& Bhat,
                             double rel_tol = 1e-8);

// ||v - P P^H v||^2 for a unit vector v, clamped to [0, 1].
double dist2(const Eigen::VectorXcd& v, const SpanBasis& span);

// Eigenvectors of every shifted open-loop matrix with Re(lambda) >= -1e-9.
// Building this once lets repeated metric evaluations skip the eigensolves.
class MetricContext {
 public:
  explicit MetricContext(const SwitchedModel& model);

  double f(const std::vector<int>& leaders) const;
  // Contribution of topology p.
  double f_mode(int p, const std::vector<int>& leaders) const;

  int n_unstable(int p) const {
    return static_cast<int>(unstable_[p].size());
  }
  const std::vector<EigenPair>& unstable(int p) const { return unstable_[p]; }
  const Eigen::MatrixXd& shifted(int p) const { return shifted_[p]; }
  // True when the eigenvector matrix of mode p is ill-conditioned (> 1e8).
  bool ill_conditioned(int p) const { return ill_conditioned_[p]; }
  double max_rightmost() const;

 private:
  int n_agents_;
  int agent_dim_;
  std::vector<Eigen::MatrixXd> shifted_;
  std::vector<std::vector<EigenPair>> unstable_;
  std::vector<bool> ill_conditioned_;
  std::vector<double> rightmost_;
};

// Sum over topologies of dist^2 from each shifted-unstable eigenvector to
// the controllable subspace of the leader inputs.
double metric_f(const SwitchedModel& model, const std::vector<int>& leaders);

// Sum over topologies of Re(lambda_r) of the closed loop shifted by
// (l_p / tau_min_p - eta_p) / 2, using the given per-topology gains.
double metric_fmax(const SwitchedModel& model, const std::vector<int>& leaders,
                   const std::vector<Eigen::MatrixXd>& gains);
// Same, one scalar gain kappa_p * I_n per topology.
double metric_fmax(const SwitchedModel& model, const std::vector<int>& leaders,
                   const std::vector<double>& kappas);

struct CBar {
  Eigen::MatrixXd matrix;      // (Nn)^2 x (Nn)^2
  std::vector<bool> flagged;   // zero columns of the controllability matrix
};

// Normalized Gram matrix of the full controllability matrix of the shifted
// open loop of topology p. Throws CapabilityError when Nn > 40.
CBar c_bar(const SwitchedModel& model, int p);
CBar c_bar(const Eigen::MatrixXd& Ahat);

struct SubmodBounds {
  double lambda_min_global{0.0};
  std::optional<double> lambda_min_sparse;  // absent when not enumerable
};

// Smallest eigenvalue of the whole matrix, and the minimum over principal
// submatrices of size s drawn from non-flagged indices when
// choose(count, s) <= 1e6.
SubmodBounds submod_ratio_lower_bounds(const CBar& cbar, int s);
SubmodBounds submod_ratio_lower_bounds(const SwitchedModel& model, int p,
                                       int s);

using SetFunction = std::function<double(const std::vector<int>&)>;

// Worst ratio of summed singleton gains to the joint gain of the decrement
// g(X) = f({}) - f(X), over W subset of U and disjoint S with |S| <= k.
// Pairs whose joint gain is within 1e-12 of zero are skipped; returns
// nullopt when no admissible pair remains. Ground set is 1..n_ground.
std::optional<double> exact_submodularity_ratio(const SetFunction& f,
                                                int n_ground,
                                                const std::vector<int>& U,
                                                int k);

// lambda_max(M^T + M) / (2 Re lambda_r(M)).
double beta_of(const Eigen::MatrixXd& M);

}  // namespace leadersel
