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

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "leadersel/graph.hpp"
#include "leadersel/spectral.hpp"
#include "leadersel/sysmodel.hpp"

namespace leadersel::testing {

// Each ordered pair becomes an edge with probability p.
inline Digraph random_digraph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      if (i != j && coin(rng)) edges.emplace_back(j, i);
    }
  }
  return Digraph(n, edges);
}

// Adds the reverse of every edge.
inline Digraph undirected(const Digraph& g) {
  std::vector<std::pair<int, int>> e = g.edges();
  for (auto [a, b] : g.edges()) e.emplace_back(b, a);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return Digraph(g.n_agents(), e);
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng,
                                     double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = g(rng);
  }
  return M;
}

// Small switched model with m topologies and an unstable agent matrix.
inline SwitchedModel random_model(int N, int n, int m, std::mt19937_64& rng,
                                  double edge_p = 0.35) {
  SwitchedModel model;
  model.A = random_matrix(n, n, rng, 0.6);
  model.A.diagonal().array() += 0.3;
  for (int p = 0; p < m; ++p) model.topologies.push_back(random_digraph(N, edge_p, rng));
  for (int p = 0; p < m; ++p) {
    model.tddt.tau_min.push_back(1.0);
    model.tddt.tau_max.push_back(2.0);
    model.params.l.push_back(1);
    model.params.mu.push_back(0.5);
    model.params.eta.push_back(1.5);
  }
  model.params.phi = 0.01;
  return model;
}

// Numerical rank of M with columns scaled to unit norm first, so that high
// Krylov powers do not swamp the tolerance.
inline int scaled_rank(const Eigen::MatrixXcd& M, double rel_tol = 1e-9) {
  Eigen::MatrixXcd S = M;
  for (Eigen::Index c = 0; c < S.cols(); ++c) {
    const double n = S.col(c).norm();
    if (n > 0.0) S.col(c) /= n;
  }
  if (S.cols() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(S).singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++r;
  }
  return r;
}

// Rank-containment oracle: every eigenvector of every shifted open loop with
// nonnegative real part lies in the span of the uncompacted controllability
// matrix [B, AB, ..., A^(Nn-1) B] with B = D (x) I.
inline bool rank_containment(const SwitchedModel& model,
                             const std::vector<int>& leaders) {
  const int N = model.n_agents();
  const int n = model.agent_dim();
  const int dim = N * n;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, dim);
  for (int i : leaders) B.block((i - 1) * n, (i - 1) * n, n, n).setIdentity();
  for (int p = 0; p < model.n_modes(); ++p) {
    const Eigen::MatrixXd Ah = shifted_open_loop(model, p);
    Eigen::MatrixXd C(dim, dim * dim);
    Eigen::MatrixXd blk = B;
    for (int k = 0; k < dim; ++k) {
      C.middleCols(k * dim, dim) = blk;
      blk = Ah * blk;
    }
    // Drop zero columns so the scaling above cannot divide by zero.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < C.cols(); ++c) {
      if (C.col(c).norm() > 0.0) keep.push_back(c);
    }
    Eigen::MatrixXcd Cc(dim, static_cast<Eigen::Index>(keep.size()) + 1);
    for (size_t j = 0; j < keep.size(); ++j) {
      Cc.col(static_cast<Eigen::Index>(j)) = C.col(keep[j]).cast<std::complex<double>>();
    }
    const int r0 = scaled_rank(Cc.leftCols(static_cast<Eigen::Index>(keep.size())));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Ah.cast<std::complex<double>>());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i).real() < -1e-9) continue;
      Cc.col(Cc.cols() - 1) = es.eigenvectors().col(i).normalized();
      if (scaled_rank(Cc) != r0) return false;
    }
  }
  return true;
}

// Random subset of {1..N} where each agent is kept with probability q.
inline std::vector<int> random_subset(int N, double q, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(q);
  std::vector<int> s;
  for (int i = 1; i <= N; ++i) {
    if (coin(rng)) s.push_back(i);
  }
  return s;
}

}  // namespace leadersel::testing
