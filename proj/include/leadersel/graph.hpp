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

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace leadersel {

// Simple directed graph over agents 1..n_agents. An edge (j, i) is a link
// from agent j to agent i, i.e. agent i listens to agent j.
class Digraph {
 public:
  Digraph() = default;
  // Throws InputError on self-loops, duplicates or out-of-range endpoints.
  Digraph(int n_agents, std::vector<std::pair<int, int>> edges);

  int n_agents() const { return n_agents_; }
  // Sorted lexicographically.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int from, int to) const;
  int in_degree(int agent) const;

 private:
  int n_agents_{0};
  std::vector<std::pair<int, int>> edges_;
};

struct SccDecomposition {
  // Each component lists its agents in increasing order; components are
  // ordered by their smallest agent.
  std::vector<std::vector<int>> components;
  // (from component, to component), 0-based component indices, deduplicated.
  std::vector<std::pair<int, int>> condensation_edges;
  std::vector<int> source_components;
  // component_of[agent - 1] is the component index of that agent.
  std::vector<int> component_of;
};

// Row i has -1 at column j for every link (j, i) and the in-degree of i on
// the diagonal.
Eigen::MatrixXd laplacian(const Digraph& g);

Digraph union_graph(const std::vector<Digraph>& gs);

SccDecomposition scc(const Digraph& g);

// Agents that no other agent can reach in the union of the given graphs,
// in increasing order.
std::vector<int> initial_leader_set(const std::vector<Digraph>& gs);

}  // namespace leadersel
