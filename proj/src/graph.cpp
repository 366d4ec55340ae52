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

#include "leadersel/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "leadersel/errors.hpp"

namespace leadersel {

Digraph::Digraph(int n_agents, std::vector<std::pair<int, int>> edges)
    : n_agents_(n_agents), edges_(std::move(edges)) {
  if (n_agents_ <= 0) throw InputError("digraph needs at least one agent");
  for (const auto& [j, i] : edges_) {
    if (j < 1 || j > n_agents_ || i < 1 || i > n_agents_) {
      throw InputError("edge (" + std::to_string(j) + ", " +
                       std::to_string(i) + ") has an endpoint outside 1.." +
                       std::to_string(n_agents_));
    }
    if (i == j) {
      throw InputError("self-loop at agent " + std::to_string(i));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->first) + ", " +
                     std::to_string(dup->second) + ")");
  }
}

bool Digraph::has_edge(int from, int to) const {
  return std::binary_search(edges_.begin(), edges_.end(),
                            std::make_pair(from, to));
}

int Digraph::in_degree(int agent) const {
  int d = 0;
  for (const auto& e : edges_) d += (e.second == agent);
  return d;
}

Eigen::MatrixXd laplacian(const Digraph& g) {
  const int n = g.n_agents();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [j, i] : g.edges()) {
    L(i - 1, j - 1) -= 1.0;
    L(i - 1, i - 1) += 1.0;
  }
  return L;
}

Digraph union_graph(const std::vector<Digraph>& gs) {
  if (gs.empty()) throw InputError("union of an empty graph list");
  const int n = gs.front().n_agents();
  std::set<std::pair<int, int>> all;
  for (const auto& g : gs) {
    if (g.n_agents() != n) {
      throw InputError("graphs in a union must share the agent count");
    }
    all.insert(g.edges().begin(), g.edges().end());
  }
  return Digraph(n, {all.begin(), all.end()});
}

namespace {

// Iterative Tarjan; returns component id per vertex (0-based vertices) in
// reverse topological order of discovery.
std::vector<int> tarjan(int n, const std::vector<std::vector<int>>& adj,
                        int* n_comp) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  int count = 0;
  // (vertex, next child position)
  std::vector<std::pair<int, size_t>> call;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        const int w = adj[v][pos++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  *n_comp = count;
  return comp;
}

}  // namespace

SccDecomposition scc(const Digraph& g) {
  const int n = g.n_agents();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [j, i] : g.edges()) adj[j - 1].push_back(i - 1);
  int n_comp = 0;
  const std::vector<int> raw = tarjan(n, adj, &n_comp);

  // Relabel so components are ordered by their smallest agent.
  std::vector<int> relabel(n_comp, -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (relabel[raw[v]] == -1) relabel[raw[v]] = next++;
  }
  SccDecomposition out;
  out.components.resize(n_comp);
  out.component_of.resize(n);
  for (int v = 0; v < n; ++v) {
    const int c = relabel[raw[v]];
    out.component_of[v] = c;
    out.components[c].push_back(v + 1);
  }
  std::set<std::pair<int, int>> cedges;
  for (const auto& [j, i] : g.edges()) {
    const int a = out.component_of[j - 1];
    const int b = out.component_of[i - 1];
    if (a != b) cedges.insert({a, b});
  }
  out.condensation_edges.assign(cedges.begin(), cedges.end());
  std::vector<bool> has_in(n_comp, false);
  for (const auto& e : out.condensation_edges) has_in[e.second] = true;
  for (int c = 0; c < n_comp; ++c) {
    if (!has_in[c]) out.source_components.push_back(c);
  }
  return out;
}

std::vector<int> initial_leader_set(const std::vector<Digraph>& gs) {
  const SccDecomposition d = scc(union_graph(gs));
  std::vector<int> s0;
  for (int c : d.source_components) {
    if (d.components[c].size() == 1) s0.push_back(d.components[c][0]);
  }
  std::sort(s0.begin(), s0.end());
  return s0;
}

}  // namespace leadersel
