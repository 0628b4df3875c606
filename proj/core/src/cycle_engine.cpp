// Copyright 2026 The mutree authors
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

#include "mutree/cycle_engine.hpp"

#include <algorithm>
#include <cstdint>

#include "graph_util.hpp"

namespace mutree {

namespace {

bool has_self_loop(const ConditionGraph& graph, std::size_t v) {
  const auto& succ = graph.adjacency[v];
  return std::find(succ.begin(), succ.end(), v) != succ.end();
}

/// Pair i read on a node set: violated = some node out of play or bad;
/// progressing = some node good.
struct PairOnSet {
  bool violated = false;
  bool progressing = false;
};

PairOnSet evaluate_pair(const ConditionGraph::Pair& pair, const std::set<std::size_t>& nodes) {
  PairOnSet result;
  for (std::size_t v : nodes) {
    if (!pair.inplay[v] || pair.bad[v]) result.violated = true;
    if (pair.good[v]) result.progressing = true;
  }
  return result;
}

/// Recursive SCC decomposition on the subgraph induced by `alive`.
/// Returns a bad SCS if one exists inside it.
std::optional<std::set<std::size_t>> find_bad_scs(const ConditionGraph& graph,
                                                  std::vector<std::size_t> alive) {
  while (!alive.empty()) {
    // SCCs of the induced subgraph.
    std::vector<std::size_t> dense(graph.num_nodes, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < alive.size(); ++i) dense[alive[i]] = i;
    std::vector<std::vector<std::size_t>> sub(alive.size());
    for (std::size_t i = 0; i < alive.size(); ++i)
      for (std::size_t w : graph.adjacency[alive[i]])
        if (dense[w] != static_cast<std::size_t>(-1)) sub[i].push_back(dense[w]);
    auto components = detail::strongly_connected_components(sub);

    std::vector<std::size_t> next_alive;
    bool shrunk = false;
    for (const auto& component : components) {
      bool nontrivial = component.size() > 1;
      if (!nontrivial) {
        std::size_t v = component[0];
        nontrivial = std::find(sub[v].begin(), sub[v].end(), v) != sub[v].end();
      }
      if (!nontrivial) continue;

      std::set<std::size_t> nodes;
      for (std::size_t i : component) nodes.insert(alive[i]);

      // Pairs that are clean and progressing on this component witness that
      // the component itself is fine; a bad sub-SCS would have to avoid all
      // their good nodes.
      std::set<std::size_t> removals;
      for (const auto& pair : graph.pairs) {
        PairOnSet status = evaluate_pair(pair, nodes);
        if (!status.violated && status.progressing)
          for (std::size_t v : nodes)
            if (pair.good[v]) removals.insert(v);
      }
      if (removals.empty()) return nodes;  // fails every pair
      for (std::size_t v : nodes)
        if (!removals.count(v)) next_alive.push_back(v);
      shrunk = true;
    }
    if (!shrunk) return std::nullopt;
    alive = std::move(next_alive);
  }
  return std::nullopt;
}

}  // namespace

ScsVerdict all_scs_good(const ConditionGraph& graph) {
  std::vector<std::size_t> alive(graph.num_nodes);
  for (std::size_t v = 0; v < graph.num_nodes; ++v) alive[v] = v;
  auto bad = find_bad_scs(graph, std::move(alive));
  if (!bad) return {};
  return ScsVerdict{false, *bad};
}

bool scs_fails_all_pairs(const ConditionGraph& graph, const std::set<std::size_t>& nodes) {
  for (const auto& pair : graph.pairs) {
    PairOnSet status = evaluate_pair(pair, nodes);
    if (!status.violated && status.progressing) return false;
  }
  return true;
}

namespace {

/// Is the subgraph induced by `nodes` strongly connected with at least one
/// edge?  (Single node: self-loop.)
bool induced_strongly_connected(const ConditionGraph& graph, const std::vector<std::size_t>& nodes) {
  if (nodes.empty()) return false;
  if (nodes.size() == 1) return has_self_loop(graph, nodes[0]);
  std::set<std::size_t> in_set(nodes.begin(), nodes.end());
  // BFS inside the set from nodes[0], then in the reversed subgraph.
  for (bool reversed : {false, true}) {
    std::set<std::size_t> seen{nodes[0]};
    std::vector<std::size_t> todo{nodes[0]};
    while (!todo.empty()) {
      std::size_t v = todo.back();
      todo.pop_back();
      if (!reversed) {
        for (std::size_t w : graph.adjacency[v])
          if (in_set.count(w) && seen.insert(w).second) todo.push_back(w);
      } else {
        for (std::size_t u : in_set)
          if (!seen.count(u)) {
            const auto& succ = graph.adjacency[u];
            if (std::find(succ.begin(), succ.end(), v) != succ.end()) {
              seen.insert(u);
              todo.push_back(u);
            }
          }
      }
    }
    if (seen.size() != nodes.size()) return false;
  }
  return true;
}

}  // namespace

ScsVerdict brute_scs_good(const ConditionGraph& graph) {
  if (graph.num_nodes > 15) throw TooLarge("brute_scs_good: more than 15 nodes");
  std::vector<std::vector<std::size_t>> adjacency(graph.num_nodes);
  for (std::size_t v = 0; v < graph.num_nodes; ++v) adjacency[v] = graph.adjacency[v];
  auto components = detail::strongly_connected_components(adjacency);
  for (const auto& component : components) {
    // Only subsets of a maximal SCC can induce a strongly connected graph.
    const std::size_t n = component.size();
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      std::vector<std::size_t> nodes;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1ULL << i)) nodes.push_back(component[i]);
      if (!induced_strongly_connected(graph, nodes)) continue;
      std::set<std::size_t> node_set(nodes.begin(), nodes.end());
      if (scs_fails_all_pairs(graph, node_set)) return ScsVerdict{false, node_set};
    }
  }
  return {};
}

}  // namespace mutree
