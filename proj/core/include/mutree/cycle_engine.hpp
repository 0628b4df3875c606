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

#ifndef MUTREE_CYCLE_ENGINE_HPP
#define MUTREE_CYCLE_ENGINE_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mutree {

struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A directed graph together with a family of indexed node-predicate pairs.
/// A strongly connected subgraph (SCS) is a node set admitting a closed walk
/// through all its nodes: an induced strongly connected set with at least
/// one edge (a single node needs a self-loop).
///
/// The question the engine answers: does every SCS have a pair i with
///   all nodes in play and none bad, and at least one good node?
struct ConditionGraph {
  struct Pair {
    std::string name;
    std::vector<bool> inplay;
    std::vector<bool> good;
    std::vector<bool> bad;
  };
  std::size_t num_nodes = 0;
  std::vector<std::vector<std::size_t>> adjacency;  // indexed by node
  std::vector<Pair> pairs;
};

struct ScsVerdict {
  bool good = true;
  std::set<std::size_t> witness;  // a bad SCS when !good
};

/// Streett-emptiness style search: recursively decompose into SCCs,
/// removing the good nodes of pairs that are clean (no violation node) and
/// progressing in the current component.  A component with no such pair is
/// a bad SCS.
ScsVerdict all_scs_good(const ConditionGraph& graph);

/// Oracle: enumerates every nonempty subset of every maximal SCC, keeps the
/// induced strongly connected ones and tests the condition directly.
/// Throws TooLarge beyond 15 nodes.
ScsVerdict brute_scs_good(const ConditionGraph& graph);

/// True iff the node set fails every pair (used to re-check witnesses).
bool scs_fails_all_pairs(const ConditionGraph& graph, const std::set<std::size_t>& nodes);

}  // namespace mutree

#endif  // MUTREE_CYCLE_ENGINE_HPP
