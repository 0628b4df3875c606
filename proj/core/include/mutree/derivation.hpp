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

#ifndef MUTREE_DERIVATION_HPP
#define MUTREE_DERIVATION_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutree/bitstring.hpp"
#include "mutree/formula.hpp"

namespace mutree {

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotApplicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProofFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RuleKind {
  Ax1, Ax2, OrRule, AndRule, BoxRule, MuRule, NuRule,
  Resolve, Compress,  // annotation bookkeeping rules (BT only)
  Discharge,          // companion node introducing a token
  Token               // discharged leaf carrying a token
};

std::string rule_kind_name(RuleKind kind);

struct RuleLabel {
  RuleKind kind = RuleKind::Ax1;
  int compress_position = -1;   // Compress: even index k
  BitString compress_pattern;   // Compress: the pattern s0 / s1
  std::string token;            // Discharge / Token

  static RuleLabel plain(RuleKind kind) { return RuleLabel{kind, -1, {}, {}}; }
  static RuleLabel compress(int k, BitString pattern) {
    return RuleLabel{RuleKind::Compress, k, std::move(pattern), {}};
  }
  static RuleLabel discharge(std::string token) {
    return RuleLabel{RuleKind::Discharge, -1, {}, std::move(token)};
  }
  static RuleLabel leaf_token(std::string token) {
    return RuleLabel{RuleKind::Token, -1, {}, std::move(token)};
  }

  auto operator<=>(const RuleLabel&) const = default;
  std::string to_string() const;
};

/// Formula with its annotation tuple; sequent elements of the BT system.
struct AnnotatedFormula {
  Formula formula;
  TSeqAnnotation annotation;
  auto operator<=>(const AnnotatedFormula&) const = default;
};

/// Annotated sequents are sets; kept sorted and deduplicated.
using AnnotatedSequent = std::vector<AnnotatedFormula>;

AnnotatedSequent make_annotated_sequent(std::vector<AnnotatedFormula> elements);
/// Gamma^epsilon: every formula annotated with the all-epsilon tuple.
AnnotatedSequent annotate_epsilons(const Sequent& sequent, std::optional<unsigned> max_even);
Sequent erase_annotations(const AnnotatedSequent& sequent);
std::string to_string(const AnnotatedSequent& sequent);

/// Finite proof tree with back-edges.  Node 0 is the root; a Token leaf's
/// back-edge target is the unique Discharge node carrying the same token.
template <class Seq>
struct Derivation {
  struct Node {
    Seq sequent;
    RuleLabel label;
    std::optional<Formula> principal;
    std::vector<std::size_t> children;
    std::size_t parent = npos;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<Node> nodes;

  std::size_t add_node(std::size_t parent, Seq sequent, RuleLabel label,
                       std::optional<Formula> principal = std::nullopt) {
    Node node;
    node.sequent = std::move(sequent);
    node.label = std::move(label);
    node.principal = std::move(principal);
    node.parent = parent;
    nodes.push_back(std::move(node));
    std::size_t id = nodes.size() - 1;
    if (parent != npos) nodes[parent].children.push_back(id);
    return id;
  }

  /// Discharge node for each token.
  std::map<std::string, std::size_t> discharge_nodes() const {
    std::map<std::string, std::size_t> out;
    for (std::size_t v = 0; v < nodes.size(); ++v)
      if (nodes[v].label.kind == RuleKind::Discharge) out.emplace(nodes[v].label.token, v);
    return out;
  }

  /// Companion of a token leaf (npos when dangling).
  std::size_t companion_of(std::size_t leaf) const {
    if (nodes[leaf].label.kind != RuleKind::Token) return npos;
    auto companions = discharge_nodes();
    auto it = companions.find(nodes[leaf].label.token);
    return it == companions.end() ? npos : it->second;
  }

  /// Successor lists of the proof tree with back-edges.
  std::vector<std::vector<std::size_t>> graph_with_back_edges() const {
    std::vector<std::vector<std::size_t>> adjacency(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      adjacency[v] = nodes[v].children;
      if (nodes[v].label.kind == RuleKind::Token) {
        std::size_t companion = companion_of(v);
        if (companion != npos) adjacency[v].push_back(companion);
      }
    }
    return adjacency;
  }

  bool is_ancestor(std::size_t above, std::size_t below) const {
    for (std::size_t v = below; v != npos; v = nodes[v].parent)
      if (v == above) return true;
    return false;
  }
};

using NwDerivation = Derivation<Sequent>;
using BtDerivation = Derivation<AnnotatedSequent>;

/// A lasso path through the proof graph: stem from the root followed by a
/// cycle; consecutive nodes are P^C-steps (child or back-edge).
struct ProofLasso {
  std::vector<std::size_t> stem;   // starts at the root; may be empty
  std::vector<std::size_t> cycle;  // nonempty
};

/// All simple lassos from the root (paths that stop at the first repeated
/// node).  The cycle length is bounded by the graph size.
std::vector<ProofLasso> enumerate_simple_lassos(
    const std::vector<std::vector<std::size_t>>& adjacency, std::size_t root = 0);

// JSON proof files; `system` is "nw" or "bt".
NwDerivation parse_nw_proof(std::istream& in);
BtDerivation parse_bt_proof(std::istream& in);
NwDerivation parse_nw_proof_file(const std::string& path);
BtDerivation parse_bt_proof_file(const std::string& path);
void write_proof(std::ostream& out, const NwDerivation& derivation);
void write_proof(std::ostream& out, const BtDerivation& derivation);

/// DOT rendering of the proof tree with back-edges; Compress nodes whose
/// pattern ends in 1 (the progress steps) are highlighted.
std::string proof_to_dot(const NwDerivation& derivation);
std::string proof_to_dot(const BtDerivation& derivation);

}  // namespace mutree

#endif  // MUTREE_DERIVATION_HPP
