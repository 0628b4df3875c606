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

#include "mutree/btproof.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <set>

#include "mutree/cycle_engine.hpp"

namespace mutree {

namespace {

bool contains_element(const AnnotatedSequent& sequent, const AnnotatedFormula& element) {
  return std::binary_search(sequent.begin(), sequent.end(), element);
}

AnnotatedSequent erase_element(const AnnotatedSequent& sequent, const AnnotatedFormula& element) {
  AnnotatedSequent out = sequent;
  auto it = std::lower_bound(out.begin(), out.end(), element);
  if (it != out.end() && *it == element) out.erase(it);
  return out;
}

AnnotatedSequent insert_element(AnnotatedSequent sequent, AnnotatedFormula element) {
  auto it = std::lower_bound(sequent.begin(), sequent.end(), element);
  if (it == sequent.end() || *it != element) sequent.insert(it, std::move(element));
  return sequent;
}

const AnnotatedFormula* element_with_formula(const AnnotatedSequent& sequent, const Formula& f) {
  for (const AnnotatedFormula& e : sequent)
    if (e.formula == f) return &e;
  return nullptr;
}

std::vector<unsigned> positions_of(const AnnotatedSequent& sequent) {
  std::vector<unsigned> out;
  if (sequent.empty()) return out;
  for (std::size_t i = 0; i < sequent[0].annotation.positions(); ++i)
    out.push_back(2 * static_cast<unsigned>(i));
  return out;
}

/// pattern == s 0^j 1 for some j >= 0?
bool is_progress_pattern(const BitString& s, const BitString& pattern) {
  if (!is_strict_prefix(s, pattern)) return false;
  if (!pattern.bit(pattern.size() - 1)) return false;
  for (std::size_t i = s.size(); i + 1 < pattern.size(); ++i)
    if (pattern.bit(i)) return false;
  return true;
}

}  // namespace

TSeqAnnotation restrict_annotation(const TSeqAnnotation& sigma, unsigned k,
                                   const AnnotatedSequent& sequent) {
  TSeqAnnotation out = sigma;
  for (unsigned j : positions_of(sequent)) {
    if (j <= k) continue;
    std::set<BitString> strings;
    for (const AnnotatedFormula& e : sequent) strings.insert(e.annotation.at(j));
    out.set(j, min_leaf(tree_of(strings, true)));
  }
  return out;
}

bool occurs_at(const AnnotatedSequent& sequent, unsigned k, const BitString& s) {
  for (const AnnotatedFormula& e : sequent)
    if (is_prefix(s, e.annotation.at(k))) return true;
  return false;
}

std::vector<AnnotatedSequent> apply_bt_rule(const RuleLabel& label,
                                            const std::optional<AnnotatedFormula>& principal,
                                            const AnnotatedSequent& sequent,
                                            const ClosureTable& closure) {
  auto require_principal = [&]() -> const AnnotatedFormula& {
    if (!principal) throw NotApplicable("rule needs a principal element");
    if (!contains_element(sequent, *principal))
      throw NotApplicable("principal element not in the sequent");
    return *principal;
  };
  switch (label.kind) {
    case RuleKind::Ax1: {
      for (const AnnotatedFormula& e : sequent)
        if (e.formula.kind() == Formula::Kind::Prop)
          for (const AnnotatedFormula& other : sequent)
            if (other.formula == Formula::neg_prop(e.formula.name())) return {};
      throw NotApplicable("Ax1 needs p and ~p");
    }
    case RuleKind::Ax2: {
      for (const AnnotatedFormula& e : sequent)
        if (e.formula.kind() == Formula::Kind::Top) return {};
      throw NotApplicable("Ax2 needs true");
    }
    case RuleKind::OrRule: {
      const AnnotatedFormula& xi = require_principal();
      if (xi.formula.kind() != Formula::Kind::Or)
        throw NotApplicable("principal is not a disjunction");
      AnnotatedSequent rest = erase_element(sequent, xi);
      rest = insert_element(std::move(rest), {xi.formula.lhs(), xi.annotation});
      rest = insert_element(std::move(rest), {xi.formula.rhs(), xi.annotation});
      return {rest};
    }
    case RuleKind::AndRule: {
      const AnnotatedFormula& xi = require_principal();
      if (xi.formula.kind() != Formula::Kind::And)
        throw NotApplicable("principal is not a conjunction");
      AnnotatedSequent rest = erase_element(sequent, xi);
      return {insert_element(rest, {xi.formula.lhs(), xi.annotation}),
              insert_element(rest, {xi.formula.rhs(), xi.annotation})};
    }
    case RuleKind::BoxRule: {
      const AnnotatedFormula& xi = require_principal();
      if (xi.formula.kind() != Formula::Kind::Box)
        throw NotApplicable("principal is not a box");
      std::vector<AnnotatedFormula> premise{{xi.formula.child(), xi.annotation}};
      for (const AnnotatedFormula& e : sequent)
        if (e.formula.kind() == Formula::Kind::Dia)
          premise.push_back({e.formula.child(), e.annotation});
      return {make_annotated_sequent(std::move(premise))};
    }
    case RuleKind::MuRule: {
      const AnnotatedFormula& xi = require_principal();
      if (xi.formula.kind() != Formula::Kind::Mu) throw NotApplicable("principal is not a mu");
      unsigned k = closure.omega(xi.formula);
      AnnotatedSequent rest = erase_element(sequent, xi);
      TSeqAnnotation annotation = restrict_annotation(xi.annotation, k, sequent);
      return {insert_element(std::move(rest), {xi.formula.unfold(), annotation})};
    }
    case RuleKind::NuRule: {
      const AnnotatedFormula& xi = require_principal();
      if (xi.formula.kind() != Formula::Kind::Nu) throw NotApplicable("principal is not a nu");
      unsigned k = closure.omega(xi.formula);
      TSeqAnnotation annotation = restrict_annotation(xi.annotation, k, sequent).append_at(k, true);
      std::vector<AnnotatedFormula> premise{{xi.formula.unfold(), annotation}};
      for (const AnnotatedFormula& e : sequent)
        if (!(e == xi)) premise.push_back({e.formula, e.annotation.append_at(k, false)});
      return {make_annotated_sequent(std::move(premise))};
    }
    case RuleKind::Resolve: {
      // The principal is the element that disappears; some other annotation
      // of the same formula must be strictly greater.
      const AnnotatedFormula& removed = require_principal();
      bool has_greater = false;
      for (const AnnotatedFormula& e : sequent)
        if (e.formula == removed.formula && tseq_less(removed.annotation, e.annotation))
          has_greater = true;
      if (!has_greater) throw NotApplicable("Resolve needs a greater duplicate");
      return {erase_element(sequent, removed)};
    }
    case RuleKind::Compress: {
      if (label.compress_position < 0 || label.compress_pattern.empty())
        throw NotApplicable("Compress needs a position and a nonempty pattern");
      unsigned k = static_cast<unsigned>(label.compress_position);
      auto positions = positions_of(sequent);
      if (std::find(positions.begin(), positions.end(), k) == positions.end())
        throw NotApplicable("Compress position out of range");
      const BitString& pattern = label.compress_pattern;
      BitString s = pattern.parent();
      bool appends_one = pattern.bit(pattern.size() - 1);
      if (appends_one && s.all_zeros())
        throw NotApplicable("Compress[s1] needs s != 0...0");
      bool any = false;
      std::vector<AnnotatedFormula> out;
      for (const AnnotatedFormula& e : sequent) {
        const BitString& w = e.annotation.at(k);
        if (is_prefix(s, w)) {
          if (!is_prefix(pattern, w))
            throw NotApplicable("witness string occurs outside the compressed block");
          AnnotatedFormula rewritten = e;
          rewritten.annotation.set(k, substitute(w, pattern, s));
          out.push_back(std::move(rewritten));
          any = true;
        } else {
          out.push_back(e);
        }
      }
      if (!any) throw NotApplicable("Compress pattern matches no element");
      return {make_annotated_sequent(std::move(out))};
    }
    case RuleKind::Discharge:
      return {sequent};
    case RuleKind::Token:
      return {};
  }
  throw NotApplicable("unknown rule");
}

std::optional<ResolveInstance> find_resolve(const AnnotatedSequent& sequent) {
  for (std::size_t i = 0; i + 1 < sequent.size(); ++i) {
    if (sequent[i].formula != sequent[i + 1].formula) continue;
    // the run of annotations of this formula is sorted ascending
    std::size_t j = i + 1;
    while (j + 1 < sequent.size() && sequent[j + 1].formula == sequent[i].formula) ++j;
    return ResolveInstance{sequent[i].formula, sequent[j].annotation, sequent[i].annotation};
  }
  return std::nullopt;
}

std::optional<CompressInstance> find_compress(const AnnotatedSequent& sequent) {
  for (unsigned k : positions_of(sequent)) {
    std::set<BitString> strings;
    for (const AnnotatedFormula& e : sequent) strings.insert(e.annotation.at(k));
    std::vector<BitString> candidates;
    for (const BitString& w : strings)
      for (std::size_t len = 1; len <= w.size(); ++len)
        candidates.emplace_back(w.str().substr(0, len));
    std::sort(candidates.begin(), candidates.end(), [](const BitString& a, const BitString& b) {
      if (a.size() != b.size()) return a.size() > b.size();  // longest first
      return lex_less(a, b);
    });
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const BitString& pattern : candidates) {
      BitString s = pattern.parent();
      if (pattern.bit(pattern.size() - 1) && s.all_zeros()) continue;
      bool applicable = true;
      for (const BitString& w : strings)
        if (is_prefix(s, w) && !is_prefix(pattern, w)) {
          applicable = false;
          break;
        }
      if (applicable) return CompressInstance{k, pattern};
    }
  }
  return std::nullopt;
}

SaturationResult saturate(const AnnotatedSequent& sequent, const ClosureTable& closure) {
  SaturationResult result;
  result.sequent = sequent;
  while (true) {
    if (auto resolve = find_resolve(result.sequent)) {
      AnnotatedFormula removed{resolve->formula, resolve->remove};
      auto premises = apply_bt_rule(RuleLabel::plain(RuleKind::Resolve), removed, result.sequent,
                                    closure);
      result.steps.push_back({RuleLabel::plain(RuleKind::Resolve), resolve->formula,
                              premises[0]});
      result.sequent = premises[0];
      continue;
    }
    if (auto compress = find_compress(result.sequent)) {
      RuleLabel label =
          RuleLabel::compress(static_cast<int>(compress->position), compress->pattern);
      auto premises = apply_bt_rule(label, std::nullopt, result.sequent, closure);
      result.steps.push_back({label, std::nullopt, premises[0]});
      result.sequent = premises[0];
      continue;
    }
    return result;
  }
}

void validate_bt(const BtDerivation& derivation, const ClosureTable& closure) {
  if (derivation.nodes.empty()) throw StructuralError("empty derivation");
  std::optional<unsigned> m = closure.max_even();
  const std::size_t expected_positions = m ? *m / 2 + 1 : 0;

  std::set<std::string> tokens;
  for (const auto& node : derivation.nodes)
    if (node.label.kind == RuleKind::Discharge && !tokens.insert(node.label.token).second)
      throw StructuralError("duplicate discharge token " + node.label.token);
  auto companions = derivation.discharge_nodes();

  for (std::size_t v = 0; v < derivation.nodes.size(); ++v) {
    const auto& node = derivation.nodes[v];
    if (node.sequent.empty()) throw StructuralError("empty sequent at node " + std::to_string(v));
    for (const AnnotatedFormula& e : node.sequent) {
      if (e.annotation.positions() != expected_positions)
        throw StructuralError("annotation arity mismatch at node " + std::to_string(v));
      if (!closure.is_member(e.formula))
        throw StructuralError("formula outside the closure at node " + std::to_string(v));
    }

    // Rule priority: Resolve beats Compress beats everything else.
    if (node.label.kind != RuleKind::Resolve && node.label.kind != RuleKind::Token &&
        find_resolve(node.sequent))
      throw StructuralError("node " + std::to_string(v) +
                            ": Resolve is applicable but not applied");
    if (node.label.kind != RuleKind::Resolve && node.label.kind != RuleKind::Compress &&
        node.label.kind != RuleKind::Token && find_compress(node.sequent))
      throw StructuralError("node " + std::to_string(v) +
                            ": Compress is applicable but not applied");

    switch (node.label.kind) {
      case RuleKind::Token: {
        if (!node.children.empty()) throw StructuralError("token node with children");
        auto it = companions.find(node.label.token);
        if (it == companions.end())
          throw StructuralError("dangling discharge token " + node.label.token);
        const auto& cnode = derivation.nodes[it->second];
        if (cnode.children.size() != 1 || !derivation.is_ancestor(cnode.children[0], v) ||
            cnode.children[0] == v)
          throw StructuralError("companion and its child must be proper ancestors of the leaf");
        if (cnode.sequent != node.sequent)
          throw StructuralError("discharged leaf and companion carry different sequents");
        break;
      }
      default: {
        std::optional<AnnotatedFormula> principal;
        if (node.label.kind == RuleKind::Resolve) {
          // identify the removed element from the premise
          if (node.children.size() != 1) throw StructuralError("Resolve needs one child");
          const AnnotatedSequent& premise = derivation.nodes[node.children[0]].sequent;
          for (const AnnotatedFormula& e : node.sequent)
            if (!contains_element(premise, e)) {
              principal = e;
              break;
            }
          if (!principal)
            throw StructuralError("Resolve premise is not obtained by deletion");
        } else if (node.principal) {
          const AnnotatedFormula* e = element_with_formula(node.sequent, *node.principal);
          if (!e)
            throw StructuralError("principal formula not in the sequent at node " +
                                  std::to_string(v));
          principal = *e;
        }
        std::vector<AnnotatedSequent> premises;
        try {
          premises = apply_bt_rule(node.label, principal, node.sequent, closure);
        } catch (const NotApplicable& e) {
          throw StructuralError("node " + std::to_string(v) + ": " + e.what());
        }
        if (premises.size() != node.children.size())
          throw StructuralError("node " + std::to_string(v) + ": wrong number of children");
        std::vector<AnnotatedSequent> actual;
        for (std::size_t c : node.children) actual.push_back(derivation.nodes[c].sequent);
        std::sort(premises.begin(), premises.end());
        std::sort(actual.begin(), actual.end());
        if (premises != actual)
          throw StructuralError("node " + std::to_string(v) +
                                ": children do not match the rule premises");
        break;
      }
    }
  }
}

namespace {

/// Candidate pairs and predicates of the BT soundness condition on a set of
/// nodes of a derivation.
struct BtCondition {
  std::vector<std::pair<unsigned, BitString>> pairs;

  static BtCondition collect(const BtDerivation& derivation,
                             const std::vector<std::size_t>& nodes) {
    BtCondition condition;
    std::set<std::pair<unsigned, BitString>> seen;
    for (std::size_t v : nodes) {
      for (const AnnotatedFormula& e : derivation.nodes[v].sequent) {
        for (unsigned k : positions_of(derivation.nodes[v].sequent)) {
          const std::string& w = e.annotation.at(k).str();
          for (std::size_t len = 0; len <= w.size(); ++len)
            seen.emplace(k, BitString(w.substr(0, len)));
        }
      }
    }
    condition.pairs.assign(seen.begin(), seen.end());
    return condition;
  }
};

bool node_inplay(const BtDerivation& d, std::size_t v, unsigned k, const BitString& s) {
  return occurs_at(d.nodes[v].sequent, k, s);
}

bool node_bad(const BtDerivation& d, std::size_t v, unsigned k, const BitString& s) {
  const RuleLabel& label = d.nodes[v].label;
  return label.kind == RuleKind::Compress && label.compress_position == static_cast<int>(k) &&
         is_strict_prefix(label.compress_pattern, s);
}

bool node_good(const BtDerivation& d, std::size_t v, unsigned k, const BitString& s) {
  const RuleLabel& label = d.nodes[v].label;
  return label.kind == RuleKind::Compress && label.compress_position == static_cast<int>(k) &&
         is_progress_pattern(s, label.compress_pattern);
}

ConditionGraph bt_condition_graph(const BtDerivation& derivation) {
  ConditionGraph graph;
  graph.num_nodes = derivation.nodes.size();
  graph.adjacency = derivation.graph_with_back_edges();
  std::vector<std::size_t> all(derivation.nodes.size());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
  for (const auto& [k, s] : BtCondition::collect(derivation, all).pairs) {
    ConditionGraph::Pair pair;
    pair.name = "k=" + std::to_string(k) + " s=" + s.str();
    pair.inplay.resize(graph.num_nodes);
    pair.good.resize(graph.num_nodes);
    pair.bad.resize(graph.num_nodes);
    for (std::size_t v = 0; v < graph.num_nodes; ++v) {
      pair.inplay[v] = node_inplay(derivation, v, k, s);
      pair.good[v] = node_good(derivation, v, k, s);
      pair.bad[v] = node_bad(derivation, v, k, s);
    }
    graph.pairs.push_back(std::move(pair));
  }
  return graph;
}

ClosureTable closure_of_root(const BtDerivation& derivation) {
  if (derivation.nodes.empty()) throw StructuralError("empty derivation");
  return ClosureTable(erase_annotations(derivation.nodes[0].sequent));
}

/// Is some (k,s) preserved and progressing on this node set?
bool has_witness_pair(const BtDerivation& derivation, const std::vector<std::size_t>& nodes) {
  for (const auto& [k, s] : BtCondition::collect(derivation, nodes).pairs) {
    bool preserved = true, progress = false;
    for (std::size_t v : nodes) {
      if (!node_inplay(derivation, v, k, s) || node_bad(derivation, v, k, s)) {
        preserved = false;
        break;
      }
      if (node_good(derivation, v, k, s)) progress = true;
    }
    if (preserved && progress) return true;
  }
  return false;
}

}  // namespace

BtCheckReport check_bt(const BtDerivation& derivation) {
  ClosureTable closure = closure_of_root(derivation);
  validate_bt(derivation, closure);
  ScsVerdict verdict = all_scs_good(bt_condition_graph(derivation));
  BtCheckReport report;
  report.proof = verdict.good;
  report.witness.assign(verdict.witness.begin(), verdict.witness.end());
  return report;
}

BtCheckReport brute_check_bt(const BtDerivation& derivation) {
  ClosureTable closure = closure_of_root(derivation);
  validate_bt(derivation, closure);
  ScsVerdict verdict = brute_scs_good(bt_condition_graph(derivation));
  BtCheckReport report;
  report.proof = verdict.good;
  report.witness.assign(verdict.witness.begin(), verdict.witness.end());
  return report;
}

NwDerivation erase_to_nw(const BtDerivation& derivation) {
  NwDerivation out;
  // Splice out annotation bookkeeping: Resolve and Compress leave the
  // plain sequent unchanged, so the chains collapse.
  std::function<void(std::size_t, std::size_t)> copy = [&](std::size_t v, std::size_t parent) {
    const auto& node = derivation.nodes[v];
    if (node.label.kind == RuleKind::Resolve || node.label.kind == RuleKind::Compress) {
      if (node.children.size() != 1)
        throw StructuralError("bookkeeping node without a single child");
      copy(node.children[0], parent);
      return;
    }
    std::size_t id = out.add_node(parent, erase_annotations(node.sequent), node.label,
                                  node.principal);
    for (std::size_t c : node.children) copy(c, id);
  };
  copy(0, NwDerivation::npos);
  return out;
}

// ------------------------------------------------------------ translation

namespace {

/// Position in the NW proof graph after skipping token leaves (continue at
/// the companion's child, as in the infinite unfolding) and discharge nodes
/// (identity steps).
std::size_t normalize_nw(const NwDerivation& nw, std::size_t node) {
  std::size_t steps = 0;
  while (true) {
    if (++steps > nw.nodes.size() + 1)
      throw StructuralError("discharge cycle without a logical rule");
    const auto& n = nw.nodes[node];
    if (n.label.kind == RuleKind::Token) {
      std::size_t companion = nw.companion_of(node);
      if (companion == NwDerivation::npos) throw StructuralError("dangling token");
      node = nw.nodes[companion].children[0];
    } else if (n.label.kind == RuleKind::Discharge) {
      node = n.children[0];
    } else {
      return node;
    }
  }
}

struct Translator {
  const NwDerivation& nw;
  const ClosureTable& closure;
  std::size_t budget;
  BtDerivation out;
  std::vector<std::pair<std::size_t, std::size_t>> ties;  // (leaf, companion)

  struct PathEntry {
    std::size_t nw_node;
    AnnotatedSequent sequent;
    std::size_t bt_node;
  };
  std::vector<PathEntry> path;

  std::size_t emit(std::size_t parent, AnnotatedSequent sequent, RuleLabel label,
                   std::optional<Formula> principal = std::nullopt) {
    if (out.nodes.size() >= budget)
      throw TranslationBudgetExceeded("translation exceeded the node budget");
    return out.add_node(parent, std::move(sequent), std::move(label), std::move(principal));
  }

  /// Nodes on the branch from `top` down to `bottom` (both inclusive).
  std::vector<std::size_t> segment(std::size_t top, std::size_t bottom) const {
    std::vector<std::size_t> nodes;
    for (std::size_t v = bottom;; v = out.nodes[v].parent) {
      nodes.push_back(v);
      if (v == top) break;
    }
    return nodes;
  }

  void build(std::size_t nw_node, const AnnotatedSequent& annotated, std::size_t parent) {
    std::size_t u = normalize_nw(nw, nw_node);
    SaturationResult sat = saturate(annotated, closure);

    // Emit the saturation chain; the final node carries the logical rule.
    AnnotatedSequent current = annotated;
    std::size_t tip = parent;
    bool first = true;
    for (const auto& step : sat.steps) {
      tip = emit(first ? parent : tip, current, step.label, step.principal);
      current = step.premise;
      first = false;
    }
    std::size_t final_parent = first ? parent : tip;
    // (the final node's label is set below)

    const auto& nwn = nw.nodes[u];
    assert(erase_annotations(sat.sequent) == nwn.sequent);

    // Tie a back edge at the first ancestor with the same position and
    // sequent once some pair is preserved and progressing in between.
    for (const PathEntry& entry : path) {
      if (entry.nw_node != u || entry.sequent != sat.sequent) continue;
      std::size_t leaf = emit(final_parent, sat.sequent, RuleLabel::leaf_token("?"));
      std::vector<std::size_t> nodes = segment(entry.bt_node, leaf);
      if (has_witness_pair(out, nodes)) {
        ties.push_back({leaf, entry.bt_node});
        return;
      }
      // undo the tentative leaf
      out.nodes.pop_back();
      out.nodes[final_parent].children.pop_back();
    }

    // Expand with the NW rule of u.
    std::optional<AnnotatedFormula> principal;
    if (nwn.principal) {
      const AnnotatedFormula* e = element_with_formula(sat.sequent, *nwn.principal);
      assert(e != nullptr);
      principal = *e;
    }
    std::size_t self = emit(final_parent, sat.sequent, RuleLabel::plain(nwn.label.kind),
                            nwn.principal);
    std::vector<AnnotatedSequent> premises =
        apply_bt_rule(out.nodes[self].label, principal, sat.sequent, closure);

    // Pair each BT premise with the NW child carrying the same formulas.
    std::vector<std::size_t> remaining = nwn.children;
    path.push_back({u, sat.sequent, self});
    for (const AnnotatedSequent& premise : premises) {
      Sequent plain = erase_annotations(premise);
      auto it = std::find_if(remaining.begin(), remaining.end(), [&](std::size_t c) {
        return nw.nodes[c].sequent == plain;
      });
      if (it == remaining.end())
        throw StructuralError("NW child does not match the annotated premise");
      std::size_t child = *it;
      remaining.erase(it);
      build(child, premise, self);
    }
    path.pop_back();
  }

  BtDerivation run() {
    build(0, annotate_epsilons(nw.nodes[0].sequent, closure.max_even()), BtDerivation::npos);
    wrap_companions();
    return std::move(out);
  }

  void wrap_companions() {
    // Insert one Discharge node above every distinct companion and point
    // the tied leaves' tokens at it.
    std::map<std::size_t, std::string> token_of;
    unsigned counter = 0;
    for (const auto& [leaf, companion] : ties) {
      auto it = token_of.find(companion);
      if (it == token_of.end())
        it = token_of.emplace(companion, "x" + std::to_string(counter++)).first;
      out.nodes[leaf].label = RuleLabel::leaf_token(it->second);
    }
    for (const auto& [companion, token] : token_of) {
      std::size_t parent = out.nodes[companion].parent;
      BtDerivation::Node discharge;
      discharge.sequent = out.nodes[companion].sequent;
      discharge.label = RuleLabel::discharge(token);
      discharge.parent = parent;
      discharge.children = {companion};
      out.nodes.push_back(std::move(discharge));
      std::size_t d = out.nodes.size() - 1;
      if (parent != BtDerivation::npos)
        std::replace(out.nodes[parent].children.begin(), out.nodes[parent].children.end(),
                     companion, d);
      out.nodes[companion].parent = d;
      if (companion == 0) {
        // the root moved under the new discharge node: rotate it to slot 0
        std::swap(out.nodes[0], out.nodes[d]);
        remap_after_root_swap(d);
      }
    }
  }

  void remap_after_root_swap(std::size_t moved) {
    // after swapping node 0 and `moved`, fix all indices
    auto fix = [&](std::size_t& v) {
      if (v == 0)
        v = moved;
      else if (v == moved)
        v = 0;
    };
    for (auto& node : out.nodes) {
      if (node.parent != BtDerivation::npos) fix(node.parent);
      for (auto& c : node.children) fix(c);
    }
    out.nodes[0].parent = BtDerivation::npos;
    for (auto& [leaf, companion] : ties) {
      fix(leaf);
      fix(companion);
    }
  }
};

}  // namespace

BtDerivation translate_nw_to_bt(const NwDerivation& derivation, std::size_t node_budget) {
  ProofCheckResult nw_check = check_nw(derivation);
  if (!nw_check.proof)
    throw NotApplicable("translation requires an NW proof as input");
  ClosureTable closure(derivation.nodes[0].sequent);
  Translator translator{derivation, closure, node_budget, {}, {}, {}};
  BtDerivation result = translator.run();
  BtCheckReport report = check_bt(result);
  if (!report.proof)
    throw std::logic_error("internal error: translated derivation fails the BT check");
  return result;
}

// ------------------------------------------------------------------ prover

std::size_t prove_budget(const ClosureTable& closure, std::size_t cap) {
  const double n = static_cast<double>(closure.members().size());
  const double positions =
      closure.max_even() ? static_cast<double>(*closure.max_even()) / 2 + 1 : 1;
  double bound = std::pow(n, 2 * positions * n);
  if (!std::isfinite(bound) || bound > static_cast<double>(cap)) return cap;
  return std::max<std::size_t>(8, static_cast<std::size_t>(bound));
}

namespace {

struct Prover {
  const ClosureTable& closure;
  std::size_t budget;
  BtDerivation out;
  std::vector<std::pair<std::size_t, std::size_t>> ties;
  std::set<std::string> banned;  // tie fingerprints rejected by the checker
  bool budget_hit = false;

  struct PathEntry {
    AnnotatedSequent sequent;
    std::size_t bt_node;
  };
  std::vector<PathEntry> path;

  std::size_t emit(std::size_t parent, AnnotatedSequent sequent, RuleLabel label,
                   std::optional<Formula> principal = std::nullopt) {
    return out.add_node(parent, std::move(sequent), std::move(label), std::move(principal));
  }

  std::vector<std::size_t> segment(std::size_t top, std::size_t bottom) const {
    std::vector<std::size_t> nodes;
    for (std::size_t v = bottom;; v = out.nodes[v].parent) {
      nodes.push_back(v);
      if (v == top) break;
    }
    return nodes;
  }

  std::string fingerprint(std::size_t companion, std::size_t leaf) const {
    return std::to_string(companion) + "#" + std::to_string(leaf) + "#" +
           to_string(out.nodes[leaf].sequent);
  }

  bool search(const AnnotatedSequent& annotated, std::size_t parent) {
    if (out.nodes.size() >= budget) {
      budget_hit = true;
      return false;
    }
    SaturationResult sat = saturate(annotated, closure);
    std::size_t before = out.nodes.size();
    AnnotatedSequent current = annotated;
    std::size_t tip = parent;
    bool first = true;
    for (const auto& step : sat.steps) {
      tip = emit(first ? parent : tip, current, step.label, step.principal);
      current = step.premise;
      first = false;
    }
    std::size_t final_parent = first ? parent : tip;
    const AnnotatedSequent& goal = sat.sequent;

    auto cleanup = [&]() {
      out.nodes.resize(before);
      if (parent != BtDerivation::npos && !out.nodes[parent].children.empty() &&
          out.nodes[parent].children.back() >= before)
        out.nodes[parent].children.pop_back();
    };

    // close by an axiom
    for (RuleKind axiom : {RuleKind::Ax1, RuleKind::Ax2}) {
      try {
        apply_bt_rule(RuleLabel::plain(axiom), std::nullopt, goal, closure);
        emit(final_parent, goal, RuleLabel::plain(axiom));
        return true;
      } catch (const NotApplicable&) {
      }
    }

    // tie a back edge at an equal ancestor sequent with a witness pair
    bool repeated = false;
    for (const PathEntry& entry : path) {
      if (entry.sequent != goal) continue;
      repeated = true;
      std::size_t leaf = emit(final_parent, goal, RuleLabel::leaf_token("?"));
      std::vector<std::size_t> nodes = segment(entry.bt_node, leaf);
      if (has_witness_pair(out, nodes) && !banned.count(fingerprint(entry.bt_node, leaf))) {
        ties.push_back({leaf, entry.bt_node});
        return true;
      }
      out.nodes.pop_back();
      if (final_parent != BtDerivation::npos) out.nodes[final_parent].children.pop_back();
    }
    if (repeated) {
      // expanding a repeated sequent only loops; give up on this branch
      cleanup();
      return false;
    }

    // expand: one or-branch per (rule, principal) choice, boxes last
    std::vector<std::pair<RuleKind, AnnotatedFormula>> candidates;
    std::vector<std::pair<RuleKind, AnnotatedFormula>> boxes;
    for (const AnnotatedFormula& e : goal) {
      switch (e.formula.kind()) {
        case Formula::Kind::Or: candidates.push_back({RuleKind::OrRule, e}); break;
        case Formula::Kind::And: candidates.push_back({RuleKind::AndRule, e}); break;
        case Formula::Kind::Mu: candidates.push_back({RuleKind::MuRule, e}); break;
        case Formula::Kind::Nu: candidates.push_back({RuleKind::NuRule, e}); break;
        case Formula::Kind::Box: boxes.push_back({RuleKind::BoxRule, e}); break;
        default: break;
      }
    }
    candidates.insert(candidates.end(), boxes.begin(), boxes.end());

    for (const auto& [kind, principal] : candidates) {
      std::size_t self = emit(final_parent, goal, RuleLabel::plain(kind), principal.formula);
      std::vector<AnnotatedSequent> premises =
          apply_bt_rule(out.nodes[self].label, principal, goal, closure);
      std::size_t tie_mark = ties.size();
      path.push_back({goal, self});
      bool ok = true;
      for (const AnnotatedSequent& premise : premises)
        if (!search(premise, self)) {
          ok = false;
          break;
        }
      path.pop_back();
      if (ok) return true;
      // undo this attempt
      ties.resize(tie_mark);
      out.nodes.resize(self);
      if (final_parent != BtDerivation::npos) out.nodes[final_parent].children.pop_back();
      if (budget_hit) break;
    }
    cleanup();
    return false;
  }

  void wrap_companions() {
    std::map<std::size_t, std::string> token_of;
    unsigned counter = 0;
    for (const auto& [leaf, companion] : ties) {
      auto it = token_of.find(companion);
      if (it == token_of.end())
        it = token_of.emplace(companion, "x" + std::to_string(counter++)).first;
      out.nodes[leaf].label = RuleLabel::leaf_token(it->second);
    }
    for (const auto& [companion, token] : token_of) {
      std::size_t parent = out.nodes[companion].parent;
      BtDerivation::Node discharge;
      discharge.sequent = out.nodes[companion].sequent;
      discharge.label = RuleLabel::discharge(token);
      discharge.parent = parent;
      discharge.children = {companion};
      out.nodes.push_back(std::move(discharge));
      std::size_t d = out.nodes.size() - 1;
      if (parent != BtDerivation::npos)
        std::replace(out.nodes[parent].children.begin(), out.nodes[parent].children.end(),
                     companion, d);
      out.nodes[companion].parent = d;
      if (companion == 0) {
        std::swap(out.nodes[0], out.nodes[d]);
        auto fix = [&](std::size_t& v) {
          if (v == 0)
            v = d;
          else if (v == d)
            v = 0;
        };
        for (auto& node : out.nodes) {
          if (node.parent != BtDerivation::npos) fix(node.parent);
          for (auto& c : node.children) fix(c);
        }
        out.nodes[0].parent = BtDerivation::npos;
      }
    }
  }
};

}  // namespace

std::optional<BtDerivation> prove(const Sequent& sequent, const ProveOptions& options) {
  if (sequent.empty()) return std::nullopt;
  ClosureTable closure(sequent);
  AnnotatedSequent root = annotate_epsilons(sequent, closure.max_even());
  std::size_t budget = prove_budget(closure, options.node_budget);

  std::set<std::string> banned;
  for (unsigned attempt = 0; attempt <= options.retry_limit; ++attempt) {
    Prover prover{closure, budget, {}, {}, {}, false, {}};
    prover.banned = banned;
    if (!prover.search(root, BtDerivation::npos)) return std::nullopt;
    std::vector<std::string> fingerprints;
    for (const auto& [leaf, companion] : prover.ties)
      fingerprints.push_back(prover.fingerprint(companion, leaf));
    prover.wrap_companions();
    BtCheckReport report = check_bt(prover.out);
    if (report.proof) return std::move(prover.out);
    // ban the ties of this failed candidate and search again
    for (const std::string& f : fingerprints) banned.insert(f);
    if (fingerprints.empty()) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace mutree
