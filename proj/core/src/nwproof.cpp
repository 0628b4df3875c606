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

#include "mutree/nwproof.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

#include "graph_util.hpp"
#include "mutree/cycle_engine.hpp"
#include "mutree/determinize.hpp"

namespace mutree {

std::vector<Sequent> apply_nw_rule(RuleKind rule, const std::optional<Formula>& principal,
                                   const Sequent& sequent) {
  auto require_principal = [&]() -> const Formula& {
    if (!principal) throw NotApplicable("rule needs a principal formula");
    if (!sequent_contains(sequent, *principal))
      throw NotApplicable("principal formula not in the sequent");
    return *principal;
  };
  switch (rule) {
    case RuleKind::Ax1: {
      for (const Formula& f : sequent)
        if (f.kind() == Formula::Kind::Prop &&
            sequent_contains(sequent, Formula::neg_prop(f.name())))
          return {};
      throw NotApplicable("Ax1 needs p and ~p");
    }
    case RuleKind::Ax2: {
      if (!sequent_contains(sequent, Formula::top())) throw NotApplicable("Ax2 needs true");
      return {};
    }
    case RuleKind::OrRule: {
      const Formula& xi = require_principal();
      if (xi.kind() != Formula::Kind::Or) throw NotApplicable("principal is not a disjunction");
      Sequent rest = sequent_erase(sequent, xi);
      return {sequent_insert(sequent_insert(rest, xi.lhs()), xi.rhs())};
    }
    case RuleKind::AndRule: {
      const Formula& xi = require_principal();
      if (xi.kind() != Formula::Kind::And) throw NotApplicable("principal is not a conjunction");
      Sequent rest = sequent_erase(sequent, xi);
      return {sequent_insert(rest, xi.lhs()), sequent_insert(rest, xi.rhs())};
    }
    case RuleKind::BoxRule: {
      const Formula& xi = require_principal();
      if (xi.kind() != Formula::Kind::Box) throw NotApplicable("principal is not a box");
      std::vector<Formula> premise{xi.child()};
      for (const Formula& f : sequent)
        if (f.kind() == Formula::Kind::Dia) premise.push_back(f.child());
      return {make_sequent(std::move(premise))};
    }
    case RuleKind::MuRule:
    case RuleKind::NuRule: {
      const Formula& xi = require_principal();
      bool want_nu = rule == RuleKind::NuRule;
      if (!xi.is_fixpoint() || xi.is_nu() != want_nu)
        throw NotApplicable("principal is not the right fixpoint");
      Sequent rest = sequent_erase(sequent, xi);
      return {sequent_insert(rest, xi.unfold())};
    }
    case RuleKind::Discharge:
      return {sequent};
    case RuleKind::Token:
      return {};
    default:
      throw NotApplicable("rule not part of the plain system");
  }
}

std::vector<std::pair<Formula, Formula>> TrailStep::trail() const {
  auto out = active;
  out.insert(out.end(), passive.begin(), passive.end());
  return out;
}

TrailStep trail_relation(const Sequent& conclusion, const std::optional<Formula>& principal,
                         const Sequent& premise) {
  TrailStep step;
  step.conclusion = conclusion;
  step.principal = principal;
  step.premise = premise;

  if (!principal) {
    // discharge node or back-edge: the identity trail
    if (premise != conclusion)
      throw NotARuleInstance("identity step with different conclusion and premise");
    for (const Formula& f : conclusion) step.passive.push_back({f, f});
    return step;
  }

  const Formula& xi = *principal;
  if (!sequent_contains(conclusion, xi))
    throw NotARuleInstance("principal not in the conclusion");
  Sequent rest = sequent_erase(conclusion, xi);

  switch (xi.kind()) {
    case Formula::Kind::Or: {
      if (sequent_insert(sequent_insert(rest, xi.lhs()), xi.rhs()) != premise)
        throw NotARuleInstance("premise does not match the disjunction rule");
      step.active.push_back({xi, xi.lhs()});
      step.active.push_back({xi, xi.rhs()});
      for (const Formula& f : rest) step.passive.push_back({f, f});
      return step;
    }
    case Formula::Kind::And: {
      bool matched = false;
      for (const Formula& conjunct : {xi.lhs(), xi.rhs()})
        if (sequent_insert(rest, conjunct) == premise) {
          step.active.push_back({xi, conjunct});
          matched = true;
        }
      if (!matched) throw NotARuleInstance("premise does not match the conjunction rule");
      for (const Formula& f : rest) step.passive.push_back({f, f});
      return step;
    }
    case Formula::Kind::Box: {
      std::vector<Formula> expected{xi.child()};
      for (const Formula& f : conclusion)
        if (f.kind() == Formula::Kind::Dia) expected.push_back(f.child());
      if (make_sequent(std::move(expected)) != premise)
        throw NotARuleInstance("premise does not match the box rule");
      step.active.push_back({xi, xi.child()});
      for (const Formula& f : conclusion)
        if (f.kind() == Formula::Kind::Dia) step.active.push_back({f, f.child()});
      return step;  // everything else is dropped: no passive pairs
    }
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      if (sequent_insert(rest, xi.unfold()) != premise)
        throw NotARuleInstance("premise does not match the unfolding rule");
      step.active.push_back({xi, xi.unfold()});
      for (const Formula& f : rest) step.passive.push_back({f, f});
      return step;
    }
    default:
      throw NotARuleInstance("formula kind has no rule");
  }
}

RuleLetter RuleLetter::init(const Sequent& root) {
  RuleLetter letter;
  letter.kind = Kind::Init;
  letter.conclusion = root;
  letter.premise = root;
  return letter;
}

RuleLetter RuleLetter::identity(const Sequent& sequent) {
  RuleLetter letter;
  letter.kind = Kind::Identity;
  letter.conclusion = sequent;
  letter.premise = sequent;
  return letter;
}

RuleLetter RuleLetter::rule(Sequent conclusion, std::optional<Formula> principal,
                            Sequent premise) {
  RuleLetter letter;
  letter.kind = Kind::Rule;
  letter.conclusion = std::move(conclusion);
  letter.principal = std::move(principal);
  letter.premise = std::move(premise);
  return letter;
}

std::string RuleLetter::encode() const {
  std::string out;
  switch (kind) {
    case Kind::Init: out = "I<"; break;
    case Kind::Rule: out = "R<"; break;
    case Kind::Identity: out = "E<"; break;
  }
  out += to_string(conclusion);
  out += " ; ";
  out += principal ? principal->to_string() : "-";
  out += " ; ";
  out += to_string(premise);
  out += ">";
  return out;
}

namespace {

/// Trail pairs seen by the tracking automaton on a letter.  Init letters
/// only matter at the initial state; they contribute the identity.
std::vector<std::pair<Formula, Formula>> letter_trail(const RuleLetter& letter) {
  if (letter.kind == RuleLetter::Kind::Rule)
    return trail_relation(letter.conclusion, letter.principal, letter.premise).trail();
  std::vector<std::pair<Formula, Formula>> pairs;
  for (const Formula& f : letter.conclusion) pairs.push_back({f, f});
  return pairs;
}

}  // namespace

TrackingAutomaton tracking_automaton(const ClosureTable& closure,
                                     const std::vector<RuleLetter>& letters) {
  TrackingAutomaton result;
  StreamAutomaton& aut = result.automaton;
  result.letters = letters;

  const StateId init = aut.add_state("init");
  std::map<Formula, StateId> member_id;
  std::map<Formula, StateId> star_id;
  for (const Formula& f : closure.members()) member_id[f] = aut.add_state(f.to_string());
  for (const Formula& f : closure.fixpoints())
    star_id[f] = aut.add_state(f.to_string() + "*");

  // Priorities: starred states inherit Omega, everything else gets the
  // smallest losing priority above max even.
  unsigned fallback = closure.max_even() ? *closure.max_even() + 1 : 1;
  ParityAcceptance acc;
  acc.priority.assign(aut.num_states(), fallback);
  for (const auto& [f, id] : star_id) acc.priority[id] = closure.omega(f);

  for (const RuleLetter& letter : letters) {
    LetterId y = aut.add_letter(letter.encode());
    auto trail = letter_trail(letter);

    // case 1: the initial state jumps into the root sequent on any letter
    for (const Formula& f : closure.roots()) aut.add_transition(init, y, member_id.at(f));

    for (const auto& [f, id] : member_id) {
      if (letter.kind == RuleLetter::Kind::Rule && letter.principal && f == *letter.principal &&
          f.is_fixpoint()) {
        // case 2: the unfolded fixpoint steps to its starred copy
        aut.add_transition(id, y, star_id.at(f));
      } else {
        // case 4: follow the trail
        for (const auto& [src, dst] : trail)
          if (src == f) aut.add_transition(id, y, member_id.at(dst));
      }
    }
    // case 3: a starred copy continues as the unfolding
    for (const auto& [f, id] : star_id) {
      Formula unfolding = f.unfold();
      for (const auto& [src, dst] : trail)
        if (src == unfolding) aut.add_transition(id, y, member_id.at(dst));
    }
  }

  aut.set_initial(init);
  aut.set_deterministic(false);
  aut.set_acceptance(std::move(acc));
  return result;
}

RuleLetter edge_letter(const NwDerivation& derivation, std::size_t from, std::size_t to) {
  const auto& node = derivation.nodes[from];
  bool is_child = std::find(node.children.begin(), node.children.end(), to) !=
                  node.children.end();
  if (is_child) {
    if (node.label.kind == RuleKind::Discharge) return RuleLetter::identity(node.sequent);
    return RuleLetter::rule(node.sequent, node.principal, derivation.nodes[to].sequent);
  }
  if (node.label.kind == RuleKind::Token && derivation.companion_of(from) == to)
    return RuleLetter::identity(node.sequent);
  throw NotALasso("consecutive nodes are not connected in the proof graph");
}

std::vector<RuleLetter> derivation_letters(const NwDerivation& derivation) {
  std::set<RuleLetter> letters;
  letters.insert(RuleLetter::init(derivation.nodes[0].sequent));
  auto adjacency = derivation.graph_with_back_edges();
  for (std::size_t v = 0; v < adjacency.size(); ++v)
    for (std::size_t w : adjacency[v]) letters.insert(edge_letter(derivation, v, w));
  return {letters.begin(), letters.end()};
}

Lasso branch_word(const NwDerivation& derivation, const ProofLasso& branch) {
  if (branch.cycle.empty()) throw NotALasso("empty cycle");
  Lasso word;
  std::vector<std::size_t> path = branch.stem;
  path.insert(path.end(), branch.cycle.begin(), branch.cycle.end());
  word.stem.push_back(RuleLetter::init(derivation.nodes[path[0]].sequent).encode());
  // The first |stem| edges lead into the cycle entry, the rest run around
  // the cycle; the wrap-around edge closes the loop.
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    std::string letter = edge_letter(derivation, path[i], path[i + 1]).encode();
    if (i < branch.stem.size())
      word.stem.push_back(letter);
    else
      word.loop.push_back(letter);
  }
  word.loop.push_back(
      edge_letter(derivation, branch.cycle.back(), branch.cycle.front()).encode());
  return word;
}

bool nu_trail_oracle(const NwDerivation& derivation, const ProofLasso& branch,
                     const ClosureTable& closure) {
  if (branch.cycle.empty()) throw NotALasso("empty cycle");
  std::vector<std::size_t> path = branch.stem;
  path.insert(path.end(), branch.cycle.begin(), branch.cycle.end());
  const std::size_t positions = path.size();
  const std::size_t cycle_start = branch.stem.size();

  // Dense ids for (position, formula).
  std::vector<std::map<Formula, std::size_t>> vertex(positions);
  std::size_t count = 0;
  for (std::size_t i = 0; i < positions; ++i)
    for (const Formula& f : derivation.nodes[path[i]].sequent) vertex[i][f] = count++;

  struct Edge {
    std::size_t from, to;
    std::optional<unsigned> unfold_priority;
  };
  std::vector<Edge> edges;
  auto add_edges = [&](std::size_t i, std::size_t j, const TrailStep& step) {
    for (const auto& [src, dst] : step.active) {
      std::optional<unsigned> priority;
      if (src.is_fixpoint() && src.unfold() == dst) priority = closure.omega(src);
      edges.push_back({vertex[i].at(src), vertex[j].at(dst), priority});
    }
    for (const auto& [src, dst] : step.passive)
      edges.push_back({vertex[i].at(src), vertex[j].at(dst), std::nullopt});
  };
  for (std::size_t i = 0; i < positions; ++i) {
    std::size_t j = i + 1 < positions ? i + 1 : cycle_start;
    std::size_t to_node = i + 1 < positions ? path[i + 1] : branch.cycle.front();
    RuleLetter letter = edge_letter(derivation, path[i], to_node);
    TrailStep step =
        letter.kind == RuleLetter::Kind::Rule
            ? trail_relation(letter.conclusion, letter.principal, letter.premise)
            : trail_relation(letter.conclusion, std::nullopt, letter.premise);
    add_edges(i, j, step);
  }

  // Reachability from the root formulas.
  std::vector<std::vector<std::size_t>> adjacency(count);
  for (const Edge& e : edges) adjacency[e.from].push_back(e.to);
  std::vector<bool> reachable(count, false);
  std::deque<std::size_t> todo;
  for (const auto& [f, id] : vertex[0]) {
    reachable[id] = true;
    todo.push_back(id);
  }
  while (!todo.empty()) {
    std::size_t v = todo.front();
    todo.pop_front();
    for (std::size_t w : adjacency[v])
      if (!reachable[w]) {
        reachable[w] = true;
        todo.push_back(w);
      }
  }

  // A nu-trail exists iff some reachable cycle's minimal unfolding priority
  // is even: for an even d, keep edges of priority >= d (or none) and look
  // for an SCC containing a priority-d unfolding edge.
  std::set<unsigned> evens;
  for (const Formula& f : closure.fixpoints())
    if (closure.omega(f) % 2 == 0) evens.insert(closure.omega(f));
  for (unsigned d : evens) {
    std::vector<std::vector<std::size_t>> sub(count);
    std::vector<Edge> candidates;
    for (const Edge& e : edges) {
      if (!reachable[e.from] || !reachable[e.to]) continue;
      if (e.unfold_priority && *e.unfold_priority < d) continue;
      sub[e.from].push_back(e.to);
      if (e.unfold_priority && *e.unfold_priority == d) candidates.push_back(e);
    }
    auto components = detail::strongly_connected_components(sub);
    std::vector<std::size_t> component_of(count, static_cast<std::size_t>(-1));
    for (std::size_t c = 0; c < components.size(); ++c)
      for (std::size_t v : components[c]) component_of[v] = c;
    for (const Edge& e : candidates)
      if (component_of[e.from] == component_of[e.to]) return true;
  }
  return false;
}

void validate_nw(const NwDerivation& derivation) {
  if (derivation.nodes.empty()) throw StructuralError("empty derivation");
  auto companions = derivation.discharge_nodes();
  std::set<std::string> tokens;
  for (const auto& node : derivation.nodes)
    if (node.label.kind == RuleKind::Discharge && !tokens.insert(node.label.token).second)
      throw StructuralError("duplicate discharge token " + node.label.token);

  for (std::size_t v = 0; v < derivation.nodes.size(); ++v) {
    const auto& node = derivation.nodes[v];
    if (node.sequent.empty()) throw StructuralError("empty sequent at node " + std::to_string(v));
    switch (node.label.kind) {
      case RuleKind::Resolve:
      case RuleKind::Compress:
        throw StructuralError("annotation rule in a plain derivation at node " +
                              std::to_string(v));
      case RuleKind::Token: {
        if (!node.children.empty()) throw StructuralError("token node with children");
        auto it = companions.find(node.label.token);
        if (it == companions.end())
          throw StructuralError("dangling discharge token " + node.label.token);
        std::size_t companion = it->second;
        const auto& cnode = derivation.nodes[companion];
        if (cnode.children.size() != 1 || !derivation.is_ancestor(cnode.children[0], v) ||
            cnode.children[0] == v)
          throw StructuralError("companion and its child must be proper ancestors of the leaf");
        if (cnode.sequent != node.sequent)
          throw StructuralError("discharged leaf and companion carry different sequents");
        break;
      }
      default: {
        std::vector<Sequent> premises;
        try {
          premises = apply_nw_rule(node.label.kind, node.principal, node.sequent);
        } catch (const NotApplicable& e) {
          throw StructuralError("node " + std::to_string(v) + ": " + e.what());
        }
        if (premises.size() != node.children.size())
          throw StructuralError("node " + std::to_string(v) + ": wrong number of children");
        std::vector<Sequent> actual;
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

std::vector<std::size_t> project_witness(const std::vector<std::size_t>& product_nodes,
                                         const std::vector<std::size_t>& node_of) {
  std::set<std::size_t> nodes;
  for (std::size_t p : product_nodes) nodes.insert(node_of[p]);
  return {nodes.begin(), nodes.end()};
}

}  // namespace

ProofCheckResult check_nw(const NwDerivation& derivation) {
  validate_nw(derivation);
  ClosureTable closure(derivation.nodes[0].sequent);
  TrackingAutomaton tracking = tracking_automaton(closure, derivation_letters(derivation));
  auto det = det_parity(tracking.automaton);
  const auto& rabin = std::get<RabinAcceptance>(det.automaton.acceptance());

  // Product of the proof graph with the deterministic automaton, driven by
  // the branch letters (duplicated initial letter first).
  auto adjacency = derivation.graph_with_back_edges();
  auto letter_of = [&](std::size_t u, std::size_t v) {
    return *det.automaton.letter_id(edge_letter(derivation, u, v).encode());
  };
  StateId start = det.automaton.step(
      det.automaton.initial(),
      *det.automaton.letter_id(RuleLetter::init(derivation.nodes[0].sequent).encode()));

  std::map<std::pair<std::size_t, StateId>, std::size_t> ids;
  std::vector<std::size_t> node_of;
  std::vector<StateId> state_of;
  std::deque<std::size_t> todo;
  auto intern = [&](std::size_t node, StateId state) {
    auto [it, inserted] = ids.emplace(std::make_pair(node, state), ids.size());
    if (inserted) {
      node_of.push_back(node);
      state_of.push_back(state);
      todo.push_back(it->second);
    }
    return it->second;
  };
  intern(0, start);
  std::vector<std::vector<std::size_t>> product_adjacency;
  while (!todo.empty()) {
    std::size_t p = todo.front();
    todo.pop_front();
    if (product_adjacency.size() <= p) product_adjacency.resize(p + 1);
    std::size_t u = node_of[p];
    StateId s = state_of[p];
    for (std::size_t v : adjacency[u]) {
      StateId next = det.automaton.step(s, letter_of(u, v));
      product_adjacency[p].push_back(intern(v, next));
    }
  }
  product_adjacency.resize(node_of.size());

  ConditionGraph graph;
  graph.num_nodes = node_of.size();
  graph.adjacency = product_adjacency;
  for (const RabinPair& pair : rabin.pairs) {
    ConditionGraph::Pair p;
    p.name = pair.name;
    p.inplay.assign(graph.num_nodes, true);
    p.good.assign(graph.num_nodes, false);
    p.bad.assign(graph.num_nodes, false);
    for (std::size_t v = 0; v < graph.num_nodes; ++v) {
      if (pair.bad.count(state_of[v])) p.bad[v] = true;
      if (pair.good.count(state_of[v])) p.good[v] = true;
    }
    graph.pairs.push_back(std::move(p));
  }

  ScsVerdict verdict = all_scs_good(graph);
  ProofCheckResult result;
  result.proof = verdict.good;
  if (!verdict.good)
    result.witness = project_witness({verdict.witness.begin(), verdict.witness.end()}, node_of);
  return result;
}

ProofCheckResult brute_check_nw(const NwDerivation& derivation) {
  validate_nw(derivation);
  ClosureTable closure(derivation.nodes[0].sequent);
  for (const ProofLasso& branch :
       enumerate_simple_lassos(derivation.graph_with_back_edges())) {
    if (!nu_trail_oracle(derivation, branch, closure))
      return {false, branch.cycle};
  }
  return {true, {}};
}

}  // namespace mutree
