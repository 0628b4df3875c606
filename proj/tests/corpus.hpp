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

// Shared corpus of NW derivations used by the proof-system tests and the
// acceptance suite: cyclic nu-proofs, cyclic mu-derivations that fail the
// trace condition, alternation examples, and finite proofs.  Closure
// members are built with unfold() rather than spelled out, since printed
// unfoldings shadow binder names.

#ifndef MUTREE_TESTS_CORPUS_HPP
#define MUTREE_TESTS_CORPUS_HPP

#include <string>
#include <vector>

#include "mutree/automaton.hpp"
#include "mutree/derivation.hpp"
#include "mutree/formula.hpp"
#include "mutree/nwproof.hpp"

namespace mutree::corpus {

inline StreamAutomaton fig1_nba() {
  StreamAutomaton aut;
  LetterId a = aut.add_letter("a");
  StateId q0 = aut.add_state("q0");
  StateId q1 = aut.add_state("q1");
  StateId q2 = aut.add_state("q2");
  aut.add_transition(q0, a, q1);
  aut.add_transition(q1, a, q1);
  aut.add_transition(q1, a, q2);
  aut.add_transition(q2, a, q1);
  aut.set_initial(q0);
  aut.set_deterministic(false);
  aut.set_acceptance(BuchiAcceptance{{q1}});
  return aut;
}

struct NwBuilder {
  NwDerivation d;

  std::size_t node(std::size_t parent, std::vector<Formula> formulas, RuleKind kind,
                   std::optional<Formula> principal = std::nullopt,
                   const std::string& token = "") {
    RuleLabel label = RuleLabel::plain(kind);
    if (kind == RuleKind::Discharge) label = RuleLabel::discharge(token);
    if (kind == RuleKind::Token) label = RuleLabel::leaf_token(token);
    return d.add_node(parent, make_sequent(std::move(formulas)), label, std::move(principal));
  }
};

struct NamedDerivation {
  std::string name;
  NwDerivation derivation;
  bool is_proof;
};

/// Cyclic derivation unfolding a single fixpoint through a chain of boxes:
/// a proof for nu, a trace-condition failure for mu.
inline NwDerivation fixpoint_box_cycle(const std::string& text) {
  Formula phi = parse_formula(text);
  RuleKind unfolding = phi.is_nu() ? RuleKind::NuRule : RuleKind::MuRule;
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {phi}, unfolding, phi);
  Formula body = phi.unfold();
  auto d = b.node(r, {body}, RuleKind::Discharge, std::nullopt, "x");
  std::size_t tip = d;
  Formula current = body;
  while (current.kind() == Formula::Kind::Box) {
    tip = b.node(tip, {current}, RuleKind::BoxRule, current);
    current = current.child();
  }
  auto v = b.node(tip, {current}, unfolding, current);
  b.node(v, {body}, RuleKind::Token, std::nullopt, "x");
  return b.d;
}

inline NwDerivation nu_box_proof() { return fixpoint_box_cycle("nu x. [] x"); }
inline NwDerivation mu_box_derivation() { return fixpoint_box_cycle("mu x. [] x"); }
inline NwDerivation nu_boxbox_proof() { return fixpoint_box_cycle("nu x. [] [] x"); }
inline NwDerivation mu_boxbox_derivation() { return fixpoint_box_cycle("mu x. [] [] x"); }

/// Nested greatest fixpoints: nu x. nu y. [] (x | y), cycling on the inner
/// unfolding.
inline NwDerivation nested_nu_proof() {
  Formula phi = parse_formula("nu x. nu y. [] (x | y)");
  Formula inner = phi.unfold();         // nu y. [] (phi | y)
  Formula box = inner.unfold();         // [] (phi | inner)
  Formula disj = box.child();           // phi | inner
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {phi}, RuleKind::NuRule, phi);
  auto d = b.node(r, {inner}, RuleKind::Discharge, std::nullopt, "x");
  auto n1 = b.node(d, {inner}, RuleKind::NuRule, inner);
  auto n2 = b.node(n1, {box}, RuleKind::BoxRule, box);
  auto n3 = b.node(n2, {disj}, RuleKind::OrRule, disj);
  auto n4 = b.node(n3, {phi, inner}, RuleKind::NuRule, phi);
  b.node(n4, {inner}, RuleKind::Token, std::nullopt, "x");
  return b.d;
}

/// nu y. mu x. ([] x | [] y): the box rule can chase either disjunct.  The
/// nu-loop yields a proof, the mu-loop does not.
inline NwDerivation alternation_derivation(bool take_nu_loop) {
  Formula phi = parse_formula("nu y. mu x. ([] x | [] y)");
  Formula mu = phi.unfold();    // mu x. ([] x | [] phi)
  Formula disj = mu.unfold();   // [] mu | [] phi
  Formula box_mu = disj.lhs();
  Formula box_phi = disj.rhs();
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {phi}, RuleKind::NuRule, phi);
  auto d = b.node(r, {mu}, RuleKind::Discharge, std::nullopt, "x");
  auto n1 = b.node(d, {mu}, RuleKind::MuRule, mu);
  auto n2 = b.node(n1, {disj}, RuleKind::OrRule, disj);
  auto n3 = b.node(n2, {box_mu, box_phi}, RuleKind::BoxRule,
                   take_nu_loop ? box_phi : box_mu);
  if (take_nu_loop) {
    auto n4 = b.node(n3, {phi}, RuleKind::NuRule, phi);
    b.node(n4, {mu}, RuleKind::Token, std::nullopt, "x");
  } else {
    b.node(n3, {mu}, RuleKind::Token, std::nullopt, "x");
  }
  return b.d;
}

inline NwDerivation alternation_nu_loop_proof() { return alternation_derivation(true); }
inline NwDerivation alternation_mu_loop_derivation() { return alternation_derivation(false); }

/// mu x. nu y. [] (x | y): the cycle lives on the sequent {mu, nu'} and
/// unfolds the inner nu, whose priority is even; a proof with m = 2.
inline NwDerivation alternation_inner_nu_proof() {
  Formula mu = parse_formula("mu x. nu y. [] (x | y)");
  Formula nu = mu.unfold();    // nu y. [] (mu | y)
  Formula box = nu.unfold();   // [] (mu | nu)
  Formula disj = box.child();  // mu | nu
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {mu}, RuleKind::MuRule, mu);
  auto n1 = b.node(r, {nu}, RuleKind::NuRule, nu);
  auto n2 = b.node(n1, {box}, RuleKind::BoxRule, box);
  auto n3 = b.node(n2, {disj}, RuleKind::OrRule, disj);
  auto d = b.node(n3, {mu, nu}, RuleKind::Discharge, std::nullopt, "x");
  auto n4 = b.node(d, {mu, nu}, RuleKind::NuRule, nu);
  auto n5 = b.node(n4, {mu, box}, RuleKind::BoxRule, box);
  auto n6 = b.node(n5, {disj}, RuleKind::OrRule, disj);
  b.node(n6, {mu, nu}, RuleKind::Token, std::nullopt, "x");
  return b.d;
}

/// Branching proof: nu x. ([] x & (p | ~p)), one branch cycles, the other
/// closes by Ax1.
inline NwDerivation branching_nu_proof() {
  Formula phi = parse_formula("nu x. ([] x & (p | ~p))");
  Formula conj = phi.unfold();  // [] phi & (p | ~p)
  Formula box = conj.lhs();
  Formula taut = conj.rhs();
  Formula p = taut.lhs();
  Formula np = taut.rhs();
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {phi}, RuleKind::NuRule, phi);
  auto a = b.node(r, {conj}, RuleKind::AndRule, conj);
  auto d = b.node(a, {box}, RuleKind::Discharge, std::nullopt, "x");
  auto l = b.node(d, {box}, RuleKind::BoxRule, box);
  auto v = b.node(l, {phi}, RuleKind::NuRule, phi);
  auto e = b.node(v, {conj}, RuleKind::AndRule, conj);
  b.node(e, {box}, RuleKind::Token, std::nullopt, "x");
  auto g = b.node(e, {taut}, RuleKind::OrRule, taut);
  b.node(g, {p, np}, RuleKind::Ax1);
  auto c = b.node(a, {taut}, RuleKind::OrRule, taut);
  b.node(c, {p, np}, RuleKind::Ax1);
  return b.d;
}

/// Finite proofs.
inline NwDerivation tautology_proof() {
  Formula taut = parse_formula("p | ~p");
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {taut}, RuleKind::OrRule, taut);
  b.node(r, {taut.lhs(), taut.rhs()}, RuleKind::Ax1);
  return b.d;
}

inline NwDerivation box_top_proof() {
  NwBuilder b;
  Formula box = parse_formula("[] true");
  auto r = b.node(NwDerivation::npos,
                  {box, parse_formula("<> q"), parse_formula("r")}, RuleKind::BoxRule, box);
  b.node(r, {Formula::top(), Formula::prop("q")}, RuleKind::Ax2);
  return b.d;
}

inline NwDerivation or_top_proof() {
  Formula disj = parse_formula("true | false");
  NwBuilder b;
  auto r = b.node(NwDerivation::npos, {disj}, RuleKind::OrRule, disj);
  b.node(r, {Formula::top(), Formula::bottom()}, RuleKind::Ax2);
  return b.d;
}

inline std::vector<NamedDerivation> all_nw_derivations() {
  return {
      {"nu-box", nu_box_proof(), true},
      {"mu-box", mu_box_derivation(), false},
      {"nu-boxbox", nu_boxbox_proof(), true},
      {"mu-boxbox", mu_boxbox_derivation(), false},
      {"nested-nu", nested_nu_proof(), true},
      {"alternation-nu-loop", alternation_nu_loop_proof(), true},
      {"alternation-mu-loop", alternation_mu_loop_derivation(), false},
      {"alternation-inner-nu", alternation_inner_nu_proof(), true},
      {"branching-nu", branching_nu_proof(), true},
      {"tautology", tautology_proof(), true},
      {"box-top", box_top_proof(), true},
      {"or-top", or_top_proof(), true},
  };
}

}  // namespace mutree::corpus

#endif  // MUTREE_TESTS_CORPUS_HPP
