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

#ifndef MUTREE_NWPROOF_HPP
#define MUTREE_NWPROOF_HPP

#include <optional>
#include <string>
#include <vector>

#include "mutree/automaton.hpp"
#include "mutree/closure.hpp"
#include "mutree/derivation.hpp"
#include "mutree/formula.hpp"

namespace mutree {

struct NotARuleInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotALasso : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Premises of a rule applied to a plain sequent.  Axioms return an empty
/// list; throws NotApplicable when the side conditions fail.
std::vector<Sequent> apply_nw_rule(RuleKind rule, const std::optional<Formula>& principal,
                                   const Sequent& sequent);

/// Active and passive formula connections across one rule instance.
struct TrailStep {
  Sequent conclusion;
  std::optional<Formula> principal;
  Sequent premise;
  std::vector<std::pair<Formula, Formula>> active;   // phi ->_C psi pairs
  std::vector<std::pair<Formula, Formula>> passive;  // identities on side formulas

  std::vector<std::pair<Formula, Formula>> trail() const;
};

/// Trail relation of a rule instance given as a (conclusion, principal,
/// premise) triple; throws NotARuleInstance when no rule matches.  With an
/// absent principal the identity trail (discharge / back-edge step) is
/// produced.
TrailStep trail_relation(const Sequent& conclusion, const std::optional<Formula>& principal,
                         const Sequent& premise);

/// A letter of the tracking automaton: a rule instance triple, the identity
/// step, or the duplicated initial letter.
struct RuleLetter {
  enum class Kind { Init, Rule, Identity } kind = Kind::Rule;
  Sequent conclusion;
  std::optional<Formula> principal;
  Sequent premise;

  static RuleLetter init(const Sequent& root);
  static RuleLetter identity(const Sequent& sequent);
  static RuleLetter rule(Sequent conclusion, std::optional<Formula> principal, Sequent premise);

  /// Stable structural encoding, used as the automaton letter name.
  std::string encode() const;
  auto operator<=>(const RuleLetter&) const = default;
};

/// The nondeterministic parity automaton over rule-instance letters that
/// accepts exactly the branch words carrying a nu-trail.  States: an
/// initial state, the closure members, and a starred copy of every fixpoint
/// member (visited right after its unfolding, carrying Omega's priority).
/// The alphabet is never enumerated; the automaton is materialized over the
/// letters supplied.
struct TrackingAutomaton {
  StreamAutomaton automaton;
  std::vector<RuleLetter> letters;  // indexed by letter id
};

TrackingAutomaton tracking_automaton(const ClosureTable& closure,
                                     const std::vector<RuleLetter>& letters);

/// The letter read when moving from node `from` along the edge to `to`:
/// identity for discharge nodes and back-edges, the rule instance
/// otherwise.
RuleLetter edge_letter(const NwDerivation& derivation, std::size_t from, std::size_t to);

/// All letters a derivation can emit (including the duplicated initial
/// letter and identity letters), deduplicated.
std::vector<RuleLetter> derivation_letters(const NwDerivation& derivation);

/// The branch word of a lasso path: the duplicated root letter followed by
/// the edge letters; the loop part consists of the cycle's edge letters.
/// Letters are rendered by RuleLetter::encode().
Lasso branch_word(const NwDerivation& derivation, const ProofLasso& branch);

/// Decides whether the lasso branch carries a nu-trail, by parity analysis
/// of the (position x formula) trail product.  Independent of the tracking
/// automaton machinery.
bool nu_trail_oracle(const NwDerivation& derivation, const ProofLasso& branch,
                     const ClosureTable& closure);

struct ProofCheckResult {
  bool proof = false;
  std::vector<std::size_t> witness;  // nodes of a bad strongly connected subgraph
};

/// Throws StructuralError when the derivation is not a well-formed NW
/// derivation (rule instances, discharge bookkeeping).
void validate_nw(const NwDerivation& derivation);

/// The checker: determinize the tracking automaton, run it over the proof
/// graph and ask the cycle engine whether some strongly connected subgraph
/// escapes every Rabin pair.
ProofCheckResult check_nw(const NwDerivation& derivation);

/// Oracle variant: enumerates all simple lasso branches and applies
/// nu_trail_oracle to each.
ProofCheckResult brute_check_nw(const NwDerivation& derivation);

}  // namespace mutree

#endif  // MUTREE_NWPROOF_HPP
