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

#ifndef MUTREE_BTPROOF_HPP
#define MUTREE_BTPROOF_HPP

#include <optional>
#include <string>
#include <vector>

#include "mutree/closure.hpp"
#include "mutree/derivation.hpp"
#include "mutree/formula.hpp"
#include "mutree/nwproof.hpp"

namespace mutree {

struct TranslationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// sigma restricted to position k relative to the sequent: components above
/// k are replaced by the minimal leaf of the position's tree.
TSeqAnnotation restrict_annotation(const TSeqAnnotation& sigma, unsigned k,
                                   const AnnotatedSequent& sequent);

/// Does s occur in Gamma_k^N, i.e. is s a prefix of some annotation string
/// at position k?
bool occurs_at(const AnnotatedSequent& sequent, unsigned k, const BitString& s);

/// Premises of a BT rule.  The principal element is required for the
/// logical rules; Resolve identifies the duplicated formula via the
/// principal and Compress carries its parameters in the label.
std::vector<AnnotatedSequent> apply_bt_rule(const RuleLabel& label,
                                            const std::optional<AnnotatedFormula>& principal,
                                            const AnnotatedSequent& sequent,
                                            const ClosureTable& closure);

/// First applicable Resolve instance in canonical order: the duplicated
/// formula together with its two top annotations.
struct ResolveInstance {
  Formula formula;
  TSeqAnnotation keep;    // the greater annotation
  TSeqAnnotation remove;  // the smaller one
};
std::optional<ResolveInstance> find_resolve(const AnnotatedSequent& sequent);

/// First applicable Compress instance: positions ascending, pattern length
/// descending, then lexicographic.
struct CompressInstance {
  unsigned position = 0;
  BitString pattern;
};
std::optional<CompressInstance> find_compress(const AnnotatedSequent& sequent);

/// Exhaustive Resolve-then-Compress normalization; the steps record the
/// rule applied at each intermediate sequent (in application order).
struct SaturationResult {
  AnnotatedSequent sequent;  // the stable sequent
  struct Step {
    RuleLabel label;
    std::optional<Formula> principal;
    AnnotatedSequent premise;  // sequent after this step
  };
  std::vector<Step> steps;
};
SaturationResult saturate(const AnnotatedSequent& sequent, const ClosureTable& closure);

struct BtCheckReport {
  bool proof = false;
  std::vector<std::size_t> witness;  // bad SCS on failure
  /// the chosen pair per inspected component on success (trace, optional)
  std::vector<std::pair<std::string, std::string>> trace;
};

/// Throws StructuralError on malformed derivations (rule instances, the
/// Resolve/Compress priority discipline, discharge bookkeeping).
void validate_bt(const BtDerivation& derivation, const ClosureTable& closure);

/// The soundness condition: every strongly connected subgraph of the proof
/// graph has a pair (k,s) that is preserved and progresses on it.
BtCheckReport check_bt(const BtDerivation& derivation);

/// Oracle variant of check_bt using the brute-force subset engine.
BtCheckReport brute_check_bt(const BtDerivation& derivation);

/// Drops the annotations and splices out the Resolve/Compress bookkeeping
/// nodes; the remaining rules are NW rules on the erased sequents.
NwDerivation erase_to_nw(const BtDerivation& derivation);

/// Coinductive unfolding of a cyclic NW proof into a BT proof: sequents are
/// annotated starting from all-epsilon, Resolve/Compress are inserted
/// whenever applicable, and a back-edge is tied at the first node whose
/// (position in the NW proof graph, annotated sequent) pair repeats an
/// ancestor's with some (k,s) preserved and progressing on the connecting
/// path.  The result is validated with check_bt.
BtDerivation translate_nw_to_bt(const NwDerivation& derivation, std::size_t node_budget = 100000);

struct ProveOptions {
  std::size_t node_budget = 100000;  // hard cap on derivation nodes
  unsigned retry_limit = 16;         // re-searches after a failed global check
};

/// Bounded and-or proof search for Gamma^epsilon.  Returns a derivation
/// accepted by check_bt or nothing-within-budget.
std::optional<BtDerivation> prove(const Sequent& sequent, const ProveOptions& options = {});

/// The budget the search actually uses: the paper-style bound
/// |Clos|^(2 (m/2+1) |Clos|) truncated at the configured cap.
std::size_t prove_budget(const ClosureTable& closure, std::size_t cap);

}  // namespace mutree

#endif  // MUTREE_BTPROOF_HPP
