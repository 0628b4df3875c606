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

#ifndef MUTREE_DETERMINIZE_HPP
#define MUTREE_DETERMINIZE_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mutree/automaton.hpp"
#include "mutree/bitstring.hpp"

namespace mutree {

enum class Colour : std::uint8_t { White, Green, Red };

char colour_letter(Colour colour);

/// Macrostate of the determinized Buchi automaton: every surviving source
/// state carries a binary string; the strings are the leaves of a binary
/// tree whose nodes are coloured.
struct Macrostate {
  std::map<StateId, BitString> assignment;  // f
  std::map<BitString, Colour> colours;      // domain = tree(ran f)

  BinTree tree() const;
  std::set<BitString> leaf_strings() const;
  auto operator<=>(const Macrostate&) const = default;
};

/// Macrostate of the determinized parity automaton: annotations are tuples
/// of strings, one per even priority, each position carrying its own
/// coloured tree (a treetop: the all-zeros leaf may be implicit).
struct ParityMacrostate {
  std::map<StateId, TSeqAnnotation> assignment;
  std::vector<std::map<BitString, Colour>> colours;  // indexed by position k/2

  BinTree tree(unsigned position) const;
  std::set<BitString> leaf_strings(unsigned position) const;
  auto operator<=>(const ParityMacrostate&) const = default;
};

/// A step-4 witness: the node t and which of the two cases applies.
struct Witness {
  BitString node;
  bool zero_child;  // true: t0 in tree, t1 not (case a); false: the mirror
  auto operator<=>(const Witness&) const = default;
};

/// Order in which applicable witnesses are consumed; the default takes the
/// first one.  The transition result is witness-order independent; the
/// hook exists so tests can shuffle.
using WitnessPicker = std::function<std::size_t(const std::vector<Witness>&)>;

/// One transition of the Buchi determinization: Move, Append, Resolve,
/// Compress/Colour.
Macrostate det_buchi_step(const Macrostate& state, LetterId letter, const StreamAutomaton& src,
                          const WitnessPicker& picker = {});

/// One transition of the parity determinization: Move, Reduce, Append,
/// Resolve, Compress/Colour per even position.
ParityMacrostate det_parity_step(const ParityMacrostate& state, LetterId letter,
                                 const StreamAutomaton& src, const WitnessPicker& picker = {});

template <class State>
struct DeterminizationResult {
  StreamAutomaton automaton;      // deterministic Rabin
  std::vector<State> macrostates; // indexed by state id of `automaton`
};

/// Explores all macrostates reachable from {b_I -> epsilon} and emits the
/// deterministic Rabin automaton with one pair per binary string occurring
/// in any reached tree.
DeterminizationResult<Macrostate> det_buchi(const StreamAutomaton& src);

/// Parity variant; Rabin pairs are indexed by (position, string).
DeterminizationResult<ParityMacrostate> det_parity(const StreamAutomaton& src);

/// The union automaton B = A + copies A_k (even k <= m) with jump
/// transitions, F the union of the F_k.  Without even priorities this is A
/// with an empty Buchi set.
StreamAutomaton parity_to_buchi(const StreamAutomaton& src);

/// Stable text rendering of the macrostate dictionary (leaf -> states,
/// node -> colour), used by the CLI --dict output and the golden tests.
std::string render_dictionary(const DeterminizationResult<Macrostate>& result,
                              const StreamAutomaton& src);
std::string render_dictionary(const DeterminizationResult<ParityMacrostate>& result,
                              const StreamAutomaton& src);

}  // namespace mutree

#endif  // MUTREE_DETERMINIZE_HPP
