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

#include "mutree/determinize.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace mutree {

char colour_letter(Colour colour) {
  switch (colour) {
    case Colour::White: return 'w';
    case Colour::Green: return 'g';
    case Colour::Red: return 'r';
  }
  return '?';
}

namespace {

const char* colour_name(Colour colour) {
  switch (colour) {
    case Colour::White: return "white";
    case Colour::Green: return "green";
    case Colour::Red: return "red";
  }
  return "?";
}

std::set<BitString> collect(const std::vector<BitString>& strings) {
  return {strings.begin(), strings.end()};
}

/// Step 4 for one position.  `strings` holds the position strings of the
/// entries and is rewritten in place; the returned map is the colouring of
/// the final tree.  Marks persist across witness iterations, red absorbs
/// green, and marks are placed against the post-substitution tree.
std::map<BitString, Colour> compress_and_colour(std::vector<BitString>& strings,
                                                bool parity_mode,
                                                const WitnessPicker& picker) {
  std::map<BitString, Colour> marks;
  auto mark_red = [&](const BitString& s) { marks[s] = Colour::Red; };
  auto mark_green = [&](const BitString& s) {
    auto it = marks.find(s);
    if (it == marks.end() || it->second != Colour::Red) marks[s] = Colour::Green;
  };

  while (true) {
    BinTree tree = tree_of(collect(strings), parity_mode);
    std::vector<Witness> witnesses;
    for (const BitString& t : tree) {
      bool zero = tree.count(t.append(false)) > 0;
      bool one = tree.count(t.append(true)) > 0;
      if (zero && !one) witnesses.push_back({t, true});
      if (!zero && one && !(parity_mode && t.all_zeros())) witnesses.push_back({t, false});
    }
    if (witnesses.empty()) {
      std::map<BitString, Colour> colours;
      for (const BitString& s : tree) {
        auto it = marks.find(s);
        colours[s] = it == marks.end() ? Colour::White : it->second;
      }
      return colours;
    }

    const Witness& witness = witnesses[picker ? picker(witnesses) % witnesses.size() : 0];
    const BitString& t = witness.node;
    BitString pattern = t.append(!witness.zero_child);
    for (BitString& s : strings)
      if (is_prefix(pattern, s)) s = substitute(s, pattern, t);

    BinTree rewritten = tree_of(collect(strings), parity_mode);
    if (!witness.zero_child) {
      // Case (b): nodes whose zero-extension is t turn green unless red.
      for (const BitString& s : rewritten) {
        if (is_prefix(s, t) && BitString(t.str().substr(s.size())).all_zeros()) mark_green(s);
      }
    }
    for (const BitString& s : rewritten)
      if (is_strict_prefix(t, s)) mark_red(s);
  }
}

}  // namespace

BinTree Macrostate::tree() const { return tree_of(leaf_strings(), false); }

std::set<BitString> Macrostate::leaf_strings() const {
  std::set<BitString> out;
  for (const auto& [state, s] : assignment) out.insert(s);
  return out;
}

BinTree ParityMacrostate::tree(unsigned position) const {
  return tree_of(leaf_strings(position), true);
}

std::set<BitString> ParityMacrostate::leaf_strings(unsigned position) const {
  std::set<BitString> out;
  for (const auto& [state, sigma] : assignment) out.insert(sigma.at(position));
  return out;
}

Macrostate det_buchi_step(const Macrostate& state, LetterId letter, const StreamAutomaton& src,
                          const WitnessPicker& picker) {
  const auto& buchi = std::get<BuchiAcceptance>(src.acceptance());
  if (letter >= src.num_letters()) throw UnknownLetter("letter id out of range");

  // Move + Append: the appended bit depends on the target state only.
  std::map<StateId, std::vector<BitString>> candidates;
  for (const auto& [a, s] : state.assignment)
    for (StateId b : src.successors(a, letter))
      candidates[b].push_back(s.append(buchi.accepting.count(b) > 0));

  // Resolve: keep the lexicographically greatest string per state.
  std::vector<StateId> states;
  std::vector<BitString> strings;
  for (auto& [b, options] : candidates) {
    states.push_back(b);
    strings.push_back(*std::max_element(options.begin(), options.end(), lex_less));
  }

  Macrostate next;
  next.colours = compress_and_colour(strings, false, picker);
  for (std::size_t i = 0; i < states.size(); ++i) next.assignment[states[i]] = strings[i];
  return next;
}

namespace {

std::optional<unsigned> max_even_priority(const ParityAcceptance& acc) {
  std::optional<unsigned> m;
  for (unsigned p : acc.priority)
    if (p % 2 == 0) m = std::max(m.value_or(0), p);
  return m;
}

}  // namespace

ParityMacrostate det_parity_step(const ParityMacrostate& state, LetterId letter,
                                 const StreamAutomaton& src, const WitnessPicker& picker) {
  const auto& parity = std::get<ParityAcceptance>(src.acceptance());
  if (letter >= src.num_letters()) throw UnknownLetter("letter id out of range");
  std::optional<unsigned> m = max_even_priority(parity);
  const unsigned positions = m ? *m / 2 + 1 : 0;

  // minL of the pre-transition trees, used by Reduce.
  std::vector<BitString> pre_min(positions);
  if (!state.assignment.empty())
    for (unsigned i = 0; i < positions; ++i) pre_min[i] = min_leaf(state.tree(2 * i));

  // Move.
  std::map<StateId, std::vector<TSeqAnnotation>> candidates;
  for (const auto& [a, sigma] : state.assignment)
    for (StateId b : src.successors(a, letter)) candidates[b].push_back(sigma);

  // Reduce + Append; both depend on the target state's priority only.
  for (auto& [b, options] : candidates) {
    unsigned priority = parity.priority[b];
    for (TSeqAnnotation& sigma : options) {
      for (unsigned i = 0; i < positions; ++i) {
        unsigned j = 2 * i;
        if (j > priority) sigma.set(j, pre_min[i]);
      }
      for (unsigned i = 0; i < positions; ++i) {
        unsigned j = 2 * i;
        sigma = sigma.append_at(j, priority % 2 == 0 && j == priority);
      }
    }
  }

  // Resolve: keep the greatest annotation per state.
  std::vector<StateId> states;
  std::vector<TSeqAnnotation> annotations;
  for (auto& [b, options] : candidates) {
    states.push_back(b);
    annotations.push_back(*std::max_element(options.begin(), options.end(), tseq_less));
  }

  // Compress/Colour independently per even position.
  ParityMacrostate next;
  next.colours.resize(positions);
  for (unsigned i = 0; i < positions; ++i) {
    std::vector<BitString> strings;
    strings.reserve(annotations.size());
    for (const TSeqAnnotation& sigma : annotations) strings.push_back(sigma.at(2 * i));
    next.colours[i] = compress_and_colour(strings, true, picker);
    for (std::size_t e = 0; e < annotations.size(); ++e) annotations[e].set(2 * i, strings[e]);
  }
  for (std::size_t e = 0; e < states.size(); ++e) next.assignment[states[e]] = annotations[e];
  return next;
}

DeterminizationResult<Macrostate> det_buchi(const StreamAutomaton& src) {
  assert(std::holds_alternative<BuchiAcceptance>(src.acceptance()));

  Macrostate initial;
  initial.assignment[src.initial()] = BitString();
  initial.colours[BitString()] = Colour::White;

  DeterminizationResult<Macrostate> result;
  StreamAutomaton& aut = result.automaton;
  for (LetterId y = 0; y < src.num_letters(); ++y) aut.add_letter(src.letter_name(y));

  std::map<Macrostate, StateId> ids;
  std::deque<StateId> todo;
  auto intern = [&](const Macrostate& state) {
    auto it = ids.find(state);
    if (it != ids.end()) return it->second;
    StateId id = aut.add_state("m" + std::to_string(ids.size()));
    ids.emplace(state, id);
    result.macrostates.push_back(state);
    todo.push_back(id);
    return id;
  };
  intern(initial);
  aut.set_initial(0);
  while (!todo.empty()) {
    StateId id = todo.front();
    todo.pop_front();
    for (LetterId y = 0; y < src.num_letters(); ++y) {
      Macrostate next = det_buchi_step(result.macrostates[id], y, src);
      StateId target = intern(next);
      aut.add_transition(id, y, target);
    }
  }

  // One Rabin pair per binary string in play anywhere.
  std::set<BitString> strings;
  for (const Macrostate& state : result.macrostates)
    for (const auto& [s, colour] : state.colours) strings.insert(s);
  RabinAcceptance acc;
  for (const BitString& s : strings) {
    RabinPair pair;
    pair.name = "s=" + s.str();
    for (StateId id = 0; id < result.macrostates.size(); ++id) {
      const auto& colours = result.macrostates[id].colours;
      auto it = colours.find(s);
      if (it == colours.end() || it->second == Colour::Red)
        pair.bad.insert(id);
      else if (it->second == Colour::Green)
        pair.good.insert(id);
    }
    acc.pairs.push_back(std::move(pair));
  }
  aut.set_acceptance(std::move(acc));
  aut.set_deterministic(true);
  return result;
}

DeterminizationResult<ParityMacrostate> det_parity(const StreamAutomaton& src) {
  const auto& parity = std::get<ParityAcceptance>(src.acceptance());
  std::optional<unsigned> m = max_even_priority(parity);
  const unsigned positions = m ? *m / 2 + 1 : 0;

  ParityMacrostate initial;
  initial.assignment[src.initial()] = TSeqAnnotation::epsilons(m);
  initial.colours.resize(positions);
  for (unsigned i = 0; i < positions; ++i) initial.colours[i][BitString()] = Colour::White;

  DeterminizationResult<ParityMacrostate> result;
  StreamAutomaton& aut = result.automaton;
  for (LetterId y = 0; y < src.num_letters(); ++y) aut.add_letter(src.letter_name(y));

  std::map<ParityMacrostate, StateId> ids;
  std::deque<StateId> todo;
  auto intern = [&](const ParityMacrostate& state) {
    auto it = ids.find(state);
    if (it != ids.end()) return it->second;
    StateId id = aut.add_state("m" + std::to_string(ids.size()));
    ids.emplace(state, id);
    result.macrostates.push_back(state);
    todo.push_back(id);
    return id;
  };
  intern(initial);
  aut.set_initial(0);
  while (!todo.empty()) {
    StateId id = todo.front();
    todo.pop_front();
    for (LetterId y = 0; y < src.num_letters(); ++y) {
      ParityMacrostate next = det_parity_step(result.macrostates[id], y, src);
      StateId target = intern(next);
      aut.add_transition(id, y, target);
    }
  }

  // One Rabin pair per (even position, binary string) in play anywhere.
  std::set<std::pair<unsigned, BitString>> indices;
  for (const ParityMacrostate& state : result.macrostates)
    for (unsigned i = 0; i < state.colours.size(); ++i)
      for (const auto& [s, colour] : state.colours[i]) indices.emplace(2 * i, s);
  RabinAcceptance acc;
  for (const auto& [k, s] : indices) {
    RabinPair pair;
    pair.name = "k=" + std::to_string(k) + " s=" + s.str();
    for (StateId id = 0; id < result.macrostates.size(); ++id) {
      const auto& colours = result.macrostates[id].colours[k / 2];
      auto it = colours.find(s);
      if (it == colours.end() || it->second == Colour::Red)
        pair.bad.insert(id);
      else if (it->second == Colour::Green)
        pair.good.insert(id);
    }
    acc.pairs.push_back(std::move(pair));
  }
  aut.set_acceptance(std::move(acc));
  aut.set_deterministic(true);
  return result;
}

StreamAutomaton parity_to_buchi(const StreamAutomaton& src) {
  const auto& parity = std::get<ParityAcceptance>(src.acceptance());
  std::optional<unsigned> m = max_even_priority(parity);

  StreamAutomaton out;
  for (LetterId y = 0; y < src.num_letters(); ++y) out.add_letter(src.letter_name(y));
  for (StateId q = 0; q < src.num_states(); ++q) out.add_state(src.state_name(q));

  BuchiAcceptance acc;
  // Copies A_k keep the states of priority >= k; F_k holds priority == k.
  std::map<std::pair<StateId, unsigned>, StateId> copy_ids;
  if (m) {
    for (unsigned k = 0; k <= *m; k += 2)
      for (StateId q = 0; q < src.num_states(); ++q) {
        if (parity.priority[q] < k) continue;
        StateId id = out.add_state(src.state_name(q) + "@" + std::to_string(k));
        copy_ids[{q, k}] = id;
        if (parity.priority[q] == k) acc.accepting.insert(id);
      }
  }
  for (StateId q = 0; q < src.num_states(); ++q)
    for (LetterId y = 0; y < src.num_letters(); ++y)
      for (StateId r : src.successors(q, y)) {
        out.add_transition(q, y, r);
        if (!m) continue;
        for (unsigned k = 0; k <= *m; k += 2) {
          auto target = copy_ids.find({r, k});
          if (target == copy_ids.end()) continue;
          out.add_transition(q, y, target->second);  // jump into the copy
          auto source = copy_ids.find({q, k});
          if (source != copy_ids.end()) out.add_transition(source->second, y, target->second);
        }
      }
  out.set_initial(src.initial());
  out.set_deterministic(false);
  out.set_acceptance(std::move(acc));
  return out;
}

namespace {

std::string quoted(const BitString& s) { return "\"" + s.str() + "\""; }

}  // namespace

std::string render_dictionary(const DeterminizationResult<Macrostate>& result,
                              const StreamAutomaton& src) {
  std::ostringstream out;
  out << "macrostates: " << result.macrostates.size() << "\n";
  for (StateId id = 0; id < result.macrostates.size(); ++id) {
    const Macrostate& state = result.macrostates[id];
    out << result.automaton.state_name(id) << ":\n";
    for (const auto& [q, s] : state.assignment)
      out << "  f: " << src.state_name(q) << " -> " << quoted(s) << "\n";
    for (const auto& [s, colour] : state.colours)
      out << "  c: " << quoted(s) << " " << colour_name(colour) << "\n";
  }
  return out.str();
}

std::string render_dictionary(const DeterminizationResult<ParityMacrostate>& result,
                              const StreamAutomaton& src) {
  std::ostringstream out;
  out << "macrostates: " << result.macrostates.size() << "\n";
  for (StateId id = 0; id < result.macrostates.size(); ++id) {
    const ParityMacrostate& state = result.macrostates[id];
    out << result.automaton.state_name(id) << ":\n";
    for (const auto& [q, sigma] : state.assignment) {
      out << "  f: " << src.state_name(q) << " -> (";
      for (std::size_t i = 0; i < sigma.positions(); ++i) {
        if (i > 0) out << ",";
        out << quoted(sigma.components()[i]);
      }
      out << ")\n";
    }
    for (unsigned i = 0; i < state.colours.size(); ++i)
      for (const auto& [s, colour] : state.colours[i])
        out << "  c[" << 2 * i << "]: " << quoted(s) << " " << colour_name(colour) << "\n";
  }
  return out.str();
}

}  // namespace mutree
