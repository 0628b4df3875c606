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

#include <random>

#include "doctest.h"
#include "mutree/automaton.hpp"

using namespace mutree;

namespace {

BitString bs(const std::string& bits) { return BitString(bits); }

StreamAutomaton fig1_nba() {
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

StreamAutomaton random_nba(std::mt19937_64& rng) {
  StreamAutomaton aut;
  std::uniform_int_distribution<int> states_dist(1, 4);
  std::uniform_int_distribution<int> letters_dist(1, 2);
  int n = states_dist(rng);
  int letters = letters_dist(rng);
  for (int y = 0; y < letters; ++y) aut.add_letter(std::string(1, static_cast<char>('a' + y)));
  for (int i = 0; i < n; ++i) aut.add_state("q" + std::to_string(i));
  std::uniform_int_distribution<int> fanout(0, 3);
  std::uniform_int_distribution<StateId> target(0, static_cast<StateId>(n - 1));
  for (StateId q = 0; q < aut.num_states(); ++q)
    for (LetterId y = 0; y < aut.num_letters(); ++y) {
      int count = fanout(rng);
      for (int i = 0; i < count; ++i) aut.add_transition(q, y, target(rng));
    }
  aut.set_initial(target(rng));
  aut.set_deterministic(false);
  BuchiAcceptance acc;
  std::bernoulli_distribution coin(0.5);
  for (StateId q = 0; q < aut.num_states(); ++q)
    if (coin(rng)) acc.accepting.insert(q);
  aut.set_acceptance(acc);
  return aut;
}

StreamAutomaton random_parity(std::mt19937_64& rng) {
  StreamAutomaton aut = random_nba(rng);
  ParityAcceptance acc;
  std::uniform_int_distribution<unsigned> prio(0, 3);
  for (StateId q = 0; q < aut.num_states(); ++q) acc.priority.push_back(prio(rng));
  aut.set_acceptance(acc);
  return aut;
}

Macrostate macrostate(std::vector<std::pair<StateId, std::string>> assignment,
                      std::vector<std::pair<std::string, Colour>> colours) {
  Macrostate state;
  for (auto& [q, s] : assignment) state.assignment[q] = bs(s);
  for (auto& [s, c] : colours) state.colours[bs(s)] = c;
  return state;
}

}  // namespace

TEST_CASE("figure example: the four macrostates") {
  StreamAutomaton src = fig1_nba();
  auto result = det_buchi(src);

  REQUIRE(result.macrostates.size() == 4);

  Macrostate m0 = macrostate({{0, ""}}, {{"", Colour::White}});
  Macrostate m1 = macrostate({{1, ""}}, {{"", Colour::Green}});
  Macrostate m2 = macrostate({{2, "0"}, {1, "1"}},
                             {{"", Colour::White}, {"0", Colour::White}, {"1", Colour::White}});
  Macrostate m3 = macrostate({{2, "0"}, {1, "1"}},
                             {{"", Colour::Green}, {"0", Colour::Red}, {"1", Colour::Red}});
  CHECK(result.macrostates[0] == m0);
  CHECK(result.macrostates[1] == m1);
  CHECK(result.macrostates[2] == m2);
  CHECK(result.macrostates[3] == m3);

  // m3 is a self loop; the chain is m0 -> m1 -> m2 -> m3.
  const StreamAutomaton& det = result.automaton;
  CHECK(det.is_deterministic());
  CHECK(det.step(0, 0) == 1);
  CHECK(det.step(1, 0) == 2);
  CHECK(det.step(2, 0) == 3);
  CHECK(det.step(3, 0) == 3);

  CHECK(accepts_lasso(det, Lasso{{}, {"a"}}));
  CHECK(run_prefix(det, Lasso{{}, {"a"}}, 4) ==
        std::vector<StateId>{0, 1, 2, 3, 3});
}

TEST_CASE("figure example: intermediate strings after move+append") {
  // From m2, moving along a and appending reaches {q1->01, q2->10, q1->11};
  // resolve drops q1->01 and compression yields m3.
  StreamAutomaton src = fig1_nba();
  auto result = det_buchi(src);
  Macrostate m2 = result.macrostates[2];

  // Reproduce steps 1-2 by hand.
  const auto& acc = std::get<BuchiAcceptance>(src.acceptance());
  std::multiset<std::pair<StateId, BitString>> moved;
  for (const auto& [a, s] : m2.assignment)
    for (StateId b : src.successors(a, 0))
      moved.emplace(b, s.append(acc.accepting.count(b) > 0));
  std::multiset<std::pair<StateId, BitString>> expected{
      {1, bs("01")}, {2, bs("10")}, {1, bs("11")}};
  CHECK(moved == expected);

  Macrostate m3 = det_buchi_step(m2, 0, src);
  CHECK(m3 == result.macrostates[3]);
}

TEST_CASE("single non-accepting state never turns green") {
  StreamAutomaton aut;
  LetterId a = aut.add_letter("a");
  StateId q = aut.add_state("q");
  aut.add_transition(q, a, q);
  aut.set_initial(q);
  aut.set_acceptance(BuchiAcceptance{});
  auto result = det_buchi(aut);
  CHECK(result.macrostates.size() == 1);
  for (const auto& [s, colour] : result.macrostates[0].colours)
    CHECK(colour != Colour::Green);
  CHECK_FALSE(accepts_lasso(result.automaton, Lasso{{}, {"a"}}));
}

TEST_CASE("Buchi determinization preserves the language on lassos") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 40; ++round) {
    StreamAutomaton src = random_nba(rng);
    auto result = det_buchi(src);
    CompareReport report = compare_on_lassos(src, result.automaton, 3, 4);
    if (!report.agree) {
      CAPTURE(round);
      CAPTURE(report.verdict_a);
      CAPTURE(report.verdict_b);
    }
    REQUIRE(report.agree);
  }
}

TEST_CASE("macrostate structural invariants on random NBAs") {
  std::mt19937_64 rng(32);
  for (int round = 0; round < 30; ++round) {
    StreamAutomaton src = random_nba(rng);
    auto result = det_buchi(src);
    const double n = static_cast<double>(src.num_states());
    const double state_bound = std::pow(6.0, 2 * n - 1) * std::pow(n + 1, n + 1);
    CHECK(static_cast<double>(result.macrostates.size()) <= state_bound);
    const auto& rabin = std::get<RabinAcceptance>(result.automaton.acceptance());
    CHECK(static_cast<double>(rabin.pairs.size()) <= std::pow(2.0, n + 1));
    for (const Macrostate& state : result.macrostates) {
      // epsilon never red
      auto it = state.colours.find(bs(""));
      if (it != state.colours.end()) CHECK(it->second != Colour::Red);
      // string lengths bounded by |B|
      for (const auto& [q, s] : state.assignment) CHECK(s.size() <= src.num_states());
      // ran(f) is a set of leaves of a binary tree; colour domain matches
      BinTree tree = tree_of_checked(state.leaf_strings(), false);
      CHECK(tree.size() == state.colours.size());
      for (const auto& [s, colour] : state.colours) CHECK(tree.count(s) == 1);
    }
  }
}

TEST_CASE("witness order independence") {
  std::mt19937_64 rng(33);
  std::mt19937_64 shuffle_rng(34);
  int cases = 0;
  while (cases < 40) {
    StreamAutomaton src = random_nba(rng);
    auto result = det_buchi(src);
    for (StateId id = 0; id < result.macrostates.size() && cases < 40; ++id) {
      for (LetterId y = 0; y < src.num_letters() && cases < 40; ++y) {
        Macrostate reference = det_buchi_step(result.macrostates[id], y, src);
        for (int round = 0; round < 10; ++round) {
          WitnessPicker random_pick = [&](const std::vector<Witness>& witnesses) {
            std::uniform_int_distribution<std::size_t> dist(0, witnesses.size() - 1);
            return dist(shuffle_rng);
          };
          Macrostate shuffled = det_buchi_step(result.macrostates[id], y, src, random_pick);
          REQUIRE(shuffled == reference);
        }
        ++cases;
      }
    }
  }
}

TEST_CASE("parity step on the one-state even self loop") {
  StreamAutomaton aut;
  LetterId a = aut.add_letter("a");
  StateId q = aut.add_state("q");
  aut.add_transition(q, a, q);
  aut.set_initial(q);
  aut.set_acceptance(ParityAcceptance{{0}});

  auto result = det_parity(aut);
  REQUIRE(result.macrostates.size() == 3);

  // step 1: append puts a 1; the treetop patch supplies the 0 leaf and the
  // all-zeros exclusion keeps epsilon from being compressed away.
  const ParityMacrostate& p1 = result.macrostates[1];
  CHECK(p1.assignment.at(q) == TSeqAnnotation({bs("1")}));
  CHECK(p1.colours[0] ==
        std::map<BitString, Colour>{
            {bs(""), Colour::White}, {bs("0"), Colour::White}, {bs("1"), Colour::White}});

  // step 2: append then compress at witness 1, green at (0,1).
  const ParityMacrostate& p2 = result.macrostates[2];
  CHECK(p2.assignment.at(q) == TSeqAnnotation({bs("1")}));
  CHECK(p2.colours[0].at(bs("1")) == Colour::Green);
  CHECK(result.automaton.step(2, a) == 2);

  CHECK(accepts_lasso(result.automaton, Lasso{{}, {"a"}}));
  const auto& rabin = std::get<RabinAcceptance>(result.automaton.acceptance());
  bool found = false;
  for (const auto& pair : rabin.pairs)
    if (pair.name == "k=0 s=1" && !pair.good.empty()) found = true;
  CHECK(found);
}

TEST_CASE("parity with odd priority only rejects") {
  StreamAutomaton aut;
  LetterId a = aut.add_letter("a");
  StateId q = aut.add_state("q");
  aut.add_transition(q, a, q);
  aut.set_initial(q);
  aut.set_acceptance(ParityAcceptance{{1}});
  auto result = det_parity(aut);
  CHECK_FALSE(accepts_lasso(result.automaton, Lasso{{}, {"a"}}));
  // no even priority: plain subsets, empty Rabin condition
  CHECK(std::get<RabinAcceptance>(result.automaton.acceptance()).pairs.empty());
  for (const auto& state : result.macrostates) {
    for (const auto& [s, sigma] : state.assignment) CHECK(sigma.positions() == 0);
    CHECK(state.colours.empty());
  }
}

TEST_CASE("odd-priority states append zero everywhere") {
  StreamAutomaton aut;
  LetterId a = aut.add_letter("a");
  StateId q0 = aut.add_state("q0");
  StateId q1 = aut.add_state("q1");
  aut.add_transition(q0, a, q1);
  aut.add_transition(q1, a, q1);
  aut.set_initial(q0);
  aut.set_acceptance(ParityAcceptance{{0, 1}});

  ParityMacrostate initial;
  initial.assignment[q0] = TSeqAnnotation::epsilons(0);
  initial.colours.resize(1);
  initial.colours[0][bs("")] = Colour::White;
  ParityMacrostate next = det_parity_step(initial, a, aut);
  // q1 has odd priority: a 0 is appended at every position (and compressed
  // right back, the tree being a chain).
  CHECK(next.assignment.at(q1) == TSeqAnnotation({bs("")}));
}

TEST_CASE("parity_to_buchi on one-state automata") {
  StreamAutomaton even;
  LetterId a = even.add_letter("a");
  StateId q = even.add_state("q");
  even.add_transition(q, a, q);
  even.set_initial(q);
  even.set_acceptance(ParityAcceptance{{0}});
  StreamAutomaton b = parity_to_buchi(even);
  CHECK(b.num_states() == 2);
  REQUIRE(b.state_id("q@0").has_value());
  const auto& acc = std::get<BuchiAcceptance>(b.acceptance());
  CHECK(acc.accepting == std::set<StateId>{*b.state_id("q@0")});
  // jump q -> q@0 exists
  auto succ = b.successors(*b.state_id("q"), 0);
  CHECK(std::find(succ.begin(), succ.end(), *b.state_id("q@0")) != succ.end());
  CHECK(accepts_lasso(b, Lasso{{}, {"a"}}));

  StreamAutomaton odd = even;
  odd.set_acceptance(ParityAcceptance{{1}});
  StreamAutomaton bo = parity_to_buchi(odd);
  CHECK(bo.num_states() == 1);
  CHECK(std::get<BuchiAcceptance>(bo.acceptance()).accepting.empty());
  CHECK_FALSE(accepts_lasso(bo, Lasso{{}, {"a"}}));
}

TEST_CASE("parity determinization preserves the language on lassos") {
  std::mt19937_64 rng(35);
  for (int round = 0; round < 30; ++round) {
    StreamAutomaton src = random_parity(rng);
    auto result = det_parity(src);
    CompareReport report = compare_on_lassos(src, result.automaton, 3, 4);
    REQUIRE(report.agree);
    StreamAutomaton buchi = parity_to_buchi(src);
    CompareReport helper = compare_on_lassos(src, buchi, 3, 4);
    REQUIRE(helper.agree);
  }
}

TEST_CASE("fig1 as parity round-trips through the helper automaton") {
  StreamAutomaton src = fig1_nba();
  ParityAcceptance parity;
  const auto& acc = std::get<BuchiAcceptance>(src.acceptance());
  for (StateId q = 0; q < src.num_states(); ++q)
    parity.priority.push_back(acc.accepting.count(q) ? 0 : 1);
  StreamAutomaton as_parity = src;
  as_parity.set_acceptance(parity);
  CompareReport report = compare_on_lassos(src, parity_to_buchi(as_parity), 2, 3);
  CHECK(report.agree);
}

TEST_CASE("0/1-parity determinization shadows the Buchi one") {
  // For priorities {0,1} the two constructions run in lockstep: Move,
  // Append and Resolve act identically, so the surviving state sets agree
  // step for step, and the languages agree.  The strings themselves drift
  // apart wherever the Buchi path compresses at an all-zeros witness, which
  // the parity path skips (all-zeros exclusion + treetop patch), so no
  // string-level identity is asserted here; the exact parity run on the
  // figure automaton is frozen in its own test case below.
  std::mt19937_64 rng(36);
  for (int round = 0; round < 20; ++round) {
    StreamAutomaton src = random_nba(rng);
    const auto& acc = std::get<BuchiAcceptance>(src.acceptance());
    if (acc.accepting.empty()) continue;  // no even priority, no position 0
    ParityAcceptance parity;
    for (StateId q = 0; q < src.num_states(); ++q)
      parity.priority.push_back(acc.accepting.count(q) ? 0 : 1);
    StreamAutomaton as_parity = src;
    as_parity.set_acceptance(parity);

    auto buchi_result = det_buchi(src);
    auto parity_result = det_parity(as_parity);

    // Lockstep walk over all words of length <= 5: equal state sets.
    struct Item {
      StateId b, p;
      int depth;
    };
    std::vector<Item> todo{{buchi_result.automaton.initial(),
                            parity_result.automaton.initial(), 0}};
    std::set<std::pair<StateId, StateId>> seen;
    while (!todo.empty()) {
      Item item = todo.back();
      todo.pop_back();
      if (!seen.insert({item.b, item.p}).second) continue;
      const Macrostate& mb = buchi_result.macrostates[item.b];
      const ParityMacrostate& mp = parity_result.macrostates[item.p];
      REQUIRE(mb.assignment.size() == mp.assignment.size());
      for (const auto& [q, s] : mb.assignment) REQUIRE(mp.assignment.count(q) == 1);
      if (item.depth >= 5) continue;
      for (LetterId y = 0; y < src.num_letters(); ++y)
        todo.push_back({buchi_result.automaton.step(item.b, y),
                        parity_result.automaton.step(item.p, y), item.depth + 1});
    }

    CompareReport report = compare_on_lassos(src, parity_result.automaton, 2, 3);
    REQUIRE(report.agree);
  }
}

TEST_CASE("fig1 as 0/1 parity: frozen macrostate sequence") {
  // Hand-derived run of the parity construction on the figure automaton:
  // the initial append of 1 survives (all-zeros exclusion + treetop patch),
  // so from P1 on everything is the Buchi picture shifted by a leading 1.
  StreamAutomaton src = fig1_nba();
  ParityAcceptance parity{{1, 0, 1}};
  StreamAutomaton as_parity = src;
  as_parity.set_acceptance(parity);
  auto result = det_parity(as_parity);
  REQUIRE(result.macrostates.size() == 4);

  const ParityMacrostate& p1 = result.macrostates[1];
  CHECK(p1.assignment.at(1) == TSeqAnnotation({bs("1")}));
  CHECK(p1.colours[0] == std::map<BitString, Colour>{{bs(""), Colour::White},
                                                     {bs("0"), Colour::White},
                                                     {bs("1"), Colour::White}});
  const ParityMacrostate& p2 = result.macrostates[2];
  CHECK(p2.assignment.at(1) == TSeqAnnotation({bs("11")}));
  CHECK(p2.assignment.at(2) == TSeqAnnotation({bs("10")}));
  for (const auto& [s, colour] : p2.colours[0]) CHECK(colour == Colour::White);
  const ParityMacrostate& p3 = result.macrostates[3];
  CHECK(p3.assignment == p2.assignment);
  CHECK(p3.colours[0].at(bs("1")) == Colour::Green);
  CHECK(p3.colours[0].at(bs("10")) == Colour::Red);
  CHECK(p3.colours[0].at(bs("11")) == Colour::Red);
  CHECK(p3.colours[0].at(bs("")) == Colour::White);
  CHECK(p3.colours[0].at(bs("0")) == Colour::White);
  CHECK(result.automaton.step(3, 0) == 3);
  CHECK(accepts_lasso(result.automaton, Lasso{{}, {"a"}}));
}

TEST_CASE("parity witness order independence") {
  std::mt19937_64 rng(37);
  std::mt19937_64 shuffle_rng(38);
  int cases = 0;
  while (cases < 25) {
    StreamAutomaton src = random_parity(rng);
    auto result = det_parity(src);
    for (StateId id = 0; id < result.macrostates.size() && cases < 25; ++id)
      for (LetterId y = 0; y < src.num_letters() && cases < 25; ++y) {
        ParityMacrostate reference = det_parity_step(result.macrostates[id], y, src);
        for (int round = 0; round < 10; ++round) {
          WitnessPicker random_pick = [&](const std::vector<Witness>& witnesses) {
            std::uniform_int_distribution<std::size_t> dist(0, witnesses.size() - 1);
            return dist(shuffle_rng);
          };
          ParityMacrostate shuffled = det_parity_step(result.macrostates[id], y, src, random_pick);
          REQUIRE(shuffled == reference);
        }
        ++cases;
      }
  }
}

TEST_CASE("parity macrostate invariants") {
  std::mt19937_64 rng(39);
  for (int round = 0; round < 20; ++round) {
    StreamAutomaton src = random_parity(rng);
    auto result = det_parity(src);
    for (const ParityMacrostate& state : result.macrostates) {
      for (unsigned i = 0; i < state.colours.size(); ++i) {
        if (state.assignment.empty()) continue;
        BinTree tree = tree_of_checked(state.leaf_strings(2 * i), true);
        CHECK(tree.size() == state.colours[i].size());
        auto it = state.colours[i].find(bs(""));
        if (it != state.colours[i].end()) CHECK(it->second != Colour::Red);
      }
      for (const auto& [q, sigma] : state.assignment)
        for (const auto& component : sigma.components())
          CHECK(component.size() <= src.num_states());
    }
  }
}

TEST_CASE("dictionary rendering is stable") {
  StreamAutomaton src = fig1_nba();
  auto result = det_buchi(src);
  std::string dict = render_dictionary(result, src);
  CHECK(dict.find("macrostates: 4") != std::string::npos);
  CHECK(dict.find("m3:") != std::string::npos);
  CHECK(dict.find("f: q1 -> \"1\"") != std::string::npos);
  CHECK(dict.find("c: \"\" green") != std::string::npos);
  CHECK(render_dictionary(result, src) == dict);
}
