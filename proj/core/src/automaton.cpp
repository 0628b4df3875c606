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

#include "mutree/automaton.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "graph_util.hpp"

namespace mutree {

StateId StreamAutomaton::add_state(const std::string& name) {
  state_names_.push_back(name);
  delta_.emplace_back(num_letters());
  return static_cast<StateId>(state_names_.size() - 1);
}

LetterId StreamAutomaton::add_letter(const std::string& name) {
  letter_names_.push_back(name);
  for (auto& row : delta_) row.emplace_back();
  return static_cast<LetterId>(letter_names_.size() - 1);
}

void StreamAutomaton::add_transition(StateId src, LetterId letter, StateId dst) {
  auto& succ = delta_[src][letter];
  auto it = std::lower_bound(succ.begin(), succ.end(), dst);
  if (it == succ.end() || *it != dst) succ.insert(it, dst);
}

std::optional<StateId> StreamAutomaton::state_id(const std::string& name) const {
  for (StateId i = 0; i < state_names_.size(); ++i)
    if (state_names_[i] == name) return i;
  return std::nullopt;
}

std::optional<LetterId> StreamAutomaton::letter_id(const std::string& name) const {
  for (LetterId i = 0; i < letter_names_.size(); ++i)
    if (letter_names_[i] == name) return i;
  return std::nullopt;
}

const std::vector<StateId>& StreamAutomaton::successors(StateId src, LetterId letter) const {
  return delta_[src][letter];
}

bool StreamAutomaton::is_deterministic() const {
  for (const auto& row : delta_)
    for (const auto& succ : row)
      if (succ.size() != 1) return false;
  return true;
}

StateId StreamAutomaton::step(StateId src, LetterId letter) const {
  const auto& succ = delta_[src][letter];
  assert(succ.size() == 1);
  return succ[0];
}

// ------------------------------------------------------------------ lasso

namespace {

std::vector<LetterId> resolve_letters(const StreamAutomaton& aut,
                                      const std::vector<std::string>& names) {
  std::vector<LetterId> out;
  out.reserve(names.size());
  for (const std::string& name : names) {
    auto id = aut.letter_id(name);
    if (!id) throw UnknownLetter("unknown letter '" + name + "'");
    out.push_back(*id);
  }
  return out;
}

struct LassoWord {
  std::vector<LetterId> stem;
  std::vector<LetterId> loop;

  std::size_t positions() const { return stem.size() + loop.size(); }
  std::size_t next(std::size_t i) const { return i + 1 < positions() ? i + 1 : stem.size(); }
  LetterId letter(std::size_t i) const {
    return i < stem.size() ? stem[i] : loop[i - stem.size()];
  }
};

/// Product of the automaton with the lasso positions, restricted to the
/// part reachable from (initial, 0).  Node encoding: state * positions + pos.
struct LassoProduct {
  std::size_t positions;
  std::vector<std::size_t> nodes;             // reachable encoded nodes
  std::vector<std::size_t> dense;             // encoded -> dense index (or npos)
  std::vector<std::vector<std::size_t>> adj;  // dense adjacency

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  LassoProduct(const StreamAutomaton& aut, const LassoWord& word) {
    positions = word.positions();
    std::size_t total = aut.num_states() * positions;
    dense.assign(total, npos);
    std::deque<std::size_t> todo;
    auto visit = [&](std::size_t enc) {
      if (dense[enc] != npos) return;
      dense[enc] = nodes.size();
      nodes.push_back(enc);
      todo.push_back(enc);
    };
    visit(static_cast<std::size_t>(aut.initial()) * positions + 0);
    while (!todo.empty()) {
      std::size_t enc = todo.front();
      todo.pop_front();
      StateId q = static_cast<StateId>(enc / positions);
      std::size_t i = enc % positions;
      for (StateId r : aut.successors(q, word.letter(i)))
        visit(static_cast<std::size_t>(r) * positions + word.next(i));
    }
    adj.resize(nodes.size());
    for (std::size_t d = 0; d < nodes.size(); ++d) {
      std::size_t enc = nodes[d];
      StateId q = static_cast<StateId>(enc / positions);
      std::size_t i = enc % positions;
      for (StateId r : aut.successors(q, word.letter(i)))
        adj[d].push_back(dense[static_cast<std::size_t>(r) * positions + word.next(i)]);
    }
  }

  StateId state_of(std::size_t dense_index) const {
    return static_cast<StateId>(nodes[dense_index] / positions);
  }

  bool nontrivial(const std::vector<std::size_t>& component) const {
    if (component.size() > 1) return true;
    std::size_t v = component[0];
    return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
  }
};

bool accepts_buchi(const StreamAutomaton& aut, const BuchiAcceptance& acc,
                   const LassoWord& word) {
  LassoProduct product(aut, word);
  auto components = detail::strongly_connected_components(product.adj);
  for (const auto& component : components) {
    if (!product.nontrivial(component)) continue;
    for (std::size_t v : component)
      if (acc.accepting.count(product.state_of(v))) return true;
  }
  return false;
}

bool accepts_parity(const StreamAutomaton& aut, const ParityAcceptance& acc,
                    const LassoWord& word) {
  LassoProduct product(aut, word);
  std::set<unsigned> evens;
  for (unsigned p : acc.priority)
    if (p % 2 == 0) evens.insert(p);
  for (unsigned d : evens) {
    // Subgraph of nodes with priority >= d; a nontrivial SCC containing a
    // node of priority exactly d yields a run with even minimal priority.
    std::vector<std::size_t> keep(product.adj.size(), LassoProduct::npos);
    std::vector<std::size_t> back;
    for (std::size_t v = 0; v < product.adj.size(); ++v) {
      if (acc.priority[product.state_of(v)] >= d) {
        keep[v] = back.size();
        back.push_back(v);
      }
    }
    std::vector<std::vector<std::size_t>> sub(back.size());
    for (std::size_t v = 0; v < product.adj.size(); ++v) {
      if (keep[v] == LassoProduct::npos) continue;
      for (std::size_t w : product.adj[v])
        if (keep[w] != LassoProduct::npos) sub[keep[v]].push_back(keep[w]);
    }
    auto components = detail::strongly_connected_components(sub);
    for (const auto& component : components) {
      bool nontrivial =
          component.size() > 1 ||
          std::find(sub[component[0]].begin(), sub[component[0]].end(), component[0]) !=
              sub[component[0]].end();
      if (!nontrivial) continue;
      for (std::size_t v : component)
        if (acc.priority[product.state_of(back[v])] == d) return true;
    }
  }
  return false;
}

bool accepts_rabin(const StreamAutomaton& aut, const RabinAcceptance& acc,
                   const LassoWord& word) {
  if (!aut.is_deterministic())
    throw NondeterministicRabin("Rabin acceptance requires a deterministic automaton");
  // Follow the unique run until (state, loop position) repeats, then test
  // the pairs on the states of the repeating block.
  std::map<std::pair<StateId, std::size_t>, std::size_t> seen;
  std::vector<StateId> states;
  StateId q = aut.initial();
  std::size_t i = 0;
  while (true) {
    if (i >= word.stem.size()) {
      auto key = std::make_pair(q, i - word.stem.size());
      auto it = seen.find(key);
      if (it != seen.end()) {
        std::set<StateId> block(states.begin() + static_cast<std::ptrdiff_t>(it->second),
                                states.end());
        for (const RabinPair& pair : acc.pairs) {
          bool hits_good = std::any_of(block.begin(), block.end(),
                                       [&](StateId s) { return pair.good.count(s) > 0; });
          bool hits_bad = std::any_of(block.begin(), block.end(),
                                      [&](StateId s) { return pair.bad.count(s) > 0; });
          if (hits_good && !hits_bad) return true;
        }
        return false;
      }
      seen.emplace(key, states.size());
    }
    states.push_back(q);
    q = aut.step(q, word.letter(i));
    i = word.next(i);
  }
}

}  // namespace

bool accepts_lasso(const StreamAutomaton& aut, const Lasso& lasso) {
  if (lasso.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  LassoWord word{resolve_letters(aut, lasso.stem), resolve_letters(aut, lasso.loop)};
  if (const auto* buchi = std::get_if<BuchiAcceptance>(&aut.acceptance()))
    return accepts_buchi(aut, *buchi, word);
  if (const auto* parity = std::get_if<ParityAcceptance>(&aut.acceptance()))
    return accepts_parity(aut, *parity, word);
  return accepts_rabin(aut, std::get<RabinAcceptance>(aut.acceptance()), word);
}

std::vector<StateId> run_prefix(const StreamAutomaton& aut, const Lasso& lasso, std::size_t n) {
  if (!aut.is_deterministic())
    throw NotDeterministic("run_prefix requires a deterministic automaton");
  if (lasso.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  LassoWord word{resolve_letters(aut, lasso.stem), resolve_letters(aut, lasso.loop)};
  std::vector<StateId> run{aut.initial()};
  std::size_t i = 0;
  for (std::size_t step = 0; step < n; ++step) {
    run.push_back(aut.step(run.back(), word.letter(i)));
    i = word.next(i);
  }
  return run;
}

Lasso canonicalize_lasso(const Lasso& lasso) {
  Lasso out = lasso;
  // Rotate the loop to its least rotation; the skipped prefix moves into
  // the stem so the denoted word is unchanged.
  std::size_t n = out.loop.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& a = out.loop[(r + i) % n];
      const std::string& b = out.loop[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  out.stem.insert(out.stem.end(), out.loop.begin(),
                  out.loop.begin() + static_cast<std::ptrdiff_t>(best));
  std::rotate(out.loop.begin(), out.loop.begin() + static_cast<std::ptrdiff_t>(best),
              out.loop.end());
  // Strip whole copies of the loop from the stem's tail.
  while (out.stem.size() >= n &&
         std::equal(out.stem.end() - static_cast<std::ptrdiff_t>(n), out.stem.end(),
                    out.loop.begin()))
    out.stem.erase(out.stem.end() - static_cast<std::ptrdiff_t>(n), out.stem.end());
  return out;
}

namespace {

std::vector<std::string> sorted_alphabet(const StreamAutomaton& aut) {
  std::vector<std::string> names;
  for (LetterId i = 0; i < aut.num_letters(); ++i) names.push_back(aut.letter_name(i));
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

CompareReport compare_on_lassos(const StreamAutomaton& a, const StreamAutomaton& b,
                                std::size_t max_stem, std::size_t max_loop,
                                std::optional<SamplingConfig> sampling, unsigned jobs) {
  std::vector<std::string> alphabet = sorted_alphabet(a);
  if (alphabet != sorted_alphabet(b))
    throw AlphabetMismatch("compare_on_lassos: automata have different alphabets");

  // Raw enumeration size (capped), to decide between exhaustive and sampled.
  const double k = static_cast<double>(alphabet.size());
  double stems = 0, loops = 0;
  for (std::size_t i = 0; i <= max_stem; ++i) stems += std::pow(k, static_cast<double>(i));
  for (std::size_t i = 1; i <= max_loop; ++i) loops += std::pow(k, static_cast<double>(i));
  const double raw = stems * loops;

  std::vector<Lasso> cases;
  if (sampling && raw > static_cast<double>(sampling->count)) {
    std::mt19937_64 rng(sampling->seed);
    std::uniform_int_distribution<std::size_t> stem_len(0, max_stem);
    std::uniform_int_distribution<std::size_t> loop_len(1, max_loop);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    for (std::uint64_t i = 0; i < sampling->count; ++i) {
      Lasso lasso;
      std::size_t su = stem_len(rng), sv = loop_len(rng);
      for (std::size_t j = 0; j < su; ++j) lasso.stem.push_back(alphabet[pick(rng)]);
      for (std::size_t j = 0; j < sv; ++j) lasso.loop.push_back(alphabet[pick(rng)]);
      cases.push_back(std::move(lasso));
    }
  } else {
    std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> seen;
    // words over the alphabet grouped by length
    std::vector<std::vector<std::vector<std::string>>> by_len{{{}}};
    for (std::size_t len = 1; len <= std::max(max_stem, max_loop); ++len) {
      std::vector<std::vector<std::string>> next;
      for (const auto& w : by_len.back())
        for (const std::string& letter : alphabet) {
          auto extended = w;
          extended.push_back(letter);
          next.push_back(std::move(extended));
        }
      by_len.push_back(std::move(next));
    }
    for (std::size_t su = 0; su <= max_stem; ++su)
      for (std::size_t sv = 1; sv <= max_loop; ++sv)
        for (const auto& stem : by_len[su])
          for (const auto& loop : by_len[sv]) {
            Lasso canon = canonicalize_lasso(Lasso{stem, loop});
            if (seen.emplace(canon.stem, canon.loop).second) cases.push_back(std::move(canon));
          }
  }

  // Evaluate; workers own disjoint contiguous batches, first disagreement
  // by case index wins, so the verdict does not depend on scheduling.
  struct Slot {
    bool disagree = false;
    bool va = false, vb = false;
  };
  std::vector<Slot> slots(cases.size());
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      bool va = accepts_lasso(a, cases[i]);
      bool vb = accepts_lasso(b, cases[i]);
      if (va != vb) slots[i] = Slot{true, va, vb};
    }
  };
  if (jobs <= 1 || cases.size() < 2 * jobs) {
    worker(0, cases.size());
  } else {
    std::vector<std::thread> threads;
    std::size_t chunk = (cases.size() + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
      std::size_t begin = std::min(cases.size(), static_cast<std::size_t>(t) * chunk);
      std::size_t end = std::min(cases.size(), begin + chunk);
      if (begin < end) threads.emplace_back(worker, begin, end);
    }
    for (auto& thread : threads) thread.join();
  }

  CompareReport report;
  report.tested = cases.size();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (slots[i].disagree) {
      report.agree = false;
      report.disagreement = cases[i];
      report.verdict_a = slots[i].va;
      report.verdict_b = slots[i].vb;
      break;
    }
  }
  return report;
}

// --------------------------------------------------------------- file I/O

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

StateId require_state(const StreamAutomaton& aut, const std::string& name) {
  auto id = aut.state_id(name);
  if (!id) throw AutomatonFormatError("unknown state '" + name + "'");
  return *id;
}

std::set<StateId> parse_state_list(const StreamAutomaton& aut, const std::string& text) {
  std::set<StateId> out;
  if (text.empty()) return out;
  for (const std::string& name : split_on(text, ','))
    if (!name.empty()) out.insert(require_state(aut, name));
  return out;
}

}  // namespace

StreamAutomaton parse_automaton(std::istream& in) {
  StreamAutomaton aut;
  std::string line;
  bool in_transitions = false;
  bool saw_initial = false;
  std::string acceptance_line;
  std::vector<std::array<std::string, 3>> transitions;

  while (std::getline(in, line)) {
    std::string trimmed = line;
    if (auto pos = trimmed.find('#'); pos != std::string::npos) trimmed.resize(pos);
    auto words = split_ws(trimmed);
    if (words.empty()) continue;
    if (in_transitions) {
      if (words.size() != 3)
        throw AutomatonFormatError("transition line needs 'src letter dst': " + line);
      transitions.push_back({words[0], words[1], words[2]});
      continue;
    }
    if (words[0] == "states:") {
      for (std::size_t i = 1; i < words.size(); ++i) aut.add_state(words[i]);
    } else if (words[0] == "alphabet:") {
      for (std::size_t i = 1; i < words.size(); ++i) aut.add_letter(words[i]);
    } else if (words[0] == "initial:") {
      if (words.size() != 2) throw AutomatonFormatError("initial: needs one state");
      aut.set_initial(require_state(aut, words[1]));
      saw_initial = true;
    } else if (words[0] == "deterministic:") {
      if (words.size() != 2 || (words[1] != "yes" && words[1] != "no"))
        throw AutomatonFormatError("deterministic: needs yes|no");
      aut.set_deterministic(words[1] == "yes");
    } else if (words[0] == "acceptance:") {
      acceptance_line = trimmed.substr(trimmed.find("acceptance:") + 11);
    } else if (words[0] == "transitions:") {
      in_transitions = true;
    } else {
      throw AutomatonFormatError("unrecognized line: " + line);
    }
  }
  if (!saw_initial) throw AutomatonFormatError("missing initial:");

  for (const auto& [src, letter, dst] : transitions) {
    auto y = aut.letter_id(letter);
    if (!y) throw AutomatonFormatError("unknown letter '" + letter + "'");
    aut.add_transition(require_state(aut, src), *y, require_state(aut, dst));
  }

  auto words = split_ws(acceptance_line);
  if (words.empty()) throw AutomatonFormatError("missing acceptance:");
  if (words[0] == "buchi") {
    BuchiAcceptance acc;
    if (words.size() >= 2) {
      if (words[1].rfind("F=", 0) != 0) throw AutomatonFormatError("buchi needs F=...");
      acc.accepting = parse_state_list(aut, words[1].substr(2));
    }
    aut.set_acceptance(std::move(acc));
  } else if (words[0] == "parity") {
    ParityAcceptance acc;
    acc.priority.assign(aut.num_states(), 0);
    std::vector<bool> seen(aut.num_states(), false);
    for (std::size_t i = 1; i < words.size(); ++i) {
      auto parts = split_on(words[i], ':');
      if (parts.size() != 2) throw AutomatonFormatError("parity entry needs state:priority");
      StateId q = require_state(aut, parts[0]);
      acc.priority[q] = static_cast<unsigned>(std::stoul(parts[1]));
      seen[q] = true;
    }
    for (StateId q = 0; q < aut.num_states(); ++q)
      if (!seen[q])
        throw AutomatonFormatError("parity: missing priority for " + aut.state_name(q));
    aut.set_acceptance(std::move(acc));
  } else if (words[0] == "rabin") {
    RabinAcceptance acc;
    for (std::size_t i = 1; i < words.size(); ++i) {
      const std::string& entry = words[i];
      if (entry.size() < 3 || entry.front() != '(' || entry.back() != ')')
        throw AutomatonFormatError("rabin pair needs (G;B): " + entry);
      auto halves = split_on(entry.substr(1, entry.size() - 2), ';');
      if (halves.size() != 2) throw AutomatonFormatError("rabin pair needs (G;B): " + entry);
      RabinPair pair;
      pair.good = parse_state_list(aut, halves[0]);
      pair.bad = parse_state_list(aut, halves[1]);
      acc.pairs.push_back(std::move(pair));
    }
    aut.set_acceptance(std::move(acc));
  } else {
    throw AutomatonFormatError("unknown acceptance kind: " + words[0]);
  }
  return aut;
}

StreamAutomaton parse_automaton_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AutomatonFormatError("cannot open " + path);
  return parse_automaton(in);
}

namespace {

std::string state_list_text(const StreamAutomaton& aut, const std::set<StateId>& states) {
  std::string out;
  bool first = true;
  for (StateId q : states) {
    if (!first) out += ",";
    out += aut.state_name(q);
    first = false;
  }
  return out;
}

}  // namespace

void write_automaton(std::ostream& out, const StreamAutomaton& aut) {
  out << "states:";
  for (StateId q = 0; q < aut.num_states(); ++q) out << " " << aut.state_name(q);
  out << "\n";
  out << "alphabet:";
  for (LetterId y = 0; y < aut.num_letters(); ++y) out << " " << aut.letter_name(y);
  out << "\n";
  out << "initial: " << aut.state_name(aut.initial()) << "\n";
  out << "deterministic: " << (aut.deterministic_flag() ? "yes" : "no") << "\n";
  out << "acceptance: ";
  if (const auto* buchi = std::get_if<BuchiAcceptance>(&aut.acceptance())) {
    out << "buchi F=" << state_list_text(aut, buchi->accepting);
  } else if (const auto* parity = std::get_if<ParityAcceptance>(&aut.acceptance())) {
    out << "parity";
    for (StateId q = 0; q < aut.num_states(); ++q)
      out << " " << aut.state_name(q) << ":" << parity->priority[q];
  } else {
    const auto& rabin = std::get<RabinAcceptance>(aut.acceptance());
    out << "rabin";
    for (const RabinPair& pair : rabin.pairs)
      out << " (" << state_list_text(aut, pair.good) << ";" << state_list_text(aut, pair.bad)
          << ")";
  }
  out << "\n";
  out << "transitions:\n";
  for (StateId q = 0; q < aut.num_states(); ++q)
    for (LetterId y = 0; y < aut.num_letters(); ++y)
      for (StateId r : aut.successors(q, y))
        out << aut.state_name(q) << " " << aut.letter_name(y) << " " << aut.state_name(r)
            << "\n";
}

std::string automaton_to_dot(const StreamAutomaton& aut) {
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n";
  for (StateId q = 0; q < aut.num_states(); ++q) {
    std::string extras;
    if (const auto* buchi = std::get_if<BuchiAcceptance>(&aut.acceptance())) {
      if (buchi->accepting.count(q)) extras = ", peripheries=2";
    } else if (const auto* parity = std::get_if<ParityAcceptance>(&aut.acceptance())) {
      extras = ", xlabel=\"" + std::to_string(parity->priority[q]) + "\"";
    }
    out << "  q" << q << " [label=\"" << aut.state_name(q) << "\"" << extras << "];\n";
  }
  out << "  init -> q" << aut.initial() << ";\n";
  for (StateId q = 0; q < aut.num_states(); ++q)
    for (LetterId y = 0; y < aut.num_letters(); ++y)
      for (StateId r : aut.successors(q, y))
        out << "  q" << q << " -> q" << r << " [label=\"" << aut.letter_name(y) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace mutree
