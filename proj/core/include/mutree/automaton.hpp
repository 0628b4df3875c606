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

#ifndef MUTREE_AUTOMATON_HPP
#define MUTREE_AUTOMATON_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mutree {

using StateId = std::uint32_t;
using LetterId = std::uint32_t;

struct UnknownLetter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotDeterministic : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NondeterministicRabin : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AlphabetMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AutomatonFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BuchiAcceptance {
  std::set<StateId> accepting;  // F
};
struct ParityAcceptance {
  std::vector<unsigned> priority;  // indexed by state
};
struct RabinPair {
  std::set<StateId> good;  // G: visit infinitely often
  std::set<StateId> bad;   // B: visit finitely often
  std::string name;        // stable label, e.g. "s=01" or "k=2 s=1"
};
struct RabinAcceptance {
  std::vector<RabinPair> pairs;
};

using Acceptance = std::variant<BuchiAcceptance, ParityAcceptance, RabinAcceptance>;

/// Finite automaton on infinite words.  States and letters are named and
/// addressed by dense ids.
class StreamAutomaton {
 public:
  StreamAutomaton() = default;

  StateId add_state(const std::string& name);
  LetterId add_letter(const std::string& name);
  void add_transition(StateId src, LetterId letter, StateId dst);
  void set_initial(StateId state) { initial_ = state; }
  void set_deterministic(bool value) { deterministic_ = value; }
  void set_acceptance(Acceptance acc) { acceptance_ = std::move(acc); }

  std::size_t num_states() const { return state_names_.size(); }
  std::size_t num_letters() const { return letter_names_.size(); }
  StateId initial() const { return initial_; }
  bool deterministic_flag() const { return deterministic_; }
  const Acceptance& acceptance() const { return acceptance_; }
  const std::string& state_name(StateId s) const { return state_names_[s]; }
  const std::string& letter_name(LetterId y) const { return letter_names_[y]; }
  std::optional<StateId> state_id(const std::string& name) const;
  std::optional<LetterId> letter_id(const std::string& name) const;
  const std::vector<StateId>& successors(StateId src, LetterId letter) const;

  /// Checks |delta(a,y)| == 1 everywhere.
  bool is_deterministic() const;

  /// The unique successor; only valid on deterministic automata.
  StateId step(StateId src, LetterId letter) const;

 private:
  std::vector<std::string> state_names_;
  std::vector<std::string> letter_names_;
  std::vector<std::vector<std::vector<StateId>>> delta_;  // [state][letter]
  StateId initial_ = 0;
  bool deterministic_ = false;
  Acceptance acceptance_ = BuchiAcceptance{};
};

/// Finite presentation u v^omega of an ultimately periodic word; letters by
/// name.  The loop must be nonempty.
struct Lasso {
  std::vector<std::string> stem;
  std::vector<std::string> loop;
};

/// Canonical representative used only to deduplicate enumeration: the loop
/// is rotated to its least rotation and whole copies of it are stripped
/// from the stem's tail.
Lasso canonicalize_lasso(const Lasso& lasso);

/// Decides membership of u v^omega in L(aut).  Buchi and parity acceptance
/// work for nondeterministic automata (product graph + SCC analysis); Rabin
/// acceptance requires a deterministic automaton (run simulation).
bool accepts_lasso(const StreamAutomaton& aut, const Lasso& lasso);

/// First n+1 states of the unique run of a deterministic automaton.
std::vector<StateId> run_prefix(const StreamAutomaton& aut, const Lasso& lasso, std::size_t n);

struct CompareReport {
  bool agree = true;
  std::uint64_t tested = 0;
  std::optional<Lasso> disagreement;  // first found when !agree
  bool verdict_a = false;             // verdicts on the disagreement
  bool verdict_b = false;
};

struct SamplingConfig {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

/// Checks lasso-acceptance agreement over every canonical lasso with
/// |stem| <= max_stem and 1 <= |loop| <= max_loop, or over `sampling.count`
/// seeded samples when the exhaustive space exceeds the sampling count and
/// sampling is requested.  `jobs > 1` evaluates disjoint batches in worker
/// threads; the verdict is scheduling independent.
CompareReport compare_on_lassos(const StreamAutomaton& a, const StreamAutomaton& b,
                                std::size_t max_stem, std::size_t max_loop,
                                std::optional<SamplingConfig> sampling = std::nullopt,
                                unsigned jobs = 1);

/// Text format with fields states/alphabet/initial/deterministic/
/// transitions/acceptance; see the README for a sample.
StreamAutomaton parse_automaton(std::istream& in);
StreamAutomaton parse_automaton_file(const std::string& path);
void write_automaton(std::ostream& out, const StreamAutomaton& aut);
std::string automaton_to_dot(const StreamAutomaton& aut);

}  // namespace mutree

#endif  // MUTREE_AUTOMATON_HPP
