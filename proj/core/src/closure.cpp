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

#include "mutree/closure.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <set>

namespace mutree {

std::vector<Formula> closure_successors(const Formula& formula) {
  switch (formula.kind()) {
    case Formula::Kind::Or:
    case Formula::Kind::And:
      return {formula.lhs(), formula.rhs()};
    case Formula::Kind::Dia:
    case Formula::Kind::Box:
      return {formula.child()};
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      return {formula.unfold()};
    default:
      return {};
  }
}

namespace {

std::set<Formula> closure_set(const Formula& root) {
  std::set<Formula> members;
  std::deque<Formula> todo{root};
  while (!todo.empty()) {
    Formula f = todo.front();
    todo.pop_front();
    if (!members.insert(f).second) continue;
    for (const Formula& succ : closure_successors(f)) todo.push_back(succ);
  }
  return members;
}

}  // namespace

ClosureTable::ClosureTable(const Sequent& roots) : roots_(roots) {
  std::set<Formula> members;
  std::deque<Formula> todo(roots.begin(), roots.end());
  while (!todo.empty()) {
    Formula f = todo.front();
    todo.pop_front();
    if (!members.insert(f).second) continue;
    for (const Formula& succ : closure_successors(f)) todo.push_back(succ);
  }
  members_.assign(members.begin(), members.end());

  for (const Formula& f : members_)
    if (f.is_fixpoint()) fixpoints_.push_back(f);

  // eta x. phi  <  lambda y. psi  iff both generate the same closure and the
  // former is a syntactic subformula of the latter.
  std::map<Formula, std::set<Formula>> clos;
  for (const Formula& f : fixpoints_) clos.emplace(f, closure_set(f));
  auto below = [&](const Formula& lhs, const Formula& rhs) {
    return lhs != rhs && clos.at(lhs) == clos.at(rhs) && rhs.has_subformula(lhs);
  };

  // Longest chain strictly below each fixpoint; the relation is a strict
  // partial order (a restriction of the strict-subformula order).
  std::map<Formula, unsigned> depth;
  std::function<unsigned(const Formula&)> rank = [&](const Formula& g) -> unsigned {
    auto it = depth.find(g);
    if (it != depth.end()) return it->second;
    unsigned best = 0;
    for (const Formula& h : fixpoints_)
      if (below(h, g)) best = std::max(best, rank(h) + 1);
    depth[g] = best;
    return best;
  };
  for (const Formula& f : fixpoints_) rank(f);

  for (const Formula& f : fixpoints_) {
    unsigned d = depth.at(f);
    bool wants_even = f.is_nu();
    unsigned value = 2 * d;
    if ((value % 2 == 0) != wants_even) ++value;
    omega_[f] = value;
    if (f.is_nu()) max_even_ = std::max(max_even_.value_or(0), value);
  }
}

bool ClosureTable::is_member(const Formula& f) const {
  return std::binary_search(members_.begin(), members_.end(), f);
}

unsigned ClosureTable::omega(const Formula& fixpoint) const {
  auto it = omega_.find(fixpoint);
  assert(it != omega_.end());
  return it->second;
}

bool ClosureTable::depends_below(const Formula& lhs, const Formula& rhs) const {
  if (lhs == rhs || !lhs.is_fixpoint() || !rhs.is_fixpoint()) return false;
  return closure_set(lhs) == closure_set(rhs) && rhs.has_subformula(lhs);
}

bool cycle_is_nu(const ClosureTable& table, const std::vector<Formula>& cycle) {
  assert(!cycle.empty());
  std::optional<unsigned> best;
  bool best_is_nu = false;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Formula& here = cycle[i];
    const Formula& next = cycle[(i + 1) % cycle.size()];
    if (!here.is_fixpoint() || here.unfold() != next) continue;
    unsigned priority = table.omega(here);
    if (!best || priority < *best) {
      best = priority;
      best_is_nu = here.is_nu();
    }
  }
  if (!best) throw NoFixpointOnCycle("cycle without unfolding step");
  return best_is_nu;
}

}  // namespace mutree
