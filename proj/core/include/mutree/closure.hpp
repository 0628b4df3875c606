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

#ifndef MUTREE_CLOSURE_HPP
#define MUTREE_CLOSURE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mutree/formula.hpp"

namespace mutree {

struct NoFixpointOnCycle : std::logic_error {
  using std::logic_error::logic_error;
};

/// Direct successors of a formula under ->_C: the direct boolean/modal
/// subformulas, or the unfolding for a fixpoint formula.
std::vector<Formula> closure_successors(const Formula& formula);

/// The closure of a root sequent together with the dependency order data:
/// fixpoint members, the parity function Omega and max even priority m.
class ClosureTable {
 public:
  explicit ClosureTable(const Sequent& roots);

  const Sequent& roots() const { return roots_; }
  const std::vector<Formula>& members() const { return members_; }
  bool is_member(const Formula& f) const;

  /// Fixpoint members in canonical order.
  const std::vector<Formula>& fixpoints() const { return fixpoints_; }

  /// Omega, defined exactly on the fixpoint members; even iff nu.
  unsigned omega(const Formula& fixpoint) const;

  /// Dependency order: lhs higher priority than rhs.
  bool depends_below(const Formula& lhs, const Formula& rhs) const;

  /// max over nu-members of Omega; absent when there is no nu-member.
  std::optional<unsigned> max_even() const { return max_even_; }

 private:
  Sequent roots_;
  std::vector<Formula> members_;
  std::vector<Formula> fixpoints_;
  std::map<Formula, unsigned> omega_;
  std::optional<unsigned> max_even_;
};

/// Classifies a ->_C cycle (wrap-around included) by the kind of its
/// Omega-minimal unfolded fixpoint formula.  Returns true for nu.
/// The cycle must contain at least one unfolding step.
bool cycle_is_nu(const ClosureTable& table, const std::vector<Formula>& cycle);

}  // namespace mutree

#endif  // MUTREE_CLOSURE_HPP
