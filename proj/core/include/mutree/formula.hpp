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

#ifndef MUTREE_FORMULA_HPP
#define MUTREE_FORMULA_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mutree {

struct SyntaxError : std::runtime_error {
  std::size_t position;
  SyntaxError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};
struct NegativeBoundVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAFixpoint : std::logic_error {
  using std::logic_error::logic_error;
};

/// Immutable formula of the modal mu-calculus.
///
/// Values are cheap shared handles to structurally hashed syntax trees;
/// equality is syntactic (names matter, no alpha conversion).  The total
/// order is a fixed order on syntax trees and is what sequents iterate in.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    Bottom, Top, Prop, NegProp, Var, Or, And, Dia, Box, Mu, Nu
  };

  Formula() = default;  // empty handle, only for containers

  static Formula bottom();
  static Formula top();
  static Formula prop(const std::string& name);
  static Formula neg_prop(const std::string& name);
  static Formula var(const std::string& name);
  static Formula disj(const Formula& lhs, const Formula& rhs);
  static Formula conj(const Formula& lhs, const Formula& rhs);
  static Formula dia(const Formula& body);
  static Formula box(const Formula& body);
  static Formula mu(const std::string& var, const Formula& body);
  static Formula nu(const std::string& var, const Formula& body);

  Kind kind() const;
  const std::string& name() const;   // Prop / NegProp / Var / Mu / Nu
  const Formula& lhs() const;        // Or / And
  const Formula& rhs() const;        // Or / And
  const Formula& child() const;      // Dia / Box / Mu / Nu body

  bool is_fixpoint() const { return kind() == Kind::Mu || kind() == Kind::Nu; }
  bool is_nu() const { return kind() == Kind::Nu; }

  /// chi[xi/x] for xi = eta x. chi.  Throws NotAFixpoint otherwise.
  Formula unfold() const;

  /// True iff `other` occurs in this syntax tree (reflexive).
  bool has_subformula(const Formula& other) const;

  std::size_t hash() const;
  bool operator==(const Formula& rhs) const;
  bool operator!=(const Formula& rhs) const { return !(*this == rhs); }
  /// Fixed total order on syntax trees.
  bool operator<(const Formula& rhs) const;
  std::strong_ordering operator<=>(const Formula& rhs) const;

  std::string to_string() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::string name, std::vector<Formula> children);
  std::shared_ptr<const Node> node_;
};

/// Parses the concrete syntax
///   true false p ~p  &  |  <> []  mu x.  nu x.
/// with precedence  ~  >  modal  >  &  >  |, binder bodies extending as far
/// right as possible, and parentheses.  Rejects `~x` for a bound x and
/// shadowed binder names.
///
/// Printed unfoldings legitimately shadow binder names (the fixpoint body
/// reappears inside itself); proof files are read with
/// `allow_shadowed_binders`, which resolves identifiers to the innermost
/// binder instead of rejecting.
Formula parse_formula(const std::string& text, bool allow_shadowed_binders = false);

/// A sequent is a finite set of formulas; kept sorted and deduplicated.
using Sequent = std::vector<Formula>;

Sequent make_sequent(std::vector<Formula> formulas);
Sequent sequent_insert(const Sequent& sequent, const Formula& formula);
Sequent sequent_erase(const Sequent& sequent, const Formula& formula);
bool sequent_contains(const Sequent& sequent, const Formula& formula);
std::string to_string(const Sequent& sequent);

}  // namespace mutree

template <>
struct std::hash<mutree::Formula> {
  std::size_t operator()(const mutree::Formula& f) const { return f.hash(); }
};

#endif  // MUTREE_FORMULA_HPP
