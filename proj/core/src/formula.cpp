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

#include "mutree/formula.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>

namespace mutree {

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Formula> children;
  std::size_t hash;
};

namespace {

std::size_t combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(Kind kind, std::string name, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->children = std::move(children);
  std::size_t h = combine(0x517cc1b7, static_cast<std::size_t>(kind));
  h = combine(h, std::hash<std::string>()(node->name));
  for (const Formula& c : node->children) h = combine(h, c.hash());
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::bottom() { return make(Kind::Bottom, "", {}); }
Formula Formula::top() { return make(Kind::Top, "", {}); }
Formula Formula::prop(const std::string& name) { return make(Kind::Prop, name, {}); }
Formula Formula::neg_prop(const std::string& name) { return make(Kind::NegProp, name, {}); }
Formula Formula::var(const std::string& name) { return make(Kind::Var, name, {}); }
Formula Formula::disj(const Formula& l, const Formula& r) { return make(Kind::Or, "", {l, r}); }
Formula Formula::conj(const Formula& l, const Formula& r) { return make(Kind::And, "", {l, r}); }
Formula Formula::dia(const Formula& body) { return make(Kind::Dia, "", {body}); }
Formula Formula::box(const Formula& body) { return make(Kind::Box, "", {body}); }
Formula Formula::mu(const std::string& v, const Formula& body) { return make(Kind::Mu, v, {body}); }
Formula Formula::nu(const std::string& v, const Formula& body) { return make(Kind::Nu, v, {body}); }

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->children[0]; }
const Formula& Formula::rhs() const { return node_->children[1]; }
const Formula& Formula::child() const { return node_->children[0]; }

std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

bool Formula::operator==(const Formula& rhs) const {
  if (node_ == rhs.node_) return true;
  if (!node_ || !rhs.node_) return false;
  if (node_->hash != rhs.node_->hash) return false;
  if (node_->kind != rhs.node_->kind || node_->name != rhs.node_->name) return false;
  if (node_->children.size() != rhs.node_->children.size()) return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i)
    if (node_->children[i] != rhs.node_->children[i]) return false;
  return true;
}

std::strong_ordering Formula::operator<=>(const Formula& rhs) const {
  if (*this == rhs) return std::strong_ordering::equal;
  return *this < rhs ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool Formula::operator<(const Formula& rhs) const {
  if (node_ == rhs.node_) return false;
  if (!node_) return rhs.node_ != nullptr;
  if (!rhs.node_) return false;
  if (node_->kind != rhs.node_->kind) return node_->kind < rhs.node_->kind;
  if (node_->name != rhs.node_->name) return node_->name < rhs.node_->name;
  std::size_t n = std::min(node_->children.size(), rhs.node_->children.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (node_->children[i] < rhs.node_->children[i]) return true;
    if (rhs.node_->children[i] < node_->children[i]) return false;
  }
  return node_->children.size() < rhs.node_->children.size();
}

namespace {

Formula substitute_var(const Formula& f, const std::string& var, const Formula& replacement) {
  switch (f.kind()) {
    case Formula::Kind::Bottom:
    case Formula::Kind::Top:
    case Formula::Kind::Prop:
    case Formula::Kind::NegProp:
      return f;
    case Formula::Kind::Var:
      return f.name() == var ? replacement : f;
    case Formula::Kind::Or:
      return Formula::disj(substitute_var(f.lhs(), var, replacement),
                           substitute_var(f.rhs(), var, replacement));
    case Formula::Kind::And:
      return Formula::conj(substitute_var(f.lhs(), var, replacement),
                           substitute_var(f.rhs(), var, replacement));
    case Formula::Kind::Dia:
      return Formula::dia(substitute_var(f.child(), var, replacement));
    case Formula::Kind::Box:
      return Formula::box(substitute_var(f.child(), var, replacement));
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      // Binder names are pairwise distinct (parser enforced), so there is
      // no capture to avoid; a binder of the same name just shields `var`.
      if (f.name() == var) return f;
      Formula body = substitute_var(f.child(), var, replacement);
      return f.kind() == Formula::Kind::Mu ? Formula::mu(f.name(), body)
                                           : Formula::nu(f.name(), body);
    }
  }
  return f;
}

}  // namespace

Formula Formula::unfold() const {
  if (!is_fixpoint()) throw NotAFixpoint("unfold: not a fixpoint formula");
  return substitute_var(child(), name(), *this);
}

bool Formula::has_subformula(const Formula& other) const {
  if (*this == other) return true;
  for (const Formula& c : node_->children)
    if (c.has_subformula(other)) return true;
  return false;
}

// ----------------------------------------------------------------- parser

namespace {

struct Parser {
  const std::string& text;
  bool allow_shadowing;
  std::size_t pos = 0;
  std::vector<std::string> binders;  // enclosing binder names, innermost last

  Parser(const std::string& t, bool allow) : text(t), allow_shadowing(allow) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(const std::string& token) {
    skip_ws();
    if (text.compare(pos, token.size(), token) == 0) {
      pos += token.size();
      return true;
    }
    return false;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw SyntaxError("expected identifier", pos);
    return text.substr(start, pos - start);
  }

  bool bound(const std::string& name) const {
    return std::find(binders.begin(), binders.end(), name) != binders.end();
  }

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos != text.size()) throw SyntaxError("trailing input", pos);
    return f;
  }

  Formula formula() { return disjunction(); }

  Formula disjunction() {
    Formula f = conjunction();
    while (eat("|")) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (eat("&")) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    if (eat("~")) {
      std::size_t at = pos;
      std::string name = ident();
      if (bound(name))
        throw NegativeBoundVariable("negated occurrence of bound variable '" + name +
                                    "' (at offset " + std::to_string(at) + ")");
      return Formula::neg_prop(name);
    }
    if (eat("<>")) return Formula::dia(unary());
    if (eat("[]")) return Formula::box(unary());
    return atom();
  }

  Formula atom() {
    skip_ws();
    if (pos >= text.size()) throw SyntaxError("unexpected end of input", pos);
    if (peek('(')) {
      eat("(");
      Formula f = formula();
      if (!eat(")")) throw SyntaxError("expected ')'", pos);
      return f;
    }
    std::size_t at = pos;
    std::string word = ident();
    if (word == "true") return Formula::top();
    if (word == "false") return Formula::bottom();
    if (word == "mu" || word == "nu") return binder(word == "mu", at);
    if (bound(word)) return Formula::var(word);
    return Formula::prop(word);
  }

  Formula binder(bool is_mu, std::size_t at) {
    std::string name = ident();
    if (!allow_shadowing && bound(name))
      throw SyntaxError("shadowed binder variable '" + name + "'", at);
    if (!eat(".")) throw SyntaxError("expected '.' after binder variable", pos);
    binders.push_back(name);
    Formula body = formula();  // body extends right
    binders.pop_back();
    return is_mu ? Formula::mu(name, body) : Formula::nu(name, body);
  }
};

int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Dia:
    case Formula::Kind::Box: return 3;
    default: return 4;  // atoms; binders handled separately
  }
}

void print(const Formula& f, int parent_prec, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Bottom: out += "false"; return;
    case Formula::Kind::Top: out += "true"; return;
    case Formula::Kind::Prop:
    case Formula::Kind::Var: out += f.name(); return;
    case Formula::Kind::NegProp: out += "~" + f.name(); return;
    case Formula::Kind::Or:
    case Formula::Kind::And: {
      int prec = precedence(f.kind());
      bool parens = prec < parent_prec;
      if (parens) out += "(";
      print(f.lhs(), prec, out);
      out += f.kind() == Formula::Kind::Or ? " | " : " & ";
      print(f.rhs(), prec, out);
      if (parens) out += ")";
      return;
    }
    case Formula::Kind::Dia:
    case Formula::Kind::Box:
      out += f.kind() == Formula::Kind::Dia ? "<>" : "[]";
      print(f.child(), precedence(f.kind()), out);
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      // A binder body extends right, so any enclosing operator needs parens.
      bool parens = parent_prec > 0;
      if (parens) out += "(";
      out += f.kind() == Formula::Kind::Mu ? "mu " : "nu ";
      out += f.name() + ". ";
      print(f.child(), 0, out);
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

Formula parse_formula(const std::string& text, bool allow_shadowed_binders) {
  Parser p(text, allow_shadowed_binders);
  return p.parse();
}

std::string Formula::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

Sequent make_sequent(std::vector<Formula> formulas) {
  std::sort(formulas.begin(), formulas.end());
  formulas.erase(std::unique(formulas.begin(), formulas.end()), formulas.end());
  return formulas;
}

Sequent sequent_insert(const Sequent& sequent, const Formula& formula) {
  Sequent out = sequent;
  auto it = std::lower_bound(out.begin(), out.end(), formula);
  if (it == out.end() || *it != formula) out.insert(it, formula);
  return out;
}

Sequent sequent_erase(const Sequent& sequent, const Formula& formula) {
  Sequent out = sequent;
  auto it = std::lower_bound(out.begin(), out.end(), formula);
  if (it != out.end() && *it == formula) out.erase(it);
  return out;
}

bool sequent_contains(const Sequent& sequent, const Formula& formula) {
  return std::binary_search(sequent.begin(), sequent.end(), formula);
}

std::string to_string(const Sequent& sequent) {
  std::string out;
  for (std::size_t i = 0; i < sequent.size(); ++i) {
    if (i > 0) out += ", ";
    out += sequent[i].to_string();
  }
  return out;
}

}  // namespace mutree
