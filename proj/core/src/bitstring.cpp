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

#include "mutree/bitstring.hpp"

#include <algorithm>
#include <cassert>

namespace mutree {

BitString::BitString(std::string bits) : bits_(std::move(bits)) {
  for (char c : bits_) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitString: invalid character '" + std::string(1, c) + "'");
  }
}

BitString BitString::zeros(std::size_t length) {
  BitString s;
  s.bits_.assign(length, '0');
  return s;
}

bool BitString::all_zeros() const {
  return bits_.find('1') == std::string::npos;
}

BitString BitString::append(bool one) const {
  BitString s = *this;
  s.bits_.push_back(one ? '1' : '0');
  return s;
}

BitString BitString::operator+(const BitString& rhs) const {
  BitString s = *this;
  s.bits_ += rhs.bits_;
  return s;
}

BitString BitString::parent() const {
  assert(!bits_.empty());
  BitString s = *this;
  s.bits_.pop_back();
  return s;
}

bool lex_less(const BitString& s, const BitString& t) {
  // std::string order over '0' < '1' is bitwise-lexicographic and puts a
  // proper prefix before its extensions, which is the order we fixed.
  return s.str() < t.str();
}

bool is_prefix(const BitString& s, const BitString& t) {
  return t.str().size() >= s.str().size() &&
         t.str().compare(0, s.str().size(), s.str()) == 0;
}

bool is_strict_prefix(const BitString& s, const BitString& t) {
  return s.size() < t.size() && is_prefix(s, t);
}

BitString substitute(const BitString& s, const BitString& t, const BitString& r) {
  if (!is_prefix(t, s))
    throw PrefixMismatch("substitute: \"" + t.str() + "\" is not a prefix of \"" + s.str() + "\"");
  return BitString(r.str() + s.str().substr(t.str().size()));
}

bool is_bintree(const BinTree& tree) {
  for (const BitString& s : tree) {
    if (!s.empty() && tree.count(s.parent()) == 0) return false;
    bool zero = tree.count(s.append(false)) > 0;
    bool one = tree.count(s.append(true)) > 0;
    if (zero != one) return false;
  }
  return true;
}

BinTree prefix_closure(const std::set<BitString>& strings) {
  BinTree closure;
  for (const BitString& s : strings) {
    const std::string& raw = s.str();
    for (std::size_t len = 0; len <= raw.size(); ++len)
      closure.insert(BitString(raw.substr(0, len)));
  }
  return closure;
}

BinTree tree_of(const std::set<BitString>& leaves, bool patch_zeros) {
  BinTree tree = prefix_closure(leaves);
  if (patch_zeros && !tree.empty()) {
    // Walk the zero spine; at most one node can need its 0-sibling.
    BitString z;
    while (true) {
      bool has_zero = tree.count(z.append(false)) > 0;
      bool has_one = tree.count(z.append(true)) > 0;
      if (has_zero) {
        z = z.append(false);
      } else if (has_one) {
        tree.insert(z.append(false));
        break;
      } else {
        break;
      }
    }
  }
  return tree;
}

BinTree tree_of_checked(const std::set<BitString>& leaves, bool patch_zeros) {
  for (const BitString& s : leaves)
    for (const BitString& t : leaves)
      if (s != t && is_prefix(s, t))
        throw NotATreetop("tree_of: \"" + s.str() + "\" is a prefix of \"" + t.str() + "\"");
  BinTree tree = tree_of(leaves, patch_zeros);
  if (!is_bintree(tree))
    throw NotATreetop("tree_of: result is not a binary tree");
  return tree;
}

std::set<BitString> leaves_of(const BinTree& tree) {
  std::set<BitString> result;
  for (const BitString& s : tree)
    if (tree.count(s.append(false)) == 0) result.insert(s);
  return result;
}

BitString min_leaf(const BinTree& tree) {
  if (tree.empty()) throw EmptyTree("min_leaf: empty tree");
  BitString z;
  while (tree.count(z.append(false)) > 0) z = z.append(false);
  return z;
}

TSeqAnnotation::TSeqAnnotation(std::vector<BitString> components)
    : components_(std::move(components)) {}

TSeqAnnotation TSeqAnnotation::epsilons(std::optional<unsigned> max_even) {
  TSeqAnnotation sigma;
  if (max_even.has_value()) sigma.components_.resize(*max_even / 2 + 1);
  return sigma;
}

std::optional<unsigned> TSeqAnnotation::max_even() const {
  if (components_.empty()) return std::nullopt;
  return 2 * (static_cast<unsigned>(components_.size()) - 1);
}

const BitString& TSeqAnnotation::at(unsigned k) const {
  assert(k % 2 == 0 && k / 2 < components_.size());
  return components_[k / 2];
}

void TSeqAnnotation::set(unsigned k, BitString value) {
  assert(k % 2 == 0 && k / 2 < components_.size());
  components_[k / 2] = std::move(value);
}

TSeqAnnotation TSeqAnnotation::append_at(unsigned k, bool one) const {
  TSeqAnnotation sigma = *this;
  sigma.set(k, at(k).append(one));
  return sigma;
}

bool tseq_less(const TSeqAnnotation& sigma, const TSeqAnnotation& tau) {
  if (sigma.positions() != tau.positions())
    throw IndexMismatch("tseq_less: annotations indexed by different m");
  for (std::size_t i = 0; i < sigma.positions(); ++i) {
    const BitString& s = sigma.components()[i];
    const BitString& t = tau.components()[i];
    if (s != t) return lex_less(s, t);
  }
  return false;
}

std::string to_string(const BitString& s) { return s.str(); }

std::string to_string(const TSeqAnnotation& sigma) {
  std::string out = "(";
  for (std::size_t i = 0; i < sigma.positions(); ++i) {
    if (i > 0) out += ",";
    out += sigma.components()[i].str();
  }
  out += ")";
  return out;
}

}  // namespace mutree
