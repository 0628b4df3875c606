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

#ifndef MUTREE_BITSTRING_HPP
#define MUTREE_BITSTRING_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mutree {

/// A finite word over {0,1}.  The empty string is written "" (epsilon).
///
/// Comparison is lexicographic with 0 < 1.  The order on prefix-related
/// pairs is not pinned down by the usual definition; we fix "proper prefix
/// comes first", which makes the order total.  This is exactly what
/// std::string comparison over the characters '0' and '1' does.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::string bits);

  /// The all-zeros string of the given length; zeros(0) is epsilon.
  static BitString zeros(std::size_t length);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  const std::string& str() const { return bits_; }
  bool bit(std::size_t i) const { return bits_[i] == '1'; }

  /// True iff the string consists of zeros only; epsilon counts as 0^0.
  bool all_zeros() const;

  BitString append(bool one) const;
  BitString operator+(const BitString& rhs) const;

  /// Longest proper prefix; undefined on epsilon.
  BitString parent() const;

  auto operator<=>(const BitString& rhs) const = default;

 private:
  std::string bits_;
};

/// Strict lexicographic order with "proper prefix is smaller".
bool lex_less(const BitString& s, const BitString& t);

/// s `is initial substring of` t:  exists r with s r = t.
bool is_prefix(const BitString& s, const BitString& t);

/// Strict prefix.
bool is_strict_prefix(const BitString& s, const BitString& t);

/// Rewrites the prefix t of s to r.  Throws PrefixMismatch if t is not a
/// prefix of s.
BitString substitute(const BitString& s, const BitString& t, const BitString& r);

struct PrefixMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmptyTree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotATreetop : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IndexMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A binary tree as a prefix-closed set of strings in which every node has
/// zero or two children.
using BinTree = std::set<BitString>;

bool is_bintree(const BinTree& tree);

/// Prefix closure of an arbitrary string set (not necessarily a tree).
BinTree prefix_closure(const std::set<BitString>& strings);

/// The tree spanned by a treetop: the prefix closure of the leaf set,
/// patched with the all-zeros leaf when it is missing.  The patch walks the
/// zero spine: if some 0^j has a 1-child in the closure but no 0-child, the
/// 0-child is added as a leaf.  (With the closure in place of the leaf set
/// this also covers tops whose missing minimal leaf sits below an interior
/// node, which the transition function of the parity construction produces.)
///
/// With `patch_zeros = false` this is the plain prefix closure used by the
/// Buchi construction.
BinTree tree_of(const std::set<BitString>& leaves, bool patch_zeros = true);

/// Variant that validates the BinTree invariants of the result.
BinTree tree_of_checked(const std::set<BitString>& leaves, bool patch_zeros = true);

std::set<BitString> leaves_of(const BinTree& tree);

/// The unique all-zeros leaf 0^j of a nonempty tree.
BitString min_leaf(const BinTree& tree);

/// Annotation tuple (s_0, s_2, ..., s_m) indexed by the even numbers up to
/// m.  An absent m is represented by the empty tuple.
class TSeqAnnotation {
 public:
  TSeqAnnotation() = default;
  explicit TSeqAnnotation(std::vector<BitString> components);

  /// The all-epsilon tuple for the given m (nullopt gives the empty tuple).
  static TSeqAnnotation epsilons(std::optional<unsigned> max_even);

  std::size_t positions() const { return components_.size(); }
  std::optional<unsigned> max_even() const;

  /// Component at even position k (k = 0, 2, ..., m).
  const BitString& at(unsigned k) const;
  void set(unsigned k, BitString value);

  /// Appends a bit at position k, leaving the other components untouched.
  TSeqAnnotation append_at(unsigned k, bool one) const;

  const std::vector<BitString>& components() const { return components_; }

  auto operator<=>(const TSeqAnnotation& rhs) const = default;

 private:
  std::vector<BitString> components_;
};

/// Strict order on TSeq(m): some position l has sigma_l < tau_l while all
/// earlier positions agree.  Throws IndexMismatch when the tuples do not
/// share the same m.  Total thanks to lex_less being total; uniformly false
/// on empty tuples.
bool tseq_less(const TSeqAnnotation& sigma, const TSeqAnnotation& tau);

std::string to_string(const BitString& s);
std::string to_string(const TSeqAnnotation& sigma);

}  // namespace mutree

#endif  // MUTREE_BITSTRING_HPP
