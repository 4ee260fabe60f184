// Copyright 2026 The DFA Workbench Authors
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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfa::gf2 {

using Var = std::uint16_t;

/// A declared set of variables, laid out as named segments.
///
/// ACORN uses a single segment "s" of 293 variables; ATOM uses "b" (90 NFSR
/// bits) followed by "k" (128 key bits). Variable `v` is printed as the
/// segment prefix followed by its offset inside the segment, e.g. "k17".
class Universe {
 public:
  struct Segment {
    std::string prefix;
    std::size_t count = 0;
    bool operator==(const Segment&) const = default;
  };

  explicit Universe(std::vector<Segment> segments);

  static std::shared_ptr<const Universe> make(std::vector<Segment> segments);
  /// Single segment named `prefix` with `count` variables.
  static std::shared_ptr<const Universe> make(std::string prefix, std::size_t count);

  std::size_t size() const { return size_; }
  std::span<const Segment> segments() const { return segments_; }

  /// Global index of `prefix<offset>`; throws ParseError when unknown.
  Var index(std::string_view prefix, std::size_t offset) const;
  std::string name(Var v) const;
  std::optional<Var> parse_name(std::string_view token) const;

  bool operator==(const Universe& other) const { return segments_ == other.segments_; }

 private:
  std::vector<Segment> segments_;
  std::size_t size_ = 0;
};

using UniversePtr = std::shared_ptr<const Universe>;

/// A (possibly partial) assignment of bits to the variables of a universe.
class Assignment {
 public:
  Assignment() = default;
  /// Every variable unknown.
  explicit Assignment(std::size_t universe_size);
  /// Fully known assignment from a 0/1 vector.
  static Assignment from_bits(std::span<const std::uint8_t> bits);

  std::size_t size() const { return values_.size(); }
  bool known(Var v) const { return v < values_.size() && values_[v] >= 0; }
  bool value(Var v) const;  // throws MissingAssignmentError when unknown
  void set(Var v, bool bit);
  void unset(Var v);
  std::size_t known_count() const;
  bool complete() const { return known_count() == values_.size(); }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<std::int8_t> values_;  // -1 unknown, 0, 1
};

/// Product of distinct variables; the empty monomial is the constant 1.
class Monomial {
 public:
  Monomial() = default;
  /// Sorts and applies x*x = x.
  explicit Monomial(std::vector<Var> vars);
  static Monomial variable(Var v) { return Monomial(std::vector<Var>{v}); }

  std::size_t degree() const { return vars_.size(); }
  bool is_one() const { return vars_.empty(); }
  std::span<const Var> vars() const { return vars_; }
  bool contains(Var v) const;
  Monomial without(Var v) const;
  bool evaluate(const Assignment& a) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);

  /// Graded lexicographic order: lower degree first, then lexicographic.
  std::strong_ordering operator<=>(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;

  std::size_t hash() const;

 private:
  std::vector<Var> vars_;
};

/// Process-wide cap on the number of monomials any single polynomial may hold.
std::size_t monomial_budget();
void set_monomial_budget(std::size_t cap);
inline constexpr std::size_t kDefaultMonomialBudget = 2'000'000;

/// Element of the Boolean ring GF(2)[x_0..x_{n-1}] / (x_i^2 + x_i) in
/// algebraic normal form.
///
/// Monomials are kept in a sorted vector (graded lex order) with no
/// duplicates, so two polynomials are equal iff their vectors are equal.
/// Values are immutable in practice: every operation returns a fresh
/// canonical polynomial.
class BooleanPolynomial {
 public:
  explicit BooleanPolynomial(UniversePtr universe);

  static BooleanPolynomial zero(UniversePtr universe);
  static BooleanPolynomial one(UniversePtr universe);
  static BooleanPolynomial constant(UniversePtr universe, bool bit);
  static BooleanPolynomial variable(UniversePtr universe, Var v);
  /// Canonicalizes: sorts and cancels monomials occurring an even number of times.
  static BooleanPolynomial from_monomials(UniversePtr universe, std::vector<Monomial> monomials);
  /// Parses "s1*s2 + s3 + 1"; "0" is the zero polynomial.
  static BooleanPolynomial parse(UniversePtr universe, std::string_view text);

  const UniversePtr& universe() const { return universe_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  std::size_t size() const { return monomials_.size(); }

  bool is_zero() const { return monomials_.empty(); }
  bool is_one() const { return monomials_.size() == 1 && monomials_.front().is_one(); }
  bool is_constant() const { return monomials_.empty() || is_one(); }
  bool has_constant_term() const { return !monomials_.empty() && monomials_.front().is_one(); }
  /// -1 for the zero polynomial.
  int degree() const;
  std::vector<Var> variables() const;

  bool evaluate(const Assignment& a) const;

  BooleanPolynomial complement() const;
  BooleanPolynomial substitute(Var v, const BooleanPolynomial& replacement) const;
  /// p(x) + p(x with x_v complemented): the cofactor of x_v.
  BooleanPolynomial derivative(Var v) const;
  /// Replaces every variable known in `a` by its value.
  BooleanPolynomial restrict(const Assignment& a) const;

  BooleanPolynomial& operator+=(const BooleanPolynomial& other);
  friend BooleanPolynomial operator+(const BooleanPolynomial& a, const BooleanPolynomial& b);
  friend BooleanPolynomial operator*(const BooleanPolynomial& a, const BooleanPolynomial& b);

  bool operator==(const BooleanPolynomial& other) const;
  std::size_t hash() const;

  /// Highest degree first, e.g. "s1*s2 + s3 + 1"; zero prints as "0".
  std::string to_string() const;

 private:
  BooleanPolynomial(UniversePtr universe, std::vector<Monomial> canonical);
  void check_same_universe(const BooleanPolynomial& other) const;

  UniversePtr universe_;
  std::vector<Monomial> monomials_;
};

// Free-function spellings of the ring operations.
BooleanPolynomial add(const BooleanPolynomial& a, const BooleanPolynomial& b);
BooleanPolynomial mul(const BooleanPolynomial& a, const BooleanPolynomial& b);
BooleanPolynomial complement(const BooleanPolynomial& a);
BooleanPolynomial substitute(const BooleanPolynomial& a, Var v, const BooleanPolynomial& r);
bool evaluate(const BooleanPolynomial& a, const Assignment& v);
int degree(const BooleanPolynomial& a);

struct PolynomialHash {
  std::size_t operator()(const BooleanPolynomial& p) const { return p.hash(); }
};

}  // namespace dfa::gf2
