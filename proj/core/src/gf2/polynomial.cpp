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

#include "dfa/gf2/polynomial.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <limits>
#include <utility>

#include "dfa/common/error.hpp"

namespace dfa::gf2 {

namespace {

std::atomic<std::size_t> g_monomial_budget{kDefaultMonomialBudget};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Sorts `terms` and drops pairs of equal monomials (x + x = 0).
std::vector<Monomial> cancel_pairs(std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end());
  std::vector<Monomial> out;
  out.reserve(terms.size());
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(std::move(terms[i]));
    i = j;
  }
  return out;
}

void enforce_budget(std::size_t n) {
  const std::size_t cap = g_monomial_budget.load(std::memory_order_relaxed);
  if (n > cap) {
    throw MonomialBudgetError("polynomial would hold " + std::to_string(n) +
                              " monomials, above the configured budget of " +
                              std::to_string(cap));
  }
}

}  // namespace

std::size_t monomial_budget() { return g_monomial_budget.load(); }
void set_monomial_budget(std::size_t cap) { g_monomial_budget.store(cap); }

// ---------------------------------------------------------------- Universe

Universe::Universe(std::vector<Segment> segments) : segments_(std::move(segments)) {
  for (const auto& seg : segments_) {
    if (seg.prefix.empty() || !std::all_of(seg.prefix.begin(), seg.prefix.end(), [](char c) {
          return std::isalpha(static_cast<unsigned char>(c)) != 0;
        })) {
      throw ConfigError("universe segment prefixes must be alphabetic: '" + seg.prefix + "'");
    }
    size_ += seg.count;
  }
  if (size_ > std::numeric_limits<Var>::max()) {
    throw ConfigError("universe too large: " + std::to_string(size_) + " variables");
  }
}

std::shared_ptr<const Universe> Universe::make(std::vector<Segment> segments) {
  return std::make_shared<const Universe>(std::move(segments));
}

std::shared_ptr<const Universe> Universe::make(std::string prefix, std::size_t count) {
  return make({Segment{std::move(prefix), count}});
}

Var Universe::index(std::string_view prefix, std::size_t offset) const {
  std::size_t base = 0;
  for (const auto& seg : segments_) {
    if (seg.prefix == prefix) {
      if (offset >= seg.count) break;
      return static_cast<Var>(base + offset);
    }
    base += seg.count;
  }
  throw ParseError("no variable " + std::string(prefix) + std::to_string(offset) + " in universe");
}

std::string Universe::name(Var v) const {
  std::size_t base = 0;
  for (const auto& seg : segments_) {
    if (v < base + seg.count) return seg.prefix + std::to_string(v - base);
    base += seg.count;
  }
  return "?" + std::to_string(v);
}

std::optional<Var> Universe::parse_name(std::string_view token) const {
  std::size_t split = 0;
  while (split < token.size() && std::isalpha(static_cast<unsigned char>(token[split]))) ++split;
  if (split == 0 || split == token.size()) return std::nullopt;
  std::size_t offset = 0;
  const auto digits = token.substr(split);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), offset);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  std::size_t base = 0;
  for (const auto& seg : segments_) {
    if (seg.prefix == token.substr(0, split)) {
      if (offset < seg.count) return static_cast<Var>(base + offset);
      return std::nullopt;
    }
    base += seg.count;
  }
  return std::nullopt;
}

// -------------------------------------------------------------- Assignment

Assignment::Assignment(std::size_t universe_size) : values_(universe_size, -1) {}

Assignment Assignment::from_bits(std::span<const std::uint8_t> bits) {
  Assignment a(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw DataError("assignment entries must be 0 or 1");
    a.values_[i] = static_cast<std::int8_t>(bits[i]);
  }
  return a;
}

bool Assignment::value(Var v) const {
  if (!known(v)) throw MissingAssignmentError("variable " + std::to_string(v) + " is not assigned");
  return values_[v] == 1;
}

void Assignment::set(Var v, bool bit) {
  if (v >= values_.size()) throw MissingAssignmentError("variable outside the assignment");
  values_[v] = bit ? 1 : 0;
}

void Assignment::unset(Var v) {
  if (v < values_.size()) values_[v] = -1;
}

std::size_t Assignment::known_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](std::int8_t x) { return x >= 0; }));
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Var> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

bool Monomial::contains(Var v) const { return std::binary_search(vars_.begin(), vars_.end(), v); }

Monomial Monomial::without(Var v) const {
  Monomial m;
  m.vars_.reserve(vars_.size());
  for (Var x : vars_) {
    if (x != v) m.vars_.push_back(x);
  }
  return m;
}

bool Monomial::evaluate(const Assignment& a) const {
  bool all = true;
  for (Var v : vars_) all = a.value(v) && all;  // visit every var so gaps are reported
  return all;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.vars_.reserve(a.vars_.size() + b.vars_.size());
  std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                 std::back_inserter(m.vars_));
  return m;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
  if (auto c = vars_.size() <=> other.vars_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(vars_.begin(), vars_.end(), other.vars_.begin(),
                                                other.vars_.end());
}

std::size_t Monomial::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ vars_.size();
  for (Var v : vars_) {
    h ^= v;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

// ------------------------------------------------------- BooleanPolynomial

BooleanPolynomial::BooleanPolynomial(UniversePtr universe) : universe_(std::move(universe)) {
  if (!universe_) throw ConfigError("polynomial needs a universe");
}

BooleanPolynomial::BooleanPolynomial(UniversePtr universe, std::vector<Monomial> canonical)
    : universe_(std::move(universe)), monomials_(std::move(canonical)) {
  enforce_budget(monomials_.size());
}

BooleanPolynomial BooleanPolynomial::zero(UniversePtr universe) {
  return BooleanPolynomial(std::move(universe));
}

BooleanPolynomial BooleanPolynomial::one(UniversePtr universe) {
  return BooleanPolynomial(std::move(universe), std::vector<Monomial>{Monomial{}});
}

BooleanPolynomial BooleanPolynomial::constant(UniversePtr universe, bool bit) {
  return bit ? one(std::move(universe)) : zero(std::move(universe));
}

BooleanPolynomial BooleanPolynomial::variable(UniversePtr universe, Var v) {
  if (!universe || v >= universe->size()) {
    throw UniverseMismatchError("variable " + std::to_string(v) + " outside the universe");
  }
  return BooleanPolynomial(std::move(universe), std::vector<Monomial>{Monomial::variable(v)});
}

BooleanPolynomial BooleanPolynomial::from_monomials(UniversePtr universe,
                                                    std::vector<Monomial> monomials) {
  if (!universe) throw ConfigError("polynomial needs a universe");
  for (const auto& m : monomials) {
    if (!m.vars().empty() && m.vars().back() >= universe->size()) {
      throw UniverseMismatchError("monomial uses a variable outside the universe");
    }
  }
  return BooleanPolynomial(std::move(universe), cancel_pairs(std::move(monomials)));
}

BooleanPolynomial BooleanPolynomial::parse(UniversePtr universe, std::string_view text) {
  std::vector<Monomial> terms;
  text = trim(text);
  if (text.empty()) throw ParseError("empty polynomial text");
  while (true) {
    const auto plus = text.find('+');
    const auto term = trim(text.substr(0, plus));
    if (term.empty()) throw ParseError("empty term in polynomial");
    if (term != "0") {
      std::vector<Var> vars;
      std::string_view rest = term;
      while (true) {
        const auto star = rest.find('*');
        const auto factor = trim(rest.substr(0, star));
        if (factor != "1") {
          const auto v = universe->parse_name(factor);
          if (!v) throw ParseError("unknown factor '" + std::string(factor) + "'");
          vars.push_back(*v);
        }
        if (star == std::string_view::npos) break;
        rest = rest.substr(star + 1);
      }
      terms.emplace_back(std::move(vars));
    }
    if (plus == std::string_view::npos) break;
    text = text.substr(plus + 1);
  }
  return from_monomials(std::move(universe), std::move(terms));
}

int BooleanPolynomial::degree() const {
  return monomials_.empty() ? -1 : static_cast<int>(monomials_.back().degree());
}

std::vector<Var> BooleanPolynomial::variables() const {
  std::vector<Var> vars;
  for (const auto& m : monomials_) vars.insert(vars.end(), m.vars().begin(), m.vars().end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool BooleanPolynomial::evaluate(const Assignment& a) const {
  bool acc = false;
  for (const auto& m : monomials_) acc ^= m.evaluate(a);
  return acc;
}

BooleanPolynomial BooleanPolynomial::complement() const {
  return *this + one(universe_);
}

BooleanPolynomial BooleanPolynomial::substitute(Var v, const BooleanPolynomial& replacement) const {
  check_same_universe(replacement);
  if (v >= universe_->size()) throw UniverseMismatchError("substituted variable outside universe");
  std::vector<Monomial> untouched;
  std::vector<Monomial> cofactor;
  for (const auto& m : monomials_) {
    if (m.contains(v)) {
      cofactor.push_back(m.without(v));
    } else {
      untouched.push_back(m);
    }
  }
  if (cofactor.empty()) return *this;
  BooleanPolynomial rest(universe_, std::move(untouched));
  BooleanPolynomial q(universe_, cancel_pairs(std::move(cofactor)));
  return rest + q * replacement;
}

BooleanPolynomial BooleanPolynomial::derivative(Var v) const {
  if (v >= universe_->size()) throw UniverseMismatchError("variable outside universe");
  std::vector<Monomial> cofactor;
  for (const auto& m : monomials_) {
    if (m.contains(v)) cofactor.push_back(m.without(v));
  }
  return BooleanPolynomial(universe_, cancel_pairs(std::move(cofactor)));
}

BooleanPolynomial BooleanPolynomial::restrict(const Assignment& a) const {
  std::vector<Monomial> terms;
  terms.reserve(monomials_.size());
  bool changed = false;
  for (const auto& m : monomials_) {
    bool dropped = false;
    std::vector<Var> kept;
    kept.reserve(m.degree());
    for (Var v : m.vars()) {
      if (a.known(v)) {
        changed = true;
        if (!a.value(v)) {
          dropped = true;
          break;
        }
      } else {
        kept.push_back(v);
      }
    }
    if (!dropped) terms.emplace_back(std::move(kept));
  }
  if (!changed) return *this;
  return BooleanPolynomial(universe_, cancel_pairs(std::move(terms)));
}

BooleanPolynomial& BooleanPolynomial::operator+=(const BooleanPolynomial& other) {
  *this = *this + other;
  return *this;
}

BooleanPolynomial operator+(const BooleanPolynomial& a, const BooleanPolynomial& b) {
  a.check_same_universe(b);
  std::vector<Monomial> out;
  out.reserve(a.monomials_.size() + b.monomials_.size());
  auto ia = a.monomials_.begin();
  auto ib = b.monomials_.begin();
  while (ia != a.monomials_.end() && ib != b.monomials_.end()) {
    const auto c = *ia <=> *ib;
    if (c < 0) {
      out.push_back(*ia++);
    } else if (c > 0) {
      out.push_back(*ib++);
    } else {
      ++ia;
      ++ib;
    }
  }
  out.insert(out.end(), ia, a.monomials_.end());
  out.insert(out.end(), ib, b.monomials_.end());
  return BooleanPolynomial(a.universe_, std::move(out));
}

BooleanPolynomial operator*(const BooleanPolynomial& a, const BooleanPolynomial& b) {
  a.check_same_universe(b);
  if (a.is_zero() || b.is_zero()) return BooleanPolynomial(a.universe_);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<Monomial> terms;
  terms.reserve(a.monomials_.size() * b.monomials_.size());
  for (const auto& ma : a.monomials_) {
    for (const auto& mb : b.monomials_) terms.push_back(ma * mb);
  }
  return BooleanPolynomial(a.universe_, cancel_pairs(std::move(terms)));
}

bool BooleanPolynomial::operator==(const BooleanPolynomial& other) const {
  return monomials_ == other.monomials_ &&
         (universe_ == other.universe_ || *universe_ == *other.universe_);
}

std::size_t BooleanPolynomial::hash() const {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ monomials_.size();
  for (const auto& m : monomials_) {
    h ^= m.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string BooleanPolynomial::to_string() const {
  if (monomials_.empty()) return "0";
  std::string out;
  // Canonical order is ascending degree; print each degree block from the top.
  auto end = monomials_.end();
  while (end != monomials_.begin()) {
    const auto deg = std::prev(end)->degree();
    auto begin = end;
    while (begin != monomials_.begin() && std::prev(begin)->degree() == deg) --begin;
    for (auto it = begin; it != end; ++it) {
      if (!out.empty()) out += " + ";
      if (it->is_one()) {
        out += "1";
        continue;
      }
      bool first = true;
      for (Var v : it->vars()) {
        if (!first) out += '*';
        out += universe_->name(v);
        first = false;
      }
    }
    end = begin;
  }
  return out;
}

void BooleanPolynomial::check_same_universe(const BooleanPolynomial& other) const {
  if (universe_ != other.universe_ && !(*universe_ == *other.universe_)) {
    throw UniverseMismatchError("operands belong to different variable universes");
  }
}

// ------------------------------------------------------------ free functions

BooleanPolynomial add(const BooleanPolynomial& a, const BooleanPolynomial& b) { return a + b; }
BooleanPolynomial mul(const BooleanPolynomial& a, const BooleanPolynomial& b) { return a * b; }
BooleanPolynomial complement(const BooleanPolynomial& a) { return a.complement(); }
BooleanPolynomial substitute(const BooleanPolynomial& a, Var v, const BooleanPolynomial& r) {
  return a.substitute(v, r);
}
bool evaluate(const BooleanPolynomial& a, const Assignment& v) { return a.evaluate(v); }
int degree(const BooleanPolynomial& a) { return a.degree(); }

}  // namespace dfa::gf2
