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

#include "dfa/solver/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <optional>
#include <unordered_map>

#include "dfa/common/error.hpp"
#include "dfa/gf2/bit_matrix.hpp"

namespace dfa::solver {

using gf2::Monomial;

// ----------------------------------------------------------- EquationSystem

EquationSystem::EquationSystem(UniversePtr universe) : universe_(std::move(universe)) {
  if (!universe_) throw ConfigError("equation system needs a universe");
}

bool EquationSystem::add_equation(const BooleanPolynomial& p) {
  if (!(*p.universe() == *universe_)) throw UniverseMismatchError("equation from a different universe");
  if (p.is_zero()) return false;
  if (p.is_one()) throw InconsistentSystemError("equation 1 = 0");
  if (!seen_.insert(p).second) return false;
  equations_.push_back(p);
  ++histogram_[p.degree()];
  return true;
}

std::size_t EquationSystem::count_degree(int d) const {
  const auto it = histogram_.find(d);
  return it == histogram_.end() ? 0 : it->second;
}

std::string EquationSystem::to_text() const {
  std::string out;
  for (const auto& p : equations_) {
    out += p.to_string();
    out += '\n';
  }
  return out;
}

EquationSystem EquationSystem::from_text(UniversePtr universe, std::string_view text) {
  EquationSystem sys(universe);
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos && line.front() != '#') {
      sys.add_equation(BooleanPolynomial::parse(universe, line));
    }
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return sys;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::partial: return "partial";
    case SolveStatus::timeout: return "timeout";
    case SolveStatus::inconsistent: return "inconsistent";
  }
  return "?";
}

bool verify(const Assignment& assignment, const EquationSystem& sys) {
  for (const auto& p : sys.equations()) {
    if (p.evaluate(assignment)) return false;
  }
  return true;
}

bool verify_assigned(const Assignment& assignment, const EquationSystem& sys) {
  for (const auto& p : sys.equations()) {
    const auto vars = p.variables();
    if (!std::all_of(vars.begin(), vars.end(), [&](Var v) { return assignment.known(v); })) continue;
    if (p.evaluate(assignment)) return false;
  }
  return true;
}

RecoveryCounts classify_recovery(const RecoveryResult& result, const EquationSystem& sys) {
  if (result.origin.size() != sys.universe()->size()) throw ConfigError("result does not match system");
  RecoveryCounts c;
  for (auto o : result.origin) {
    if (o == BitOrigin::direct) ++c.direct;
    if (o == BitOrigin::indirect) ++c.indirect;
    if (o == BitOrigin::guessed) ++c.guessed;
  }
  return c;
}


// ------------------------------------------------------------------ engine

namespace {

using Clock = std::chrono::steady_clock;
using Words = std::vector<std::uint64_t>;

struct Timeout {};
struct Contradiction {};

class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}
  void check() const {
    if (Clock::now() > end_) throw Timeout{};
  }

 private:
  Clock::time_point end_;
};

bool test_bit(const std::uint64_t* w, std::size_t i) { return (w[i >> 6] >> (i & 63)) & 1U; }
void flip_bit(std::uint64_t* w, std::size_t i) { w[i >> 6] ^= std::uint64_t{1} << (i & 63); }
bool any_bit(const std::uint64_t* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i]) return true;
  }
  return false;
}
void xor_words(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}
template <class Fn>
void for_each_bit(const std::uint64_t* w, std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t x = w[i]; x; x &= x - 1) fn(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
  }
}

// Both frame types below hold a reduced system: residual equations over the
// free variables plus, for every eliminated variable, an expression over
// free variables. They expose the same interface to the search.

// ---- generic backend: BooleanPolynomial equations of any degree

BooleanPolynomial substitute_many(const BooleanPolynomial& p, const std::vector<const BooleanPolynomial*>& repl) {
  bool touched = false;
  for (const auto& m : p.monomials()) {
    for (Var v : m.vars()) touched = touched || repl[v] != nullptr;
    if (touched) break;
  }
  if (!touched) return p;
  std::vector<Monomial> terms;
  terms.reserve(p.size());
  std::vector<Var> kept;
  for (const auto& m : p.monomials()) {
    kept.clear();
    std::optional<BooleanPolynomial> factor;
    bool vanished = false;
    for (Var v : m.vars()) {
      const BooleanPolynomial* r = repl[v];
      if (!r) {
        kept.push_back(v);
      } else if (r->is_zero()) {
        vanished = true;
        break;
      } else if (!r->is_one()) {
        factor = factor ? *factor * *r : *r;
      }
    }
    if (vanished) continue;
    Monomial base(kept);
    if (!factor) {
      terms.push_back(std::move(base));
    } else {
      for (const auto& fm : factor->monomials()) terms.push_back(fm * base);
    }
  }
  return BooleanPolynomial::from_monomials(p.universe(), std::move(terms));
}

class PolyFrame {
 public:
  explicit PolyFrame(const EquationSystem& sys)
      : u_(sys.universe()), eqs_(sys.equations().begin(), sys.equations().end()), expr_(u_->size()) {}

  std::size_t universe_size() const { return expr_.size(); }
  bool eliminated(Var v) const { return expr_[v].has_value(); }
  bool determined(Var v) const { return expr_[v] && expr_[v]->is_constant(); }
  bool value(Var v) const { return expr_[v]->is_one(); }
  bool residual_empty() const { return eqs_.empty(); }

  void tally(std::vector<std::size_t>& count, bool include_expr) const {
    for (const auto& p : eqs_) {
      for (Var v : p.variables()) ++count[v];
    }
    if (!include_expr) return;
    for (const auto& e : expr_) {
      if (!e || e->is_constant()) continue;
      for (Var v : e->variables()) ++count[v];
    }
  }

  Assignment completion() const {
    Assignment free(expr_.size());
    for (Var v = 0; v < expr_.size(); ++v) {
      if (!expr_[v]) free.set(v, false);
    }
    Assignment full = free;
    for (Var v = 0; v < expr_.size(); ++v) {
      if (expr_[v]) full.set(v, expr_[v]->evaluate(free));
    }
    return full;
  }

  void assume(Var v, bool bit) {
    const BooleanPolynomial lhs = expr_[v] ? *expr_[v] : BooleanPolynomial::variable(u_, v);
    auto p = lhs + BooleanPolynomial::constant(u_, bit);
    if (p.is_one()) throw Contradiction{};
    if (!p.is_zero()) eqs_.push_back(std::move(p));
  }

  void propagate(const Deadline& deadline) {
    while (true) {
      deadline.check();
      while (eliminate(true)) deadline.check();
      deadline.check();
      if (!eliminate(false)) return;
    }
  }

  std::vector<BooleanPolynomial> relations() const {
    std::vector<BooleanPolynomial> out = eqs_;
    for (Var v = 0; v < expr_.size(); ++v) {
      if (expr_[v]) out.push_back(BooleanPolynomial::variable(u_, v) + *expr_[v]);
    }
    return out;
  }

 private:
  // Gaussian elimination with columns ordered highest monomial first, so a
  // row whose leading term is a variable is an implied linear relation.
  bool eliminate(bool linear_only) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < eqs_.size(); ++i) {
      if (!linear_only || eqs_[i].degree() <= 1) rows.push_back(i);
    }
    if (rows.empty() || (!linear_only && rows.size() < 2)) return false;

    std::vector<Monomial> distinct;
    for (std::size_t i : rows) {
      for (const auto& m : eqs_[i].monomials()) distinct.push_back(m);
    }
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    struct MonoHash {
      std::size_t operator()(const Monomial& m) const { return m.hash(); }
    };
    std::unordered_map<Monomial, std::size_t, MonoHash> index;
    index.reserve(distinct.size() * 2);
    for (std::size_t c = 0; c < distinct.size(); ++c) index.emplace(distinct[c], c);

    gf2::BitMatrix mat(rows.size(), distinct.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& m : eqs_[rows[r]].monomials()) mat.set(r, index.at(m));
    }
    const auto pivots = mat.rref();

    std::vector<std::pair<Var, BooleanPolynomial>> subs;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const Monomial& lead = distinct[pivots[r]];
      if (lead.is_one()) throw Contradiction{};
      if (lead.degree() != 1) continue;
      std::vector<Monomial> rest;
      for (std::size_t c = pivots[r] + 1; c < distinct.size(); ++c) {
        if (mat.get(r, c)) rest.push_back(distinct[c]);
      }
      subs.emplace_back(lead.vars()[0], BooleanPolynomial::from_monomials(u_, std::move(rest)));
    }
    if (subs.empty()) return false;
    apply(subs);
    return true;
  }

  // Pivots are expressed over free variables that are not pivots of the same
  // batch (reduced echelon form), so the batch applies in one pass.
  void apply(const std::vector<std::pair<Var, BooleanPolynomial>>& subs) {
    std::vector<const BooleanPolynomial*> repl(u_->size(), nullptr);
    for (const auto& [v, e] : subs) repl[v] = &e;
    std::vector<BooleanPolynomial> next;
    next.reserve(eqs_.size());
    std::unordered_set<BooleanPolynomial, gf2::PolynomialHash> seen;
    for (const auto& p : eqs_) {
      auto q = substitute_many(p, repl);
      if (q.is_zero()) continue;
      if (q.is_one()) throw Contradiction{};
      if (seen.insert(q).second) next.push_back(std::move(q));
    }
    for (auto& e : expr_) {
      if (e && !e->is_constant()) e = substitute_many(*e, repl);
    }
    for (const auto& [v, e] : subs) expr_[v] = e;
    eqs_ = std::move(next);
  }

  UniversePtr u_;
  std::vector<BooleanPolynomial> eqs_;
  std::vector<std::optional<BooleanPolynomial>> expr_;
};

// ---- dense backend for systems of degree <= 2
//
// An equation is a symmetric n x n bit matrix (bit (i, j) set for the
// monomial x_i x_j, zero diagonal), a linear bit vector and a constant.
// Substituting a linear form for a variable is then a handful of row XORs.

class QuadFrame {
 public:
  static bool eligible(const EquationSystem& sys) {
    const auto& h = sys.degree_histogram();
    return h.empty() || h.rbegin()->first <= 2;
  }

  explicit QuadFrame(const EquationSystem& sys)
      : u_(sys.universe()), n_(u_->size()), w_((n_ + 63) / 64), expr_(n_) {
    for (const auto& p : sys.equations()) {
      Eq e = blank();
      for (const auto& m : p.monomials()) {
        const auto vs = m.vars();
        if (vs.empty()) {
          e.c = !e.c;
        } else if (vs.size() == 1) {
          flip_bit(e.lin.data(), vs[0]);
        } else {
          if (e.q.empty()) e.q.assign(n_ * w_, 0);
          flip_bit(row(e, vs[0]), vs[1]);
          flip_bit(row(e, vs[1]), vs[0]);
        }
      }
      eqs_.push_back(std::move(e));
    }
  }

  std::size_t universe_size() const { return n_; }
  bool eliminated(Var v) const { return expr_[v].present; }
  bool determined(Var v) const { return expr_[v].present && !any_bit(expr_[v].lin.data(), w_); }
  bool value(Var v) const { return expr_[v].c; }
  bool residual_empty() const { return eqs_.empty(); }

  void tally(std::vector<std::size_t>& count, bool include_expr) const {
    Words seen(w_);
    for (const auto& e : eqs_) {
      seen = e.lin;
      if (!e.q.empty()) {
        for (std::size_t i = 0; i < n_; ++i) {
          if (any_bit(row(e, i), w_)) seen[i >> 6] |= std::uint64_t{1} << (i & 63);
        }
      }
      for_each_bit(seen.data(), w_, [&](std::size_t v) { ++count[v]; });
    }
    if (!include_expr) return;
    for (const auto& x : expr_) {
      if (x.present) for_each_bit(x.lin.data(), w_, [&](std::size_t v) { ++count[v]; });
    }
  }

  Assignment completion() const {
    Assignment full(n_);
    for (Var v = 0; v < n_; ++v) full.set(v, expr_[v].present && expr_[v].c);
    return full;
  }

  void assume(Var v, bool bit) {
    Eq e = blank();
    if (expr_[v].present) {
      e.lin = expr_[v].lin;
      e.c = expr_[v].c != bit;
    } else {
      flip_bit(e.lin.data(), v);
      e.c = bit;
    }
    if (!any_bit(e.lin.data(), w_)) {
      if (e.c) throw Contradiction{};
      return;
    }
    eqs_.push_back(std::move(e));
  }

  void propagate(const Deadline& deadline) {
    while (true) {
      deadline.check();
      while (eliminate(true)) deadline.check();
      deadline.check();
      if (!eliminate(false)) return;
    }
  }

  std::vector<BooleanPolynomial> relations() const {
    std::vector<BooleanPolynomial> out;
    for (const auto& e : eqs_) {
      std::vector<Monomial> ms;
      if (e.c) ms.emplace_back();
      for_each_bit(e.lin.data(), w_, [&](std::size_t v) { ms.push_back(Monomial::variable(static_cast<Var>(v))); });
      if (!e.q.empty()) {
        for (std::size_t i = 0; i < n_; ++i) {
          for_each_bit(row(e, i), w_, [&](std::size_t j) {
            if (j > i) ms.emplace_back(std::vector<Var>{static_cast<Var>(i), static_cast<Var>(j)});
          });
        }
      }
      out.push_back(BooleanPolynomial::from_monomials(u_, std::move(ms)));
    }
    for (Var v = 0; v < n_; ++v) {
      if (!expr_[v].present) continue;
      std::vector<Monomial> ms{Monomial::variable(v)};
      if (expr_[v].c) ms.emplace_back();
      for_each_bit(expr_[v].lin.data(), w_,
                   [&](std::size_t x) { ms.push_back(Monomial::variable(static_cast<Var>(x))); });
      out.push_back(BooleanPolynomial::from_monomials(u_, std::move(ms)));
    }
    return out;
  }

 private:
  struct Eq {
    Words q;  // empty when there is no quadratic part
    Words lin;
    bool c = false;
  };
  struct Expr {
    Words lin;
    bool c = false;
    bool present = false;
  };

  Eq blank() const { return Eq{{}, Words(w_, 0), false}; }
  std::uint64_t* row(Eq& e, std::size_t i) const { return e.q.data() + i * w_; }
  const std::uint64_t* row(const Eq& e, std::size_t i) const { return e.q.data() + i * w_; }

  void substitute(Eq& e, Var v, const Expr& x) const {
    if (!e.q.empty()) {
      std::uint64_t* rv = row(e, v);
      if (any_bit(rv, w_)) {
        const Words cof(rv, rv + w_);
        std::fill(rv, rv + w_, 0);
        for_each_bit(cof.data(), w_, [&](std::size_t j) { flip_bit(row(e, j), v); });
        // (sum_{k in L} x_k + c) * (sum_{j in C} x_j)
        for_each_bit(x.lin.data(), w_, [&](std::size_t k) { xor_words(row(e, k), cof.data(), w_); });
        for_each_bit(cof.data(), w_, [&](std::size_t j) { xor_words(row(e, j), x.lin.data(), w_); });
        for (std::size_t i = 0; i < w_; ++i) e.lin[i] ^= x.lin[i] & cof[i];
        if (x.c) xor_words(e.lin.data(), cof.data(), w_);
      }
    }
    if (test_bit(e.lin.data(), v)) {
      flip_bit(e.lin.data(), v);
      xor_words(e.lin.data(), x.lin.data(), w_);
      e.c = e.c != x.c;
    }
  }

  bool eliminate(bool linear_only) {
    std::vector<std::size_t> rows;
    bool quadratic = false;
    for (std::size_t i = 0; i < eqs_.size(); ++i) {
      if (linear_only && !eqs_[i].q.empty()) continue;
      rows.push_back(i);
      quadratic = quadratic || !eqs_[i].q.empty();
    }
    if (rows.empty() || (!linear_only && (!quadratic || rows.size() < 2))) return false;

    // Quadratic columns: the upper triangle of the union of all matrices.
    std::size_t pq = 0;
    Words uni;
    std::vector<std::size_t> base;
    std::vector<std::uint32_t> prefix;  // per row and word: union bits (j > i) before that word
    if (!linear_only) {
      uni.assign(n_ * w_, 0);
      for (std::size_t r : rows) {
        if (!eqs_[r].q.empty()) xor_or(uni, eqs_[r].q);
      }
      base.resize(n_);
      prefix.resize(n_ * w_);
      for (std::size_t i = 0; i < n_; ++i) {
        std::uint64_t* ur = uni.data() + i * w_;
        for (std::size_t w = 0; w <= i / 64 && w < w_; ++w) {
          if (w < i / 64) {
            ur[w] = 0;
          } else {
            const unsigned s = static_cast<unsigned>(i & 63);
            ur[w] &= s == 63 ? 0 : (~std::uint64_t{0} << (s + 1));
          }
        }
        base[i] = pq;
        std::uint32_t acc = 0;
        for (std::size_t w = 0; w < w_; ++w) {
          prefix[i * w_ + w] = acc;
          acc += static_cast<std::uint32_t>(std::popcount(ur[w]));
        }
        pq += acc;
      }
    }
    const std::size_t cols = pq + n_ + 1;
    gf2::BitMatrix mat(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Eq& e = eqs_[rows[r]];
      if (!e.q.empty()) {
        for (std::size_t i = 0; i < n_; ++i) {
          const std::uint64_t* er = row(e, i);
          const std::uint64_t* ur = uni.data() + i * w_;
          for (std::size_t w = i / 64; w < w_; ++w) {
            std::uint64_t bits = er[w] & ur[w];
            for (; bits; bits &= bits - 1) {
              const unsigned b = static_cast<unsigned>(std::countr_zero(bits));
              const std::uint64_t below = b == 0 ? 0 : (ur[w] & (~std::uint64_t{0} >> (64 - b)));
              mat.set(r, base[i] + prefix[i * w_ + w] + static_cast<std::size_t>(std::popcount(below)));
            }
          }
        }
      }
      for_each_bit(e.lin.data(), w_, [&](std::size_t v) { mat.set(r, pq + (n_ - 1 - v)); });
      if (e.c) mat.set(r, cols - 1);
    }
    const auto pivots = mat.rref();

    std::vector<std::pair<Var, Expr>> subs;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const std::size_t p = pivots[r];
      if (p == cols - 1) throw Contradiction{};
      if (p < pq) continue;
      Expr x{Words(w_, 0), mat.get(r, cols - 1), true};
      for (std::size_t c = p + 1; c + 1 < cols; ++c) {
        if (mat.get(r, c)) flip_bit(x.lin.data(), n_ - 1 - (c - pq));
      }
      subs.emplace_back(static_cast<Var>(n_ - 1 - (p - pq)), std::move(x));
    }
    if (subs.empty()) return false;
    apply(subs);
    return true;
  }

  static void xor_or(Words& dst, const Words& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
  }

  void apply(const std::vector<std::pair<Var, Expr>>& subs) {
    std::vector<Eq> next;
    next.reserve(eqs_.size());
    for (auto& e : eqs_) {
      for (const auto& [v, x] : subs) substitute(e, v, x);
      if (!e.q.empty() && !any_bit(e.q.data(), e.q.size())) e.q.clear();
      if (e.q.empty() && !any_bit(e.lin.data(), w_)) {
        if (e.c) throw Contradiction{};
        continue;
      }
      next.push_back(std::move(e));
    }
    eqs_ = std::move(next);
    for (auto& y : expr_) {
      if (!y.present) continue;
      for (const auto& [v, x] : subs) {
        if (test_bit(y.lin.data(), v)) {
          flip_bit(y.lin.data(), v);
          xor_words(y.lin.data(), x.lin.data(), w_);
          y.c = y.c != x.c;
        }
      }
    }
    for (const auto& [v, x] : subs) expr_[v] = x;
  }

  UniversePtr u_;
  std::size_t n_;
  std::size_t w_;
  std::vector<Eq> eqs_;
  std::vector<Expr> expr_;
};

// ---- search, shared by both backends

template <class F>
bool targets_determined(const F& f, const std::vector<Var>& targets) {
  return std::all_of(targets.begin(), targets.end(), [&](Var v) { return f.determined(v); });
}

// Free variables by descending occurrence count, ties by lowest index.
template <class F>
std::vector<Var> occurrence_order(const F& f, bool include_expr) {
  std::vector<std::size_t> count(f.universe_size(), 0);
  f.tally(count, include_expr);
  std::vector<Var> out;
  for (Var v = 0; v < count.size(); ++v) {
    if (count[v] && !f.eliminated(v)) out.push_back(v);
  }
  std::stable_sort(out.begin(), out.end(), [&](Var a, Var b) { return count[a] > count[b]; });
  return out;
}

template <class F>
bool try_assume(F& f, Var v, bool bit, const Deadline& deadline) {
  try {
    f.assume(v, bit);
    f.propagate(deadline);
    return true;
  } catch (const Contradiction&) {
    return false;
  }
}

// Failed-literal probing: a value whose propagation contradicts is ruled
// out; values forced under both assumptions hold unconditionally.
template <class F>
void probe(F& f, std::size_t limit, const Deadline& deadline) {
  bool changed = true;
  while (changed) {
    changed = false;
    const auto order = occurrence_order(f, false);
    if (order.empty() || order.size() > limit) return;
    for (Var x : order) {
      deadline.check();
      if (f.eliminated(x)) continue;
      F f0 = f;
      F f1 = f;
      const bool ok0 = try_assume(f0, x, false, deadline);
      const bool ok1 = try_assume(f1, x, true, deadline);
      if (!ok0 && !ok1) throw Contradiction{};
      if (!ok0 || !ok1) {
        f = ok0 ? std::move(f0) : std::move(f1);
        changed = true;
        continue;
      }
      bool common = false;
      for (Var v = 0; v < f.universe_size(); ++v) {
        if (f.determined(v) || !f0.determined(v) || !f1.determined(v) || f0.value(v) != f1.value(v)) continue;
        f.assume(v, f0.value(v));
        common = true;
      }
      if (common) {
        f.propagate(deadline);
        changed = true;
      }
    }
  }
}

enum class Branch { found, exhausted_inconsistent, open };

template <class F>
struct Search {
  const EquationSystem& sys;
  const SolveOptions& options;
  const std::vector<Var>& targets;
  const Deadline& deadline;
  std::size_t nodes = 0;
  std::vector<Var> path{};
  std::vector<Var> winning_path{};
  std::optional<F> winner{};

  Branch dfs(const F& f, std::size_t depth) {
    ++nodes;
    if (targets_determined(f, targets) && f.residual_empty()) {
      const auto full = f.completion();
      if (!verify(full, sys)) return Branch::exhausted_inconsistent;
      if (options.accept && !options.accept(full)) return Branch::open;
      winner = f;
      winning_path = path;
      return Branch::found;
    }
    if (depth >= options.guess_budget) return Branch::open;
    const Var x = choose(f);
    bool all_dead = true;
    for (bool bit : {false, true}) {
      deadline.check();
      F g = f;
      path.push_back(x);
      if (try_assume(g, x, bit, deadline)) {
        const auto r = dfs(g, depth + 1);
        if (r == Branch::found) return r;
        if (r == Branch::open) all_dead = false;
      }
      path.pop_back();
    }
    return all_dead ? Branch::exhausted_inconsistent : Branch::open;
  }

  Var choose(const F& f) const {
    const auto order = occurrence_order(f, true);
    if (!order.empty()) return order.front();
    for (Var v : targets) {
      if (!f.eliminated(v)) return v;
    }
    throw ConfigError("no guess candidate");  // an open target is free or depends on a free variable
  }
};

template <class F>
RecoveryResult solve_with(const EquationSystem& sys, const SolveOptions& options, std::vector<Var> targets) {
  const auto start = Clock::now();
  const Deadline deadline(options.time_budget_seconds);
  const std::size_t n = sys.universe()->size();

  RecoveryResult res;
  res.origin.assign(n, BitOrigin::unknown);
  res.assignments = Assignment(n);
  auto finish = [&](SolveStatus s) {
    res.status = s;
    res.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    res.direct_count = static_cast<std::size_t>(std::count(res.origin.begin(), res.origin.end(), BitOrigin::direct));
    res.indirect_count =
        static_cast<std::size_t>(std::count(res.origin.begin(), res.origin.end(), BitOrigin::indirect));
    return res;
  };
  auto record_direct = [&](const F& f) {
    for (Var v = 0; v < n; ++v) {
      if (f.determined(v)) {
        res.assignments.set(v, f.value(v));
        res.origin[v] = BitOrigin::direct;
      }
    }
  };

  F root(sys);
  try {
    root.propagate(deadline);
  } catch (const Contradiction&) {
    return finish(SolveStatus::inconsistent);
  } catch (const Timeout&) {
    return finish(SolveStatus::timeout);
  }
  if (options.probe && !targets_determined(root, targets)) {
    // Probing works on a copy so a timeout leaves `root` consistent.
    F probed = root;
    try {
      probe(probed, options.probe_limit, deadline);
      root = std::move(probed);
    } catch (const Contradiction&) {
      return finish(SolveStatus::inconsistent);
    } catch (const Timeout&) {
      record_direct(root);
      return finish(SolveStatus::timeout);
    }
  }
  record_direct(root);
  if (targets_determined(root, targets)) return finish(SolveStatus::solved);
  if (options.guess_budget == 0) return finish(SolveStatus::partial);

  Search<F> search{sys, options, targets, deadline};
  Branch outcome;
  try {
    outcome = search.dfs(root, 0);
  } catch (const Timeout&) {
    res.branches = search.nodes;
    return finish(SolveStatus::timeout);
  }
  res.branches = search.nodes;
  if (outcome == Branch::exhausted_inconsistent) {
    res.assignments = Assignment(n);
    res.origin.assign(n, BitOrigin::unknown);
    return finish(SolveStatus::inconsistent);
  }
  if (outcome == Branch::open) return finish(SolveStatus::partial);

  const F& w = *search.winner;
  std::vector<Var> guessed = search.winning_path;
  std::sort(guessed.begin(), guessed.end());
  for (Var v = 0; v < n; ++v) {
    if (!w.determined(v) || res.origin[v] == BitOrigin::direct) continue;
    res.assignments.set(v, w.value(v));
    res.origin[v] = std::binary_search(guessed.begin(), guessed.end(), v) ? BitOrigin::guessed
                                                                            : BitOrigin::indirect;
  }
  res.guessed_vars = std::move(guessed);
  return finish(SolveStatus::solved);
}

template <class F>
std::vector<BooleanPolynomial> eliminate_with(const EquationSystem& sys) {
  F f(sys);
  try {
    f.propagate(Deadline(1e9));
  } catch (const Contradiction&) {
    return {BooleanPolynomial::one(sys.universe())};
  }
  return f.relations();
}

}  // namespace

std::vector<BooleanPolynomial> eliminate_once(const EquationSystem& sys, Backend backend) {
  if (backend != Backend::generic && QuadFrame::eligible(sys)) return eliminate_with<QuadFrame>(sys);
  if (backend == Backend::dense_quadratic) throw ConfigError("dense backend needs degree <= 2");
  return eliminate_with<PolyFrame>(sys);
}

RecoveryResult solve(const EquationSystem& sys, const SolveOptions& options) {
  const std::size_t n = sys.universe()->size();
  std::vector<Var> targets = options.targets;
  if (targets.empty()) {
    targets.resize(n);
    for (Var v = 0; v < n; ++v) targets[v] = v;
  }
  for (Var v : targets) {
    if (v >= n) throw ConfigError("target variable outside the universe");
  }
  const bool dense = QuadFrame::eligible(sys);
  if (options.backend == Backend::dense_quadratic && !dense) throw ConfigError("dense backend needs degree <= 2");
  if (options.backend != Backend::generic && dense) return solve_with<QuadFrame>(sys, options, std::move(targets));
  return solve_with<PolyFrame>(sys, options, std::move(targets));
}

}  // namespace dfa::solver
