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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dfa/gf2/polynomial.hpp"

namespace dfa::solver {

using gf2::Assignment;
using gf2::BooleanPolynomial;
using gf2::UniversePtr;
using gf2::Var;

/// Deduplicated list of polynomial equations, each asserted equal to zero.
class EquationSystem {
 public:
  explicit EquationSystem(UniversePtr universe);

  /// Appends p unless it is zero or already present. Throws
  /// InconsistentSystemError for the constant 1.
  bool add_equation(const BooleanPolynomial& p);

  const UniversePtr& universe() const { return universe_; }
  std::span<const BooleanPolynomial> equations() const { return equations_; }
  std::size_t size() const { return equations_.size(); }
  bool empty() const { return equations_.empty(); }
  bool contains(const BooleanPolynomial& p) const { return seen_.contains(p); }

  /// degree -> number of stored equations of that degree.
  const std::map<int, std::size_t>& degree_histogram() const { return histogram_; }
  std::size_t count_degree(int d) const;

  /// One equation per line in the textual polynomial format.
  std::string to_text() const;
  static EquationSystem from_text(UniversePtr universe, std::string_view text);

 private:
  UniversePtr universe_;
  std::vector<BooleanPolynomial> equations_;
  std::unordered_set<BooleanPolynomial, gf2::PolynomialHash> seen_;
  std::map<int, std::size_t> histogram_;
};

enum class SolveStatus { solved, partial, timeout, inconsistent };
const char* to_string(SolveStatus s);

enum class BitOrigin : std::uint8_t { unknown, direct, indirect, guessed };

/// Equation representation used during propagation. `automatic` picks the
/// dense bit-matrix form when every equation has degree <= 2.
enum class Backend { automatic, generic, dense_quadratic };

struct SolveOptions {
  double time_budget_seconds = 60.0;
  /// Maximum depth of the guess tree (2^budget leaves at most).
  std::size_t guess_budget = 0;
  /// Variables that must be fixed for `solved`. Empty means the whole universe.
  std::vector<Var> targets;
  /// Failed-literal probing after each propagation fixpoint.
  bool probe = true;
  /// Probing is skipped for systems with more free variables than this.
  std::size_t probe_limit = 1024;
  Backend backend = Backend::automatic;
  /// Extra check on complete candidates reached by guessing (e.g. re-encryption
  /// against observed keystream). A rejected candidate leaves its branch open.
  std::function<bool(const Assignment&)> accept;
};

struct RecoveryResult {
  Assignment assignments;
  std::vector<BitOrigin> origin;  // per universe variable
  std::size_t direct_count = 0;
  std::size_t indirect_count = 0;
  std::vector<Var> guessed_vars;
  SolveStatus status = SolveStatus::partial;
  double elapsed_seconds = 0.0;
  std::size_t branches = 0;  // guess-tree nodes explored
};

RecoveryResult solve(const EquationSystem& sys, const SolveOptions& options = {});

/// True iff every equation evaluates to 0. Throws MissingAssignmentError when
/// the assignment leaves a variable of the system open.
bool verify(const Assignment& assignment, const EquationSystem& sys);

/// True iff every equation whose variables are all assigned evaluates to 0.
bool verify_assigned(const Assignment& assignment, const EquationSystem& sys);

struct RecoveryCounts {
  std::size_t direct = 0;
  std::size_t indirect = 0;
  std::size_t guessed = 0;
};
RecoveryCounts classify_recovery(const RecoveryResult& result, const EquationSystem& sys);

/// One propagation pass (substitution, linear elimination and linearization
/// to a fixpoint, no probing or guessing). Returns the residual equations
/// plus one `v + expr` equation per eliminated variable; the solution set is
/// unchanged. Used to check elimination in isolation.
std::vector<BooleanPolynomial> eliminate_once(const EquationSystem& sys, Backend backend = Backend::automatic);

}  // namespace dfa::solver
