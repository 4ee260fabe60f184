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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfa/ciphers/cipher.hpp"
#include "dfa/common/bits.hpp"
#include "dfa/solver/solver.hpp"

namespace dfa::attack {

using ciphers::CipherId;
using gf2::BooleanPolynomial;

/// Maps an observed differential keystream to a fault location. The true
/// location is passed for simulation-only identifiers (the oracle); real
/// identifiers must ignore it.
struct Identifier {
  std::string name;
  std::function<std::size_t(std::span<const std::uint8_t> delta, std::size_t true_location)> identify;
};

Identifier oracle_identifier();

struct AttackConfig {
  CipherId cipher = CipherId::acorn;
  std::size_t initial_threshold = 0;  // 0: cipher default (150 / 896 / 234)
  std::size_t threshold_step = 5;
  double time_budget_seconds = 60.0;
  std::uint64_t seed = 1;
  bool stop_on_misidentification = true;
  /// Solver guess depth; defaults per cipher when unset (MORUS 6, others 0).
  std::optional<std::size_t> guess_budget;
  /// When false the trial ends after the first solve at threshold (ATOM
  /// default: its NFSR is never fully determined from 16 keystream bits).
  std::optional<bool> escalate;
  /// Injection cap; the trial is reported as failed when reached.
  std::size_t max_faults = 2000;
  /// Re-checks every harvested equation against the simulated state.
  bool check_equations = true;

  void validate() const;
};

struct FaultRecord {
  std::size_t location = 0;
  std::size_t identified = 0;
  bool duplicate = false;
  bool misidentified = false;
  std::map<int, std::size_t> added_by_degree;  // new equations kept, by degree
  std::size_t counted_after = 0;               // threshold counter after this fault
};

struct SolveAttempt {
  std::size_t fault_count = 0;
  std::size_t threshold = 0;
  std::size_t counted = 0;
  std::size_t equations = 0;
  solver::SolveStatus status = solver::SolveStatus::partial;
  double seconds = 0.0;
};

struct AttackReport {
  CipherId cipher = CipherId::acorn;
  std::uint64_t seed = 0;
  Bytes key;
  Bytes iv;
  std::size_t fault_count = 0;  // every injection, duplicates included
  std::vector<std::size_t> unique_locations;
  std::size_t misidentifications = 0;
  bool aborted = false;
  std::string abort_reason;
  std::size_t initial_threshold = 0;
  std::size_t final_threshold = 0;
  std::optional<std::size_t> faults_to_threshold;  // injections when the counter first met the threshold
  std::vector<FaultRecord> faults;
  std::vector<SolveAttempt> attempts;
  std::map<int, std::size_t> degree_histogram;
  std::size_t equation_count = 0;
  std::optional<solver::RecoveryResult> recovery;
  solver::RecoveryCounts counts;
  std::size_t target_bits = 0;
  std::size_t recovered_correct = 0;
  std::size_t recovered_wrong = 0;
  std::vector<std::int8_t> per_bit;  // per target: -1 unknown, 0 wrong, 1 correct
  bool system_satisfied_by_truth = false;
  std::shared_ptr<const solver::EquationSystem> system;  // final equation system
  bool success = false;
  double seconds = 0.0;
};

/// nks_i + nks_i[s_f <- s_f + 1] + delta_i for every i, zeros dropped.
std::vector<BooleanPolynomial> differential_equations(std::span<const BooleanPolynomial> nks, gf2::Var location,
                                                      std::span<const std::uint8_t> delta);

/// Fault-free keystream ANF reused across faults. ACORN and MORUS depend on
/// the cipher only; ATOM also needs the trial's concrete LFSR.
class SymbolicCache {
 public:
  const std::vector<BooleanPolynomial>& get(CipherId id, std::span<const std::uint8_t> state);

 private:
  std::map<CipherId, std::vector<BooleanPolynomial>> cache_;
};

/// Random-location attack with threshold escalation.
AttackReport run_attack(const AttackConfig& cfg, const Identifier& identifier, SymbolicCache& cache);

/// Precise-control variant: injects exactly `locations`, no threshold.
AttackReport run_precise_attack(const AttackConfig& cfg, std::span<const std::size_t> locations,
                                SymbolicCache& cache);

/// The fixed 46-location ATOM NFSR fault set.
const std::vector<std::size_t>& atom_precise_locations();

std::size_t default_guess_budget(CipherId id);
bool default_escalation(CipherId id);

/// Four-bit toy cipher z0 = s0 + s1 + s1*s2 + s2*s3 with state 0001.
struct ToyExample {
  std::uint8_t delta_z0 = 0;                     // observed, fault at s2
  std::string correct_equation;                  // differential for s2
  std::string wrong_equation;                    // differential assuming s3
  std::optional<bool> wrong_implied_s2;          // value forced by the wrong equation
  bool true_s2 = false;
  bool correct_equation_holds = false;
  bool wrong_equation_holds = false;
};
ToyExample toy_example();

/// Aggregate over trials for summaries and figure exports.
struct AttackSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t aborted = 0;
  double mean_faults = 0.0;
  std::size_t min_faults = 0;
  std::size_t max_faults = 0;
  std::size_t min_threshold = 0;
  std::size_t max_threshold = 0;
  double mean_faults_to_threshold = 0.0;
  std::size_t trials_with_misidentification = 0;
};
AttackSummary summarize(std::span<const AttackReport> reports);

}  // namespace dfa::attack
