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
#include <filesystem>
#include <string>
#include <vector>

#include "dfa/attack/attack.hpp"
#include "dfa/ciphers/cipher.hpp"

namespace dfa::selftest {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Keystream of every vector in `<dir>/<cipher>_kat.json`. A missing file
/// fails with a "fixture missing" detail.
CheckResult check_known_answers(ciphers::CipherId id, const std::filesystem::path& fixture_dir);

/// Symbolic keystream (full horizon) evaluated at `trials` random states
/// equals the concrete keystream bit for bit.
CheckResult check_commutation(ciphers::CipherId id, std::size_t trials, std::uint64_t seed,
                              attack::SymbolicCache& cache);

/// Four-bit toy example: correct and misidentified differentials.
CheckResult check_toy();

/// Guess-free solves of random systems (up to `max_vars` variables) against
/// exhaustive enumeration.
CheckResult check_solver_oracle(std::size_t systems, std::uint64_t seed, unsigned max_vars = 16, int max_degree = 3);

/// Known answers for all ciphers, a short commutation pass, the toy example
/// and a solver batch.
std::vector<CheckResult> run_selftest(const std::filesystem::path& fixture_dir);

}  // namespace dfa::selftest
