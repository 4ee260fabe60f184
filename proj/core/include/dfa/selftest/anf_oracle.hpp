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

// Brute-force reference for small GF(2) systems: truth tables by the binary
// Moebius transform, independent of BooleanPolynomial::evaluate.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dfa/gf2/polynomial.hpp"
#include "dfa/solver/solver.hpp"

namespace dfa::selftest {

// tt[mask] = p(x) where bit v of mask is x_v.
inline std::vector<std::uint8_t> truth_table(const gf2::BooleanPolynomial& p, unsigned n) {
  std::vector<std::uint8_t> tt(std::size_t{1} << n, 0);
  for (const auto& m : p.monomials()) {
    std::uint32_t mask = 0;
    for (auto v : m.vars()) mask |= 1U << v;
    tt[mask] ^= 1;
  }
  for (unsigned i = 0; i < n; ++i) {
    for (std::uint32_t mask = 0; mask < tt.size(); ++mask) {
      if (mask & (1U << i)) tt[mask] ^= tt[mask ^ (1U << i)];
    }
  }
  return tt;
}

inline bool eval_mask(const gf2::BooleanPolynomial& p, std::uint32_t x) {
  bool acc = false;
  for (const auto& m : p.monomials()) {
    std::uint32_t mask = 0;
    for (auto v : m.vars()) mask |= 1U << v;
    acc ^= (x & mask) == mask;
  }
  return acc;
}

// Every assignment (as a mask) satisfying all equations.
inline std::vector<std::uint32_t> enumerate_solutions(std::span<const gf2::BooleanPolynomial> eqs, unsigned n) {
  std::vector<std::uint8_t> bad(std::size_t{1} << n, 0);
  for (const auto& p : eqs) {
    const auto tt = truth_table(p, n);
    for (std::size_t i = 0; i < tt.size(); ++i) bad[i] |= tt[i];
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < bad.size(); ++mask) {
    if (!bad[mask]) out.push_back(mask);
  }
  return out;
}

struct RandomSystem {
  gf2::UniversePtr universe;
  unsigned vars = 0;
  solver::EquationSystem system;
};

// n in [4, max_vars], degree <= max_degree. Half of the systems are planted
// (a hidden assignment satisfies every equation), the rest are arbitrary and
// often inconsistent.
inline RandomSystem random_system(std::mt19937_64& rng, unsigned max_vars, int max_degree) {
  std::uniform_int_distribution<unsigned> nv(4, max_vars);
  const unsigned n = nv(rng);
  auto u = gf2::Universe::make("x", n);
  RandomSystem rs{u, n, solver::EquationSystem(u)};
  const bool planted = rng() & 1U;
  const std::uint32_t hidden = static_cast<std::uint32_t>(rng()) & ((1U << n) - 1);
  std::uniform_int_distribution<unsigned> neq(n / 2, 2 * n);
  std::uniform_int_distribution<int> nterm(1, 8);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<unsigned> var(0, n - 1);
  const unsigned m = neq(rng);
  for (unsigned e = 0; e < m; ++e) {
    std::vector<gf2::Monomial> terms;
    const int t = nterm(rng);
    for (int i = 0; i < t; ++i) {
      std::vector<gf2::Var> vs;
      const int d = deg(rng);
      for (int j = 0; j < d; ++j) vs.push_back(static_cast<gf2::Var>(var(rng)));
      terms.emplace_back(vs);
    }
    auto p = gf2::BooleanPolynomial::from_monomials(u, terms);
    if (planted && eval_mask(p, hidden)) p = p.complement();
    if (p.is_one()) continue;
    rs.system.add_equation(p);
  }
  return rs;
}

// Empty when a guess-free solve result agrees with exhaustive enumeration:
// fixed variables hold in every solution, `inconsistent` only without
// solutions, `solved` only for a unique solution equal to the assignment.
inline std::string oracle_mismatch(const RandomSystem& rs, const solver::RecoveryResult& r) {
  const auto sols = enumerate_solutions(rs.system.equations(), rs.vars);
  if (r.status == solver::SolveStatus::inconsistent) {
    return sols.empty() ? "" : "reported inconsistent but " + std::to_string(sols.size()) + " solutions exist";
  }
  for (gf2::Var v = 0; v < rs.vars; ++v) {
    if (!r.assignments.known(v)) continue;
    for (auto s : sols) {
      if (((s >> v) & 1U) != static_cast<unsigned>(r.assignments.value(v))) {
        return "x" + std::to_string(v) + " fixed to a value some solution contradicts";
      }
    }
  }
  if (r.status == solver::SolveStatus::solved && sols.size() != 1) {
    return "reported solved with " + std::to_string(sols.size()) + " solutions";
  }
  return "";
}

}  // namespace dfa::selftest
