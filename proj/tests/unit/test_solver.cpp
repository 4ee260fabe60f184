// Copyright 2026 The DFA Workbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "dfa/common/error.hpp"
#include "dfa/selftest/anf_oracle.hpp"
#include "dfa/solver/solver.hpp"

namespace {

using dfa::gf2::Assignment;
using dfa::gf2::BooleanPolynomial;
using dfa::gf2::Universe;
using dfa::solver::BitOrigin;
using dfa::solver::EquationSystem;
using dfa::solver::SolveOptions;
using dfa::solver::SolveStatus;

EquationSystem system_of(const dfa::gf2::UniversePtr& u, std::initializer_list<const char*> eqs) {
  EquationSystem sys(u);
  for (const char* e : eqs) sys.add_equation(BooleanPolynomial::parse(u, e));
  return sys;
}

TEST(EquationSystem, DeduplicatesAndSkipsZero) {
  auto u = Universe::make("x", 3);
  EquationSystem sys(u);
  EXPECT_TRUE(sys.add_equation(BooleanPolynomial::parse(u, "x0*x1 + x2")));
  EXPECT_FALSE(sys.add_equation(BooleanPolynomial::parse(u, "x2 + x1*x0")));
  EXPECT_FALSE(sys.add_equation(BooleanPolynomial::zero(u)));
  EXPECT_TRUE(sys.add_equation(BooleanPolynomial::parse(u, "x1 + 1")));
  EXPECT_EQ(sys.size(), 2U);
  EXPECT_EQ(sys.count_degree(2), 1U);
  EXPECT_EQ(sys.count_degree(1), 1U);
  EXPECT_EQ(sys.count_degree(3), 0U);
  EXPECT_THROW(sys.add_equation(BooleanPolynomial::one(u)), dfa::InconsistentSystemError);
}

TEST(EquationSystem, TextRoundTrip) {
  auto u = Universe::make({{"b", 4}, {"k", 4}});
  auto sys = system_of(u, {"b0*k1 + b2 + 1", "k3", "b1*b2*b3 + k0*k2"});
  const auto back = EquationSystem::from_text(u, sys.to_text());
  ASSERT_EQ(back.size(), sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) EXPECT_EQ(back.equations()[i], sys.equations()[i]);
}

TEST(Solve, LinearPair) {
  auto u = Universe::make("x", 2);
  const auto r = dfa::solver::solve(system_of(u, {"x0 + x1 + 1", "x1"}));
  EXPECT_EQ(r.status, SolveStatus::solved);
  EXPECT_TRUE(r.assignments.value(0));
  EXPECT_FALSE(r.assignments.value(1));
  EXPECT_EQ(r.direct_count, 2U);
  EXPECT_EQ(r.indirect_count, 0U);
  EXPECT_TRUE(r.guessed_vars.empty());
}

TEST(Solve, SubstitutionMakesQuadraticLinear) {
  auto u = Universe::make("x", 3);
  const auto r = dfa::solver::solve(system_of(u, {"x0*x1 + x2 + 1", "x0 + 1", "x1 + 1"}));
  EXPECT_EQ(r.status, SolveStatus::solved);
  EXPECT_FALSE(r.assignments.value(2));
}

TEST(Solve, ContradictionIsInconsistent) {
  auto u = Universe::make("x", 2);
  const auto r = dfa::solver::solve(system_of(u, {"x0 + 1", "x0"}));
  EXPECT_EQ(r.status, SolveStatus::inconsistent);
}

TEST(Solve, LinearizationHarvestsRelations) {
  // Each quadratic term appears twice; their sum is the linear x2 + x3.
  auto u = Universe::make("x", 4);
  SolveOptions opt;
  opt.probe = false;
  const auto r = dfa::solver::solve(system_of(u, {"x0*x1 + x2", "x0*x1 + x3 + 1", "x3"}), opt);
  ASSERT_TRUE(r.assignments.known(2));
  EXPECT_TRUE(r.assignments.value(2));
}

TEST(Solve, OneGuessFeedsTwoEquations) {
  auto u = Universe::make("x", 3);
  const auto sys = system_of(u, {"x0 + x1 + 1", "x0 + x2 + 1"});
  SolveOptions opt;
  opt.guess_budget = 1;
  const auto r = dfa::solver::solve(sys, opt);
  ASSERT_EQ(r.status, SolveStatus::solved);
  const auto c = dfa::solver::classify_recovery(r, sys);
  EXPECT_EQ(c.direct, 0U);
  EXPECT_EQ(c.guessed, 1U);
  EXPECT_EQ(c.indirect, 2U);
  EXPECT_EQ(r.guessed_vars, std::vector<dfa::gf2::Var>{0});
  EXPECT_TRUE(dfa::solver::verify(r.assignments, sys));
}

TEST(Solve, FullyLinearHasNoIndirectOrGuessed) {
  auto u = Universe::make("x", 4);
  const auto sys = system_of(u, {"x0 + x1", "x1 + x2 + 1", "x2 + x3", "x3 + 1"});
  SolveOptions opt;
  opt.guess_budget = 4;
  const auto r = dfa::solver::solve(sys, opt);
  const auto c = dfa::solver::classify_recovery(r, sys);
  EXPECT_EQ(c.direct, 4U);
  EXPECT_EQ(c.indirect, 0U);
  EXPECT_EQ(c.guessed, 0U);
}

TEST(Solve, UnderdeterminedWithoutGuessesIsPartial) {
  auto u = Universe::make("x", 3);
  const auto r = dfa::solver::solve(system_of(u, {"x0*x1 + x2"}));
  EXPECT_EQ(r.status, SolveStatus::partial);
  EXPECT_EQ(r.assignments.known_count(), 0U);
}

TEST(Solve, TargetsRestrictSolvedCondition) {
  auto u = Universe::make("x", 3);
  SolveOptions opt;
  opt.targets = {0};
  const auto r = dfa::solver::solve(system_of(u, {"x0 + 1", "x1*x2 + x1"}), opt);
  EXPECT_EQ(r.status, SolveStatus::solved);
}

TEST(Solve, ZeroBudgetTimesOut) {
  auto u = Universe::make("x", 3);
  SolveOptions opt;
  opt.time_budget_seconds = 0.0;
  const auto r = dfa::solver::solve(system_of(u, {"x0 + 1", "x1*x2 + x1"}), opt);
  EXPECT_EQ(r.status, SolveStatus::timeout);
}

TEST(Verify, Examples) {
  auto u = Universe::make("x", 3);
  const auto sys = system_of(u, {"x0 + x1", "x1*x2 + 1"});
  const auto good = Assignment::from_bits(std::vector<std::uint8_t>{1, 1, 1});
  EXPECT_TRUE(dfa::solver::verify(good, sys));
  auto bad = good;
  bad.set(0, false);
  EXPECT_FALSE(dfa::solver::verify(bad, sys));
  EXPECT_TRUE(dfa::solver::verify(good, EquationSystem(u)));
  Assignment partial(3);
  partial.set(0, true);
  EXPECT_THROW(dfa::solver::verify(partial, sys), dfa::MissingAssignmentError);
  EXPECT_TRUE(dfa::solver::verify_assigned(partial, sys));
}

// Guess-free results agree with exhaustive enumeration.
TEST(SolveProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 14, 3);
    const auto r = dfa::solver::solve(rs.system);
    const auto msg = dfa::selftest::oracle_mismatch(rs, r);
    ASSERT_TRUE(msg.empty()) << "trial " << trial << ": " << msg << "\n" << rs.system.to_text();
  }
}

// With enough guesses the search is complete: a solution is found iff one exists.
TEST(SolveProperty, GuessingFindsSolutionIffExists) {
  std::mt19937_64 rng(402);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 12, 3);
    SolveOptions opt;
    opt.guess_budget = rs.vars;
    const auto r = dfa::solver::solve(rs.system, opt);
    const auto sols = dfa::selftest::enumerate_solutions(rs.system.equations(), rs.vars);
    if (sols.empty()) {
      ASSERT_EQ(r.status, SolveStatus::inconsistent) << "trial " << trial;
    } else {
      ASSERT_EQ(r.status, SolveStatus::solved) << "trial " << trial;
      ASSERT_TRUE(r.assignments.complete());
      ASSERT_TRUE(dfa::solver::verify(r.assignments, rs.system));
    }
  }
}

TEST(SolveProperty, EliminationPreservesSolutionSet) {
  std::mt19937_64 rng(403);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 14, 3);
    const auto reduced = dfa::solver::eliminate_once(rs.system);
    ASSERT_EQ(dfa::selftest::enumerate_solutions(rs.system.equations(), rs.vars),
              dfa::selftest::enumerate_solutions(reduced, rs.vars))
        << "trial " << trial;
  }
}

// Dense and generic propagation are checked separately against the oracle and
// must agree with each other on quadratic systems.
TEST(SolveProperty, DenseAndGenericBackendsAgree) {
  std::mt19937_64 rng(407);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 14, 2);
    SolveOptions dense;
    dense.backend = dfa::solver::Backend::dense_quadratic;
    SolveOptions generic;
    generic.backend = dfa::solver::Backend::generic;
    const auto a = dfa::solver::solve(rs.system, dense);
    const auto b = dfa::solver::solve(rs.system, generic);
    ASSERT_EQ(dfa::selftest::oracle_mismatch(rs, a), "") << "dense, trial " << trial;
    ASSERT_EQ(dfa::selftest::oracle_mismatch(rs, b), "") << "generic, trial " << trial;
    ASSERT_EQ(a.status, b.status) << "trial " << trial;
    ASSERT_EQ(a.assignments, b.assignments) << "trial " << trial;
  }
}

TEST(Solve, DenseBackendRejectsCubic) {
  auto u = Universe::make("x", 3);
  SolveOptions opt;
  opt.backend = dfa::solver::Backend::dense_quadratic;
  EXPECT_THROW(dfa::solver::solve(system_of(u, {"x0*x1*x2 + 1"}), opt), dfa::ConfigError);
}

TEST(SolveProperty, Deterministic) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 12, 3);
    SolveOptions opt;
    opt.guess_budget = 3;
    const auto a = dfa::solver::solve(rs.system, opt);
    const auto b = dfa::solver::solve(rs.system, opt);
    ASSERT_EQ(a.status, b.status);
    ASSERT_EQ(a.assignments, b.assignments);
    ASSERT_EQ(a.origin, b.origin);
    ASSERT_EQ(a.guessed_vars, b.guessed_vars);
  }
}

TEST(SolveProperty, SoundOnAssignedSubsystem) {
  std::mt19937_64 rng(405);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 12, 3);
    SolveOptions opt;
    opt.guess_budget = 2;
    const auto r = dfa::solver::solve(rs.system, opt);
    if (r.status == SolveStatus::solved || r.status == SolveStatus::partial) {
      ASSERT_TRUE(dfa::solver::verify_assigned(r.assignments, rs.system)) << "trial " << trial;
    }
    ASSERT_LE(r.direct_count + r.indirect_count + r.guessed_vars.size(), rs.vars);
  }
}

TEST(SolveProperty, LargerBudgetNeverAssignsLess) {
  std::mt19937_64 rng(406);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rs = dfa::selftest::random_system(rng, 12, 3);
    SolveOptions tight;
    tight.time_budget_seconds = 0.0;
    SolveOptions loose;
    const auto a = dfa::solver::solve(rs.system, tight);
    const auto b = dfa::solver::solve(rs.system, loose);
    if (b.status == SolveStatus::inconsistent) continue;
    for (dfa::gf2::Var v = 0; v < rs.vars; ++v) {
      if (a.assignments.known(v)) ASSERT_TRUE(b.assignments.known(v));
    }
  }
}

}  // namespace
