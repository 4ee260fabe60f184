// Copyright 2026 The DFA Workbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "dfa/common/error.hpp"
#include "dfa/gf2/polynomial.hpp"

namespace {

using dfa::gf2::Assignment;
using dfa::gf2::BooleanPolynomial;
using dfa::gf2::Monomial;
using dfa::gf2::Universe;
using dfa::gf2::UniversePtr;
using dfa::gf2::Var;

BooleanPolynomial P(const UniversePtr& u, std::string_view text) { return BooleanPolynomial::parse(u, text); }

// Evaluates a monomial list directly, independent of the canonical form.
bool eval_terms(const std::vector<std::vector<Var>>& terms, unsigned mask) {
  bool acc = false;
  for (const auto& t : terms) {
    bool prod = true;
    for (Var v : t) prod = prod && ((mask >> v) & 1U);
    acc ^= prod;
  }
  return acc;
}

std::vector<std::vector<Var>> random_terms(std::mt19937_64& rng, unsigned nvars, int max_terms, int max_deg) {
  std::uniform_int_distribution<int> nterm(0, max_terms);
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<int> var(0, static_cast<int>(nvars) - 1);
  std::vector<std::vector<Var>> out(static_cast<std::size_t>(nterm(rng)));
  for (auto& t : out) {
    const int d = deg(rng);
    for (int i = 0; i < d; ++i) t.push_back(static_cast<Var>(var(rng)));
  }
  return out;
}

BooleanPolynomial build(const UniversePtr& u, const std::vector<std::vector<Var>>& terms) {
  std::vector<Monomial> ms;
  for (const auto& t : terms) ms.emplace_back(t);
  return BooleanPolynomial::from_monomials(u, ms);
}

Assignment mask_assignment(unsigned nvars, unsigned mask) {
  Assignment a(nvars);
  for (unsigned v = 0; v < nvars; ++v) a.set(static_cast<Var>(v), (mask >> v) & 1U);
  return a;
}

TEST(Polynomial, AddExamples) {
  auto u = Universe::make("x", 4);
  EXPECT_EQ(P(u, "x0 + x1") + P(u, "x1"), P(u, "x0"));
  auto p = P(u, "x0*x1 + x2 + 1");
  EXPECT_TRUE((p + p).is_zero());
}

TEST(Polynomial, FaultDifferenceOfToyOutput) {
  auto u = Universe::make("s", 4);
  auto z = P(u, "s1*s2 + s2*s3");
  auto faulty = z.substitute(2, P(u, "s2 + 1"));
  EXPECT_EQ(faulty, P(u, "s1*s2 + s1 + s2*s3 + s3"));
  EXPECT_EQ(z + faulty, P(u, "s1 + s3"));
}

TEST(Polynomial, MulExamples) {
  auto u = Universe::make("x", 3);
  EXPECT_TRUE((P(u, "x0 + 1") * P(u, "x0")).is_zero());
  EXPECT_EQ(P(u, "x0") * P(u, "x0"), P(u, "x0"));
  EXPECT_EQ(P(u, "x0 + x1") * P(u, "x0 + x1"), P(u, "x0 + x1"));
}

TEST(Polynomial, ComplementAndDegree) {
  auto u = Universe::make("s", 293);
  EXPECT_TRUE(BooleanPolynomial::zero(u).complement().is_one());
  EXPECT_EQ(P(u, "s107").complement(), P(u, "s107 + 1"));
  auto p = P(u, "s1*s2*s3 + s4");
  EXPECT_EQ(p.complement().complement(), p);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(BooleanPolynomial::one(u).degree(), 0);
  EXPECT_EQ(BooleanPolynomial::zero(u).degree(), -1);
}

TEST(Polynomial, SubstituteExamples) {
  auto u = Universe::make("x", 3);
  EXPECT_TRUE(P(u, "x0").substitute(0, BooleanPolynomial::one(u)).is_one());
  EXPECT_EQ(P(u, "x0*x1").substitute(1, P(u, "x2")), P(u, "x0*x2"));
}

TEST(Polynomial, EvaluateExamples) {
  auto u = Universe::make("s", 4);
  Assignment a(4);
  a.set(0, false);
  a.set(1, false);
  a.set(2, false);
  a.set(3, true);
  EXPECT_TRUE(P(u, "s1 + s3").evaluate(a));
  EXPECT_FALSE(BooleanPolynomial::zero(u).evaluate(a));
  auto v = Universe::make("x", 3);
  EXPECT_FALSE(P(v, "x0*x1 + x2").evaluate(Assignment::from_bits(std::vector<std::uint8_t>{1, 1, 1})));
}

TEST(Polynomial, MissingAssignmentThrows) {
  auto u = Universe::make("x", 3);
  Assignment a(3);
  a.set(0, true);
  EXPECT_THROW(P(u, "x0*x1").evaluate(a), dfa::MissingAssignmentError);
}

TEST(Polynomial, UniverseMismatchThrows) {
  auto u = Universe::make("x", 3);
  auto v = Universe::make("y", 3);
  EXPECT_THROW(P(u, "x0") + P(v, "y0"), dfa::UniverseMismatchError);
  // Same layout, different objects: accepted.
  auto w = Universe::make("x", 3);
  EXPECT_EQ(P(u, "x0") + P(w, "x0"), BooleanPolynomial::zero(u));
}

TEST(Polynomial, ParsePrintRoundTrip) {
  auto u = Universe::make({{"b", 90}, {"k", 128}});
  const std::string text = "b3*b59*k7 + b1*k0 + b2 + k127 + 1";
  auto p = P(u, text);
  EXPECT_EQ(P(u, p.to_string()), p);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(P(u, "0").to_string(), "0");
  EXPECT_THROW(P(u, "q4 + 1"), dfa::ParseError);
}

TEST(Polynomial, MonomialBudgetTrips) {
  auto u = Universe::make("x", 40);
  const auto saved = dfa::gf2::monomial_budget();
  dfa::gf2::set_monomial_budget(100);
  auto p = BooleanPolynomial::one(u);
  EXPECT_THROW(
      {
        for (Var v = 0; v < 20; ++v) p = p * (BooleanPolynomial::variable(u, v) + BooleanPolynomial::one(u));
      },
      dfa::MonomialBudgetError);
  dfa::gf2::set_monomial_budget(saved);
}

// Ring laws against direct term evaluation, over all 2^n assignments.
TEST(PolynomialProperty, AddMulHomomorphismExhaustive) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned n = 4 + static_cast<unsigned>(trial % 9);  // 4..12
    auto u = Universe::make("x", n);
    const auto tp = random_terms(rng, n, 12, 4);
    const auto tq = random_terms(rng, n, 12, 4);
    const auto p = build(u, tp);
    const auto q = build(u, tq);
    const auto sum = p + q;
    const auto prod = p * q;
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
      const auto a = mask_assignment(n, mask);
      const bool vp = eval_terms(tp, mask);
      const bool vq = eval_terms(tq, mask);
      ASSERT_EQ(p.evaluate(a), vp);
      ASSERT_EQ(sum.evaluate(a), vp != vq);
      ASSERT_EQ(prod.evaluate(a), vp && vq);
    }
  }
}

TEST(PolynomialProperty, RingLaws) {
  std::mt19937_64 rng(12);
  auto u = Universe::make("x", 10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = build(u, random_terms(rng, 10, 8, 3));
    const auto b = build(u, random_terms(rng, 10, 8, 3));
    const auto c = build(u, random_terms(rng, 10, 8, 3));
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ(a * a, a);
  }
}

TEST(PolynomialProperty, SubstitutionComposition) {
  std::mt19937_64 rng(13);
  const unsigned n = 8;
  auto u = Universe::make("x", n);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = build(u, random_terms(rng, n, 10, 3));
    const auto r = build(u, random_terms(rng, n, 4, 2));
    const Var x = static_cast<Var>(rng() % n);
    ASSERT_EQ(p.substitute(x, BooleanPolynomial::variable(u, x)), p);
    const auto s = p.substitute(x, r);
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
      auto a = mask_assignment(n, mask);
      const bool sv = s.evaluate(a);
      a.set(x, r.evaluate(a));
      ASSERT_EQ(sv, p.evaluate(a));
    }
  }
}

TEST(PolynomialProperty, DerivativeIsSumWithFlippedSubstitution) {
  std::mt19937_64 rng(15);
  auto u = Universe::make("x", 10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = build(u, random_terms(rng, 10, 12, 4));
    const Var x = static_cast<Var>(rng() % 10);
    const auto flipped = p.substitute(x, BooleanPolynomial::variable(u, x).complement());
    ASSERT_EQ(p.derivative(x), p + flipped);
    for (Var v : p.derivative(x).variables()) ASSERT_NE(v, x);
  }
}

TEST(PolynomialProperty, RestrictMatchesEvaluation) {
  std::mt19937_64 rng(14);
  const unsigned n = 9;
  auto u = Universe::make("x", n);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = build(u, random_terms(rng, n, 10, 3));
    const unsigned mask = static_cast<unsigned>(rng()) & ((1U << n) - 1);
    Assignment partial(n);
    for (unsigned v = 0; v < n / 2; ++v) partial.set(static_cast<Var>(v), (mask >> v) & 1U);
    const auto r = p.restrict(partial);
    for (Var v : r.variables()) ASSERT_GE(v, n / 2);
    ASSERT_EQ(r.evaluate(mask_assignment(n, mask)), p.evaluate(mask_assignment(n, mask)));
  }
}

}  // namespace
