// Copyright 2026 The DFA Workbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "dfa/selftest/selftest.hpp"
#include "json.hpp"

namespace {

using dfa::ciphers::CipherId;
namespace fs = std::filesystem;

TEST(Selftest, CleanFixturesPass) {
  for (auto id : {CipherId::acorn, CipherId::morus, CipherId::atom}) {
    const auto r = dfa::selftest::check_known_answers(id, DFA_FIXTURE_DIR);
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  }
  EXPECT_TRUE(dfa::selftest::check_toy().passed);
  EXPECT_TRUE(dfa::selftest::check_solver_oracle(50, 1, 12, 3).passed);
}

TEST(Selftest, MissingFixtureIsReported) {
  const auto dir = fs::temp_directory_path() / "dfa_selftest_empty";
  fs::create_directories(dir);
  const auto r = dfa::selftest::check_known_answers(CipherId::acorn, dir);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.detail.find("fixture missing"), std::string::npos);
  fs::remove_all(dir);
}

// A single flipped keystream bit in the fixture stands in for a mutated cipher.
TEST(Selftest, MutatedKnownAnswerFails) {
  std::ifstream in(std::string(DFA_FIXTURE_DIR) + "/morus_kat.json");
  auto fx = nlohmann::json::parse(in);
  auto& ks = fx["vectors"][0]["keystream"];
  auto s = ks.get<std::string>();
  s[5] = s[5] == '0' ? '1' : '0';
  ks = s;
  const auto dir = fs::temp_directory_path() / "dfa_selftest_mutant";
  fs::create_directories(dir);
  std::ofstream(dir / "morus_kat.json") << fx.dump();
  const auto r = dfa::selftest::check_known_answers(CipherId::morus, dir);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.detail.find("mismatch"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Selftest, CommutationSpotCheck) {
  dfa::attack::SymbolicCache cache;
  for (auto id : {CipherId::acorn, CipherId::atom}) {
    const auto r = dfa::selftest::check_commutation(id, 2, 5, cache);
    EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  }
}

}  // namespace
