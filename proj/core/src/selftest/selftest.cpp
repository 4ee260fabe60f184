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

#include "dfa/selftest/selftest.hpp"

#include <chrono>
#include <fstream>
#include <random>

#include "dfa/common/bits.hpp"
#include "dfa/common/error.hpp"
#include "dfa/selftest/anf_oracle.hpp"
#include "json.hpp"

namespace dfa::selftest {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
CheckResult timed(std::string name, F&& body) {
  CheckResult r;
  r.name = std::move(name);
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

}  // namespace

CheckResult check_known_answers(ciphers::CipherId id, const std::filesystem::path& fixture_dir) {
  const std::string name = std::string(ciphers::to_string(id)) + " known answers";
  return timed(name, [&](CheckResult& r) {
    const auto path = fixture_dir / (std::string(ciphers::to_string(id)) + "_kat.json");
    std::ifstream in(path);
    if (!in) {
      r.detail = "fixture missing: " + path.string();
      return;
    }
    const auto fx = nlohmann::json::parse(in);
    std::size_t n = 0;
    for (const auto& v : fx.at("vectors")) {
      const auto key = from_hex(v.at("key").get<std::string>());
      const auto iv = from_hex(v.at("iv").get<std::string>());
      const auto expected = from_bit_string(v.at("keystream").get<std::string>());
      const auto state = ciphers::initial_state(id, key, iv);
      if (ciphers::keystream(id, state, expected.size()) != expected) {
        r.detail = "keystream mismatch for key " + v.at("key").get<std::string>() + " iv " +
                   v.at("iv").get<std::string>();
        return;
      }
      ++n;
    }
    if (n == 0) {
      r.detail = "fixture has no vectors";
      return;
    }
    r.passed = true;
    r.detail = std::to_string(n) + " vectors";
  });
}

CheckResult check_commutation(ciphers::CipherId id, std::size_t trials, std::uint64_t seed,
                              attack::SymbolicCache& cache) {
  const std::string name = std::string(ciphers::to_string(id)) + " symbolic/concrete commutation";
  return timed(name, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    const std::size_t horizon = ciphers::traits(id).symbolic_horizon;
    for (std::size_t t = 0; t < trials; ++t) {
      Bytes key(16), iv(16);
      for (auto& b : key) b = static_cast<std::uint8_t>(rng());
      for (auto& b : iv) b = static_cast<std::uint8_t>(rng());
      const auto state = ciphers::initial_state(id, key, iv);
      const auto z = ciphers::keystream(id, state, horizon);
      const auto& nks = cache.get(id, state);
      const auto a = ciphers::symbolic_assignment(id, state);
      for (std::size_t i = 0; i < horizon; ++i) {
        if (nks[i].evaluate(a) != (z[i] != 0)) {
          r.detail = "bit " + std::to_string(i) + " differs for key " + to_hex(key) + " iv " + to_hex(iv);
          return;
        }
      }
    }
    r.passed = true;
    r.detail = std::to_string(trials) + " states x " + std::to_string(horizon) + " bits";
  });
}

CheckResult check_toy() {
  return timed("toy example", [](CheckResult& r) {
    const auto t = attack::toy_example();
    r.passed = t.delta_z0 == 1 && t.correct_equation == "s1 + s3 + 1" && t.correct_equation_holds &&
               t.wrong_equation == "s2 + 1" && !t.wrong_equation_holds && t.wrong_implied_s2 == true && !t.true_s2;
    r.detail = "dz0=" + std::to_string(t.delta_z0) + ", fault at s2: " + t.correct_equation +
               ", labelled s3: " + t.wrong_equation;
  });
}

CheckResult check_solver_oracle(std::size_t systems, std::uint64_t seed, unsigned max_vars, int max_degree) {
  return timed("solver vs exhaustive enumeration", [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::size_t fixed = 0;
    for (std::size_t i = 0; i < systems; ++i) {
      const auto rs = random_system(rng, max_vars, max_degree);
      const auto res = solver::solve(rs.system);
      const auto msg = oracle_mismatch(rs, res);
      if (!msg.empty()) {
        r.detail = "system " + std::to_string(i) + ": " + msg;
        return;
      }
      fixed += res.assignments.known_count();
    }
    r.passed = true;
    r.detail = std::to_string(systems) + " systems, " + std::to_string(fixed) + " fixed variables checked";
  });
}

std::vector<CheckResult> run_selftest(const std::filesystem::path& fixture_dir) {
  std::vector<CheckResult> out;
  attack::SymbolicCache cache;
  for (auto id : {ciphers::CipherId::acorn, ciphers::CipherId::morus, ciphers::CipherId::atom}) {
    out.push_back(check_known_answers(id, fixture_dir));
  }
  for (auto id : {ciphers::CipherId::acorn, ciphers::CipherId::morus, ciphers::CipherId::atom}) {
    out.push_back(check_commutation(id, 3, 17, cache));
  }
  out.push_back(check_toy());
  out.push_back(check_solver_oracle(200, 23));
  return out;
}

}  // namespace dfa::selftest
