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

#include "dfa/attack/attack.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include "dfa/common/error.hpp"
#include "dfa/faultlab/faultlab.hpp"

namespace dfa::attack {

namespace {

using Clock = std::chrono::steady_clock;
using solver::EquationSystem;
using solver::SolveStatus;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() >> 56);
  return out;
}

std::vector<gf2::Var> target_vars(CipherId id) {
  const std::size_t n = id == CipherId::atom ? ciphers::traits(id).faultable_bits
                                             : ciphers::symbolic_universe(id)->size();
  std::vector<gf2::Var> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<gf2::Var>(i);
  return t;
}

// ACORN keeps only linear and quadratic differentials.
bool keep_equation(CipherId id, const BooleanPolynomial& e) { return id != CipherId::acorn || e.degree() <= 2; }

std::size_t counter(CipherId id, const EquationSystem& sys) {
  return id == CipherId::acorn ? sys.count_degree(1) : sys.size();
}

// Shared per-trial state.
struct Trial {
  CipherId id;
  Bits state;
  Bits z;
  gf2::Assignment truth;
  const std::vector<BooleanPolynomial>* nks = nullptr;
  EquationSystem sys;
  std::vector<gf2::Var> targets;
  solver::SolveOptions options;
  bool check = true;

  Trial(const AttackConfig& cfg, std::mt19937_64& rng, SymbolicCache& cache, AttackReport& report)
      : id(cfg.cipher), sys(ciphers::symbolic_universe(cfg.cipher)), targets(target_vars(cfg.cipher)),
        check(cfg.check_equations) {
    const auto& tr = ciphers::traits(id);
    report.cipher = id;
    report.seed = cfg.seed;
    report.key = random_bytes(rng, 16);
    report.iv = random_bytes(rng, 16);
    state = ciphers::initial_state(id, report.key, report.iv);
    z = ciphers::keystream(id, state, tr.keystream_bits);
    truth = ciphers::symbolic_assignment(id, state);
    nks = &cache.get(id, state);
    options.time_budget_seconds = cfg.time_budget_seconds;
    options.guess_budget = cfg.guess_budget.value_or(default_guess_budget(id));
    options.targets = targets;
    report.target_bits = targets.size();
    if (id != CipherId::atom) {
      options.accept = [this](const gf2::Assignment& a) { return reproduces_keystream(a); };
    }
    if (id != CipherId::acorn) {
      for (std::size_t i = 0; i < nks->size(); ++i) {
        add(nks->at(i) + BooleanPolynomial::constant(sys.universe(), z[i]), nullptr);
      }
    }
  }

  Trial(const Trial&) = delete;
  Trial& operator=(const Trial&) = delete;

  Bits delta_for(std::size_t f) const {
    const Bits faulty = faultlab::inject_bit_flip(id, state, f);
    return xor_bits(z, ciphers::keystream(id, faulty, z.size()));
  }

  bool add(const BooleanPolynomial& e, FaultRecord* rec) {
    if (check && e.evaluate(truth)) {
      throw InvariantError("harvested equation not satisfied by the simulated state: " + e.to_string());
    }
    if (!sys.add_equation(e)) return false;
    if (rec) ++rec->added_by_degree[e.degree()];
    return true;
  }

  void harvest(std::size_t location, std::span<const std::uint8_t> delta, FaultRecord& rec) {
    const auto eqs = differential_equations(*nks, static_cast<gf2::Var>(location), delta.first(nks->size()));
    for (const auto& e : eqs) {
      if (keep_equation(id, e)) add(e, &rec);
    }
  }

  bool reproduces_keystream(const gf2::Assignment& a) const {
    Bits rec(state.size(), 0);
    ciphers::apply_assignment(id, a, rec);
    return ciphers::keystream(id, rec, z.size()) == z;
  }

  // Solution accepted by the attacker: ACORN and MORUS re-encrypt the
  // recovered state against the observed keystream.
  bool accepted(const solver::RecoveryResult& r) const {
    if (r.status != SolveStatus::solved) return false;
    return id == CipherId::atom || reproduces_keystream(r.assignments);
  }

  void finish(AttackReport& report, std::optional<solver::RecoveryResult> r) {
    report.degree_histogram = sys.degree_histogram();
    report.equation_count = sys.size();
    report.system_satisfied_by_truth = solver::verify(truth, sys);
    report.system = std::make_shared<const EquationSystem>(sys);
    report.per_bit.assign(targets.size(), -1);
    if (r) {
      report.counts = solver::classify_recovery(*r, sys);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto v = targets[i];
        if (!r->assignments.known(v)) continue;
        const bool ok = r->assignments.value(v) == truth.value(v);
        report.per_bit[i] = ok ? 1 : 0;
        ++(ok ? report.recovered_correct : report.recovered_wrong);
      }
      report.success = r->status == SolveStatus::solved && report.recovered_correct == targets.size() &&
                       report.system_satisfied_by_truth;
      report.recovery = std::move(r);
    }
  }
};

std::mt19937_64 trial_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xa77acU};
  return std::mt19937_64(seq);
}

}  // namespace

Identifier oracle_identifier() {
  return Identifier{"oracle", [](std::span<const std::uint8_t>, std::size_t truth) { return truth; }};
}

void AttackConfig::validate() const {
  if (initial_threshold == 0 && ciphers::traits(cipher).initial_threshold == 0) {
    throw ConfigError("threshold must be at least 1");
  }
  if (threshold_step == 0) throw ConfigError("threshold step must be at least 1");
  if (!(time_budget_seconds >= 0.0)) throw ConfigError("time budget must be non-negative");
  if (max_faults == 0) throw ConfigError("fault cap must be at least 1");
}

std::size_t default_guess_budget(CipherId id) { return id == CipherId::morus ? 6 : 0; }
bool default_escalation(CipherId id) { return id != CipherId::atom; }

std::vector<BooleanPolynomial> differential_equations(std::span<const BooleanPolynomial> nks, gf2::Var location,
                                                      std::span<const std::uint8_t> delta) {
  if (delta.size() < nks.size()) throw ConfigError("differential shorter than the symbolic keystream");
  std::vector<BooleanPolynomial> out;
  for (std::size_t i = 0; i < nks.size(); ++i) {
    auto d = nks[i].derivative(location);
    if (delta[i]) d = d.complement();
    if (!d.is_zero()) out.push_back(std::move(d));
  }
  return out;
}

const std::vector<BooleanPolynomial>& SymbolicCache::get(CipherId id, std::span<const std::uint8_t> state) {
  const auto& tr = ciphers::traits(id);
  if (id == CipherId::atom) {
    // Depends on the trial's LFSR; recomputed every time.
    cache_.insert_or_assign(id, ciphers::symbolic_keystream(id, tr.symbolic_horizon, state));
    return cache_.at(id);
  }
  auto it = cache_.find(id);
  if (it == cache_.end()) {
    try {
      it = cache_.emplace(id, ciphers::symbolic_keystream(id, tr.symbolic_horizon)).first;
    } catch (const MonomialBudgetError& e) {
      throw ConfigError(std::string("symbolic keystream exceeds the monomial budget (") + e.what() +
                        "); lower the symbolic horizon");
    }
  }
  return it->second;
}

AttackReport run_attack(const AttackConfig& cfg, const Identifier& identifier, SymbolicCache& cache) {
  cfg.validate();
  const auto start = Clock::now();
  auto rng = trial_rng(cfg.seed);
  AttackReport report;
  Trial t(cfg, rng, cache, report);
  const auto& tr = ciphers::traits(cfg.cipher);
  std::size_t threshold = cfg.initial_threshold ? cfg.initial_threshold : tr.initial_threshold;
  report.initial_threshold = threshold;
  const bool escalate = cfg.escalate.value_or(default_escalation(cfg.cipher));
  std::uniform_int_distribution<std::size_t> pick(0, tr.faultable_bits - 1);
  std::set<std::size_t> seen;
  std::optional<solver::RecoveryResult> result;
  bool done = false;

  while (!done) {
    if (report.fault_count >= cfg.max_faults) {
      report.aborted = true;
      report.abort_reason = "fault cap reached";
      break;
    }
    const std::size_t f = pick(rng);
    ++report.fault_count;
    const Bits delta = t.delta_for(f);
    FaultRecord rec;
    rec.location = f;
    rec.identified = identifier.identify(delta, f);
    if (rec.identified >= tr.faultable_bits) throw DataError("identifier returned an out-of-range location");
    if (rec.identified != f) {
      rec.misidentified = true;
      ++report.misidentifications;
      rec.counted_after = counter(t.id, t.sys);
      report.faults.push_back(std::move(rec));
      if (cfg.stop_on_misidentification) {
        report.aborted = true;
        report.abort_reason = "misidentification";
        break;
      }
      continue;
    }
    if (!seen.insert(f).second) {
      rec.duplicate = true;
      rec.counted_after = counter(t.id, t.sys);
      report.faults.push_back(std::move(rec));
      continue;
    }
    report.unique_locations.push_back(f);
    t.harvest(f, delta, rec);
    const std::size_t counted = counter(t.id, t.sys);
    rec.counted_after = counted;
    report.faults.push_back(std::move(rec));
    if (counted < threshold) continue;

    if (!report.faults_to_threshold) report.faults_to_threshold = report.fault_count;
    const auto t0 = Clock::now();
    auto r = solver::solve(t.sys, t.options);
    report.attempts.push_back(
        SolveAttempt{report.fault_count, threshold, counted, t.sys.size(), r.status, seconds_since(t0)});
    const bool ok = t.accepted(r);
    result = std::move(r);
    if (ok || !escalate) {
      done = true;
    } else {
      threshold += cfg.threshold_step;
    }
  }
  report.final_threshold = threshold;
  t.finish(report, std::move(result));
  if (report.aborted) report.success = false;
  report.seconds = seconds_since(start);
  return report;
}

AttackReport run_precise_attack(const AttackConfig& cfg, std::span<const std::size_t> locations,
                                SymbolicCache& cache) {
  cfg.validate();
  const auto start = Clock::now();
  auto rng = trial_rng(cfg.seed);
  AttackReport report;
  Trial t(cfg, rng, cache, report);
  std::set<std::size_t> seen;
  for (std::size_t f : locations) {
    if (f >= ciphers::traits(cfg.cipher).faultable_bits) throw ConfigError("fault location out of range");
    ++report.fault_count;
    FaultRecord rec;
    rec.location = rec.identified = f;
    if (!seen.insert(f).second) {
      rec.duplicate = true;
    } else {
      report.unique_locations.push_back(f);
      t.harvest(f, t.delta_for(f), rec);
    }
    rec.counted_after = counter(t.id, t.sys);
    report.faults.push_back(std::move(rec));
  }
  const auto t0 = Clock::now();
  auto r = solver::solve(t.sys, t.options);
  report.attempts.push_back(SolveAttempt{report.fault_count, 0, counter(t.id, t.sys), t.sys.size(), r.status,
                                         seconds_since(t0)});
  t.finish(report, std::move(r));
  report.seconds = seconds_since(start);
  return report;
}

const std::vector<std::size_t>& atom_precise_locations() {
  static const std::vector<std::size_t> locs{3,  7,  9,  10, 11, 16, 17, 20, 21, 22, 24, 25, 30, 31, 34, 35,
                                             36, 37, 40, 41, 42, 44, 46, 48, 49, 52, 53, 54, 56, 58, 62, 63,
                                             65, 67, 69, 72, 73, 75, 76, 79, 82, 83, 84, 85, 86, 89};
  return locs;
}

ToyExample toy_example() {
  namespace toy = faultlab::toy;
  auto u = gf2::Universe::make("s", toy::kStateBits);
  const Bits state{0, 0, 0, 1};
  Bits faulty = state;
  faulty[2] ^= 1;
  ToyExample ex;
  ex.delta_z0 = toy::keystream_bit(state) ^ toy::keystream_bit(faulty);
  ex.true_s2 = state[2] != 0;
  const auto z = toy::symbolic_keystream_bit(u);
  const Bits delta{ex.delta_z0};
  const std::vector<BooleanPolynomial> nks{z};
  const auto right = differential_equations(nks, 2, delta);
  const auto wrong = differential_equations(nks, 3, delta);
  const auto truth = gf2::Assignment::from_bits(state);
  if (!right.empty()) {
    ex.correct_equation = right.front().to_string();
    ex.correct_equation_holds = !right.front().evaluate(truth);
  }
  if (!wrong.empty()) {
    ex.wrong_equation = wrong.front().to_string();
    ex.wrong_equation_holds = !wrong.front().evaluate(truth);
    solver::EquationSystem sys(u);
    sys.add_equation(wrong.front());
    const auto r = solver::solve(sys);
    if (r.assignments.known(2)) ex.wrong_implied_s2 = r.assignments.value(2);
  }
  return ex;
}

AttackSummary summarize(std::span<const AttackReport> reports) {
  AttackSummary s;
  s.trials = reports.size();
  if (reports.empty()) return s;
  s.min_faults = s.min_threshold = SIZE_MAX;
  double total = 0.0;
  double to_threshold = 0.0;
  std::size_t reached = 0;
  for (const auto& r : reports) {
    s.successes += r.success ? 1 : 0;
    s.aborted += r.aborted ? 1 : 0;
    s.trials_with_misidentification += r.misidentifications > 0 ? 1 : 0;
    total += static_cast<double>(r.fault_count);
    s.min_faults = std::min(s.min_faults, r.fault_count);
    s.max_faults = std::max(s.max_faults, r.fault_count);
    s.min_threshold = std::min(s.min_threshold, r.final_threshold);
    s.max_threshold = std::max(s.max_threshold, r.final_threshold);
    if (r.faults_to_threshold) {
      to_threshold += static_cast<double>(*r.faults_to_threshold);
      ++reached;
    }
  }
  s.mean_faults = total / static_cast<double>(reports.size());
  s.mean_faults_to_threshold = reached ? to_threshold / static_cast<double>(reached) : 0.0;
  return s;
}

}  // namespace dfa::attack
