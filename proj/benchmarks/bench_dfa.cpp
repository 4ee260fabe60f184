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

#include <benchmark/benchmark.h>

#include <random>

#include "dfa/attack/attack.hpp"
#include "dfa/ciphers/cipher.hpp"
#include "dfa/faultlab/faultlab.hpp"
#include "dfa/identify/identify.hpp"
#include "dfa/neural/mlp.hpp"
#include "dfa/selftest/anf_oracle.hpp"
#include "dfa/solver/solver.hpp"

namespace {

using dfa::ciphers::CipherId;
using dfa::gf2::BooleanPolynomial;

BooleanPolynomial random_poly(std::mt19937_64& rng, const dfa::gf2::UniversePtr& u, int terms, int degree) {
  auto p = BooleanPolynomial::zero(u);
  std::uniform_int_distribution<std::size_t> var(0, u->size() - 1);
  for (int t = 0; t < terms; ++t) {
    auto m = BooleanPolynomial::one(u);
    for (int d = 0; d < degree; ++d) m = m * BooleanPolynomial::variable(u, var(rng));
    p += m;
  }
  return p;
}

void BM_PolynomialProduct(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto u = dfa::gf2::Universe::make("s", 293);
  const int terms = static_cast<int>(state.range(0));
  const auto a = random_poly(rng, u, terms, 3);
  const auto b = random_poly(rng, u, terms, 3);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.SetComplexityN(terms);
}
BENCHMARK(BM_PolynomialProduct)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_Keystream(benchmark::State& state) {
  const auto id = static_cast<CipherId>(state.range(0));
  const auto& tr = dfa::ciphers::traits(id);
  const std::vector<std::uint8_t> key(16, 0x5a), iv(16, 0xa5);
  const auto s = dfa::ciphers::initial_state(id, key, iv);
  for (auto _ : state) benchmark::DoNotOptimize(dfa::ciphers::keystream(id, s, tr.keystream_bits));
  state.SetLabel(std::string(tr.name));
}
BENCHMARK(BM_Keystream)
    ->Arg(static_cast<int>(CipherId::acorn))
    ->Arg(static_cast<int>(CipherId::morus))
    ->Arg(static_cast<int>(CipherId::atom));

void BM_SymbolicAtom(benchmark::State& state) {
  const std::vector<std::uint8_t> key(16, 0x11), iv(16, 0x22);
  const auto s = dfa::ciphers::initial_state(CipherId::atom, key, iv);
  for (auto _ : state) benchmark::DoNotOptimize(dfa::ciphers::symbolic_keystream(CipherId::atom, 16, s));
}
BENCHMARK(BM_SymbolicAtom)->Unit(benchmark::kMillisecond);

void BM_SolveRandomSystems(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<dfa::selftest::RandomSystem> systems;
  for (int i = 0; i < 64; ++i) systems.push_back(dfa::selftest::random_system(rng, 16, 3));
  dfa::solver::SolveOptions opt;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dfa::solver::solve(systems[i++ % systems.size()].system, opt));
}
BENCHMARK(BM_SolveRandomSystems)->Unit(benchmark::kMicrosecond);

void BM_AcornOracleTrial(benchmark::State& state) {
  dfa::attack::SymbolicCache cache;
  dfa::attack::AttackConfig cfg;
  cfg.cipher = CipherId::acorn;
  cache.get(CipherId::acorn, {});  // symbolic keystream built outside the timing
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(dfa::attack::run_attack(cfg, dfa::attack::oracle_identifier(), cache));
  }
}
BENCHMARK(BM_AcornOracleTrial)->Unit(benchmark::kMillisecond)->Iterations(5);

struct AtomCorpus {
  dfa::faultlab::DeltaSet train;
  AtomCorpus() {
    dfa::faultlab::SplitSizes sizes{64, 16, 16};
    const auto split = dfa::faultlab::gen_dataset_in_memory(CipherId::atom, 3, sizes);
    train = dfa::faultlab::to_delta_set(split.train);
  }
};
const AtomCorpus& atom_corpus() {
  static const AtomCorpus c;
  return c;
}

void BM_MlpTrainStep(benchmark::State& state) {
  const auto& set = atom_corpus().train;
  auto model = dfa::neural::MlpModel::build(dfa::neural::MlpSpec::preset(CipherId::atom), 1);
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  const auto x = dfa::neural::to_matrix<float>(set, 0, batch);
  const std::span<const std::int32_t> labels(set.labels.data(), batch);
  std::mt19937_64 rng(1);
  dfa::neural::AdamConfig adam;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.loss_and_gradients(x, labels, rng));
    model.adam_step(adam);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * batch));
}
BENCHMARK(BM_MlpTrainStep)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_MlpPredict(benchmark::State& state) {
  const auto& set = atom_corpus().train;
  const auto model = dfa::neural::MlpModel::build(dfa::neural::MlpSpec::preset(CipherId::atom), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dfa::neural::predict_all(model, set));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * set.rows()));
}
BENCHMARK(BM_MlpPredict)->Unit(benchmark::kMillisecond);

void BM_SignatureClassify(benchmark::State& state) {
  const auto& set = atom_corpus().train;
  const auto table = dfa::identify::SignatureTable::build(set, 90);
  for (auto _ : state) benchmark::DoNotOptimize(table.classify_all(set));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * set.rows()));
}
BENCHMARK(BM_SignatureClassify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
