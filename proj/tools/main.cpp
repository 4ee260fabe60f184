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

#include <cstdio>
#include <exception>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dfa/common/error.hpp"

#ifndef DFA_DEFAULT_FIXTURE_DIR
#define DFA_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace dfa::cli;

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--cipher", c.cipher, "acorn, morus or atom")
      ->check(CLI::IsMember({"acorn", "morus", "atom"}, CLI::ignore_case))
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--out", c.out, "output directory")->required();
  sub->add_flag("--force", c.force, "overwrite existing outputs");
  sub->add_flag("--paper-scale", c.paper_scale, "full-size corpora and trial counts");
}

int run(int argc, char** argv) {
  CLI::App app{"Differential fault attack workbench for ACORNv3, MORUS-640-128 and ATOM", "dfa"};
  app.set_config("--config", "", "TOML config file");
  app.require_subcommand(1);

  GenOptions gen;
  auto* sgen = app.add_subcommand("gen", "generate a labelled fault corpus");
  add_common(sgen, gen.common);
  sgen->add_option("--samples-per-loc", gen.samples_per_location,
                   "samples per fault location, split 4:1:1 (default 384, or 1536 with --paper-scale)");

  TrainOptions tr;
  auto* strain = app.add_subcommand("train", "train the location classifier");
  add_common(strain, tr.common);
  strain->add_option("--data", tr.data, "corpus directory from gen")->required();
  strain->add_option("--epochs", tr.epochs, "maximum epochs")->capture_default_str();
  strain->add_option("--patience", tr.patience, "early-stopping patience")->capture_default_str();
  strain->add_option("--batch-size", tr.batch_size)->capture_default_str();
  strain->add_option("--learning-rate", tr.learning_rate)->capture_default_str();

  EvalOptions ev;
  auto* seval = app.add_subcommand("eval", "score a classifier on the test split");
  add_common(seval, ev.common);
  seval->add_option("--method", ev.method)->check(CLI::IsMember({"mlp", "signature"}))->capture_default_str();
  seval->add_option("--data", ev.data, "corpus directory from gen")->required();
  seval->add_option("--model", ev.model, "model.bin (mlp) or signatures.txt (signature)");

  AttackOptions at;
  auto* sattack = app.add_subcommand("attack", "run key-recovery trials");
  add_common(sattack, at.common);
  sattack->add_option("--method", at.method)
      ->check(CLI::IsMember({"oracle", "mlp", "signature"}))
      ->capture_default_str();
  sattack->add_option("--model", at.model, "model.bin (mlp) or signatures.txt (signature)");
  sattack->add_option("--trials", at.trials, "trial count (default 20/5/10, or 400 with --paper-scale)");
  sattack->add_option("--threshold", at.threshold, "initial threshold (default per cipher)");
  sattack->add_option("--threshold-step", at.threshold_step)->capture_default_str();
  sattack->add_option("--time-budget", at.time_budget, "solver seconds per attempt")->capture_default_str();
  sattack->add_option("--max-faults", at.max_faults)->capture_default_str();
  sattack->add_flag("--continue-on-misidentification", at.continue_on_misidentification,
                    "skip misidentified faults instead of aborting the trial");
  sattack->add_flag("--precise", at.precise, "ATOM only: inject the fixed 46-location set");

  SelftestOptions st;
  st.fixtures = DFA_DEFAULT_FIXTURE_DIR;
  auto* sself = app.add_subcommand("selftest", "known answers, ANF commutation, toy and solver checks");
  sself->add_option("--fixtures", st.fixtures, "directory with <cipher>_kat.json")->capture_default_str();
  sself->add_flag("--quick", st.quick, "skip the commutation checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  // Resolved settings of the active subcommand, readable back through --config.
  std::string resolved;
  for (auto* sub : app.get_subcommands()) {
    resolved += "[" + sub->get_name() + "]\n";
    std::istringstream lines(sub->config_to_str(true, false));
    for (std::string line; std::getline(lines, line);) {
      if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;  // unset optional
      resolved += line + "\n";
    }
  }
  gen.common.resolved_config = tr.common.resolved_config = ev.common.resolved_config = at.common.resolved_config =
      resolved;
  for (auto* c : {&gen.common, &tr.common, &ev.common, &at.common}) {
    for (auto& ch : c->cipher) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }

  if (*sgen) return cmd_gen(gen);
  if (*strain) return cmd_train(tr);
  if (*seval) return cmd_eval(ev);
  if (*sattack) return cmd_attack(at);
  return cmd_selftest(st);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dfa::ConfigError& e) {
    std::fprintf(stderr, "dfa: %s\n", e.what());
    return kExitConfig;
  } catch (const dfa::UnsupportedModeError& e) {
    std::fprintf(stderr, "dfa: %s\n", e.what());
    return kExitConfig;
  } catch (const dfa::IoError& e) {
    std::fprintf(stderr, "dfa: %s\n", e.what());
    return kExitIo;
  } catch (const dfa::Error& e) {
    std::fprintf(stderr, "dfa: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dfa: unexpected error: %s\n", e.what());
    return kExitUnexpected;
  }
}
