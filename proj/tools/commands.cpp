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

#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "dfa/common/error.hpp"
#include "dfa/faultlab/faultlab.hpp"
#include "dfa/identify/identify.hpp"
#include "dfa/neural/mlp.hpp"
#include "dfa/selftest/selftest.hpp"
#include "report.hpp"

namespace dfa::cli {

namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

OutputDir open_out(const Common& c) {
  if (c.out.empty()) throw ConfigError("--out is required");
  OutputDir out(c.out, c.force);
  out.write_text("config.toml", c.resolved_config);
  return out;
}

struct Splits {
  faultlab::DeltaSet train, test, validation;
};

Splits read_splits(const fs::path& dir, bool need_validation) {
  Splits s;
  s.train = faultlab::read_delta_set(dir / "training.csv");
  s.test = faultlab::read_delta_set(dir / "testing.csv");
  if (need_validation) s.validation = faultlab::read_delta_set(dir / "validation.csv");
  return s;
}

void check_width(const faultlab::DeltaSet& set, ciphers::CipherId id, const char* what) {
  const std::size_t w = ciphers::traits(id).keystream_bits;
  if (set.width != w) {
    throw DataError(std::string(what) + " has " + std::to_string(set.width) + "-bit rows but " +
                    std::string(ciphers::to_string(id)) + " uses " + std::to_string(w));
  }
}

std::size_t default_trials(ciphers::CipherId id, bool paper_scale) {
  if (paper_scale) return 400;
  switch (id) {
    case ciphers::CipherId::acorn:
      return 20;
    case ciphers::CipherId::morus:
      return 5;
    case ciphers::CipherId::atom:
      return 10;
  }
  return 1;
}

}  // namespace

int cmd_gen(const GenOptions& o) {
  const auto id = ciphers::parse_cipher_id(o.common.cipher);
  const std::size_t spl = o.samples_per_location.value_or(o.common.paper_scale ? kPaperSamplesPerLocation
                                                                               : kDeskSamplesPerLocation);
  const auto sizes = faultlab::SplitSizes::for_samples_per_location(spl);
  const auto out = open_out(o.common);
  std::fprintf(stderr, "generating %s corpus: %zu locations x %zu samples\n", o.common.cipher.c_str(),
               ciphers::traits(id).faultable_bits, spl);
  const auto files = faultlab::gen_dataset(id, o.common.seed, sizes, out.path(), o.common.force,
                                           [](std::size_t done, std::size_t total) {
                                             if (done % 32 == 0 || done == total)
                                               std::fprintf(stderr, "\r  %zu/%zu locations", done, total);
                                           });
  std::fprintf(stderr, "\n");
  json manifest;
  manifest["cipher"] = o.common.cipher;
  manifest["seed"] = o.common.seed;
  manifest["keystream_length"] = ciphers::traits(id).keystream_bits;
  manifest["locations"] = ciphers::traits(id).faultable_bits;
  manifest["samples_per_location"] = {
      {"train", sizes.train}, {"test", sizes.test}, {"validation", sizes.validation}};
  manifest["files"] = {
      {"training.csv", {{"rows", files.train_rows}, {"fnv1a64", hex64(faultlab::file_fingerprint(files.training))}}},
      {"testing.csv", {{"rows", files.test_rows}, {"fnv1a64", hex64(faultlab::file_fingerprint(files.testing))}}},
      {"validation.csv",
       {{"rows", files.validation_rows}, {"fnv1a64", hex64(faultlab::file_fingerprint(files.validation))}}}};
  out.write_json("manifest.json", manifest);
  std::printf("%s\n", manifest.dump(2).c_str());
  return kExitOk;
}

int cmd_train(const TrainOptions& o) {
  const auto id = ciphers::parse_cipher_id(o.common.cipher);
  if (o.data.empty()) throw ConfigError("--data is required");
  neural::TrainConfig cfg;
  cfg.max_epochs = o.epochs;
  cfg.patience = o.patience;
  cfg.batch_size = o.batch_size;
  cfg.learning_rate = o.learning_rate;
  cfg.seed = o.common.seed;
  cfg.validate();
  const auto out = open_out(o.common);
  const auto splits = read_splits(o.data, true);
  check_width(splits.train, id, "training split");
  check_width(splits.validation, id, "validation split");
  check_width(splits.test, id, "testing split");
  const auto spec = neural::MlpSpec::preset(id);
  auto model = neural::MlpModel::build(spec, o.common.seed);
  std::fprintf(stderr, "training %s preset (%zu parameters) on %zu rows\n", o.common.cipher.c_str(),
               model.parameter_count(), splits.train.rows());
  const auto hist = neural::train(model, splits.train, splits.validation, cfg, [](const neural::EpochStats& e) {
    std::fprintf(stderr, "  epoch %2zu  loss %.4f  acc %.4f  val_loss %.4f  val_acc %.6f  (%.1fs)\n", e.epoch,
                 e.train_loss, e.train_accuracy, e.val_loss, e.val_accuracy, e.seconds);
  });
  model.save(out.file("model.bin"));
  const auto metrics = identify::evaluate_mlp(model, splits.test);
  json report;
  report["cipher"] = o.common.cipher;
  report["spec"] = to_json(spec);
  report["train_config"] = {{"max_epochs", cfg.max_epochs},
                            {"patience", cfg.patience},
                            {"batch_size", cfg.batch_size},
                            {"learning_rate", cfg.learning_rate},
                            {"seed", cfg.seed}};
  report["history"] = to_json(hist);
  report["test_metrics"] = to_json(metrics);
  out.write_json("history.json", report);
  out.write_text("history.csv", history_csv(hist));
  const std::pair<std::string, identify::Metrics> row{"MLP", metrics};
  std::printf("%s", identify::render_metrics_table(std::span(&row, 1)).c_str());
  return kExitOk;
}

int cmd_eval(const EvalOptions& o) {
  const auto id = ciphers::parse_cipher_id(o.common.cipher);
  if (o.data.empty()) throw ConfigError("--data is required");
  const auto out = open_out(o.common);
  identify::Metrics metrics;
  std::string label;
  if (o.method == "signature") {
    auto test = faultlab::read_delta_set(fs::path(o.data) / "testing.csv");
    check_width(test, id, "testing split");
    identify::SignatureTable table;
    if (!o.model.empty()) {
      table = identify::SignatureTable::load(o.model);
    } else {
      const auto train = faultlab::read_delta_set(fs::path(o.data) / "training.csv");
      check_width(train, id, "training split");
      table = identify::SignatureTable::build(train, ciphers::traits(id).faultable_bits);
      table.save(out.file("signatures.txt"));
    }
    if (table.width() != test.width) throw DataError("signature table width does not match the corpus");
    metrics = identify::evaluate_signatures(table, test);
    label = "Signature";
  } else if (o.method == "mlp") {
    if (o.model.empty()) throw ConfigError("--model is required for --method mlp");
    const auto test = faultlab::read_delta_set(fs::path(o.data) / "testing.csv");
    check_width(test, id, "testing split");
    const auto model = neural::MlpModel::load_expecting(o.model, test.width);
    metrics = identify::evaluate_mlp(model, test);
    label = "MLP";
  } else {
    throw ConfigError("--method must be mlp or signature for eval");
  }
  json report = to_json(metrics);
  report["cipher"] = o.common.cipher;
  report["method"] = o.method;
  out.write_json("metrics.json", report);
  out.write_text("confusion.csv", confusion_csv(metrics));
  const std::pair<std::string, identify::Metrics> row{label, metrics};
  const auto table = identify::render_metrics_table(std::span(&row, 1));
  out.write_text("table.txt", table);
  std::printf("%s", table.c_str());
  return kExitOk;
}

int cmd_attack(const AttackOptions& o) {
  const auto id = ciphers::parse_cipher_id(o.common.cipher);
  const auto& tr = ciphers::traits(id);
  attack::AttackConfig cfg;
  cfg.cipher = id;
  cfg.initial_threshold = o.threshold.value_or(0);
  cfg.threshold_step = o.threshold_step;
  cfg.time_budget_seconds = o.time_budget;
  cfg.max_faults = o.max_faults;
  cfg.stop_on_misidentification = !o.continue_on_misidentification;
  cfg.validate();

  attack::Identifier identifier;
  if (o.precise) {
    if (id != ciphers::CipherId::atom) throw ConfigError("--precise is only defined for atom");
  } else if (o.method == "oracle") {
    identifier = attack::oracle_identifier();
  } else if (o.method == "mlp") {
    if (o.model.empty()) throw ConfigError("--model is required for --method mlp");
    identifier = identify::mlp_identifier(
        std::make_shared<const neural::MlpModel>(neural::MlpModel::load_expecting(o.model, tr.keystream_bits)));
  } else if (o.method == "signature") {
    if (o.model.empty()) throw ConfigError("--model (signature table) is required for --method signature");
    auto table = identify::SignatureTable::load(o.model);
    if (table.width() != tr.keystream_bits || table.locations() != tr.faultable_bits) {
      throw DataError("signature table does not match " + std::string(tr.name));
    }
    identifier = identify::signature_identifier(std::make_shared<const identify::SignatureTable>(std::move(table)));
  } else {
    throw ConfigError("--method must be oracle, mlp or signature");
  }

  const std::size_t trials = o.trials.value_or(o.precise ? 1 : default_trials(id, o.common.paper_scale));
  const auto out = open_out(o.common);
  attack::SymbolicCache cache;
  std::vector<attack::AttackReport> reports;
  for (std::size_t t = 0; t < trials; ++t) {
    cfg.seed = o.common.seed + t;
    auto r = o.precise ? attack::run_precise_attack(cfg, attack::atom_precise_locations(), cache)
                       : attack::run_attack(cfg, identifier, cache);
    std::fprintf(stderr, "trial %zu seed %llu: %s, %zu faults, threshold %zu, %zu/%zu bits correct (%.1fs)\n", t,
                 static_cast<unsigned long long>(cfg.seed), r.success ? "success" : (r.aborted ? "aborted" : "failed"),
                 r.fault_count, r.final_threshold, r.recovered_correct, r.target_bits, r.seconds);
    char stem[32];
    std::snprintf(stem, sizeof stem, "trials/trial-%04zu", t);
    out.write_json(std::string(stem) + ".json", to_json(r));
    if (r.system) out.write_text(std::string(stem) + ".eqs", r.system->to_text());
    reports.push_back(std::move(r));
  }
  const auto summary = attack::summarize(reports);
  json sj = to_json(summary);
  sj["cipher"] = o.common.cipher;
  sj["identifier"] = o.precise ? "precise" : o.method;
  out.write_json("summary.json", sj);
  out.write_text("figures/threshold_vs_faults.csv", threshold_vs_faults_csv(reports));
  out.write_text("figures/linear_yield.csv", linear_yield_csv(reports, tr.faultable_bits));
  out.write_text("figures/fault_counts.csv", fault_histogram_csv(reports));
  std::printf("%s\n", sj.dump(2).c_str());
  return kExitOk;
}

int cmd_selftest(const SelftestOptions& o) {
  std::vector<selftest::CheckResult> results;
  if (o.quick) {
    for (auto id : {ciphers::CipherId::acorn, ciphers::CipherId::morus, ciphers::CipherId::atom})
      results.push_back(selftest::check_known_answers(id, o.fixtures));
    results.push_back(selftest::check_toy());
    results.push_back(selftest::check_solver_oracle(50, 23, 12, 3));
  } else {
    results = selftest::run_selftest(o.fixtures);
  }
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s  %-40s %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace dfa::cli
