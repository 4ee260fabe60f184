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

#include "report.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dfa/common/bits.hpp"
#include "dfa/common/error.hpp"

namespace dfa::cli {

namespace fs = std::filesystem;

OutputDir::OutputDir(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
}

fs::path OutputDir::file(const std::string& name) const {
  auto p = dir_ / name;
  if (!force_ && fs::exists(p)) throw IoError(p.string() + " exists (use --force to overwrite)");
  fs::create_directories(p.parent_path());
  return p;
}

void OutputDir::write_text(const std::string& name, const std::string& text) const {
  const auto p = file(name);
  std::ofstream out(p, std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + p.string());
}

void OutputDir::write_json(const std::string& name, const json& j) const { write_text(name, j.dump(2) + "\n"); }

namespace {

json histogram(const std::map<int, std::size_t>& h) {
  json j = json::object();
  for (const auto& [deg, n] : h) j[std::to_string(deg)] = n;
  return j;
}

}  // namespace

json to_json(const attack::AttackReport& r) {
  json j;
  j["cipher"] = ciphers::to_string(r.cipher);
  j["seed"] = r.seed;
  j["key"] = to_hex(r.key);
  j["iv"] = to_hex(r.iv);
  j["success"] = r.success;
  j["aborted"] = r.aborted;
  if (r.aborted) j["abort_reason"] = r.abort_reason;
  j["fault_count"] = r.fault_count;
  j["unique_locations"] = r.unique_locations.size();
  j["misidentifications"] = r.misidentifications;
  j["initial_threshold"] = r.initial_threshold;
  j["final_threshold"] = r.final_threshold;
  j["faults_to_threshold"] = r.faults_to_threshold ? json(*r.faults_to_threshold) : json(nullptr);
  j["equation_count"] = r.equation_count;
  j["degree_histogram"] = histogram(r.degree_histogram);
  j["system_satisfied_by_truth"] = r.system_satisfied_by_truth;
  j["target_bits"] = r.target_bits;
  j["recovered_correct"] = r.recovered_correct;
  j["recovered_wrong"] = r.recovered_wrong;
  j["recovery"] = {{"direct", r.counts.direct}, {"indirect", r.counts.indirect}, {"guessed", r.counts.guessed}};
  if (r.recovery) {
    j["solver_status"] = solver::to_string(r.recovery->status);
    j["solver_branches"] = r.recovery->branches;
    j["guessed_vars"] = r.recovery->guessed_vars;
  }
  std::string per_bit;
  per_bit.reserve(r.per_bit.size());
  for (auto b : r.per_bit) per_bit.push_back(b < 0 ? '?' : (b ? '1' : '0'));
  j["per_bit"] = per_bit;  // '1' correct, '0' wrong, '?' undetermined
  json faults = json::array();
  for (const auto& f : r.faults) {
    json fj{{"location", f.location}, {"identified", f.identified}, {"counted_after", f.counted_after}};
    if (f.duplicate) fj["duplicate"] = true;
    if (f.misidentified) fj["misidentified"] = true;
    if (!f.added_by_degree.empty()) fj["added_by_degree"] = histogram(f.added_by_degree);
    faults.push_back(std::move(fj));
  }
  j["faults"] = std::move(faults);
  json attempts = json::array();
  for (const auto& a : r.attempts) {
    attempts.push_back({{"fault_count", a.fault_count},
                        {"threshold", a.threshold},
                        {"counted", a.counted},
                        {"equations", a.equations},
                        {"status", solver::to_string(a.status)},
                        {"seconds", a.seconds}});
  }
  j["attempts"] = std::move(attempts);
  j["seconds"] = r.seconds;
  return j;
}

json to_json(const attack::AttackSummary& s) {
  return {{"trials", s.trials},
          {"successes", s.successes},
          {"success_rate", s.trials ? static_cast<double>(s.successes) / static_cast<double>(s.trials) : 0.0},
          {"aborted", s.aborted},
          {"mean_faults", s.mean_faults},
          {"min_faults", s.min_faults},
          {"max_faults", s.max_faults},
          {"min_threshold", s.min_threshold},
          {"max_threshold", s.max_threshold},
          {"mean_faults_to_threshold", s.mean_faults_to_threshold},
          {"trials_with_misidentification", s.trials_with_misidentification}};
}

json to_json(const identify::Metrics& m) {
  return {{"classes", m.classes}, {"total", m.total},   {"accuracy", m.accuracy},
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

json to_json(const neural::TrainHistory& h) {
  json epochs = json::array();
  for (const auto& e : h.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"train_accuracy", e.train_accuracy},
                      {"val_loss", e.val_loss},
                      {"val_accuracy", e.val_accuracy},
                      {"seconds", e.seconds}});
  }
  return {{"epochs", std::move(epochs)},
          {"best_epoch", h.best_epoch},
          {"best_val_accuracy", h.best_val_accuracy},
          {"stopped_early", h.stopped_early}};
}

json to_json(const neural::MlpSpec& s) {
  json hidden = json::array();
  for (const auto& h : s.hidden) {
    hidden.push_back({{"width", h.width},
                      {"activation", neural::to_string(h.activation)},
                      {"dropout", h.dropout},
                      {"l2", h.l2},
                      {"batch_norm", h.batch_norm}});
  }
  return {{"input_width", s.input_width}, {"hidden", std::move(hidden)}, {"output_classes", s.output_classes}};
}

std::string confusion_csv(const identify::Metrics& m) {
  // Sparse form: only non-zero cells.
  std::ostringstream os;
  os << "true,predicted,count\n";
  for (std::size_t t = 0; t < m.classes; ++t)
    for (std::size_t p = 0; p < m.classes; ++p)
      if (m.at(t, p)) os << t << ',' << p << ',' << m.at(t, p) << '\n';
  return os.str();
}

std::string history_csv(const neural::TrainHistory& h) {
  std::ostringstream os;
  os << "epoch,train_loss,train_accuracy,val_loss,val_accuracy,seconds\n";
  for (const auto& e : h.epochs) {
    os << e.epoch << ',' << e.train_loss << ',' << e.train_accuracy << ',' << e.val_loss << ',' << e.val_accuracy
       << ',' << e.seconds << '\n';
  }
  return os.str();
}

std::string threshold_vs_faults_csv(std::span<const attack::AttackReport> reports) {
  std::ostringstream os;
  os << "seed,faults,final_threshold,success\n";
  for (const auto& r : reports) os << r.seed << ',' << r.fault_count << ',' << r.final_threshold << ',' << r.success << '\n';
  return os.str();
}

std::string linear_yield_csv(std::span<const attack::AttackReport> reports, std::size_t locations) {
  std::vector<std::size_t> total(locations, 0), seen(locations, 0);
  for (const auto& r : reports) {
    for (const auto& f : r.faults) {
      if (f.duplicate || f.misidentified || f.location >= locations) continue;
      const auto it = f.added_by_degree.find(1);
      total[f.location] += it == f.added_by_degree.end() ? 0 : it->second;
      ++seen[f.location];
    }
  }
  std::ostringstream os;
  os << "location,faults,mean_new_linear\n";
  for (std::size_t l = 0; l < locations; ++l) {
    if (!seen[l]) continue;
    os << l << ',' << seen[l] << ',' << static_cast<double>(total[l]) / static_cast<double>(seen[l]) << '\n';
  }
  return os.str();
}

std::string fault_histogram_csv(std::span<const attack::AttackReport> reports) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& r : reports) ++h[r.fault_count];
  std::ostringstream os;
  os << "faults,trials\n";
  for (const auto& [f, n] : h) os << f << ',' << n << '\n';
  return os.str();
}

}  // namespace dfa::cli
