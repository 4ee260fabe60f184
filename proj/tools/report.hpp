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

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "dfa/attack/attack.hpp"
#include "dfa/identify/identify.hpp"
#include "dfa/neural/mlp.hpp"
#include "json.hpp"

namespace dfa::cli {

using nlohmann::json;

/// Output directory that refuses to overwrite existing files unless forced.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, bool force);

  const std::filesystem::path& path() const { return dir_; }
  /// Path of `name` inside the directory; throws IoError if it exists and
  /// overwriting was not requested.
  std::filesystem::path file(const std::string& name) const;

  void write_text(const std::string& name, const std::string& text) const;
  void write_json(const std::string& name, const json& j) const;

 private:
  std::filesystem::path dir_;
  bool force_;
};

json to_json(const attack::AttackReport& r);
json to_json(const attack::AttackSummary& s);
json to_json(const identify::Metrics& m);
json to_json(const neural::TrainHistory& h);
json to_json(const neural::MlpSpec& s);

std::string confusion_csv(const identify::Metrics& m);
std::string history_csv(const neural::TrainHistory& h);

/// Figure data over a batch of trials: threshold vs faults, linear-equation
/// yield per location, and the fault-count histogram.
std::string threshold_vs_faults_csv(std::span<const attack::AttackReport> reports);
std::string linear_yield_csv(std::span<const attack::AttackReport> reports, std::size_t locations);
std::string fault_histogram_csv(std::span<const attack::AttackReport> reports);

}  // namespace dfa::cli
