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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace dfa::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitCheckFailed = 5;

inline constexpr std::size_t kDeskSamplesPerLocation = 384;    // 256 / 64 / 64
inline constexpr std::size_t kPaperSamplesPerLocation = 1536;  // 1024 / 256 / 256

struct Common {
  std::string cipher = "acorn";
  std::uint64_t seed = 1;
  std::string out;
  bool force = false;
  bool paper_scale = false;
  std::string resolved_config;  // emitted as config.toml
};

struct GenOptions {
  Common common;
  std::optional<std::size_t> samples_per_location;
};

struct TrainOptions {
  Common common;
  std::string data;
  std::size_t epochs = 50;
  std::size_t patience = 7;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
};

struct EvalOptions {
  Common common;
  std::string method = "signature";
  std::string data;
  std::string model;  // model file (mlp) or signature table (optional)
};

struct AttackOptions {
  Common common;
  std::string method = "oracle";
  std::string model;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threshold;
  std::size_t threshold_step = 5;
  double time_budget = 60.0;
  std::size_t max_faults = 2000;
  bool continue_on_misidentification = false;
  bool precise = false;
};

struct SelftestOptions {
  std::string fixtures;
  bool quick = false;
};

int cmd_gen(const GenOptions& o);
int cmd_train(const TrainOptions& o);
int cmd_eval(const EvalOptions& o);
int cmd_attack(const AttackOptions& o);
int cmd_selftest(const SelftestOptions& o);

}  // namespace dfa::cli
