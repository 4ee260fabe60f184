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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dfa/attack/attack.hpp"
#include "dfa/faultlab/faultlab.hpp"
#include "dfa/neural/mlp.hpp"

namespace dfa::identify {

/// Probabilities are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kSignatureEpsilon = 1.0 / 2048.0;

/// Per-location Bernoulli profile of the differential keystream.
class SignatureTable {
 public:
  SignatureTable() = default;

  /// Counts from a labelled training split. Throws DataError if a location
  /// in [0, locations) has no sample or a label is out of range.
  static SignatureTable build(const faultlab::DeltaSet& train, std::size_t locations);

  std::size_t width() const { return width_; }
  std::size_t locations() const { return locations_; }
  std::size_t samples(std::size_t location) const { return samples_.at(location); }
  /// Empirical Pr[dZ_i = 1] for `location` (unclamped).
  double probability(std::size_t location, std::size_t bit) const;

  /// Bernoulli log-likelihood of `delta` under every location.
  Eigen::VectorXd log_likelihoods(std::span<const std::uint8_t> delta) const;
  /// Argmax of `log_likelihoods`; ties go to the lowest location.
  std::size_t classify(std::span<const std::uint8_t> delta) const;
  std::vector<std::size_t> classify_all(const faultlab::DeltaSet& set) const;

  /// Text file of integer counts (exact round trip).
  void save(const std::filesystem::path& path) const;
  static SignatureTable load(const std::filesystem::path& path);

 private:
  void prepare();

  std::size_t width_ = 0;
  std::size_t locations_ = 0;
  std::vector<std::uint32_t> samples_;  // per location
  std::vector<std::uint32_t> ones_;     // locations x width
  Eigen::MatrixXd weight_;              // log(p / (1 - p)), locations x width
  Eigen::VectorXd base_;                // sum_i log(1 - p_i)
};

/// Weighted-average classification metrics and the confusion matrix
/// (row = true class, column = predicted class).
struct Metrics {
  std::size_t classes = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::uint32_t> confusion;  // classes x classes, row-major
  std::vector<std::uint32_t> support;    // true count per class

  std::uint32_t at(std::size_t truth, std::size_t predicted) const { return confusion[truth * classes + predicted]; }
};

Metrics compute_metrics(std::span<const std::int32_t> truth, std::span<const std::size_t> predicted,
                        std::size_t classes);

Metrics evaluate_signatures(const SignatureTable& table, const faultlab::DeltaSet& test);
Metrics evaluate_mlp(const neural::MlpModel& model, const faultlab::DeltaSet& test);

/// Fixed-width text table, one row per (label, metrics).
std::string render_metrics_table(std::span<const std::pair<std::string, Metrics>> rows);

attack::Identifier mlp_identifier(std::shared_ptr<const neural::MlpModel> model);
attack::Identifier signature_identifier(std::shared_ptr<const SignatureTable> table);

}  // namespace dfa::identify
