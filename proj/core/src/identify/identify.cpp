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

#include "dfa/identify/identify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dfa/common/error.hpp"

namespace dfa::identify {

namespace {

constexpr const char* kSignatureHeader = "dfa-signatures 1";
constexpr std::size_t kChunk = 4096;

Eigen::MatrixXd bits_matrix(const faultlab::DeltaSet& set, std::size_t first, std::size_t count) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(set.width), static_cast<Eigen::Index>(count));
  for (std::size_t c = 0; c < count; ++c) {
    const auto row = set.row(first + c);
    for (std::size_t r = 0; r < set.width; ++r)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[r] ? 1.0 : 0.0;
  }
  return x;
}

std::size_t argmax(const Eigen::MatrixXd& m, Eigen::Index c) {
  Eigen::Index best = 0;
  for (Eigen::Index r = 1; r < m.rows(); ++r) {
    if (m(r, c) > m(best, c)) best = r;
  }
  return static_cast<std::size_t>(best);
}

}  // namespace

SignatureTable SignatureTable::build(const faultlab::DeltaSet& train, std::size_t locations) {
  if (locations == 0) throw ConfigError("signature table needs at least one location");
  SignatureTable t;
  t.width_ = train.width;
  t.locations_ = locations;
  t.samples_.assign(locations, 0);
  t.ones_.assign(locations * train.width, 0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const auto y = train.labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= locations) {
      throw DataError("training label out of range: " + std::to_string(y));
    }
    const auto f = static_cast<std::size_t>(y);
    ++t.samples_[f];
    const auto row = train.row(r);
    for (std::size_t i = 0; i < t.width_; ++i) t.ones_[f * t.width_ + i] += row[i];
  }
  for (std::size_t f = 0; f < locations; ++f) {
    if (t.samples_[f] == 0) throw DataError("no training sample for location " + std::to_string(f));
  }
  t.prepare();
  return t;
}

void SignatureTable::prepare() {
  weight_.resize(static_cast<Eigen::Index>(locations_), static_cast<Eigen::Index>(width_));
  base_.setZero(static_cast<Eigen::Index>(locations_));
  for (std::size_t f = 0; f < locations_; ++f) {
    for (std::size_t i = 0; i < width_; ++i) {
      const double p = std::clamp(probability(f, i), kSignatureEpsilon, 1.0 - kSignatureEpsilon);
      weight_(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(i)) = std::log(p) - std::log1p(-p);
      base_(static_cast<Eigen::Index>(f)) += std::log1p(-p);
    }
  }
}

double SignatureTable::probability(std::size_t location, std::size_t bit) const {
  if (location >= locations_ || bit >= width_) throw ConfigError("signature index out of range");
  return static_cast<double>(ones_[location * width_ + bit]) / static_cast<double>(samples_[location]);
}

Eigen::VectorXd SignatureTable::log_likelihoods(std::span<const std::uint8_t> delta) const {
  if (delta.size() != width_) throw DataError("differential length does not match the signature table");
  Eigen::VectorXd ll = base_;
  for (std::size_t i = 0; i < width_; ++i) {
    if (delta[i]) ll += weight_.col(static_cast<Eigen::Index>(i));
  }
  return ll;
}

std::size_t SignatureTable::classify(std::span<const std::uint8_t> delta) const {
  const Eigen::MatrixXd ll = log_likelihoods(delta);
  return argmax(ll, 0);
}

std::vector<std::size_t> SignatureTable::classify_all(const faultlab::DeltaSet& set) const {
  if (set.width != width_) throw DataError("dataset width does not match the signature table");
  std::vector<std::size_t> out;
  out.reserve(set.rows());
  for (std::size_t first = 0; first < set.rows(); first += kChunk) {
    const std::size_t n = std::min(kChunk, set.rows() - first);
    Eigen::MatrixXd ll = weight_ * bits_matrix(set, first, n);
    ll.colwise() += base_;
    for (Eigen::Index c = 0; c < ll.cols(); ++c) out.push_back(argmax(ll, c));
  }
  return out;
}

void SignatureTable::save(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write signature table " + path.string());
  f << kSignatureHeader << '\n' << width_ << ' ' << locations_ << '\n';
  for (std::size_t loc = 0; loc < locations_; ++loc) {
    f << samples_[loc];
    for (std::size_t i = 0; i < width_; ++i) f << ' ' << ones_[loc * width_ + i];
    f << '\n';
  }
  if (!f) throw IoError("short write to " + path.string());
}

SignatureTable SignatureTable::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open signature table " + path.string());
  std::string header;
  std::getline(f, header);
  if (header != kSignatureHeader) throw DataError("not a signature table: " + path.string());
  SignatureTable t;
  if (!(f >> t.width_ >> t.locations_) || t.width_ == 0 || t.locations_ == 0) {
    throw DataError("bad signature table dimensions");
  }
  t.samples_.resize(t.locations_);
  t.ones_.resize(t.locations_ * t.width_);
  for (std::size_t loc = 0; loc < t.locations_; ++loc) {
    if (!(f >> t.samples_[loc]) || t.samples_[loc] == 0) throw DataError("bad sample count in signature table");
    for (std::size_t i = 0; i < t.width_; ++i) {
      auto& v = t.ones_[loc * t.width_ + i];
      if (!(f >> v) || v > t.samples_[loc]) throw DataError("bad count in signature table");
    }
  }
  std::string rest;
  if (f >> rest) throw DataError("trailing data in signature table");
  t.prepare();
  return t;
}

Metrics compute_metrics(std::span<const std::int32_t> truth, std::span<const std::size_t> predicted,
                        std::size_t classes) {
  if (truth.size() != predicted.size()) throw DataError("prediction count does not match labels");
  Metrics m;
  m.classes = classes;
  m.total = truth.size();
  m.confusion.assign(classes * classes, 0);
  m.support.assign(classes, 0);
  std::vector<std::uint32_t> predicted_count(classes, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = truth[i];
    if (t < 0 || static_cast<std::size_t>(t) >= classes || predicted[i] >= classes) {
      throw DataError("class index out of range");
    }
    ++m.confusion[static_cast<std::size_t>(t) * classes + predicted[i]];
    ++m.support[static_cast<std::size_t>(t)];
    ++predicted_count[predicted[i]];
    if (static_cast<std::size_t>(t) == predicted[i]) ++correct;
  }
  if (m.total == 0) return m;
  const double n = static_cast<double>(m.total);
  m.accuracy = static_cast<double>(correct) / n;
  for (std::size_t c = 0; c < classes; ++c) {
    if (m.support[c] == 0) continue;
    const double tp = m.at(c, c);
    const double p = predicted_count[c] ? tp / predicted_count[c] : 0.0;
    const double r = tp / m.support[c];
    const double f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    const double w = m.support[c] / n;
    m.precision += w * p;
    m.recall += w * r;
    m.f1 += w * f1;
  }
  return m;
}

Metrics evaluate_signatures(const SignatureTable& table, const faultlab::DeltaSet& test) {
  return compute_metrics(test.labels, table.classify_all(test), table.locations());
}

Metrics evaluate_mlp(const neural::MlpModel& model, const faultlab::DeltaSet& test) {
  return compute_metrics(test.labels, neural::predict_all(model, test), model.spec().output_classes);
}

std::string render_metrics_table(std::span<const std::pair<std::string, Metrics>> rows) {
  std::size_t label_width = 6;
  for (const auto& [name, m] : rows) label_width = std::max(label_width, name.size());
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %9s  %9s\n", static_cast<int>(label_width), "Method", "Accuracy",
                "Precision", "Recall", "F1-score");
  os << buf;
  for (const auto& [name, m] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %9.6f  %9.6f  %9.6f  %9.6f\n", static_cast<int>(label_width), name.c_str(),
                  m.accuracy, m.precision, m.recall, m.f1);
    os << buf;
  }
  return os.str();
}

attack::Identifier mlp_identifier(std::shared_ptr<const neural::MlpModel> model) {
  if (!model) throw ConfigError("mlp identifier needs a model");
  return {"mlp", [model](std::span<const std::uint8_t> delta, std::size_t) { return model->predict(delta); }};
}

attack::Identifier signature_identifier(std::shared_ptr<const SignatureTable> table) {
  if (!table) throw ConfigError("signature identifier needs a table");
  return {"signature",
          [table](std::span<const std::uint8_t> delta, std::size_t) { return table->classify(delta); }};
}

}  // namespace dfa::identify
