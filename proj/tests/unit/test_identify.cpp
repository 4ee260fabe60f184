// Copyright 2026 The DFA Workbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "dfa/common/error.hpp"
#include "dfa/identify/identify.hpp"

namespace {

using dfa::faultlab::DeltaSet;
using dfa::identify::SignatureTable;

DeltaSet rows_of(std::size_t width, std::initializer_list<std::pair<std::vector<std::uint8_t>, int>> rows) {
  DeltaSet s;
  s.width = width;
  for (const auto& [bits, y] : rows) s.append(bits, y);
  return s;
}

TEST(Signatures, DeterministicLocationHasZeroOneProfile) {
  const auto t = SignatureTable::build(rows_of(4, {{{1, 0, 1, 0}, 0}, {{1, 0, 1, 0}, 0}, {{0, 1, 1, 0}, 1}, {{0, 0, 1, 0}, 1}}), 2);
  for (std::size_t i = 0; i < 4; ++i) {
    const double p = t.probability(0, i);
    EXPECT_TRUE(p == 0.0 || p == 1.0);
  }
  EXPECT_DOUBLE_EQ(t.probability(1, 1), 0.5);
  EXPECT_EQ(t.samples(0), 2U);
}

TEST(Signatures, DuplicateSampleKeepsProfile) {
  const auto one = SignatureTable::build(rows_of(3, {{{1, 0, 1}, 0}, {{0, 1, 0}, 1}}), 2);
  const auto two = SignatureTable::build(rows_of(3, {{{1, 0, 1}, 0}, {{1, 0, 1}, 0}, {{0, 1, 0}, 1}}), 2);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(one.probability(0, i), two.probability(0, i));
}

TEST(Signatures, DisjointSupportsClassifyPerfectly) {
  // Location 0 only ever flips bits 0..3, location 1 only bits 4..7.
  std::mt19937_64 rng(1);
  DeltaSet train, test;
  train.width = test.width = 8;
  for (int r = 0; r < 200; ++r) {
    for (int y : {0, 1}) {
      std::vector<std::uint8_t> bits(8, 0);
      for (int i = 0; i < 4; ++i) bits[static_cast<std::size_t>(4 * y + i)] = static_cast<std::uint8_t>(rng() & 1U);
      bits[static_cast<std::size_t>(4 * y)] = 1;
      (r < 150 ? train : test).append(bits, y);
    }
  }
  const auto t = SignatureTable::build(train, 2);
  const auto m = dfa::identify::evaluate_signatures(t, test);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
}

TEST(Signatures, ExactSignatureAndAllZero) {
  const auto t = SignatureTable::build(rows_of(4, {{{1, 1, 0, 0}, 0}, {{0, 0, 0, 0}, 1}, {{0, 1, 1, 1}, 2}}), 3);
  const std::vector<std::uint8_t> z0{1, 1, 0, 0}, z2{0, 1, 1, 1}, zero{0, 0, 0, 0};
  EXPECT_EQ(t.classify(z0), 0U);
  EXPECT_EQ(t.classify(z2), 2U);
  EXPECT_EQ(t.classify(zero), 1U);
  EXPECT_THROW(t.classify(std::vector<std::uint8_t>{1, 0}), dfa::DataError);
}

TEST(Signatures, TiesGoToLowestLocation) {
  const auto t = SignatureTable::build(rows_of(2, {{{1, 0}, 0}, {{1, 0}, 1}, {{0, 1}, 2}}), 3);
  EXPECT_EQ(t.classify(std::vector<std::uint8_t>{1, 0}), 0U);
}

TEST(Signatures, MissingLocationOrBadLabelThrows) {
  EXPECT_THROW(SignatureTable::build(rows_of(2, {{{1, 0}, 0}}), 2), dfa::DataError);
  EXPECT_THROW(SignatureTable::build(rows_of(2, {{{1, 0}, 3}}), 2), dfa::DataError);
}

// Adding a constant to every log-likelihood cannot move the argmax, and the
// batched path agrees with per-sample classification.
TEST(SignatureProperty, ArgmaxShiftInvarianceAndBatchAgreement) {
  std::mt19937_64 rng(7);
  DeltaSet train;
  train.width = 12;
  std::vector<std::uint8_t> bits(12);
  for (int r = 0; r < 600; ++r) {
    const int y = r % 6;
    for (std::size_t i = 0; i < 12; ++i) bits[i] = (rng() % 12) < static_cast<std::uint64_t>(2 + y + i % 3) ? 1 : 0;
    train.append(bits, y);
  }
  const auto t = SignatureTable::build(train, 6);
  const auto batch = t.classify_all(train);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const auto ll = t.log_likelihoods(train.row(r));
    Eigen::Index a = 0, b = 0;
    ll.maxCoeff(&a);
    (ll.array() + shift(rng)).maxCoeff(&b);
    ASSERT_EQ(a, b);
    ASSERT_EQ(batch[r], t.classify(train.row(r)));
  }
}

TEST(Signatures, SaveLoadRoundTrip) {
  const auto t = SignatureTable::build(rows_of(3, {{{1, 0, 1}, 0}, {{0, 1, 0}, 1}, {{1, 1, 0}, 1}}), 2);
  const auto path = std::filesystem::temp_directory_path() / "dfa_test_signatures.txt";
  t.save(path);
  const auto back = SignatureTable::load(path);
  for (std::size_t f = 0; f < 2; ++f)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.probability(f, i), t.probability(f, i));
  std::filesystem::remove(path);
  EXPECT_THROW(SignatureTable::load(path), dfa::IoError);
}

TEST(Metrics, PerfectClassifier) {
  const std::vector<std::int32_t> y{0, 1, 2, 2, 1, 0};
  const std::vector<std::size_t> p{0, 1, 2, 2, 1, 0};
  const auto m = dfa::identify::compute_metrics(y, p, 3);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0);
}

TEST(Metrics, HandComputedWeightedAverages) {
  // truth 0,0,1,1 ; predicted 0,1,1,1
  const std::vector<std::int32_t> y{0, 0, 1, 1};
  const std::vector<std::size_t> p{0, 1, 1, 1};
  const auto m = dfa::identify::compute_metrics(y, p, 2);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  // class 0: P=1, R=0.5, F1=2/3 ; class 1: P=2/3, R=1, F1=0.8
  EXPECT_DOUBLE_EQ(m.precision, 0.5 * 1.0 + 0.5 * (2.0 / 3.0));
  EXPECT_DOUBLE_EQ(m.recall, 0.75);
  EXPECT_NEAR(m.f1, 0.5 * (2.0 / 3.0) + 0.5 * 0.8, 1e-15);
  EXPECT_EQ(m.at(0, 1), 1U);
}

// Accuracy equals support-weighted recall; confusion rows sum to supports.
TEST(MetricsProperty, AccuracyIsWeightedRecall) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng() % 7;
    const std::size_t n = 1 + rng() % 300;
    std::vector<std::int32_t> y(n);
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<std::int32_t>(rng() % k);
      p[i] = rng() % 3 == 0 ? rng() % k : static_cast<std::size_t>(y[i]);
    }
    const auto m = dfa::identify::compute_metrics(y, p, k);
    ASSERT_NEAR(m.accuracy, m.recall, 1e-12);
    std::size_t trace = 0;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t row = 0;
      for (std::size_t d = 0; d < k; ++d) row += m.at(c, d);
      ASSERT_EQ(row, m.support[c]);
      trace += m.at(c, c);
    }
    ASSERT_DOUBLE_EQ(m.accuracy, static_cast<double>(trace) / static_cast<double>(n));
    for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Metrics, RenderedTableHasHeaderAndRows) {
  const std::vector<std::int32_t> y{0, 1};
  const std::vector<std::size_t> p{0, 1};
  const std::vector<std::pair<std::string, dfa::identify::Metrics>> rows{
      {"Signature", dfa::identify::compute_metrics(y, p, 2)}};
  const auto text = dfa::identify::render_metrics_table(rows);
  EXPECT_NE(text.find("Accuracy"), std::string::npos);
  EXPECT_NE(text.find("Signature   1.000000"), std::string::npos);
}

// Small real corpus: every ATOM location is profiled and the baseline beats chance.
TEST(Signatures, AtomDeskCorpusBeatsChance) {
  const auto ds = dfa::faultlab::gen_dataset_in_memory(dfa::ciphers::CipherId::atom, 5,
                                                       dfa::faultlab::SplitSizes::for_samples_per_location(96));
  const auto t = SignatureTable::build(dfa::faultlab::to_delta_set(ds.train), 90);
  const auto m = dfa::identify::evaluate_signatures(t, dfa::faultlab::to_delta_set(ds.test));
  EXPECT_GT(m.accuracy, 0.3);
  EXPECT_EQ(m.total, 90U * 16U);
}

}  // namespace
