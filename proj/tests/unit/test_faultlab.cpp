// Copyright 2026 The DFA Workbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "dfa/common/error.hpp"
#include "dfa/faultlab/faultlab.hpp"

namespace {

using namespace dfa;
using namespace dfa::faultlab;
namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dfa_faultlab_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Faultlab, FlipIsInvolution) {
  const auto s = ciphers::initial_state(CipherId::acorn, Bytes(16, 1), Bytes(16, 2));
  const auto once = inject_bit_flip(CipherId::acorn, s, 17);
  EXPECT_NE(once, s);
  EXPECT_EQ(inject_bit_flip(CipherId::acorn, once, 17), s);
}

TEST(Faultlab, FlipOnZeroStateSetsOneBit) {
  const Bits zero(293, 0);
  const auto f = inject_bit_flip(CipherId::acorn, zero, 292);
  for (std::size_t i = 0; i < 293; ++i) EXPECT_EQ(f[i], i == 292 ? 1 : 0);
  EXPECT_THROW(inject_bit_flip(CipherId::acorn, zero, 293), ConfigError);
}

TEST(Faultlab, ToyCipherFlip) {
  const Bits toy{0, 0, 0, 1};
  Bits f = toy;
  f[2] ^= 1;
  EXPECT_EQ(f, (Bits{0, 0, 1, 1}));
  EXPECT_EQ(toy::keystream_bit(toy) ^ toy::keystream_bit(f), 1);
}

TEST(Faultlab, TraceIsDeterministicAndConsistent) {
  for (auto id : {CipherId::acorn, CipherId::morus, CipherId::atom}) {
    const auto& tr = ciphers::traits(id);
    const Bytes key(16, 0x42), iv(16, 0x17);
    const auto a = gen_trace(id, key, iv, 5, tr.keystream_bits);
    const auto b = gen_trace(id, key, iv, 5, tr.keystream_bits);
    EXPECT_EQ(a.z, b.z);
    EXPECT_EQ(a.delta, b.delta);
    EXPECT_EQ(a.delta, xor_bits(a.z, a.z_prime));
    EXPECT_EQ(a.z.size(), tr.keystream_bits);
  }
}

TEST(Faultlab, LaneGenerationMatchesScalarTrace) {
  for (auto id : {CipherId::acorn, CipherId::morus, CipherId::atom}) {
    const auto rows = gen_location(id, 99, 7, 70);
    ASSERT_EQ(rows.size(), 70U);
    for (std::size_t r : {0, 63, 64, 69}) {
      const auto t = gen_trace(id, rows[r].key, rows[r].iv, 7, ciphers::traits(id).keystream_bits);
      EXPECT_EQ(rows[r].z, t.z);
      EXPECT_EQ(rows[r].z_prime, t.z_prime);
    }
  }
}

TEST(Faultlab, FaultsPropagateIntoKeystream) {
  // Fraction of all-zero differentials over random traces.
  for (auto id : {CipherId::acorn, CipherId::morus, CipherId::atom}) {
    const auto& tr = ciphers::traits(id);
    std::size_t zero = 0, total = 0;
    for (std::size_t f = 0; f < tr.faultable_bits; f += 3) {
      for (const auto& s : gen_location(id, 5, f, 32)) {
        ++total;
        zero += std::all_of(s.delta.begin(), s.delta.end(), [](auto b) { return b == 0; });
      }
    }
    EXPECT_LE(static_cast<double>(zero) / static_cast<double>(total), 0.01) << ciphers::to_string(id);
  }
}

TEST(Faultlab, SplitSizes) {
  const auto s = SplitSizes::for_samples_per_location(1536);
  EXPECT_EQ(s.train, 1024U);
  EXPECT_EQ(s.test, 256U);
  EXPECT_EQ(s.validation, 256U);
  const auto d = SplitSizes::for_samples_per_location(96);
  EXPECT_EQ(d.train, 64U);
  EXPECT_EQ(d.test, 16U);
  EXPECT_THROW(SplitSizes::for_samples_per_location(100), ConfigError);
}

TEST(Faultlab, DatasetFilesAreBalancedAndReproducible) {
  const auto dir = scratch_dir("atom");
  const auto sizes = SplitSizes::for_samples_per_location(12);
  const auto files = gen_dataset(CipherId::atom, 7, sizes, dir, false);
  EXPECT_EQ(files.train_rows, 90U * 8);
  const auto train = read_csv(files.training);
  ASSERT_EQ(train.size(), 90U * 8);
  std::vector<int> counts(90, 0);
  for (const auto& s : train) ++counts[s.fault_location];
  for (int c : counts) EXPECT_EQ(c, 8);
  EXPECT_EQ(read_csv(files.validation).size(), 90U * 2);

  const auto fp = file_fingerprint(files.testing);
  EXPECT_THROW(gen_dataset(CipherId::atom, 7, sizes, dir, false), IoError);
  gen_dataset(CipherId::atom, 7, sizes, dir, true);
  EXPECT_EQ(file_fingerprint(files.testing), fp);

  const auto in_mem = gen_dataset_in_memory(CipherId::atom, 7, sizes);
  ASSERT_EQ(in_mem.test.size(), 90U * 2);
  const auto test = read_csv(files.testing);
  for (std::size_t i = 0; i < test.size(); ++i) EXPECT_EQ(to_csv_row(test[i]), to_csv_row(in_mem.test[i]));
  fs::remove_all(dir);
}

TEST(Faultlab, CorruptRowsAreRejected) {
  const auto s = gen_trace(CipherId::atom, Bytes(16, 3), Bytes(16, 4), 2, 56);
  std::string row = to_csv_row(s);
  EXPECT_EQ(to_csv_row(parse_csv_row(row)), row);
  // Flip one character of delta_bits.
  const auto pos = row.rfind(',') - 1;
  row[pos] = row[pos] == '0' ? '1' : '0';
  EXPECT_THROW(parse_csv_row(row), DataError);
  EXPECT_THROW(parse_csv_row("00,11,0,0"), DataError);

  const auto dir = scratch_dir("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "x.csv") << "wrong,header\n";
  EXPECT_THROW(read_csv(dir / "x.csv"), DataError);
  fs::remove_all(dir);
}

}  // namespace
