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
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dfa/ciphers/cipher.hpp"
#include "dfa/common/bits.hpp"
#include "dfa/gf2/polynomial.hpp"

namespace dfa::faultlab {

using ciphers::CipherId;

struct FaultSample {
  Bytes key;
  Bytes iv;
  std::size_t fault_location = 0;
  Bits z;
  Bits z_prime;
  Bits delta;
};

/// Per-location row counts. The default 1536 splits as 1024/256/256; other
/// totals keep the 4:1:1 proportions (96 -> 64/16/16).
struct SplitSizes {
  std::size_t train = 1024;
  std::size_t test = 256;
  std::size_t validation = 256;

  std::size_t total() const { return train + test + validation; }
  static SplitSizes for_samples_per_location(std::size_t n);
};

/// Copy of `state` with bit f complemented.
Bits inject_bit_flip(CipherId id, std::span<const std::uint8_t> state, std::size_t f);

/// Fault-free and faulty runs from the same post-initialization state.
FaultSample gen_trace(CipherId id, std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv,
                      std::size_t f, std::size_t keystream_len);

/// Differential keystreams for one location, `count` fresh (key, IV) pairs
/// drawn from the (seed, location) substream. Row r of the result is sample
/// r + 1 of that location.
std::vector<FaultSample> gen_location(CipherId id, std::uint64_t seed, std::size_t location,
                                      std::size_t count);

/// Compact labelled ΔZ matrix used for training and evaluation.
struct DeltaSet {
  std::size_t width = 0;
  std::vector<std::uint8_t> bits;  // rows * width, row-major
  std::vector<std::int32_t> labels;

  std::size_t rows() const { return labels.size(); }
  std::span<const std::uint8_t> row(std::size_t r) const { return {bits.data() + r * width, width}; }
  void append(std::span<const std::uint8_t> delta, std::int32_t label);
};

struct DatasetFiles {
  std::filesystem::path training;
  std::filesystem::path testing;
  std::filesystem::path validation;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::size_t validation_rows = 0;
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Writes training.csv, testing.csv and validation.csv into `dir`, one
/// location at a time in location order. Existing files are an IoError
/// unless `force`.
DatasetFiles gen_dataset(CipherId id, std::uint64_t seed, const SplitSizes& sizes,
                         const std::filesystem::path& dir, bool force, const Progress& progress = {});

/// In-memory variant for small corpora and tests.
struct DatasetSplit {
  std::vector<FaultSample> train;
  std::vector<FaultSample> test;
  std::vector<FaultSample> validation;
};
DatasetSplit gen_dataset_in_memory(CipherId id, std::uint64_t seed, const SplitSizes& sizes);

inline constexpr const char* kCsvHeader = "key_hex,iv_hex,z_bits,z_prime_bits,delta_bits,fault_location";

std::string to_csv_row(const FaultSample& s);
/// Parses one data row; verifies delta = z XOR z' and equal lengths.
FaultSample parse_csv_row(std::string_view line);

/// Reads a split file; throws DataError on malformed rows or a ΔZ that does
/// not match Z XOR Z'.
std::vector<FaultSample> read_csv(const std::filesystem::path& path);
/// Same checks, but keeps only ΔZ and the label.
DeltaSet read_delta_set(const std::filesystem::path& path);
DeltaSet to_delta_set(std::span<const FaultSample> samples);

/// 64-bit FNV-1a of a file's bytes (manifest fingerprint).
std::uint64_t file_fingerprint(const std::filesystem::path& path);

// Toy 4-bit cipher: z0 = s0 + s1 + s1*s2 + s2*s3.
namespace toy {
inline constexpr std::size_t kStateBits = 4;
std::uint8_t keystream_bit(std::span<const std::uint8_t> state);
gf2::BooleanPolynomial symbolic_keystream_bit(const gf2::UniversePtr& universe);
}  // namespace toy

}  // namespace dfa::faultlab
