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

#include "dfa/faultlab/faultlab.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <random>

#include "dfa/common/error.hpp"

namespace dfa::faultlab {

namespace fs = std::filesystem;

SplitSizes SplitSizes::for_samples_per_location(std::size_t n) {
  if (n < 6 || n % 6 != 0) throw ConfigError("samples per location must be a positive multiple of 6");
  return SplitSizes{n / 6 * 4, n / 6, n / 6};
}

Bits inject_bit_flip(CipherId id, std::span<const std::uint8_t> state, std::size_t f) {
  Bits out(state.begin(), state.end());
  ciphers::flip_bit(id, out, f);
  return out;
}

FaultSample gen_trace(CipherId id, std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv,
                      std::size_t f, std::size_t keystream_len) {
  FaultSample s;
  s.key.assign(key.begin(), key.end());
  s.iv.assign(iv.begin(), iv.end());
  s.fault_location = f;
  const Bits state = ciphers::initial_state(id, key, iv);
  s.z = ciphers::keystream(id, state, keystream_len);
  s.z_prime = ciphers::keystream(id, inject_bit_flip(id, state, f), keystream_len);
  s.delta = xor_bits(s.z, s.z_prime);
  return s;
}

namespace {

std::mt19937_64 location_rng(std::uint64_t seed, std::size_t location) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(location)};
  return std::mt19937_64(seq);
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n);
  for (std::size_t i = 0; i < n; i += 8) {
    const std::uint64_t w = rng();
    for (std::size_t j = 0; j < 8 && i + j < n; ++j) out[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
  }
  return out;
}

}  // namespace

std::vector<FaultSample> gen_location(CipherId id, std::uint64_t seed, std::size_t location,
                                      std::size_t count) {
  const auto& tr = ciphers::traits(id);
  if (location >= tr.faultable_bits) throw ConfigError("fault location out of range");
  auto rng = location_rng(seed, location);
  std::vector<FaultSample> out;
  out.reserve(count);
  std::vector<Bytes> keys, ivs;
  for (std::size_t done = 0; done < count;) {
    const std::size_t batch = std::min<std::size_t>(64, count - done);
    keys.clear();
    ivs.clear();
    for (std::size_t n = 0; n < batch; ++n) {
      keys.push_back(random_bytes(rng, 16));
      ivs.push_back(random_bytes(rng, 16));
    }
    auto state = ciphers::initial_state_lanes(id, keys, ivs);
    const auto z = ciphers::keystream_lanes(id, state, tr.keystream_bits);
    state[location] = ~state[location];
    const auto zf = ciphers::keystream_lanes(id, state, tr.keystream_bits);
    for (std::size_t n = 0; n < batch; ++n) {
      FaultSample s;
      s.key = keys[n];
      s.iv = ivs[n];
      s.fault_location = location;
      s.z.resize(tr.keystream_bits);
      s.z_prime.resize(tr.keystream_bits);
      s.delta.resize(tr.keystream_bits);
      for (std::size_t i = 0; i < tr.keystream_bits; ++i) {
        s.z[i] = static_cast<std::uint8_t>((z[i] >> n) & 1U);
        s.z_prime[i] = static_cast<std::uint8_t>((zf[i] >> n) & 1U);
        s.delta[i] = s.z[i] ^ s.z_prime[i];
      }
      out.push_back(std::move(s));
    }
    done += batch;
  }
  return out;
}

void DeltaSet::append(std::span<const std::uint8_t> delta, std::int32_t label) {
  if (width == 0 && labels.empty()) width = delta.size();
  if (delta.size() != width) throw DataError("differential width mismatch");
  bits.insert(bits.end(), delta.begin(), delta.end());
  labels.push_back(label);
}

std::string to_csv_row(const FaultSample& s) {
  std::string row;
  row.reserve(80 + 3 * s.z.size());
  row += to_hex(s.key);
  row += ',';
  row += to_hex(s.iv);
  row += ',';
  row += to_bit_string(s.z);
  row += ',';
  row += to_bit_string(s.z_prime);
  row += ',';
  row += to_bit_string(s.delta);
  row += ',';
  row += std::to_string(s.fault_location);
  return row;
}

FaultSample parse_csv_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::array<std::string_view, 6> field;
  std::size_t n = 0;
  while (n < 6) {
    const auto comma = line.find(',');
    field[n++] = line.substr(0, comma);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (n != 6 || field[5].find(',') != std::string_view::npos) throw DataError("expected 6 CSV fields");
  FaultSample s;
  try {
    s.key = from_hex(field[0]);
    s.iv = from_hex(field[1]);
  } catch (const ConfigError& e) {
    throw DataError(std::string("bad hex field: ") + e.what());
  }
  s.z = from_bit_string(field[2]);
  s.z_prime = from_bit_string(field[3]);
  s.delta = from_bit_string(field[4]);
  const auto res = std::from_chars(field[5].data(), field[5].data() + field[5].size(), s.fault_location);
  if (res.ec != std::errc() || res.ptr != field[5].data() + field[5].size()) {
    throw DataError("bad fault_location field");
  }
  if (s.z.size() != s.z_prime.size() || s.z.size() != s.delta.size()) {
    throw DataError("keystream fields differ in length");
  }
  if (xor_bits(s.z, s.z_prime) != s.delta) throw DataError("delta_bits is not z_bits XOR z_prime_bits");
  return s;
}

namespace {

template <class Fn>
void for_each_row(const fs::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw DataError(path.string() + ": unexpected header");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      fn(parse_csv_row(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<FaultSample> read_csv(const fs::path& path) {
  std::vector<FaultSample> out;
  for_each_row(path, [&](FaultSample s) { out.push_back(std::move(s)); });
  return out;
}

DeltaSet read_delta_set(const fs::path& path) {
  DeltaSet set;
  for_each_row(path, [&](const FaultSample& s) {
    set.append(s.delta, static_cast<std::int32_t>(s.fault_location));
  });
  return set;
}

DeltaSet to_delta_set(std::span<const FaultSample> samples) {
  DeltaSet set;
  for (const auto& s : samples) set.append(s.delta, static_cast<std::int32_t>(s.fault_location));
  return set;
}

DatasetFiles gen_dataset(CipherId id, std::uint64_t seed, const SplitSizes& sizes, const fs::path& dir,
                         bool force, const Progress& progress) {
  DatasetFiles files{dir / "training.csv", dir / "testing.csv", dir / "validation.csv"};
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& p : {files.training, files.testing, files.validation}) {
    if (!force && fs::exists(p)) throw IoError(p.string() + " exists (use --force to overwrite)");
  }
  std::ofstream train(files.training), test(files.testing), valid(files.validation);
  if (!train || !test || !valid) throw IoError("cannot open dataset files in " + dir.string());
  for (auto* out : {&train, &test, &valid}) *out << kCsvHeader << '\n';

  const std::size_t n = ciphers::traits(id).faultable_bits;
  for (std::size_t f = 0; f < n; ++f) {
    const auto rows = gen_location(id, seed, f, sizes.total());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::ofstream& out = r < sizes.train ? train : (r < sizes.train + sizes.test ? test : valid);
      out << to_csv_row(rows[r]) << '\n';
    }
    if (progress) progress(f + 1, n);
  }
  for (auto* out : {&train, &test, &valid}) {
    out->flush();
    if (!*out) throw IoError("write failed in " + dir.string());
  }
  files.train_rows = n * sizes.train;
  files.test_rows = n * sizes.test;
  files.validation_rows = n * sizes.validation;
  return files;
}

DatasetSplit gen_dataset_in_memory(CipherId id, std::uint64_t seed, const SplitSizes& sizes) {
  DatasetSplit split;
  const std::size_t n = ciphers::traits(id).faultable_bits;
  for (std::size_t f = 0; f < n; ++f) {
    auto rows = gen_location(id, seed, f, sizes.total());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto& dst = r < sizes.train ? split.train : (r < sizes.train + sizes.test ? split.test : split.validation);
      dst.push_back(std::move(rows[r]));
    }
  }
  return split;
}

std::uint64_t file_fingerprint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<std::uint8_t>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace toy {

std::uint8_t keystream_bit(std::span<const std::uint8_t> s) {
  if (s.size() != kStateBits) throw ConfigError("toy state has 4 bits");
  return s[0] ^ s[1] ^ (s[1] & s[2]) ^ (s[2] & s[3]);
}

gf2::BooleanPolynomial symbolic_keystream_bit(const gf2::UniversePtr& u) {
  using P = gf2::BooleanPolynomial;
  const auto s = [&](gf2::Var v) { return P::variable(u, v); };
  return s(0) + s(1) + s(1) * s(2) + s(2) * s(3);
}

}  // namespace toy

}  // namespace dfa::faultlab
