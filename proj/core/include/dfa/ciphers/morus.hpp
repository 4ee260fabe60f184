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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dfa/ciphers/bit_algebra.hpp"
#include "dfa/common/error.hpp"

// MORUS-640-128 (v2) over an arbitrary bit algebra.
//
// Bit numbering: register r holds four little-endian 32-bit words; bit j of
// the register is bit (j % 32) of word j / 32, which is also bit j % 8 of
// byte j / 8 of the register's memory image. Flattened state index
// i = 128 * r + j. Keystream bit 128 * b + j is bit j of block Z_b.

namespace dfa::ciphers::morus {

inline constexpr std::size_t kRegisters = 5;
inline constexpr std::size_t kRegisterBits = 128;
inline constexpr std::size_t kStateBits = kRegisters * kRegisterBits;
inline constexpr std::size_t kInitSteps = 16;

inline constexpr std::array<unsigned, 5> kWordRotations = {5, 31, 7, 22, 13};
// Whole-register rotations in bits (multiples of 32).
inline constexpr std::array<unsigned, 5> kRegisterRotations = {32, 64, 96, 64, 32};

template <BitAlgebra Ops>
struct State {
  std::vector<typename Ops::Elem> bits;  // kStateBits entries

  typename Ops::Elem& at(std::size_t reg, std::size_t j) { return bits[reg * kRegisterBits + j]; }
  const typename Ops::Elem& at(std::size_t reg, std::size_t j) const {
    return bits[reg * kRegisterBits + j];
  }
};

namespace detail {

template <class T>
using Block = std::vector<T>;  // kRegisterBits entries

template <BitAlgebra Ops>
Block<typename Ops::Elem> load(const State<Ops>& s, std::size_t reg) {
  const auto first = s.bits.begin() + static_cast<std::ptrdiff_t>(reg * kRegisterBits);
  return Block<typename Ops::Elem>(first, first + kRegisterBits);
}

template <BitAlgebra Ops>
void store(State<Ops>& s, std::size_t reg, Block<typename Ops::Elem> value) {
  for (std::size_t j = 0; j < kRegisterBits; ++j) s.at(reg, j) = std::move(value[j]);
}

// Rotates every 32-bit word left by `r` bits.
template <class T>
Block<T> rotl_words(const Block<T>& x, unsigned r) {
  Block<T> out(x);
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t j = 0; j < 32; ++j) out[w * 32 + (j + r) % 32] = x[w * 32 + j];
  }
  return out;
}

// Rotates the 128-bit register left by `r` bits.
template <class T>
Block<T> rotl_register(const Block<T>& x, unsigned r) {
  Block<T> out(x);
  for (std::size_t j = 0; j < kRegisterBits; ++j) out[(j + r) % kRegisterBits] = x[j];
  return out;
}

// a ^= b ^ (c & d) ^ m (m optional), then word rotation.
template <BitAlgebra Ops>
Block<typename Ops::Elem> round_core(const Ops& ops, const Block<typename Ops::Elem>& a,
                                     const Block<typename Ops::Elem>& b,
                                     const Block<typename Ops::Elem>& c,
                                     const Block<typename Ops::Elem>& d,
                                     const Block<typename Ops::Elem>* m, unsigned rot) {
  Block<typename Ops::Elem> t;
  t.reserve(kRegisterBits);
  for (std::size_t j = 0; j < kRegisterBits; ++j) {
    auto v = ops.bxor(ops.bxor(a[j], b[j]), ops.band(c[j], d[j]));
    if (m) v = ops.bxor(v, (*m)[j]);
    t.push_back(std::move(v));
  }
  return rotl_words(t, rot);
}

}  // namespace detail

/// Z = S0 ^ (S1 <<< 96) ^ (S2 & S3).
template <BitAlgebra Ops>
std::vector<typename Ops::Elem> output_block(const Ops& ops, const State<Ops>& s) {
  std::vector<typename Ops::Elem> z(kRegisterBits, ops.constant(false));
  for (std::size_t j = 0; j < kRegisterBits; ++j) {
    // (S1 <<< 96) bit j is S1 bit (j - 96) mod 128.
    const auto& rotated = s.at(1, (j + kRegisterBits - 96) % kRegisterBits);
    z[j] = ops.bxor(ops.bxor(s.at(0, j), rotated), ops.band(s.at(2, j), s.at(3, j)));
  }
  return z;
}

/// MORUS-640 state update absorbing message block `m` (128 elements).
template <BitAlgebra Ops>
void state_update(const Ops& ops, State<Ops>& s, std::span<const typename Ops::Elem> m) {
  const detail::Block<typename Ops::Elem> msg(m.begin(), m.begin() + kRegisterBits);

  auto s0 = detail::load(s, 0);
  auto s1 = detail::load(s, 1);
  auto s2 = detail::load(s, 2);
  auto s3 = detail::load(s, 3);
  auto s4 = detail::load(s, 4);

  s0 = detail::round_core(ops, s0, s3, s1, s2, nullptr, kWordRotations[0]);
  s3 = detail::rotl_register(s3, kRegisterRotations[0]);

  s1 = detail::round_core(ops, s1, s4, s2, s3, &msg, kWordRotations[1]);
  s4 = detail::rotl_register(s4, kRegisterRotations[1]);

  s2 = detail::round_core(ops, s2, s0, s3, s4, &msg, kWordRotations[2]);
  s0 = detail::rotl_register(s0, kRegisterRotations[2]);

  s3 = detail::round_core(ops, s3, s1, s4, s0, &msg, kWordRotations[3]);
  s1 = detail::rotl_register(s1, kRegisterRotations[3]);

  s4 = detail::round_core(ops, s4, s2, s0, s1, &msg, kWordRotations[4]);
  s2 = detail::rotl_register(s2, kRegisterRotations[4]);

  detail::store(s, 0, std::move(s0));
  detail::store(s, 1, std::move(s1));
  detail::store(s, 2, std::move(s2));
  detail::store(s, 3, std::move(s3));
  detail::store(s, 4, std::move(s4));
}

/// Encryption phase over `blocks` plaintext blocks (each zero-padded to 128
/// bits); returns the keystream blocks concatenated and advances `s`.
template <BitAlgebra Ops>
std::vector<typename Ops::Elem> encrypt(const Ops& ops, State<Ops>& s,
                                        std::span<const typename Ops::Elem> plaintext,
                                        std::size_t blocks) {
  if (plaintext.size() > blocks * kRegisterBits) {
    throw ConfigError("MORUS plaintext longer than the requested block count");
  }
  std::vector<typename Ops::Elem> z;
  z.reserve(blocks * kRegisterBits);
  std::vector<typename Ops::Elem> block(kRegisterBits, ops.constant(false));
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < kRegisterBits; ++j) {
      const std::size_t idx = b * kRegisterBits + j;
      block[j] = idx < plaintext.size() ? plaintext[idx] : ops.constant(false);
    }
    auto zb = output_block(ops, s);
    z.insert(z.end(), std::make_move_iterator(zb.begin()), std::make_move_iterator(zb.end()));
    state_update(ops, s, std::span<const typename Ops::Elem>(block));
  }
  return z;
}

/// Keystream bits z_0..z_{nbits-1} under an all-zero plaintext. Only the
/// blocks needed to cover `nbits` are computed.
template <BitAlgebra Ops>
std::vector<typename Ops::Elem> keystream(const Ops& ops, State<Ops>& s, std::size_t nbits) {
  std::vector<typename Ops::Elem> z;
  z.reserve(nbits);
  const std::vector<typename Ops::Elem> zeros(kRegisterBits, ops.constant(false));
  while (z.size() < nbits) {
    auto zb = output_block(ops, s);
    for (std::size_t j = 0; j < kRegisterBits && z.size() < nbits; ++j) z.push_back(std::move(zb[j]));
    if (z.size() < nbits) state_update(ops, s, std::span<const typename Ops::Elem>(zeros));
  }
  return z;
}

/// Constants loaded into S3 and S4 (Fibonacci sequence modulo 256).
inline constexpr std::array<std::uint8_t, 32> kInitConstant = {
    0x00, 0x01, 0x01, 0x02, 0x03, 0x05, 0x08, 0x0d, 0x15, 0x22, 0x37, 0x59, 0x90, 0xe9, 0x79, 0x62,
    0xdb, 0x3d, 0x18, 0x55, 0x6d, 0xc2, 0x2f, 0xf1, 0x20, 0x11, 0x31, 0x42, 0x73, 0xb5, 0x28, 0xdd};

/// S0 = IV, S1 = K, S2 = 1^128, S3/S4 = constants; 16 updates with a zero
/// message, then S1 ^= K. Associated data is empty, so this is also the
/// state at the start of encryption.
template <BitAlgebra Ops>
State<Ops> initialize(const Ops& ops, std::span<const typename Ops::Elem> key,
                      std::span<const typename Ops::Elem> iv) {
  if (key.size() != 128 || iv.size() != 128) throw ConfigError("MORUS needs a 128-bit key and IV");
  State<Ops> s{std::vector<typename Ops::Elem>(kStateBits, ops.constant(false))};
  for (std::size_t j = 0; j < kRegisterBits; ++j) {
    s.at(0, j) = iv[j];
    s.at(1, j) = key[j];
    s.at(2, j) = ops.constant(true);
    s.at(3, j) = ops.constant(((kInitConstant[j / 8] >> (j % 8)) & 1U) != 0);
    s.at(4, j) = ops.constant(((kInitConstant[16 + j / 8] >> (j % 8)) & 1U) != 0);
  }
  const std::vector<typename Ops::Elem> zeros(kRegisterBits, ops.constant(false));
  for (std::size_t i = 0; i < kInitSteps; ++i) {
    state_update(ops, s, std::span<const typename Ops::Elem>(zeros));
  }
  for (std::size_t j = 0; j < kRegisterBits; ++j) s.at(1, j) = ops.bxor(s.at(1, j), key[j]);
  return s;
}

/// Word-oriented reference routine (4 x 32-bit words per register, as in
/// the published C code): ciphertext bytes for an empty-AD encryption.
std::vector<std::uint8_t> reference_encrypt(std::span<const std::uint8_t, 16> key,
                                            std::span<const std::uint8_t, 16> iv,
                                            std::span<const std::uint8_t> plaintext);

/// Post-initialization state as 5 x 4 little-endian words.
std::array<std::array<std::uint32_t, 4>, 5> reference_initial_state(
    std::span<const std::uint8_t, 16> key, std::span<const std::uint8_t, 16> iv);

}  // namespace dfa::ciphers::morus
