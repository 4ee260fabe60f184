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

// ACORN-128 v3 over an arbitrary bit algebra.
//
// The state is s0..s292. One clock applies the six in-place XOR updates
// (s289 first, s61 last), emits ks(S), computes the feedback and shifts it
// in at s292 together with the message bit.

namespace dfa::ciphers::acorn {

inline constexpr std::size_t kStateBits = 293;
inline constexpr std::size_t kInitClocks = 1792;
inline constexpr std::size_t kPaddingClocks = 256;

template <BitAlgebra Ops>
using State = ShiftRegister<typename Ops::Elem>;

/// s12 + s154 + maj(s235, s61, s193) + ch(s230, s111, s66).
template <BitAlgebra Ops>
typename Ops::Elem ks(const Ops& ops, const State<Ops>& s) {
  auto out = ops.bxor(s[12], s[154]);
  out = ops.bxor(out, maj(ops, s[235], s[61], s[193]));
  return ops.bxor(out, ch(ops, s[230], s[111], s[66]));
}

/// Encryption-phase feedback (ca = 1, cb = 0): s0 + ~s107 + maj(s244, s23, s160) + s196.
template <BitAlgebra Ops>
typename Ops::Elem fb(const Ops& ops, const State<Ops>& s) {
  auto out = ops.bxor(s[0], ops.bnot(s[107]));
  out = ops.bxor(out, maj(ops, s[244], s[23], s[160]));
  return ops.bxor(out, s[196]);
}

/// The six linear updates that precede output, in reference order.
template <BitAlgebra Ops>
void intermediate_update(const Ops& ops, State<Ops>& s) {
  s[289] = ops.bxor(s[289], ops.bxor(s[235], s[230]));
  s[230] = ops.bxor(s[230], ops.bxor(s[196], s[193]));
  s[193] = ops.bxor(s[193], ops.bxor(s[160], s[154]));
  s[154] = ops.bxor(s[154], ops.bxor(s[111], s[107]));
  s[107] = ops.bxor(s[107], ops.bxor(s[66], s[61]));
  s[61] = ops.bxor(s[61], ops.bxor(s[23], s[0]));
}

/// One clock with control bits (ca, cb); returns the keystream bit.
template <BitAlgebra Ops>
typename Ops::Elem clock(const Ops& ops, State<Ops>& s, const typename Ops::Elem& m, bool ca, bool cb) {
  intermediate_update(ops, s);
  auto z = ks(ops, s);
  auto f = ops.bxor(s[0], ops.bnot(s[107]));
  f = ops.bxor(f, maj(ops, s[244], s[23], s[160]));
  if (ca) f = ops.bxor(f, s[196]);
  if (cb) f = ops.bxor(f, z);
  s.shift_in(ops.bxor(f, m));
  return z;
}

/// Encryption phase: returns z_0..z_{mlen-1} and advances `s`.
template <BitAlgebra Ops>
std::vector<typename Ops::Elem> encrypt(const Ops& ops, State<Ops>& s,
                                        std::span<const typename Ops::Elem> plaintext,
                                        std::size_t mlen) {
  if (plaintext.size() < mlen) throw ConfigError("ACORN plaintext shorter than requested length");
  std::vector<typename Ops::Elem> z;
  z.reserve(mlen);
  for (std::size_t i = 0; i < mlen; ++i) {
    intermediate_update(ops, s);
    z.push_back(ks(ops, s));
    auto y = fb(ops, s);
    s.shift_in(ops.bxor(y, plaintext[i]));
  }
  return z;
}

/// Keystream with an all-zero plaintext.
template <BitAlgebra Ops>
std::vector<typename Ops::Elem> keystream(const Ops& ops, State<Ops>& s, std::size_t mlen) {
  std::vector<typename Ops::Elem> zeros(mlen, ops.constant(false));
  return encrypt<Ops>(ops, s, zeros, mlen);
}

/// Loads key and IV (bit j = byte j/8, bit j%8) and runs the 1792
/// initialization clocks followed by the 256 clocks that close an empty
/// associated-data section, leaving the state at the start of encryption.
template <BitAlgebra Ops>
State<Ops> initialize(const Ops& ops, std::span<const typename Ops::Elem> key,
                      std::span<const typename Ops::Elem> iv) {
  if (key.size() != 128 || iv.size() != 128) throw ConfigError("ACORN needs a 128-bit key and IV");
  State<Ops> s(std::vector<typename Ops::Elem>(kStateBits, ops.constant(false)));
  for (std::size_t i = 0; i < 128; ++i) clock(ops, s, key[i], true, true);
  for (std::size_t i = 0; i < 128; ++i) clock(ops, s, iv[i], true, true);
  clock(ops, s, ops.bnot(key[0]), true, true);
  for (std::size_t i = 257; i < kInitClocks; ++i) clock(ops, s, key[i % 128], true, true);
  for (std::size_t i = 0; i < kPaddingClocks; ++i) {
    clock(ops, s, ops.constant(i == 0), i < 128, true);
  }
  return s;
}

/// Byte-oriented reference routine written independently of the templates
/// above: key/IV/plaintext bytes in, ciphertext bytes out (no tag, empty AD).
std::vector<std::uint8_t> reference_encrypt(std::span<const std::uint8_t, 16> key,
                                            std::span<const std::uint8_t, 16> iv,
                                            std::span<const std::uint8_t> plaintext);

/// State at the start of encryption computed by the reference routine.
std::array<std::uint8_t, kStateBits> reference_initial_state(std::span<const std::uint8_t, 16> key,
                                                             std::span<const std::uint8_t, 16> iv);

}  // namespace dfa::ciphers::acorn
