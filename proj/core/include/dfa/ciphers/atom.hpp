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

// ATOM keystream generator over an arbitrary bit algebra.
//
// NFSR B = b0..b89, LFSR L = l0..l68, key K = k0..k127. Each clock outputs
// O(B, L), feeds G(B) + l0 + k[cnt] + k[(t) mod 128] into b89 and F(L) into
// l68, where cnt = l62..l68 read MSB first and t is the global clock counter
// (encryption clock i runs at t = 511 + i).
//
// The filter h and the key/IV loading are local definitions (see h() and
// initialize() below); they are fixed by the fixture file atom_kat.json.

namespace dfa::ciphers::atom {

inline constexpr std::size_t kNfsrBits = 90;
inline constexpr std::size_t kLfsrBits = 69;
inline constexpr std::size_t kKeyBits = 128;
inline constexpr std::size_t kInitClocks = 511;
/// l60..l68 hold ones at the start of encryption.
inline constexpr std::size_t kOnesTail = 9;

template <BitAlgebra Ops>
struct State {
  ShiftRegister<typename Ops::Elem> b;
  ShiftRegister<typename Ops::Elem> l;
  std::vector<typename Ops::Elem> k;
  std::size_t clock = kInitClocks;  // global clock counter t
};

/// Degree-5 filter on (l7, l33, l38, l50, l59, l62, b85, b41, b9):
/// x0x1 + x2x3 + x4x5 + x6x7 + x0x4x8 + x1x3x5x7x8.
template <BitAlgebra Ops>
typename Ops::Elem h(const Ops& ops, std::span<const typename Ops::Elem, 9> x) {
  auto out = ops.bxor(ops.band(x[0], x[1]), ops.band(x[2], x[3]));
  out = ops.bxor(out, ops.band(x[4], x[5]));
  out = ops.bxor(out, ops.band(x[6], x[7]));
  out = ops.bxor(out, ops.band(ops.band(x[0], x[4]), x[8]));
  auto t = ops.band(ops.band(x[1], x[3]), ops.band(x[5], x[7]));
  return ops.bxor(out, ops.band(t, x[8]));
}

template <BitAlgebra Ops>
typename Ops::Elem output(const Ops& ops, const State<Ops>& s) {
  const auto& b = s.b;
  const auto& l = s.l;
  auto out = b[1];
  for (std::size_t i : {5, 11, 22, 36, 53, 72, 80, 84}) out = ops.bxor(out, b[i]);
  out = ops.bxor(out, ops.band(l[5], l[16]));
  out = ops.bxor(out, ops.band(l[13], l[15]));
  out = ops.bxor(out, ops.band(l[30], l[42]));
  out = ops.bxor(out, ops.band(l[22], l[67]));
  const std::array<typename Ops::Elem, 9> x = {l[7], l[33], l[38], l[50], l[59], l[62], b[85], b[41], b[9]};
  return ops.bxor(out, h(ops, std::span<const typename Ops::Elem, 9>(x)));
}

/// LFSR feedback F(L).
template <BitAlgebra Ops>
typename Ops::Elem lfsr_feedback(const Ops& ops, const ShiftRegister<typename Ops::Elem>& l) {
  auto out = l[0];
  for (std::size_t i : {5, 12, 22, 28, 37, 45, 58}) out = ops.bxor(out, l[i]);
  return out;
}

/// NFSR feedback G(B).
template <BitAlgebra Ops>
typename Ops::Elem nfsr_feedback(const Ops& ops, const ShiftRegister<typename Ops::Elem>& b) {
  auto out = b[0];
  for (std::size_t i : {24, 49, 79, 84}) out = ops.bxor(out, b[i]);
  constexpr std::array<std::array<std::size_t, 2>, 7> quad = {
      {{3, 59}, {10, 12}, {15, 16}, {25, 53}, {35, 42}, {55, 58}, {60, 74}}};
  for (const auto& q : quad) out = ops.bxor(out, ops.band(b[q[0]], b[q[1]]));
  out = ops.bxor(out, ops.band(ops.band(b[20], b[22]), b[23]));
  out = ops.bxor(out, ops.band(ops.band(b[62], b[68]), b[72]));
  out = ops.bxor(out, ops.band(ops.band(b[77], b[80]), ops.band(b[81], b[83])));
  return out;
}

/// k[cnt] with cnt = l62 || ... || l68.
template <BitAlgebra Ops>
typename Ops::Elem counter_key_bit(const Ops& ops, const State<Ops>& s) {
  std::vector<typename Ops::Elem> cnt;
  cnt.reserve(7);
  for (std::size_t i = 62; i < 69; ++i) cnt.push_back(s.l[i]);
  return ops.select(std::span<const typename Ops::Elem>(s.k), std::span<const typename Ops::Elem>(cnt));
}

/// One clock; returns the output bit. With `fold_output` the output is also
/// XORed into both feedbacks (initialization mode).
template <BitAlgebra Ops>
typename Ops::Elem clock(const Ops& ops, State<Ops>& s, bool fold_output = false) {
  auto z = output(ops, s);
  auto fb_b = ops.bxor(nfsr_feedback(ops, s.b), s.l[0]);
  fb_b = ops.bxor(fb_b, counter_key_bit(ops, s));
  fb_b = ops.bxor(fb_b, s.k[s.clock % kKeyBits]);
  auto fb_l = lfsr_feedback(ops, s.l);
  if (fold_output) {
    fb_b = ops.bxor(fb_b, z);
    fb_l = ops.bxor(fb_l, z);
  }
  s.b.shift_in(std::move(fb_b));
  s.l.shift_in(std::move(fb_l));
  ++s.clock;
  return z;
}

/// Encryption phase with zero plaintext: z_0..z_{mlen-1}.
template <BitAlgebra Ops>
std::vector<typename Ops::Elem> keystream(const Ops& ops, State<Ops>& s, std::size_t mlen) {
  std::vector<typename Ops::Elem> z;
  z.reserve(mlen);
  for (std::size_t i = 0; i < mlen; ++i) z.push_back(clock(ops, s));
  return z;
}

/// Loads b_i = iv_i (i < 90), l_i = iv_{90+i} (i < 38), l38..l59 = 0,
/// l60..l68 = 1; runs 511 clocks with the output folded into both
/// feedbacks; finally sets l60..l68 back to 1.
template <BitAlgebra Ops>
State<Ops> initialize(const Ops& ops, std::span<const typename Ops::Elem> key,
                      std::span<const typename Ops::Elem> iv) {
  if (key.size() != kKeyBits || iv.size() != 128) throw ConfigError("ATOM needs a 128-bit key and IV");
  std::vector<typename Ops::Elem> b(iv.begin(), iv.begin() + kNfsrBits);
  std::vector<typename Ops::Elem> l(kLfsrBits, ops.constant(false));
  for (std::size_t i = 0; i < 38; ++i) l[i] = iv[kNfsrBits + i];
  for (std::size_t i = kLfsrBits - kOnesTail; i < kLfsrBits; ++i) l[i] = ops.constant(true);
  State<Ops> s{ShiftRegister<typename Ops::Elem>(std::move(b)), ShiftRegister<typename Ops::Elem>(std::move(l)),
               std::vector<typename Ops::Elem>(key.begin(), key.end()), 0};
  for (std::size_t t = 0; t < kInitClocks; ++t) clock(ops, s, true);
  for (std::size_t i = kLfsrBits - kOnesTail; i < kLfsrBits; ++i) s.l[i] = ops.constant(true);
  return s;
}

/// Independent bit-array implementation used as a cross-check.
std::vector<std::uint8_t> reference_keystream(std::span<const std::uint8_t, 16> key,
                                              std::span<const std::uint8_t, 16> iv, std::size_t mlen);

}  // namespace dfa::ciphers::atom
