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

// Word-level MORUS-640 in the style of the published reference code: the
// whole-register rotations are explicit word moves, not bit index maps.

#include <cstring>

#include "dfa/ciphers/morus.hpp"

namespace dfa::ciphers::morus {

namespace {

using Word = std::uint32_t;
using RefState = std::array<std::array<Word, 4>, 5>;

constexpr unsigned n1 = 5, n2 = 31, n3 = 7, n4 = 22, n5 = 13;

inline Word rotl(Word x, unsigned n) { return (x << n) | (x >> (32 - n)); }

Word load_le(const std::uint8_t* p) {
  return Word{p[0]} | Word{p[1]} << 8 | Word{p[2]} << 16 | Word{p[3]} << 24;
}

void store_le(std::uint8_t* p, Word w) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(w >> (8 * i));
}

void state_update_ref(RefState& state, const Word* msgblk) {
  Word temp;

  for (int i = 0; i < 4; ++i) state[0][i] ^= state[3][i];
  for (int i = 0; i < 4; ++i) state[0][i] ^= state[1][i] & state[2][i];
  for (int i = 0; i < 4; ++i) state[0][i] = rotl(state[0][i], n1);
  temp = state[3][3];
  state[3][3] = state[3][2];
  state[3][2] = state[3][1];
  state[3][1] = state[3][0];
  state[3][0] = temp;

  for (int i = 0; i < 4; ++i) state[1][i] ^= msgblk[i];
  for (int i = 0; i < 4; ++i) state[1][i] ^= state[4][i];
  for (int i = 0; i < 4; ++i) state[1][i] ^= state[2][i] & state[3][i];
  for (int i = 0; i < 4; ++i) state[1][i] = rotl(state[1][i], n2);
  std::swap(state[4][0], state[4][2]);
  std::swap(state[4][1], state[4][3]);

  for (int i = 0; i < 4; ++i) state[2][i] ^= msgblk[i];
  for (int i = 0; i < 4; ++i) state[2][i] ^= state[0][i];
  for (int i = 0; i < 4; ++i) state[2][i] ^= state[3][i] & state[4][i];
  for (int i = 0; i < 4; ++i) state[2][i] = rotl(state[2][i], n3);
  temp = state[0][0];
  state[0][0] = state[0][1];
  state[0][1] = state[0][2];
  state[0][2] = state[0][3];
  state[0][3] = temp;

  for (int i = 0; i < 4; ++i) state[3][i] ^= msgblk[i];
  for (int i = 0; i < 4; ++i) state[3][i] ^= state[1][i];
  for (int i = 0; i < 4; ++i) state[3][i] ^= state[4][i] & state[0][i];
  for (int i = 0; i < 4; ++i) state[3][i] = rotl(state[3][i], n4);
  std::swap(state[1][0], state[1][2]);
  std::swap(state[1][1], state[1][3]);

  for (int i = 0; i < 4; ++i) state[4][i] ^= msgblk[i];
  for (int i = 0; i < 4; ++i) state[4][i] ^= state[2][i];
  for (int i = 0; i < 4; ++i) state[4][i] ^= state[0][i] & state[1][i];
  for (int i = 0; i < 4; ++i) state[4][i] = rotl(state[4][i], n5);
  temp = state[2][3];
  state[2][3] = state[2][2];
  state[2][2] = state[2][1];
  state[2][1] = state[2][0];
  state[2][0] = temp;
}

RefState initialize_ref(std::span<const std::uint8_t, 16> key, std::span<const std::uint8_t, 16> iv) {
  RefState state{};
  Word ekey[4];
  const Word zero[4] = {0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    state[0][i] = load_le(iv.data() + 4 * i);
    ekey[i] = load_le(key.data() + 4 * i);
    state[1][i] = ekey[i];
    state[2][i] = 0xffffffffU;
    state[3][i] = load_le(kInitConstant.data() + 4 * i);
    state[4][i] = load_le(kInitConstant.data() + 16 + 4 * i);
  }
  for (int i = 0; i < 16; ++i) state_update_ref(state, zero);
  for (int i = 0; i < 4; ++i) state[1][i] ^= ekey[i];
  return state;
}

void enc_aut_step(RefState& state, const std::uint8_t* plaintextblock, std::uint8_t* ciphertextblock) {
  Word msg[4];
  for (int i = 0; i < 4; ++i) msg[i] = load_le(plaintextblock + 4 * i);
  Word c[4];
  c[0] = msg[0] ^ state[0][0] ^ state[1][1] ^ (state[2][0] & state[3][0]);
  c[1] = msg[1] ^ state[0][1] ^ state[1][2] ^ (state[2][1] & state[3][1]);
  c[2] = msg[2] ^ state[0][2] ^ state[1][3] ^ (state[2][2] & state[3][2]);
  c[3] = msg[3] ^ state[0][3] ^ state[1][0] ^ (state[2][3] & state[3][3]);
  for (int i = 0; i < 4; ++i) store_le(ciphertextblock + 4 * i, c[i]);
  state_update_ref(state, msg);
}

}  // namespace

std::array<std::array<std::uint32_t, 4>, 5> reference_initial_state(
    std::span<const std::uint8_t, 16> key, std::span<const std::uint8_t, 16> iv) {
  return initialize_ref(key, iv);
}

std::vector<std::uint8_t> reference_encrypt(std::span<const std::uint8_t, 16> key,
                                            std::span<const std::uint8_t, 16> iv,
                                            std::span<const std::uint8_t> plaintext) {
  RefState state = initialize_ref(key, iv);
  std::vector<std::uint8_t> out(plaintext.size());
  std::size_t i = 0;
  for (; i + 16 <= plaintext.size(); i += 16) enc_aut_step(state, plaintext.data() + i, out.data() + i);
  if (i < plaintext.size()) {
    std::uint8_t p[16] = {};
    std::uint8_t c[16];
    std::memcpy(p, plaintext.data() + i, plaintext.size() - i);
    enc_aut_step(state, p, c);
    std::memcpy(out.data() + i, c, plaintext.size() - i);
  }
  return out;
}

}  // namespace dfa::ciphers::morus
