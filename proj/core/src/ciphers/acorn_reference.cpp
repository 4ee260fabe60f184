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

// Straight-line port of the byte-at-a-time ACORN-128 reference code. Kept
// deliberately close to the published C routine so the templated cipher can
// be cross-checked against it.

#include "dfa/ciphers/acorn.hpp"

namespace dfa::ciphers::acorn {

namespace {

using StateArray = std::array<std::uint8_t, kStateBits>;

inline std::uint8_t maj_ref(std::uint8_t x, std::uint8_t y, std::uint8_t z) {
  return (x & y) ^ (x & z) ^ (y & z);
}

inline std::uint8_t ch_ref(std::uint8_t x, std::uint8_t y, std::uint8_t z) {
  return (x & y) ^ ((x ^ 1) & z);
}

std::uint8_t ksg128(const StateArray& state) {
  return state[12] ^ state[154] ^ maj_ref(state[235], state[61], state[193]) ^
         ch_ref(state[230], state[111], state[66]);
}

std::uint8_t fbk128(const StateArray& state, std::uint8_t* ks, std::uint8_t ca, std::uint8_t cb) {
  *ks = ksg128(state);
  return state[0] ^ (state[107] ^ 1) ^ maj_ref(state[244], state[23], state[160]) ^
         (ca & state[196]) ^ (cb & *ks);
}

void encrypt_state_update(StateArray& state, std::uint8_t plaintextbit, std::uint8_t* ciphertextbit,
                          std::uint8_t* ks, std::uint8_t ca, std::uint8_t cb) {
  state[289] ^= state[235] ^ state[230];
  state[230] ^= state[196] ^ state[193];
  state[193] ^= state[160] ^ state[154];
  state[154] ^= state[111] ^ state[107];
  state[107] ^= state[66] ^ state[61];
  state[61] ^= state[23] ^ state[0];

  const std::uint8_t f = fbk128(state, ks, ca, cb);
  for (std::size_t i = 0; i <= 291; ++i) state[i] = state[i + 1];
  state[292] = f ^ plaintextbit;
  *ciphertextbit = *ks ^ plaintextbit;
}

std::uint8_t enc_onebyte(StateArray& state, std::uint8_t plaintextbyte, std::uint8_t cabyte,
                         std::uint8_t cbbyte) {
  std::uint8_t ciphertextbyte = 0;
  for (unsigned i = 0; i < 8; ++i) {
    std::uint8_t cbit = 0;
    std::uint8_t ks = 0;
    encrypt_state_update(state, (plaintextbyte >> i) & 1, &cbit, &ks, (cabyte >> i) & 1,
                         (cbbyte >> i) & 1);
    ciphertextbyte |= static_cast<std::uint8_t>(cbit << i);
  }
  return ciphertextbyte;
}

StateArray initialize_ref(std::span<const std::uint8_t, 16> key, std::span<const std::uint8_t, 16> iv) {
  StateArray state{};
  for (int j = 0; j <= 15; ++j) enc_onebyte(state, key[j], 0xff, 0xff);
  for (int j = 0; j <= 15; ++j) enc_onebyte(state, iv[j], 0xff, 0xff);
  enc_onebyte(state, key[0] ^ 1, 0xff, 0xff);
  for (int j = 1; j <= 191; ++j) enc_onebyte(state, key[j & 15], 0xff, 0xff);
  // empty associated data: one 1 bit, 255 zeros; ca drops after 128 bits
  for (int i = 0; i < 32; ++i) {
    enc_onebyte(state, i == 0 ? 0x01 : 0x00, i < 16 ? 0xff : 0x00, 0xff);
  }
  return state;
}

}  // namespace

std::array<std::uint8_t, kStateBits> reference_initial_state(std::span<const std::uint8_t, 16> key,
                                                             std::span<const std::uint8_t, 16> iv) {
  return initialize_ref(key, iv);
}

std::vector<std::uint8_t> reference_encrypt(std::span<const std::uint8_t, 16> key,
                                            std::span<const std::uint8_t, 16> iv,
                                            std::span<const std::uint8_t> plaintext) {
  StateArray state = initialize_ref(key, iv);
  std::vector<std::uint8_t> ciphertext;
  ciphertext.reserve(plaintext.size());
  for (auto p : plaintext) ciphertext.push_back(enc_onebyte(state, p, 0xff, 0x00));
  return ciphertext;
}

}  // namespace dfa::ciphers::acorn
