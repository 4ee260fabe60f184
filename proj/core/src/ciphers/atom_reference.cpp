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

// Plain-array ATOM: explicit element moves, no shared code with the template.

#include "dfa/ciphers/atom.hpp"

namespace dfa::ciphers::atom {

namespace {

struct RefState {
  std::uint8_t b[90];
  std::uint8_t l[69];
  std::uint8_t k[128];
  unsigned t;
};

std::uint8_t filter_h(std::uint8_t x0, std::uint8_t x1, std::uint8_t x2, std::uint8_t x3, std::uint8_t x4,
                      std::uint8_t x5, std::uint8_t x6, std::uint8_t x7, std::uint8_t x8) {
  return (x0 & x1) ^ (x2 & x3) ^ (x4 & x5) ^ (x6 & x7) ^ (x0 & x4 & x8) ^ (x1 & x3 & x5 & x7 & x8);
}

std::uint8_t out_o(const RefState& s) {
  const std::uint8_t* b = s.b;
  const std::uint8_t* l = s.l;
  return b[1] ^ b[5] ^ b[11] ^ b[22] ^ b[36] ^ b[53] ^ b[72] ^ b[80] ^ b[84] ^ (l[5] & l[16]) ^
         (l[13] & l[15]) ^ (l[30] & l[42]) ^ (l[22] & l[67]) ^
         filter_h(l[7], l[33], l[38], l[50], l[59], l[62], b[85], b[41], b[9]);
}

std::uint8_t fun_f(const std::uint8_t* l) {
  return l[0] ^ l[5] ^ l[12] ^ l[22] ^ l[28] ^ l[37] ^ l[45] ^ l[58];
}

std::uint8_t fun_g(const std::uint8_t* b) {
  return b[0] ^ b[24] ^ b[49] ^ b[79] ^ b[84] ^ (b[3] & b[59]) ^ (b[10] & b[12]) ^ (b[15] & b[16]) ^
         (b[25] & b[53]) ^ (b[35] & b[42]) ^ (b[55] & b[58]) ^ (b[60] & b[74]) ^
         (b[20] & b[22] & b[23]) ^ (b[62] & b[68] & b[72]) ^ (b[77] & b[80] & b[81] & b[83]);
}

std::uint8_t step(RefState& s, bool init) {
  const std::uint8_t z = out_o(s);
  unsigned cnt = 0;
  for (int j = 62; j <= 68; ++j) cnt = (cnt << 1) | s.l[j];
  std::uint8_t fb_b = fun_g(s.b) ^ s.l[0] ^ s.k[cnt] ^ s.k[s.t % 128];
  std::uint8_t fb_l = fun_f(s.l);
  if (init) {
    fb_b ^= z;
    fb_l ^= z;
  }
  for (int j = 0; j <= 88; ++j) s.b[j] = s.b[j + 1];
  s.b[89] = fb_b;
  for (int j = 0; j <= 67; ++j) s.l[j] = s.l[j + 1];
  s.l[68] = fb_l;
  ++s.t;
  return z;
}

}  // namespace

std::vector<std::uint8_t> reference_keystream(std::span<const std::uint8_t, 16> key,
                                              std::span<const std::uint8_t, 16> iv, std::size_t mlen) {
  RefState s{};
  std::uint8_t ivbits[128];
  for (int i = 0; i < 128; ++i) {
    s.k[i] = (key[i / 8] >> (i % 8)) & 1;
    ivbits[i] = (iv[i / 8] >> (i % 8)) & 1;
  }
  for (int i = 0; i < 90; ++i) s.b[i] = ivbits[i];
  for (int i = 0; i < 38; ++i) s.l[i] = ivbits[90 + i];
  for (int i = 60; i < 69; ++i) s.l[i] = 1;
  s.t = 0;
  for (int i = 0; i < 511; ++i) step(s, true);
  for (int i = 60; i < 69; ++i) s.l[i] = 1;

  std::vector<std::uint8_t> z(mlen);
  for (std::size_t i = 0; i < mlen; ++i) z[i] = step(s, false);
  return z;
}

}  // namespace dfa::ciphers::atom
