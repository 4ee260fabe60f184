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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dfa/common/bits.hpp"
#include "dfa/gf2/polynomial.hpp"

// Runtime front end over the three cipher templates.
//
// A concrete state is a flat bit vector at the start of the encryption
// phase:
//   ACORN  s0..s292
//   MORUS  bit j of register r at 128 * r + j
//   ATOM   b0..b89, then l0..l68, then k0..k127
// Fault location f flips state bit f; only the first `faultable_bits`
// positions are fault targets (for ATOM, the NFSR).

namespace dfa::ciphers {

enum class CipherId { acorn, morus, atom };

struct CipherTraits {
  CipherId id;
  std::string_view name;
  std::size_t state_bits;
  std::size_t faultable_bits;
  std::size_t keystream_bits;
  std::size_t symbolic_horizon;
  std::size_t initial_threshold;
};

const CipherTraits& traits(CipherId id);
/// "acorn", "morus" or "atom"; throws ConfigError otherwise.
CipherId parse_cipher_id(std::string_view name);
std::string_view to_string(CipherId id);

/// Post-initialization state for a 16-byte key and IV.
Bits initial_state(CipherId id, std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv);

/// First `nbits` keystream bits (zero plaintext) from a concrete state.
Bits keystream(CipherId id, std::span<const std::uint8_t> state, std::size_t nbits);

/// Bitsliced variants: element i of a lane vector holds state bit i of up
/// to 64 instances, instance n in bit n.
std::vector<std::uint64_t> initial_state_lanes(CipherId id, std::span<const Bytes> keys,
                                               std::span<const Bytes> ivs);
std::vector<std::uint64_t> keystream_lanes(CipherId id, std::span<const std::uint64_t> state,
                                           std::size_t nbits);

/// Complements state bit `location`; throws ConfigError when out of the
/// faultable range.
void flip_bit(CipherId id, std::span<std::uint8_t> state, std::size_t location);

/// Variables of the symbolic keystream: s0..s292 (ACORN), s0..s639 (MORUS),
/// b0..b89 then k0..k127 (ATOM). Fault location f is variable f in each.
gf2::UniversePtr symbolic_universe(CipherId id);

/// Keystream bits as polynomials in the initial state. ATOM needs the
/// concrete LFSR, taken from `state` (other entries are ignored); the other
/// ciphers ignore `state`. With `flipped`, the run starts from the state with
/// that bit complemented (symbolic fault injection).
std::vector<gf2::BooleanPolynomial> symbolic_keystream(CipherId id, std::size_t nbits,
                                                       std::span<const std::uint8_t> state = {},
                                                       std::optional<std::size_t> flipped = std::nullopt);

/// Values of the symbolic variables for a concrete state.
gf2::Assignment symbolic_assignment(CipherId id, std::span<const std::uint8_t> state);

/// Inverse of symbolic_assignment for the variables it covers: writes the
/// assigned values back into `state`.
void apply_assignment(CipherId id, const gf2::Assignment& values, std::span<std::uint8_t> state);

}  // namespace dfa::ciphers
