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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfa {

using Bits = std::vector<std::uint8_t>;  // one 0/1 value per entry
using Bytes = std::vector<std::uint8_t>;

// Byte strings map to bit sequences LSB-first: bit j is (bytes[j / 8] >> (j % 8)) & 1.
// This is the order in which the reference implementations of ACORN and
// MORUS consume key, nonce and message bits.
Bits bits_from_bytes(std::span<const std::uint8_t> bytes);
Bytes bytes_from_bits(std::span<const std::uint8_t> bits);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Accepts upper or lower case; throws ConfigError on odd length or bad digits.
Bytes from_hex(std::string_view hex);

/// '0'/'1' characters, index 0 first.
std::string to_bit_string(std::span<const std::uint8_t> bits);
Bits from_bit_string(std::string_view text);

Bits xor_bits(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace dfa
