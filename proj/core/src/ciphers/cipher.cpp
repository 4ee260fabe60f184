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

#include "dfa/ciphers/cipher.hpp"

#include <array>
#include <optional>
#include <string>
#include <type_traits>

#include "dfa/ciphers/acorn.hpp"
#include "dfa/ciphers/atom.hpp"
#include "dfa/ciphers/morus.hpp"
#include "dfa/common/error.hpp"

namespace dfa::ciphers {

namespace {

constexpr std::size_t kAtomStateBits = atom::kNfsrBits + atom::kLfsrBits + atom::kKeyBits;

constexpr std::array<CipherTraits, 3> kTraits = {{
    {CipherId::acorn, "acorn", acorn::kStateBits, acorn::kStateBits, 152, 152, 150},
    {CipherId::morus, "morus", morus::kStateBits, morus::kStateBits, 384, 256, 896},
    {CipherId::atom, "atom", kAtomStateBits, atom::kNfsrBits, 56, 16, 234},
}};

void check_key_iv(std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv) {
  if (key.size() != 16 || iv.size() != 16) throw ConfigError("key and IV must be 16 bytes each");
}

void check_state(CipherId id, std::size_t size) {
  if (size != traits(id).state_bits) {
    throw ConfigError(std::string(to_string(id)) + " state must have " +
                      std::to_string(traits(id).state_bits) + " bits, got " + std::to_string(size));
  }
}

// Bit vector of an element sequence for either algebra.
template <class Ops>
std::vector<typename Ops::Elem> spread_bytes(const Ops& ops, std::span<const Bytes> bytes) {
  std::vector<typename Ops::Elem> out(128, ops.constant(false));
  if constexpr (std::is_same_v<Ops, BitOps>) {
    const Bits bits = bits_from_bytes(bytes[0]);
    for (std::size_t i = 0; i < 128; ++i) out[i] = bits[i];
  } else {
    for (std::size_t n = 0; n < bytes.size(); ++n) {
      for (std::size_t i = 0; i < 128; ++i) {
        out[i] |= static_cast<std::uint64_t>((bytes[n][i / 8] >> (i % 8)) & 1U) << n;
      }
    }
  }
  return out;
}

template <class Ops>
std::vector<typename Ops::Elem> init_generic(CipherId id, const Ops& ops, std::span<const Bytes> keys,
                                             std::span<const Bytes> ivs) {
  const auto key = spread_bytes(ops, keys);
  const auto iv = spread_bytes(ops, ivs);
  using E = typename Ops::Elem;
  switch (id) {
    case CipherId::acorn:
      return acorn::initialize(ops, std::span<const E>(key), std::span<const E>(iv)).snapshot();
    case CipherId::morus:
      return morus::initialize(ops, std::span<const E>(key), std::span<const E>(iv)).bits;
    case CipherId::atom: {
      auto s = atom::initialize(ops, std::span<const E>(key), std::span<const E>(iv));
      std::vector<E> out = s.b.snapshot();
      auto l = s.l.snapshot();
      out.insert(out.end(), l.begin(), l.end());
      out.insert(out.end(), s.k.begin(), s.k.end());
      return out;
    }
  }
  throw ConfigError("unknown cipher");
}

template <class Ops>
atom::State<Ops> atom_from_flat(std::span<const typename Ops::Elem> flat) {
  using E = typename Ops::Elem;
  const auto nb = atom::kNfsrBits;
  const auto nl = atom::kLfsrBits;
  return atom::State<Ops>{ShiftRegister<E>(std::vector<E>(flat.begin(), flat.begin() + nb)),
                          ShiftRegister<E>(std::vector<E>(flat.begin() + nb, flat.begin() + nb + nl)),
                          std::vector<E>(flat.begin() + nb + nl, flat.end()), atom::kInitClocks};
}

template <class Ops>
std::vector<typename Ops::Elem> keystream_generic(CipherId id, const Ops& ops,
                                                  std::span<const typename Ops::Elem> flat,
                                                  std::size_t nbits) {
  using E = typename Ops::Elem;
  switch (id) {
    case CipherId::acorn: {
      acorn::State<Ops> s(std::vector<E>(flat.begin(), flat.end()));
      return acorn::keystream(ops, s, nbits);
    }
    case CipherId::morus: {
      morus::State<Ops> s{std::vector<E>(flat.begin(), flat.end())};
      return morus::keystream(ops, s, nbits);
    }
    case CipherId::atom: {
      auto s = atom_from_flat<Ops>(flat);
      return atom::keystream(ops, s, nbits);
    }
  }
  throw ConfigError("unknown cipher");
}

}  // namespace

const CipherTraits& traits(CipherId id) {
  for (const auto& t : kTraits) {
    if (t.id == id) return t;
  }
  throw ConfigError("unknown cipher");
}

CipherId parse_cipher_id(std::string_view name) {
  for (const auto& t : kTraits) {
    if (t.name == name) return t.id;
  }
  throw ConfigError("unknown cipher '" + std::string(name) + "' (expected acorn, morus or atom)");
}

std::string_view to_string(CipherId id) { return traits(id).name; }

Bits initial_state(CipherId id, std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv) {
  check_key_iv(key, iv);
  const std::array<Bytes, 1> k{Bytes(key.begin(), key.end())};
  const std::array<Bytes, 1> v{Bytes(iv.begin(), iv.end())};
  return init_generic(id, BitOps{}, k, v);
}

Bits keystream(CipherId id, std::span<const std::uint8_t> state, std::size_t nbits) {
  check_state(id, state.size());
  return keystream_generic(id, BitOps{}, state, nbits);
}

std::vector<std::uint64_t> initial_state_lanes(CipherId id, std::span<const Bytes> keys,
                                               std::span<const Bytes> ivs) {
  if (keys.size() != ivs.size() || keys.empty() || keys.size() > 64) {
    throw ConfigError("lane batch needs 1..64 matching keys and IVs");
  }
  for (std::size_t n = 0; n < keys.size(); ++n) check_key_iv(keys[n], ivs[n]);
  return init_generic(id, LaneOps{}, keys, ivs);
}

std::vector<std::uint64_t> keystream_lanes(CipherId id, std::span<const std::uint64_t> state,
                                           std::size_t nbits) {
  check_state(id, state.size());
  return keystream_generic(id, LaneOps{}, state, nbits);
}

void flip_bit(CipherId id, std::span<std::uint8_t> state, std::size_t location) {
  check_state(id, state.size());
  if (location >= traits(id).faultable_bits) {
    throw ConfigError("fault location " + std::to_string(location) + " out of range for " +
                      std::string(to_string(id)));
  }
  state[location] ^= 1U;
}

gf2::UniversePtr symbolic_universe(CipherId id) {
  switch (id) {
    case CipherId::acorn:
      return gf2::Universe::make("s", acorn::kStateBits);
    case CipherId::morus:
      return gf2::Universe::make("s", morus::kStateBits);
    case CipherId::atom:
      return gf2::Universe::make({{"b", atom::kNfsrBits}, {"k", atom::kKeyBits}});
  }
  throw ConfigError("unknown cipher");
}

std::vector<gf2::BooleanPolynomial> symbolic_keystream(CipherId id, std::size_t nbits,
                                                       std::span<const std::uint8_t> state,
                                                       std::optional<std::size_t> flipped) {
  const PolyOps ops(symbolic_universe(id));
  std::vector<gf2::BooleanPolynomial> flat;
  if (id == CipherId::atom) {
    check_state(id, state.size());
    flat.reserve(kAtomStateBits);
    for (std::size_t i = 0; i < atom::kNfsrBits; ++i) flat.push_back(ops.variable(static_cast<gf2::Var>(i)));
    for (std::size_t i = 0; i < atom::kLfsrBits; ++i) flat.push_back(ops.constant(state[atom::kNfsrBits + i] != 0));
    for (std::size_t i = 0; i < atom::kKeyBits; ++i) {
      flat.push_back(ops.variable(static_cast<gf2::Var>(atom::kNfsrBits + i)));
    }
  } else {
    const std::size_t n = traits(id).state_bits;
    flat.reserve(n);
    for (std::size_t i = 0; i < n; ++i) flat.push_back(ops.variable(static_cast<gf2::Var>(i)));
  }
  if (flipped) {
    if (*flipped >= traits(id).faultable_bits) throw ConfigError("fault location out of range");
    flat[*flipped] = flat[*flipped].complement();
  }
  return keystream_generic(id, ops, std::span<const gf2::BooleanPolynomial>(flat), nbits);
}

gf2::Assignment symbolic_assignment(CipherId id, std::span<const std::uint8_t> state) {
  check_state(id, state.size());
  if (id != CipherId::atom) return gf2::Assignment::from_bits(state);
  gf2::Assignment a(atom::kNfsrBits + atom::kKeyBits);
  for (std::size_t i = 0; i < atom::kNfsrBits; ++i) a.set(static_cast<gf2::Var>(i), state[i] != 0);
  const std::size_t key_offset = atom::kNfsrBits + atom::kLfsrBits;
  for (std::size_t i = 0; i < atom::kKeyBits; ++i) {
    a.set(static_cast<gf2::Var>(atom::kNfsrBits + i), state[key_offset + i] != 0);
  }
  return a;
}

void apply_assignment(CipherId id, const gf2::Assignment& values, std::span<std::uint8_t> state) {
  check_state(id, state.size());
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (!values.known(static_cast<gf2::Var>(v))) continue;
    std::size_t pos = v;
    if (id == CipherId::atom && v >= atom::kNfsrBits) pos = v + atom::kLfsrBits;
    state[pos] = values.value(static_cast<gf2::Var>(v)) ? 1 : 0;
  }
}

}  // namespace dfa::ciphers
