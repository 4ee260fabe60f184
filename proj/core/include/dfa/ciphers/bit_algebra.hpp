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

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dfa/common/error.hpp"
#include "dfa/gf2/polynomial.hpp"

// Bit algebras let one cipher routine run over concrete bits, 64 bitsliced
// instances at once, or Boolean polynomials. Each algebra provides the GF(2)
// ring operations plus `select`, the table lookup ATOM's key filter needs.

namespace dfa::ciphers {

template <class Ops>
concept BitAlgebra = requires(const Ops& ops, const typename Ops::Elem& a, bool b) {
  { ops.constant(b) } -> std::convertible_to<typename Ops::Elem>;
  { ops.bxor(a, a) } -> std::convertible_to<typename Ops::Elem>;
  { ops.band(a, a) } -> std::convertible_to<typename Ops::Elem>;
  { ops.bnot(a) } -> std::convertible_to<typename Ops::Elem>;
};

/// One concrete instance; elements are 0/1 bytes.
struct BitOps {
  using Elem = std::uint8_t;

  Elem constant(bool b) const { return b ? 1 : 0; }
  Elem bxor(Elem a, Elem b) const { return a ^ b; }
  Elem band(Elem a, Elem b) const { return a & b; }
  Elem bnot(Elem a) const { return a ^ 1; }

  /// table[index], where index_bits[0] is the most significant bit.
  Elem select(std::span<const Elem> table, std::span<const Elem> index_bits) const {
    std::size_t index = 0;
    for (Elem bit : index_bits) index = index << 1 | (bit & 1U);
    return table[index];
  }
};

/// 64 independent instances, one per bit lane of a 64-bit word.
struct LaneOps {
  using Elem = std::uint64_t;

  Elem constant(bool b) const { return b ? ~Elem{0} : Elem{0}; }
  Elem bxor(Elem a, Elem b) const { return a ^ b; }
  Elem band(Elem a, Elem b) const { return a & b; }
  Elem bnot(Elem a) const { return ~a; }

  Elem select(std::span<const Elem> table, std::span<const Elem> index_bits) const {
    Elem out = 0;
    for (unsigned lane = 0; lane < 64; ++lane) {
      std::size_t index = 0;
      for (Elem bit : index_bits) index = index << 1 | ((bit >> lane) & 1U);
      out |= ((table[index] >> lane) & 1U) << lane;
    }
    return out;
  }
};

/// Symbolic execution over the Boolean ring of `universe`.
class PolyOps {
 public:
  using Elem = gf2::BooleanPolynomial;

  explicit PolyOps(gf2::UniversePtr universe)
      : universe_(std::move(universe)),
        zero_(gf2::BooleanPolynomial::zero(universe_)),
        one_(gf2::BooleanPolynomial::one(universe_)) {}

  const gf2::UniversePtr& universe() const { return universe_; }
  Elem variable(gf2::Var v) const { return gf2::BooleanPolynomial::variable(universe_, v); }

  Elem constant(bool b) const { return b ? one_ : zero_; }
  Elem bxor(const Elem& a, const Elem& b) const { return a + b; }
  Elem band(const Elem& a, const Elem& b) const { return a * b; }
  Elem bnot(const Elem& a) const { return a.complement(); }

  /// The index must be concrete; a symbolic counter would make the selected
  /// key bit a multiplexer over all 128 key variables.
  Elem select(std::span<const Elem> table, std::span<const Elem> index_bits) const {
    std::size_t index = 0;
    for (const Elem& bit : index_bits) {
      if (!bit.is_constant()) {
        throw UnsupportedModeError("table index depends on symbolic bits; the counter must be concrete");
      }
      index = index << 1 | (bit.is_one() ? 1U : 0U);
    }
    return table[index];
  }

 private:
  gf2::UniversePtr universe_;
  Elem zero_;
  Elem one_;
};

template <BitAlgebra Ops>
typename Ops::Elem maj(const Ops& ops, const typename Ops::Elem& x, const typename Ops::Elem& y,
                       const typename Ops::Elem& z) {
  return ops.bxor(ops.bxor(ops.band(x, y), ops.band(x, z)), ops.band(y, z));
}

template <BitAlgebra Ops>
typename Ops::Elem ch(const Ops& ops, const typename Ops::Elem& x, const typename Ops::Elem& y,
                      const typename Ops::Elem& z) {
  return ops.bxor(ops.band(x, y), ops.band(ops.bnot(x), z));
}

/// Fixed-length register where `shift_in` drops element 0 and appends at the
/// top, in amortized O(1).
template <class T>
class ShiftRegister {
 public:
  ShiftRegister() = default;
  explicit ShiftRegister(std::vector<T> init) : buf_(std::move(init)), size_(buf_.size()) {}

  std::size_t size() const { return size_; }
  T& operator[](std::size_t i) { return buf_[head_ + i]; }
  const T& operator[](std::size_t i) const { return buf_[head_ + i]; }

  void shift_in(T value) {
    buf_.push_back(std::move(value));
    ++head_;
    if (head_ >= 4 * size_ + 64) compact();
  }

  std::vector<T> snapshot() const {
    return std::vector<T>(buf_.begin() + static_cast<std::ptrdiff_t>(head_), buf_.end());
  }

 private:
  void compact() {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }

  std::vector<T> buf_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace dfa::ciphers
