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
#include <vector>

namespace dfa::gf2 {

/// Dense GF(2) matrix, rows packed into 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1U; }
  void set(std::size_t r, std::size_t c) { row(r)[c >> 6] |= std::uint64_t{1} << (c & 63); }
  void flip(std::size_t r, std::size_t c) { row(r)[c >> 6] ^= std::uint64_t{1} << (c & 63); }

  std::uint64_t* row(std::size_t r) { return data_.data() + r * stride_; }
  const std::uint64_t* row(std::size_t r) const { return data_.data() + r * stride_; }

  void swap_rows(std::size_t a, std::size_t b);
  /// row(dst) ^= row(src), touching words from `first_word` on.
  void xor_row(std::size_t dst, std::size_t src, std::size_t first_word = 0);

  /// Reduces to reduced row echelon form in place. Returns the pivot column
  /// of each of the first rank() rows; remaining rows are zero.
  std::vector<std::size_t> rref();

  /// First set column of row r, or cols() when the row is zero.
  std::size_t leading_column(std::size_t r) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace dfa::gf2
