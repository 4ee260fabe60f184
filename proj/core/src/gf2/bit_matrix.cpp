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

#include "dfa/gf2/bit_matrix.hpp"

#include <algorithm>
#include <bit>

namespace dfa::gf2 {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * ((cols + 63) / 64), 0) {}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(row(a), row(a) + stride_, row(b));
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src, std::size_t first_word) {
  std::uint64_t* d = row(dst);
  const std::uint64_t* s = row(src);
  for (std::size_t w = first_word; w < stride_; ++w) d[w] ^= s[w];
}

std::vector<std::size_t> BitMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    const std::size_t w = c >> 6;
    const std::uint64_t mask = std::uint64_t{1} << (c & 63);
    std::size_t p = rank;
    while (p < rows_ && !(row(p)[w] & mask)) ++p;
    if (p == rows_) continue;
    swap_rows(rank, p);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != rank && (row(r)[w] & mask)) xor_row(r, rank, w);
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

std::size_t BitMatrix::leading_column(std::size_t r) const {
  const std::uint64_t* d = row(r);
  for (std::size_t w = 0; w < stride_; ++w) {
    if (d[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(d[w]));
  }
  return cols_;
}

}  // namespace dfa::gf2
