// Copyright 2026 The avoidlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "avoidlab/errors.hpp"

namespace avoidlab {

/*! \brief A finite string over {0,1}.
 *
 * Position 0 is the first character of the textual form (x1 or y1).
 */
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw DomainError("bit value out of range");
    }
  }

  static BitString parse(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '0') {
        out.bits_[i] = 0;
      } else if (text[i] == '1') {
        out.bits_[i] = 1;
      } else {
        throw DomainError("not a bit string: '" + std::string(text) + "'");
      }
    }
    return out;
  }

  /// Bit j of `index` becomes position j (LSB first), the input encoding.
  static BitString from_index_lsb(std::uint64_t index, std::size_t length) {
    BitString out(length);
    for (std::size_t j = 0; j < length && j < 64; ++j) out.bits_[j] = (index >> j) & 1u;
    return out;
  }

  /// Lexicographic rank: position 0 is the most significant bit.
  static BitString from_lex_rank(std::uint64_t rank, std::size_t length) {
    BitString out(length);
    for (std::size_t j = 0; j < length && j < 64; ++j) out.bits_[length - 1 - j] = (rank >> j) & 1u;
    return out;
  }

  std::uint64_t to_index_lsb() const {
    if (bits_.size() > 64) throw CapacityError("bit string longer than 64 bits cannot be packed");
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < bits_.size(); ++j) v |= std::uint64_t{bits_[j]} << j;
    return v;
  }

  std::uint64_t to_lex_rank() const {
    if (bits_.size() > 64) throw CapacityError("bit string longer than 64 bits cannot be packed");
    std::uint64_t v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  const std::vector<std::uint8_t> &bits() const { return bits_; }

  BitString slice(std::size_t offset, std::size_t length) const {
    if (offset + length > bits_.size()) throw DomainError("slice out of range");
    return BitString(std::vector<std::uint8_t>(bits_.begin() + offset, bits_.begin() + offset + length));
  }

  void append(const BitString &other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

  std::string str() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = bits_[i] ? '1' : '0';
    return s;
  }

  friend bool operator==(const BitString &, const BitString &) = default;
  friend auto operator<=>(const BitString &, const BitString &) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/*! \brief Truth table of an n-variate Boolean function.
 *
 * Bit i holds f(x) where x_j = bit (j-1) of i, so x1 is the least
 * significant variable. Tables for n <= 6 also pack into a single word.
 */
class TruthTable {
 public:
  TruthTable() = default;
  TruthTable(unsigned n, BitString bits) : n_(n), bits_(std::move(bits)) {
    if (n > 24) throw CapacityError("truth tables limited to 24 variables");
    if (bits_.size() != (std::size_t{1} << n)) {
      throw DomainError("truth table for " + std::to_string(n) + " variables needs " +
                        std::to_string(std::size_t{1} << n) + " bits, got " + std::to_string(bits_.size()));
    }
  }

  /// Infers n from the length, which must be a power of two.
  static TruthTable parse(std::string_view text) {
    auto bits = BitString::parse(text);
    unsigned n = 0;
    while ((std::size_t{1} << n) < bits.size()) ++n;
    if (bits.empty() || (std::size_t{1} << n) != bits.size()) {
      throw DomainError("truth table length must be a power of two: '" + std::string(text) + "'");
    }
    return TruthTable(n, std::move(bits));
  }

  static TruthTable from_word(unsigned n, std::uint64_t word) {
    if (n > 6) throw DomainError("packed truth tables hold at most 6 variables");
    return TruthTable(n, BitString::from_index_lsb(word, std::size_t{1} << n));
  }

  unsigned num_vars() const { return n_; }
  const BitString &bits() const { return bits_; }
  bool at(std::uint64_t index) const { return bits_[index] != 0; }

  std::uint64_t to_word() const {
    if (n_ > 6) throw DomainError("packed truth tables hold at most 6 variables");
    return bits_.to_index_lsb();
  }

  std::string str() const { return bits_.str(); }

  friend bool operator==(const TruthTable &, const TruthTable &) = default;

 private:
  unsigned n_ = 0;
  BitString bits_;
};

}  // namespace avoidlab
