#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "scpsim/errors.hpp"

namespace scpsim {

// Bit strings are packed into integers with the first bit (x_1 in formulas,
// qubit 0 in circuits) as the most significant bit. All modules share this
// convention.

inline int bit_of(std::uint64_t x, int j, int width) {
  return static_cast<int>((x >> (width - 1 - j)) & 1u);
}

inline std::uint64_t set_bit(std::uint64_t x, int j, int width) {
  return x | (std::uint64_t{1} << (width - 1 - j));
}

// Inner product modulo 2 of two packed strings.
inline int dot_mod2(std::uint64_t s, std::uint64_t x) {
  return std::popcount(s & x) & 1;
}

inline int parity_sign(std::uint64_t s, std::uint64_t x) {
  return dot_mod2(s, x) ? -1 : 1;
}

inline int hamming_weight(std::uint64_t s) { return std::popcount(s); }

inline std::string to_bit_string(std::uint64_t x, int width) {
  std::string out(static_cast<std::size_t>(width), '0');
  for (int j = 0; j < width; ++j) {
    if (bit_of(x, j, width)) out[static_cast<std::size_t>(j)] = '1';
  }
  return out;
}

inline std::uint64_t parse_bit_string(const std::string& text) {
  if (text.empty() || text.size() > 63) {
    throw validation_error("bit string must have between 1 and 63 characters");
  }
  std::uint64_t x = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw validation_error("bit string contains a character other than 0/1: '" + text + "'");
    }
    x = (x << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return x;
}

}  // namespace scpsim
