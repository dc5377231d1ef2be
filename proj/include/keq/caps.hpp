#pragma once

#include <cstddef>

namespace keq {

// Explicit-enumeration workload limits. The order cap is 2^20 so the largest
// supported affine group, GF(1024) with order 1024*1023 = 1047552, still fits.
inline constexpr std::size_t kDefaultOrderCap = std::size_t{1} << 20;
inline constexpr std::size_t kMaxAlphabet = 4096;

// Exact equivocation enumerates subsets of maximal fixed sets; a fixed set
// wider than this many symbols is refused (use Monte Carlo instead).
inline constexpr unsigned kMaxSubsetBits = 24;

// Brute-force oracle limits: total words N^L and key count.
inline constexpr std::size_t kMaxBruteWords = 10'000'000;
inline constexpr std::size_t kMaxBruteKeys = 10'000;

struct Caps {
  std::size_t max_order = kDefaultOrderCap;
  std::size_t max_alphabet = kMaxAlphabet;
};

}  // namespace keq
