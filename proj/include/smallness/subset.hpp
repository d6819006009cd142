#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace smallness {

// Subsets of a ground set [n], n <= 64, as bitmasks. Element i <-> bit i.
// "Lexicographically first" subset always means smallest as an integer mask.
using Mask = std::uint64_t;

inline constexpr int kMaxGroundSet = 64;
inline constexpr int kExactEnumCap = 24;       // 2^n sweeps
inline constexpr int kCoverageEnumCap = 20;    // exhaustive coverage checks

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask full_mask(int n) {
  if (n < 0 || n > kMaxGroundSet) throw std::invalid_argument("ground set size out of range");
  return n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

inline bool test_bit(Mask m, int i) { return (m >> i) & 1; }

inline std::vector<int> mask_to_indices(Mask m) {
  std::vector<int> out;
  while (m) {
    int i = std::countr_zero(m);
    out.push_back(i);
    m &= m - 1;
  }
  return out;
}

inline Mask indices_to_mask(const std::vector<int>& idx, int n) {
  Mask m = 0;
  for (int i : idx) {
    if (i < 0 || i >= n) throw std::out_of_range("vertex index out of range");
    m |= Mask{1} << i;
  }
  return m;
}

// Keeps the k lowest-index elements of m. Requires popcount(m) >= k.
inline Mask lowest_k_bits(Mask m, int k) {
  Mask out = 0;
  for (int i = 0; i < k; ++i) {
    Mask low = m & (~m + 1);
    out |= low;
    m ^= low;
  }
  return out;
}

}  // namespace smallness
