#pragma once

// The singleton-weight cover: sort vertices by weight, take all k-subsets of
// the first a*k of them with a = ceil(1/(Jp)), and certify the cost against
// the closed bound 2e/(J - 2e).

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "smallness/cover.hpp"
#include "smallness/rational.hpp"
#include "smallness/subset.hpp"

namespace smallness {

struct SingletonInstance {
  std::vector<Rat> zeta;  // vertex weights, nonnegative, not all zero
  Rat p;
  Rat J;  // must exceed 2e (guarded with a rational upper bound on 2e)
};

struct SingletonCover {
  bool empty_target = false;  // Jp > 1: no U satisfies zeta(U) >= J zeta(V) p
  std::vector<int> order;     // vertices by non-increasing zeta, ties by index
  long a = 0;
  Cover cover;  // single PrefixBinomial part (or no parts when empty_target)
  CostReport cost;
  Rat closed_bound;  // 2e/(J - 2e), e upper-rounded: the weaker direction the
                    // cost comparison is allowed to use
};

inline bool in_singleton_target(const SingletonInstance& inst, Mask u) {
  Rat total = 0, part = 0;
  for (size_t v = 0; v < inst.zeta.size(); ++v) {
    total += inst.zeta[v];
    if (test_bit(u, static_cast<int>(v))) part += inst.zeta[v];
  }
  return part >= inst.J * total * inst.p;
}

inline SingletonCover build_singleton_cover(const SingletonInstance& inst) {
  int n = static_cast<int>(inst.zeta.size());
  if (n < 1 || n > kMaxGroundSet) throw std::invalid_argument("vertex count out of range");
  if (inst.p <= 0 || inst.p > 1) throw std::invalid_argument("p must be in (0,1]");
  if (inst.J <= two_e_upper()) throw std::invalid_argument("J must exceed 2e");
  Rat total = 0;
  for (const Rat& z : inst.zeta) {
    if (z < 0) throw std::invalid_argument("negative zeta weight");
    total += z;
  }
  if (total == 0) throw std::invalid_argument("zeta is identically zero");

  SingletonCover out;
  out.closed_bound = 2 * e_upper() / (inst.J - 2 * e_upper());
  if (inst.J * inst.p > 1) {
    out.empty_target = true;
    out.cost.exact = 0;
    out.cost.upper_bound = 0;
    out.cost.method = CostMethod::ClosedForm;
    return out;
  }
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a_, int b_) {
    return inst.zeta[a_] > inst.zeta[b_];
  });
  Int a_big = rat_ceil(1 / (inst.J * inst.p));
  // a >= n makes every prefix all of [n]; clamping keeps it in machine range.
  out.a = a_big > n ? n : a_big.get_si();
  PrefixBinomial pb{out.order, out.a, n};
  out.cover.parts.push_back(pb);
  out.cost = cost(out.cover.parts.back(), inst.p);
  return out;
}

// Smallest k with |u cap first min(a k, n) vertices| >= k, as in the
// prefix-binomial witness. Exists for every u in the target family.
inline std::optional<long> singleton_witness(const std::vector<int>& order, long a, Mask u) {
  int n = static_cast<int>(order.size());
  Mask seen = 0;
  int pos = 0;
  for (int k = 1; k <= n; ++k) {
    long prefix = a >= n || a * k >= n ? n : a * k;
    while (pos < prefix) seen |= Mask{1} << order[pos++];
    if (popcount(seen & u) >= k) return k;
  }
  return std::nullopt;
}

}  // namespace smallness
