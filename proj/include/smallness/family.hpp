#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "smallness/rational.hpp"
#include "smallness/subset.hpp"

namespace smallness {

// An increasing family of subsets of [n], represented by the antichain of its
// minimal members. Construction normalizes: duplicates and supersets of other
// generators are dropped, the rest sorted by mask.
class IncreasingFamily {
 public:
  static IncreasingFamily from_generators(int n, std::vector<Mask> gens) {
    if (n < 1 || n > kMaxGroundSet) throw std::invalid_argument("ground set size out of range");
    Mask full = full_mask(n);
    for (Mask g : gens)
      if ((g & ~full) != 0) throw std::invalid_argument("generator has bits outside ground set");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::vector<Mask> minimal;
    for (Mask g : gens) {
      bool dominated = false;
      for (Mask h : gens)
        if (h != g && subset_of(h, g)) { dominated = true; break; }
      if (!dominated) minimal.push_back(g);
    }
    return IncreasingFamily(n, std::move(minimal));
  }

  int n() const { return n_; }
  const std::vector<Mask>& minimal_sets() const { return minimal_; }

  // Proper: usable for thresholds (family is neither empty nor all of 2^V).
  bool proper() const {
    if (minimal_.empty()) return false;
    for (Mask g : minimal_)
      if (g == 0) return false;
    return true;
  }

  void require_proper() const {
    if (!proper()) throw std::invalid_argument("family must be proper (nonempty generators, none empty)");
  }

  bool contains(Mask u) const {
    if ((u & ~full_mask(n_)) != 0) throw std::invalid_argument("subset outside ground set");
    for (Mask g : minimal_)
      if (subset_of(g, u)) return true;
    return false;
  }

 private:
  IncreasingFamily(int n, std::vector<Mask> minimal) : n_(n), minimal_(std::move(minimal)) {}
  int n_;
  std::vector<Mask> minimal_;
};

// Number of members of each cardinality, by full enumeration. mu_p(F) depends
// on members only through these counts.
inline std::vector<Int> member_counts_by_size(const IncreasingFamily& fam) {
  int n = fam.n();
  if (n > kExactEnumCap) throw std::invalid_argument("exact enumeration capped at n <= 24");
  std::vector<Int> cnt(n + 1, 0);
  Mask full = full_mask(n);
  for (Mask u = 0;; ++u) {
    if (fam.contains(u)) cnt[popcount(u)] += 1;
    if (u == full) break;
  }
  return cnt;
}

inline Rat mu_from_counts(const std::vector<Int>& cnt, int n, const Rat& p) {
  Rat q = 1 - p, total = 0;
  for (int k = 0; k <= n; ++k) {
    if (cnt[k] == 0) continue;
    total += Rat(cnt[k]) * pow_rat(p, k) * pow_rat(q, n - k);
  }
  return total;
}

inline Rat mu_exact(const IncreasingFamily& fam, const Rat& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
  return mu_from_counts(member_counts_by_size(fam), fam.n(), p);
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  long samples = 0;
  double standard_error = 0.0;
};

// Sample mean of the membership indicator over mu_p-random subsets.
// Element draws compare a 64-bit stream value against floor(p * 2^64), so a
// given seed yields the same subsets on every platform.
inline MonteCarloEstimate mu_montecarlo(const IncreasingFamily& fam, const Rat& p,
                                        std::uint64_t seed, long samples) {
  if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  Int thr_z = rat_floor(p * pow2(64));
  bool always = p == 1;
  std::uint64_t thr = always ? ~std::uint64_t{0} : thr_z.get_ui();
  if (!always && mpz_sizeinbase(thr_z.get_mpz_t(), 2) > 64) thr = ~std::uint64_t{0};
  std::mt19937_64 rng(seed);
  int n = fam.n();
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    Mask u = 0;
    for (int i = 0; i < n; ++i) {
      std::uint64_t r = rng();
      if (always || r < thr) u |= Mask{1} << i;
    }
    if (fam.contains(u)) ++hits;
  }
  MonteCarloEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.standard_error =
      std::sqrt(std::max(out.estimate * (1.0 - out.estimate), 1e-12) / static_cast<double>(samples));
  return out;
}

struct RatInterval {
  Rat lo, hi;
};

// Bracketing interval for the p with mu_p(F) = 1/2, via bisection on the
// strictly increasing map p -> mu_p(F). Guarantees mu_lo <= 1/2 <= mu_hi.
inline RatInterval p_c(const IncreasingFamily& fam, const Rat& tol) {
  fam.require_proper();
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  auto cnt = member_counts_by_size(fam);
  int n = fam.n();
  Rat half = rat(1, 2);
  Rat lo = 0, hi = 1;
  while (hi - lo > tol) {
    Rat mid = (lo + hi) / 2;
    if (mu_from_counts(cnt, n, mid) < half)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace smallness
