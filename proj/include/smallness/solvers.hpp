#pragma once

// Exact expectation threshold q via min-cost cover search (branch and bound),
// fractional expectation threshold q_f via exact-rational LP, and bisection
// for both. Certificates are re-verified with zero slack before they are
// returned.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smallness/family.hpp"
#include "smallness/lp.hpp"
#include "smallness/rational.hpp"
#include "smallness/subset.hpp"

namespace smallness {

inline constexpr long kCandidateCap = 1L << 16;

struct FractionalCertificate {
  Rat p;
  std::vector<std::pair<Mask, Rat>> lambda;  // support only, sorted by mask
  Rat objective;
};

struct IntegralCertificate {
  Rat p;
  std::vector<Mask> cover;  // sorted by mask
  Rat cost;
};

// Candidate supports: nonempty subsets of minimal sets. Mass anywhere else is
// wasted because the weak-cover constraints bind only at minimal members.
inline std::vector<Mask> cover_candidates(const IncreasingFamily& fam) {
  fam.require_proper();
  std::vector<Mask> cands;
  for (Mask g : fam.minimal_sets()) {
    for (Mask s = g; s; s = (s - 1) & g) cands.push_back(s);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  if (static_cast<long>(cands.size()) > kCandidateCap)
    throw std::invalid_argument(
        "candidate count exceeds cap; restrict the family's minimal sets");
  return cands;
}

inline void verify_fractional(const IncreasingFamily& fam, const FractionalCertificate& cert) {
  Rat obj = 0;
  for (auto& [s, l] : cert.lambda) {
    if (l < 0) throw std::logic_error("negative lambda entry");
    obj += l * pow_rat(cert.p, popcount(s));
  }
  if (obj != cert.objective) throw std::logic_error("fractional certificate objective mismatch");
  for (Mask g : fam.minimal_sets()) {
    Rat sum = 0;
    for (auto& [s, l] : cert.lambda)
      if (subset_of(s, g)) sum += l;
    if (sum < 1) throw std::logic_error("weak-cover constraint violated");
  }
}

inline void verify_integral(const IncreasingFamily& fam, const IntegralCertificate& cert) {
  Rat cost = 0;
  for (Mask s : cert.cover) cost += pow_rat(cert.p, popcount(s));
  if (cost != cert.cost) throw std::logic_error("integral certificate cost mismatch");
  for (Mask g : fam.minimal_sets()) {
    bool hit = false;
    for (Mask s : cert.cover)
      if (subset_of(s, g)) { hit = true; break; }
    if (!hit) throw std::logic_error("cover misses a minimal member");
  }
}

// LP: minimize sum lambda_S p^|S| subject to sum_{S subseteq F0} lambda_S >= 1
// for every minimal F0, lambda >= 0.
inline std::pair<Rat, FractionalCertificate> min_fractional_cost(const IncreasingFamily& fam,
                                                                 const Rat& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
  auto cands = cover_candidates(fam);
  const auto& mins = fam.minimal_sets();
  std::vector<std::vector<Rat>> A(mins.size(), std::vector<Rat>(cands.size(), Rat(0)));
  std::vector<Rat> b(mins.size(), Rat(1)), c(cands.size());
  for (size_t j = 0; j < cands.size(); ++j) {
    c[j] = pow_rat(p, popcount(cands[j]));
    for (size_t i = 0; i < mins.size(); ++i)
      if (subset_of(cands[j], mins[i])) A[i][j] = 1;
  }
  SimplexResult res = simplex_min_ge(A, b, c);
  if (!res.feasible) throw std::logic_error("weak-cover LP infeasible");
  FractionalCertificate cert;
  cert.p = p;
  cert.objective = res.value;
  for (size_t j = 0; j < cands.size(); ++j)
    if (res.x[j] != 0) cert.lambda.emplace_back(cands[j], res.x[j]);
  verify_fractional(fam, cert);
  return {res.value, cert};
}

namespace detail {

struct CoverSearch {
  const std::vector<Mask>* mins;
  std::vector<Mask> cands;          // sorted by cost/coverage ratio, ties by mask
  std::vector<Rat> cand_cost;
  std::vector<std::vector<int>> hitters;  // per minimal set: candidate positions
  std::vector<Rat> cheapest_hit;          // per minimal set
  Rat best_cost;
  std::vector<Mask> best_cover;
  Rat lp_bound;

  void dfs(std::vector<bool>& hit, int hit_count, Rat cost, std::vector<Mask>& chosen) {
    if (hit_count == static_cast<int>(mins->size())) {
      if (cost < best_cost) {
        best_cost = cost;
        best_cover = chosen;
      }
      return;
    }
    if (best_cost <= lp_bound) return;  // already provably optimal
    // Admissible bound: every unhit constraint needs at least its cheapest hitter.
    Rat lb = 0;
    int branch = -1;
    size_t branch_width = 0;
    for (size_t i = 0; i < mins->size(); ++i) {
      if (hit[i]) continue;
      lb = std::max(lb, cheapest_hit[i]);
      if (branch < 0 || hitters[i].size() < branch_width) {
        branch = static_cast<int>(i);
        branch_width = hitters[i].size();
      }
    }
    if (cost + lb >= best_cost) return;
    for (int pos : hitters[branch]) {
      Mask s = cands[pos];
      std::vector<bool> hit2 = hit;
      int hc2 = hit_count;
      for (size_t i = 0; i < mins->size(); ++i)
        if (!hit2[i] && subset_of(s, (*mins)[i])) { hit2[i] = true; ++hc2; }
      chosen.push_back(s);
      dfs(hit2, hc2, cost + cand_cost[pos], chosen);
      chosen.pop_back();
      if (best_cost <= lp_bound) return;
    }
  }
};

}  // namespace detail

// Minimum of sum p^|S| over covers hitting every minimal set, by branch and
// bound with the LP optimum as the global admissible floor.
inline std::pair<Rat, IntegralCertificate> min_integral_cost(const IncreasingFamily& fam,
                                                             const Rat& p) {
  auto [lp_value, lp_cert] = min_fractional_cost(fam, p);
  auto cands = cover_candidates(fam);
  const auto& mins = fam.minimal_sets();

  detail::CoverSearch cs;
  cs.mins = &mins;
  cs.lp_bound = lp_value;
  std::vector<std::pair<Rat, Mask>> keyed;
  for (Mask s : cands) {
    long coverage = 0;
    for (Mask g : mins)
      if (subset_of(s, g)) ++coverage;
    Rat cost = pow_rat(p, popcount(s));
    keyed.emplace_back(cost / coverage, s);
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [ratio, s] : keyed) {
    cs.cands.push_back(s);
    cs.cand_cost.push_back(pow_rat(p, popcount(s)));
  }
  cs.hitters.resize(mins.size());
  cs.cheapest_hit.assign(mins.size(), Rat(0));
  for (size_t i = 0; i < mins.size(); ++i) {
    bool first = true;
    for (size_t pos = 0; pos < cs.cands.size(); ++pos) {
      if (!subset_of(cs.cands[pos], mins[i])) continue;
      cs.hitters[i].push_back(static_cast<int>(pos));
      if (first || cs.cand_cost[pos] < cs.cheapest_hit[i]) cs.cheapest_hit[i] = cs.cand_cost[pos];
      first = false;
    }
  }
  // The minimal sets themselves form a feasible cover: an initial incumbent.
  cs.best_cover.assign(mins.begin(), mins.end());
  cs.best_cost = 0;
  for (Mask g : mins) cs.best_cost += pow_rat(p, popcount(g));
  std::vector<bool> hit(mins.size(), false);
  std::vector<Mask> chosen;
  cs.dfs(hit, 0, Rat(0), chosen);

  IntegralCertificate cert;
  cert.p = p;
  cert.cover = cs.best_cover;
  std::sort(cert.cover.begin(), cert.cover.end());
  cert.cover.erase(std::unique(cert.cover.begin(), cert.cover.end()), cert.cover.end());
  cert.cost = 0;
  for (Mask s : cert.cover) cert.cost += pow_rat(p, popcount(s));
  verify_integral(fam, cert);
  if (cert.cost < lp_value) throw std::logic_error("integral cost below LP optimum");
  return {cert.cost, cert};
}

template <typename Cert>
struct ThresholdResult {
  RatInterval interval;
  std::optional<Cert> certificate;  // at the feasible endpoint (interval.lo)
};

// Bisection of a monotone smallness predicate on [0, 1]. The predicate holds
// at lo and fails at hi throughout.
template <typename Eval, typename Cert>
ThresholdResult<Cert> bisect_threshold(Eval&& eval, const Rat& tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  Rat half = rat(1, 2);
  Rat lo = 0, hi = 1;
  ThresholdResult<Cert> out;
  {
    auto [v0, c0] = eval(Rat(0));
    if (v0 > half) throw std::logic_error("family not small at p = 0");
    out.certificate = c0;
    auto [v1, c1] = eval(Rat(1));
    if (v1 <= half) throw std::logic_error("family small at p = 1; improper input");
  }
  while (hi - lo > tol) {
    Rat mid = (lo + hi) / 2;
    auto [v, c] = eval(mid);
    if (v <= half) {
      lo = mid;
      out.certificate = c;
    } else {
      hi = mid;
    }
  }
  out.interval = {lo, hi};
  return out;
}

inline ThresholdResult<FractionalCertificate> q_f(const IncreasingFamily& fam, const Rat& tol) {
  fam.require_proper();
  auto eval = [&](const Rat& p) { return min_fractional_cost(fam, p); };
  return bisect_threshold<decltype(eval)&, FractionalCertificate>(eval, tol);
}

inline ThresholdResult<IntegralCertificate> q_threshold(const IncreasingFamily& fam, const Rat& tol) {
  fam.require_proper();
  auto eval = [&](const Rat& p) { return min_integral_cost(fam, p); };
  return bisect_threshold<decltype(eval)&, IntegralCertificate>(eval, tol);
}

}  // namespace smallness
