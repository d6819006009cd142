#pragma once

// Covers of increasing families: explicit subset lists, the prefix-binomial
// construction, and star-forest families, each with an exact-or-bounded cost
// and a member-inside-u witness procedure.

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "smallness/graph.hpp"
#include "smallness/parallel.hpp"
#include "smallness/rational.hpp"
#include "smallness/star_forest.hpp"
#include "smallness/subset.hpp"

namespace smallness {

struct ExplicitList {
  std::vector<Mask> sets;  // no duplicates
};

// Union over k >= 1 of the k-subsets of the first min(a k, n) vertices in
// `order`. For a k > n the prefix saturates at all of [n].
struct PrefixBinomial {
  std::vector<int> order;  // permutation of [n]
  long a = 1;
  int kmax = 0;  // members stop at k = kmax (no larger k contributes)
};

// gamma(b, L) over the referenced graph, with the (J, p) that fix L^v.
struct StarForestFamily {
  std::shared_ptr<const WeightedGraph> graph;
  long b = 1;
  long L = 1;
  Rat J;
  Rat p;
};

using CoverPart = std::variant<ExplicitList, PrefixBinomial, StarForestFamily>;

struct Cover {
  std::vector<CoverPart> parts;
};

enum class CostMethod { Enumeration, ClosedForm, SymmetricDP };

struct CostReport {
  std::optional<Rat> exact;
  Rat upper_bound;
  CostMethod method = CostMethod::Enumeration;
};

namespace detail {

inline void check_explicit(const ExplicitList& el) {
  auto sets = el.sets;
  std::sort(sets.begin(), sets.end());
  if (std::adjacent_find(sets.begin(), sets.end()) != sets.end())
    throw std::invalid_argument("explicit cover part has duplicate subsets");
}

}  // namespace detail

inline Rat prefix_binomial_cost(const PrefixBinomial& pb, const Rat& p) {
  int n = static_cast<int>(pb.order.size());
  Rat total = 0;
  for (int k = 1; k <= pb.kmax && k <= n; ++k) {
    long prefix = pb.a >= n || pb.a * k >= n ? n : pb.a * k;
    total += Rat(binom(prefix, k)) * pow_rat(p, k);
  }
  return total;
}

inline CostReport cost(const CoverPart& part, const Rat& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
  CostReport rep;
  if (auto* el = std::get_if<ExplicitList>(&part)) {
    detail::check_explicit(*el);
    Rat total = 0;
    for (Mask s : el->sets) total += pow_rat(p, popcount(s));
    rep.exact = total;
    rep.upper_bound = total;
    rep.method = CostMethod::Enumeration;
  } else if (auto* pb = std::get_if<PrefixBinomial>(&part)) {
    Rat total = prefix_binomial_cost(*pb, p);
    rep.exact = total;
    rep.upper_bound = total;
    rep.method = CostMethod::ClosedForm;
  } else {
    const auto& sf = std::get<StarForestFamily>(part);
    const WeightedGraph& g = *sf.graph;
    std::vector<Rat> qs;
    const Rat& eu = e_upper();
    for (int v = 0; v < g.n(); ++v) {
      long dv = g.degree(v);
      if (dv == 0) { qs.push_back(0); continue; }
      long lv = special_leaf_count(g, v, sf.L, sf.J, sf.p);
      qs.push_back(sf.p * pow_rat(eu * dv * sf.p / lv, lv));
    }
    rep.upper_bound = elementary_symmetric(qs, sf.b);
    rep.method = CostMethod::SymmetricDP;
    if (g.n() <= 12) {
      rep.exact = enumerate_gamma_cost(g, sf.b, sf.L, sf.J, sf.p, p);
      rep.method = CostMethod::Enumeration;
      if (*rep.exact > rep.upper_bound) throw std::logic_error("exact gamma cost exceeds DP bound");
    }
  }
  return rep;
}

// A member of the part contained in u, or nullopt.
inline std::optional<Mask> find_member_inside(const CoverPart& part, Mask u) {
  if (auto* el = std::get_if<ExplicitList>(&part)) {
    for (Mask s : el->sets)
      if (subset_of(s, u)) return s;
    return std::nullopt;
  }
  if (auto* pb = std::get_if<PrefixBinomial>(&part)) {
    int n = static_cast<int>(pb->order.size());
    Mask seen = 0;  // vertices among the first a*k in order, as a mask
    int pos = 0;
    for (int k = 1; k <= pb->kmax && k <= n; ++k) {
      long prefix = pb->a >= n || pb->a * k >= n ? n : pb->a * k;
      while (pos < prefix) seen |= Mask{1} << pb->order[pos++];
      Mask inside = seen & u;
      if (popcount(inside) >= k) return lowest_k_bits(inside, k);
    }
    return std::nullopt;
  }
  const auto& sf = std::get<StarForestFamily>(part);
  auto forest = find_gamma_member_inside(*sf.graph, sf.b, sf.L, sf.J, sf.p, u);
  if (!forest) return std::nullopt;
  return forest->vertices();
}

struct CoverageResult {
  bool covered = true;
  Mask counterexample = 0;  // lexicographically (numerically) first failing u
};

// Exhaustive coverage check: every u with target(u) must contain a member of
// some part. The sweep may be split across workers; the reported
// counterexample is the global minimum either way.
template <typename TargetPred>
CoverageResult verify_coverage(const Cover& cov, TargetPred&& target, int n, int workers = 0) {
  if (n > kCoverageEnumCap) throw std::invalid_argument("exhaustive coverage capped at n <= 20");
  Mask full = full_mask(n);
  auto fails = [&](Mask u) {
    if (!target(u)) return false;
    for (const auto& part : cov.parts)
      if (find_member_inside(part, u)) return false;
    return true;
  };
  std::optional<Mask> bad = first_mask_where(full, fails, workers);
  if (!bad) return {};
  return {false, *bad};
}

// Total upper-bound cost at most 1/2 (exact costs used when available).
inline bool smallness_check(const Cover& cov, const Rat& p) {
  Rat total = 0;
  for (const auto& part : cov.parts) {
    CostReport r = cost(part, p);
    total += r.exact ? *r.exact : r.upper_bound;
  }
  return total <= rat(1, 2);
}

}  // namespace smallness
