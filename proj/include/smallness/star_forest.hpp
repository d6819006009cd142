#pragma once

// The unweighted cover engine: good stars, L-special stars, the greedy star
// decomposition, witness extraction into some gamma(b_i, L_i), and the exact /
// analytic cost chain for those families.

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <vector>

#include "smallness/graph.hpp"
#include "smallness/rational.hpp"
#include "smallness/subset.hpp"

namespace smallness {

struct Star {
  int center;
  Mask leaves;
};

struct StarForest {
  std::vector<Star> stars;
  Mask vertices() const {
    Mask m = 0;
    for (auto& s : stars) m |= (Mask{1} << s.center) | s.leaves;
    return m;
  }
};

// L^v = max{L, ceil(J d_v p / 4)}; degrees always in the full graph.
inline long special_leaf_count(const WeightedGraph& g, int v, long L, const Rat& J, const Rat& p) {
  Rat t = J * g.degree(v) * p / 4;
  return std::max(L, rat_ceil(t).get_si());
}

// A star (v, S) is good when |S| >= J d_v p / 4.
inline bool star_is_good(const WeightedGraph& g, int v, long leaf_count, const Rat& J, const Rat& p) {
  return Rat(leaf_count) * 4 >= J * g.degree(v) * p;
}

// Target family membership: |G[u]| > max{T, J |D(u)| p}. 2|D(u)| is the sum of
// full-graph degrees over u, so both comparisons stay rational.
inline bool in_unweighted_target(const WeightedGraph& g, Mask u, const Rat& T, const Rat& J,
                                 const Rat& p) {
  long m = g.induced_edge_count(u);
  if (Rat(m) <= T) return false;
  return Rat(2 * m) > J * Rat(g.boundary_degree_sum(u)) * p;
}

// Largest 2^{2k+3} <= T with k >= 1, or nullopt when T < 32 (a plain edge
// cover handles that range).
struct ReducedTarget {
  int k;
  long T0;
};

inline std::optional<ReducedTarget> reduce_T(const Rat& T) {
  if (T <= 0) throw std::invalid_argument("target T must be positive");
  if (T < 32) return std::nullopt;
  int k = 1;
  while (2 * (k + 1) + 3 < 62 && Rat(Int(1) << (2 * (k + 1) + 3)) <= T) ++k;
  return ReducedTarget{k, 1L << (2 * k + 3)};
}

struct Schedule {
  struct Row {
    long L;     // L_i = 2^{i-1}
    Rat delta;  // delta_i = max{2^-(i+2), 2^{i-k-3}}
    long b;     // b_i = delta_i 4^-i T0
  };
  int k = 0;
  long T0 = 0;
  std::vector<Row> rows;  // rows[i-1] holds index i
};

inline Schedule build_schedule(int k) {
  if (k < 1 || k > 28) throw std::invalid_argument("schedule index k out of range");
  Schedule s;
  s.k = k;
  s.T0 = 1L << (2 * k + 3);
  Rat delta_sum = 0;
  for (int i = 1; i <= k; ++i) {
    Schedule::Row row;
    row.L = 1L << (i - 1);
    row.delta = std::max(pow2(-(i + 2)), pow2(i - k - 3));
    Rat b_exact = row.delta * pow2(-2 * i) * s.T0;
    if (b_exact.get_den() != 1) throw std::logic_error("b_i not integral");
    row.b = b_exact.get_num().get_si();
    long b_closed = std::max(
        2 * k + 1 - 3 * i >= 0 ? 1L << (2 * k + 1 - 3 * i) : 0L, 1L << (k - i));
    if (row.b != b_closed) throw std::logic_error("b_i closed form mismatch");
    if (row.delta * 8 * row.L < 1) throw std::logic_error("delta_i < 1/(8 L_i)");
    if (pow2(row.L + 4) * row.delta < row.L) throw std::logic_error("2^{L+4} delta < L");
    delta_sum += row.delta;
    s.rows.push_back(row);
  }
  if (delta_sum > rat(1, 2)) throw std::logic_error("sum of delta_i exceeds 1/2");
  if (s.rows.back().b != 1) throw std::logic_error("b_k != 1");
  return s;
}

struct GreedyStar {
  int center;
  Mask leaves;
  long d;  // |leaves| at extraction time
};

struct GreedyResult {
  std::vector<GreedyStar> stars;
  Mask residual;
};

// Repeatedly removes a largest good star (ties: smallest center index) until
// none with at least one leaf remains. Leaf sets are the full current
// neighborhood of the chosen center.
inline GreedyResult greedy_decompose(const WeightedGraph& g, const Rat& J, const Rat& p, Mask u) {
  GreedyResult out;
  Mask cur = u;
  long prev_d = -1;
  for (;;) {
    int best_v = -1;
    long best_d = 0;
    Mask m = cur;
    while (m) {
      int v = std::countr_zero(m);
      m &= m - 1;
      long d = popcount(g.adjacency(v) & cur & ~(Mask{1} << v));
      if (d >= 1 && d > best_d && star_is_good(g, v, d, J, p)) {
        best_d = d;
        best_v = v;
      }
    }
    if (best_v < 0) break;
    Mask leaves = g.adjacency(best_v) & cur & ~(Mask{1} << best_v);
    if (prev_d >= 0 && best_d > prev_d) throw std::logic_error("greedy star sizes not non-increasing");
    prev_d = best_d;
    out.stars.push_back({best_v, leaves, best_d});
    cur &= ~(leaves | (Mask{1} << best_v));
  }
  out.residual = cur;
  return out;
}

struct WitnessResult {
  bool found = false;
  int cls = 0;  // the i whose gamma(b_i, L_i) the witness belongs to
  StarForest forest;
  std::vector<long> bucket_sizes;  // |B_1| .. |B_k|
  GreedyResult greedy;
};

inline void validate_star_forest(const WeightedGraph& g, const StarForest& f, long b, long L,
                                 const Rat& J, const Rat& p, Mask inside) {
  if (static_cast<long>(f.stars.size()) != b) throw std::logic_error("witness star count mismatch");
  Mask used = 0;
  for (auto& s : f.stars) {
    Mask sm = (Mask{1} << s.center) | s.leaves;
    if (!subset_of(sm, inside)) throw std::logic_error("witness leaves target set");
    if (used & sm) throw std::logic_error("witness stars not vertex-disjoint");
    used |= sm;
    if (!subset_of(s.leaves, g.adjacency(s.center))) throw std::logic_error("witness leaf not a neighbor");
    if (popcount(s.leaves) != special_leaf_count(g, s.center, L, J, p))
      throw std::logic_error("witness star not L-special");
  }
}

// Runs the greedy decomposition, buckets the extracted stars by size, and
// returns b_i trimmed L_i-special stars from the first bucket that fills.
inline WitnessResult find_witness(const WeightedGraph& g, const Rat& J, const Rat& p,
                                  const Schedule& sched, Mask u) {
  WitnessResult out;
  out.greedy = greedy_decompose(g, J, p, u);
  int k = sched.k;
  std::vector<std::vector<int>> buckets(k + 1);
  for (int j = 0; j < static_cast<int>(out.greedy.stars.size()); ++j) {
    long d = out.greedy.stars[j].d;
    if (d >= (1L << (k - 1))) {
      buckets[k].push_back(j);
    } else {
      int i = std::bit_width(static_cast<unsigned long>(d));  // 2^{i-1} <= d < 2^i
      buckets[i].push_back(j);
    }
  }
  out.bucket_sizes.resize(k);
  for (int i = 1; i <= k; ++i) out.bucket_sizes[i - 1] = static_cast<long>(buckets[i].size());
  for (int i = 1; i <= k; ++i) {
    const auto& row = sched.rows[i - 1];
    if (static_cast<long>(buckets[i].size()) < row.b) continue;
    out.found = true;
    out.cls = i;
    for (long t = 0; t < row.b; ++t) {
      const auto& gs = out.greedy.stars[buckets[i][t]];
      long lv = special_leaf_count(g, gs.center, row.L, J, p);
      if (gs.d < lv) throw std::logic_error("cannot trim star to L-special size");
      out.forest.stars.push_back({gs.center, lowest_k_bits(gs.leaves, static_cast<int>(lv))});
    }
    validate_star_forest(g, out.forest, row.b, row.L, J, p, u);
    return out;
  }
  return out;
}

namespace detail {

// Backtracking: assign every vertex of `rest` as a leaf of an adjacent center
// with remaining capacity. Capacities must be consumed exactly.
inline bool assign_leaves(const WeightedGraph& g, Mask rest, std::vector<int>& centers,
                          std::vector<long>& capacity, std::vector<Mask>& chosen) {
  if (rest == 0) {
    for (long c : capacity)
      if (c != 0) return false;
    return true;
  }
  int leaf = std::countr_zero(rest);
  Mask rest2 = rest & (rest - 1);
  for (size_t ci = 0; ci < centers.size(); ++ci) {
    if (capacity[ci] == 0) continue;
    if (!test_bit(g.adjacency(centers[ci]), leaf)) continue;
    --capacity[ci];
    chosen[ci] |= Mask{1} << leaf;
    if (assign_leaves(g, rest2, centers, capacity, chosen)) return true;
    ++capacity[ci];
    chosen[ci] &= ~(Mask{1} << leaf);
  }
  return false;
}

inline bool pick_centers(const WeightedGraph& g, Mask w, long b, long L, const Rat& J, const Rat& p,
                         std::vector<int>& centers, int from, long remaining_leaf_budget,
                         StarForest* witness) {
  if (static_cast<long>(centers.size()) == b) {
    Mask rest = w;
    for (int c : centers) rest &= ~(Mask{1} << c);
    std::vector<long> capacity;
    long total = 0;
    for (int c : centers) {
      long lv = special_leaf_count(g, c, L, J, p);
      capacity.push_back(lv);
      total += lv;
    }
    if (total != popcount(rest)) return false;
    std::vector<Mask> chosen(centers.size(), 0);
    if (!assign_leaves(g, rest, centers, capacity, chosen)) return false;
    if (witness) {
      witness->stars.clear();
      for (size_t i = 0; i < centers.size(); ++i) witness->stars.push_back({centers[i], chosen[i]});
    }
    return true;
  }
  for (int v = from; v < g.n(); ++v) {
    if (!test_bit(w, v)) continue;
    centers.push_back(v);
    if (pick_centers(g, w, b, L, J, p, centers, v + 1, remaining_leaf_budget, witness)) return true;
    centers.pop_back();
  }
  return false;
}

}  // namespace detail

// Exact membership of W in gamma(b, L): W partitions into b vertex-disjoint
// L-special stars. Decided by backtracking over center choices and leaf
// assignments; intended for small ground sets.
inline bool is_gamma_member(const WeightedGraph& g, long b, long L, const Rat& J, const Rat& p,
                            Mask w, StarForest* witness = nullptr) {
  std::vector<int> centers;
  return detail::pick_centers(g, w, b, L, J, p, centers, 0, 0, witness);
}

// Complete search for a member of gamma(b, L) inside u (member need not use
// all of u). Returns the member found, if any.
inline std::optional<StarForest> find_gamma_member_inside(const WeightedGraph& g, long b, long L,
                                                          const Rat& J, const Rat& p, Mask u) {
  struct Rec {
    const WeightedGraph& g;
    long b, L;
    const Rat &J, &p;
    bool run(Mask avail, int from, std::vector<Star>& acc) {
      if (static_cast<long>(acc.size()) == b) return true;
      for (int v = from; v < g.n(); ++v) {
        if (!test_bit(avail, v)) continue;
        long lv = special_leaf_count(g, v, L, J, p);
        Mask cand = g.adjacency(v) & avail & ~(Mask{1} << v);
        if (popcount(cand) < lv) continue;
        // iterate over lv-subsets of cand
        std::vector<int> cidx = mask_to_indices(cand);
        std::vector<int> pick(static_cast<size_t>(lv));
        if (choose(v, cidx, 0, 0, lv, avail, acc, pick)) return true;
      }
      return false;
    }
    bool choose(int v, const std::vector<int>& cidx, int start, long got, long lv, Mask avail,
                std::vector<Star>& acc, std::vector<int>& pick) {
      if (got == lv) {
        Mask leaves = 0;
        for (long t = 0; t < lv; ++t) leaves |= Mask{1} << pick[t];
        acc.push_back({v, leaves});
        Mask next = avail & ~(leaves | (Mask{1} << v));
        if (run(next, v + 1, acc)) return true;
        acc.pop_back();
        return false;
      }
      for (int s = start; s <= static_cast<int>(cidx.size()) - (lv - got); ++s) {
        pick[got] = cidx[s];
        if (choose(v, cidx, s + 1, got + 1, lv, avail, acc, pick)) return true;
      }
      return false;
    }
  };
  Rec rec{g, b, L, J, p};
  std::vector<Star> acc;
  if (rec.run(u, 0, acc)) return StarForest{acc};
  return std::nullopt;
}

// Exact C(gamma(b, L)) at price p by enumerating member vertex sets.
inline Rat enumerate_gamma_cost(const WeightedGraph& g, long b, long L, const Rat& J, const Rat& p,
                                const Rat& price) {
  if (g.n() > 14) throw std::invalid_argument("gamma enumeration capped at n <= 14");
  Rat total = 0;
  Mask full = full_mask(g.n());
  for (Mask w = 0;; ++w) {
    if (popcount(w) >= 2 * b && is_gamma_member(g, b, L, J, p, w)) total += pow_rat(price, popcount(w));
    if (w == full) break;
  }
  return total;
}

// Elementary symmetric polynomial e_b over the given values, by DP.
inline Rat elementary_symmetric(const std::vector<Rat>& vals, long b) {
  if (b < 0) throw std::invalid_argument("negative order");
  if (b > static_cast<long>(vals.size())) return 0;
  std::vector<Rat> dp(static_cast<size_t>(b) + 1, Rat(0));
  dp[0] = 1;
  for (const Rat& v : vals) {
    if (v == 0) continue;
    for (long j = std::min<long>(b, static_cast<long>(vals.size())); j >= 1; --j)
      dp[j] += dp[j - 1] * v;
  }
  return dp[static_cast<size_t>(b)];
}

struct ClassCostChain {
  long L = 0, b = 0;
  Rat q_sum;      // sum_v q_v, q_v = p (e d_v p / L^v)^{L^v}, e upper-rounded
  Rat phi_bound;  // 2 mu (e/L) (4e/J)^{L-1}
  Rat esym;       // e_b over the q_v
  Rat analytic;   // (e phi / b)^b
  Rat closed;     // [(c0/4) J1^{L+1}]^{-b}
};

struct CostBoundReport {
  Rat c0;  // T0 / (mu J^2)
  Rat J1;  // J / (8e), e upper-rounded so the bound is not understated
  std::vector<ClassCostChain> per_class;
  Rat esym_total;
  Rat closed_total;
  Rat theorem_total;  // 8 c0^{-1} J1^{-(2^{k-1}+1)}
};

// Evaluates the full cost chain for the schedule's (b_i, L_i) pairs and
// asserts every link. Requires the instance guards J >= 8e, c0 >= 64e/J.
inline CostBoundReport cost_bound(const WeightedGraph& g, const Rat& J, const Rat& p, const Rat& mu,
                                  const Schedule& sched) {
  const Rat& eu = e_upper();
  if (J < 8 * eu) throw std::invalid_argument("guard J >= 8e violated");
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (Rat(g.edge_count()) * p * p > mu) throw std::invalid_argument("|G| p^2 exceeds mu");
  CostBoundReport rep;
  rep.c0 = Rat(sched.T0) / (mu * J * J);
  if (rep.c0 * J < 64 * eu) throw std::invalid_argument("guard c >= 64e/J violated");
  rep.J1 = J / (8 * eu);
  rep.esym_total = 0;
  rep.closed_total = 0;
  for (const auto& row : sched.rows) {
    ClassCostChain cc;
    cc.L = row.L;
    cc.b = row.b;
    std::vector<Rat> qs;
    cc.q_sum = 0;
    for (int v = 0; v < g.n(); ++v) {
      long dv = g.degree(v);
      if (dv == 0) { qs.push_back(0); continue; }
      long lv = special_leaf_count(g, v, row.L, J, p);
      Rat q = p * pow_rat(eu * dv * p / lv, lv);
      qs.push_back(q);
      cc.q_sum += q;
    }
    cc.phi_bound = 2 * mu * (eu / row.L) * pow_rat(4 * eu / J, row.L - 1);
    if (cc.q_sum > cc.phi_bound) throw std::logic_error("q-sum exceeds phi bound");
    cc.esym = elementary_symmetric(qs, row.b);
    cc.analytic = pow_rat(eu * cc.phi_bound / row.b, row.b);
    cc.closed = pow_rat((rep.c0 / 4) * pow_rat(rep.J1, row.L + 1), -row.b);
    if (cc.esym > cc.analytic) throw std::logic_error("e_b exceeds analytic bound");
    if (cc.analytic > cc.closed) throw std::logic_error("analytic bound exceeds closed bound");
    rep.esym_total += cc.esym;
    rep.closed_total += cc.closed;
    rep.per_class.push_back(std::move(cc));
  }
  long expo = (1L << (sched.k - 1)) + 1;
  rep.theorem_total = 8 / rep.c0 * pow_rat(rep.J1, -expo);
  if (rep.closed_total > rep.theorem_total) throw std::logic_error("closed total exceeds theorem bound");
  return rep;
}

}  // namespace smallness
