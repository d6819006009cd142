#pragma once

// Assembles the cover of {U : lambda(G[U]) >= R^2 lambda(G) p^2} from the
// singleton piece, trivial per-class edge covers, and per-class star-forest
// covers, and verifies coverage and the explicit cost subtotals.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "smallness/cover.hpp"
#include "smallness/graph.hpp"
#include "smallness/parallel.hpp"
#include "smallness/rational.hpp"
#include "smallness/singleton.hpp"
#include "smallness/star_forest.hpp"
#include "smallness/subset.hpp"

namespace smallness {

// Rational stand-in for 1/sqrt(2), rounded down so R' = R * kInvSqrt2 has
// R'^2 <= R^2/2: the rounded-weight target with threshold R'^2 then contains
// the original target.
inline const Rat& inv_sqrt2_lower() {
  static const Rat v = rat(408, 577);
  return v;
}

// Guard for the full-strength theorem: R' must reach 4096e.
inline const Rat& weighted_guard() {
  static const Rat v = 4096 * e_upper() / inv_sqrt2_lower();
  return v;
}

inline constexpr long kReducedGuardMin = 32;

struct PipelineInstance {
  WeightedGraph graph;
  Rat p;
  Rat R;
  bool reduced_guard = false;  // R >= 32 only; coverage still verified, cost caps not asserted
};

struct ClassPlan {
  long i = 0;         // dyadic class: theta_i = 2^-i
  long edge_count = 0;
  Rat Ei;             // |G_i| p^2
  long alpha = 0;     // E_i in (2^{alpha-1}, 2^alpha]
  long beta = 0;      // rank of i within column alpha
  Rat cstar;          // (3/2)^{beta-1} R'^2 / 16
  Rat T;              // max{cstar 2^{alpha-1}, 1}
  enum class Kind { TrivialEdges, StarForest, EmptyTarget } kind = Kind::TrivialEdges;
  int k = 0;
  long T0 = 0;
  Rat bound;          // recorded upper bound on this class's cover cost
  std::optional<CostBoundReport> chain;  // star classes, full-guard mode
  std::shared_ptr<const WeightedGraph> subgraph;  // class edges, unit weights
};

struct PipelineResult {
  Rat scale;   // lambda_scaled = lambda * scale
  Rat Rp;      // R'
  Rat J1;      // (R'/2)/(8e), e upper-rounded
  DyadicDecomposition dyadic;
  std::vector<Rat> zeta;  // zeta(v) = lambda'(D_v)
  SingletonCover singleton;
  Rat singleton_cap;      // 2e/(R' - 2e)
  std::vector<ClassPlan> classes;
  Rat trivial_total, trivial_cap;           // T = 1 classes; cap 192 / R'^2
  Rat star_total, star_cap;                 // T > 1 classes; truncated f-sum cap
  long star_cap_truncation = 0;             // first s left out of the finite sum
  Rat star_cap_tail;                        // geometric bound on the omitted tail
  Cover cover;
};

namespace detail {

inline long column_of(const Rat& e) {
  long alpha = 0;
  while (pow2(alpha) < e) ++alpha;
  while (pow2(alpha - 1) >= e) --alpha;
  return alpha;  // 2^{alpha-1} < e <= 2^alpha
}

// Upper bound on f(s) = min{J1^-2, J1^-2^{s/2-4}} with an integer exponent:
// for odd s the exponent 2^{s/2-4} is rounded down to 2^{floor(s/2)-4}, which
// only enlarges the value.
inline Rat f_upper(const Rat& j1, long s) {
  long half = s / 2;
  long expo = 2;
  if (half - 4 >= 1 && half - 4 < 62) expo = std::max(2L, 1L << (half - 4));
  return pow_rat(j1, -expo);
}

}  // namespace detail

inline PipelineResult build_weighted_cover(const PipelineInstance& inst) {
  const WeightedGraph& g = inst.graph;
  if (inst.p <= 0 || inst.p > 1) throw std::invalid_argument("p must be in (0,1]");
  if (g.total_weight() == 0) throw std::invalid_argument("lambda is identically zero");
  if (inst.reduced_guard) {
    if (inst.R < kReducedGuardMin) throw std::invalid_argument("reduced-guard mode requires R >= 32");
  } else if (inst.R < weighted_guard()) {
    throw std::invalid_argument("R below guard (use reduced-guard mode for exploratory runs)");
  }

  PipelineResult out;
  out.Rp = inst.R * inv_sqrt2_lower();
  out.dyadic = round_down_dyadic(g);
  out.scale = out.dyadic.scale;
  const Rat& p = inst.p;

  // Singleton piece on zeta(v) = lambda'(D_v) with J = R'.
  out.zeta.assign(g.n(), Rat(0));
  for (auto& [i, idxs] : out.dyadic.classes) {
    Rat theta = DyadicDecomposition::theta(i);
    for (int idx : idxs) {
      const auto& e = g.edges()[idx];
      out.zeta[e.u] += theta / 2;
      out.zeta[e.v] += theta / 2;
    }
  }
  out.singleton = build_singleton_cover({out.zeta, p, out.Rp});
  out.singleton_cap = 2 * e_upper() / (out.Rp - 2 * e_upper());
  for (const auto& part : out.singleton.cover.parts) out.cover.parts.push_back(part);

  // Arrange classes in the (alpha, beta) array and plan each class cover.
  Rat J = out.Rp / 2;
  out.J1 = J / (8 * e_upper());
  std::map<long, long> column_depth;  // alpha -> rows used so far
  out.trivial_total = 0;
  out.star_total = 0;
  for (auto& [i, idxs] : out.dyadic.classes) {
    ClassPlan plan;
    plan.i = i;
    plan.edge_count = static_cast<long>(idxs.size());
    plan.Ei = Rat(plan.edge_count) * p * p;
    plan.alpha = detail::column_of(plan.Ei);
    plan.beta = ++column_depth[plan.alpha];
    plan.cstar = pow_rat(rat(3, 2), plan.beta - 1) * out.Rp * out.Rp / 16;
    plan.T = std::max(Rat(plan.cstar * pow2(plan.alpha - 1)), Rat(1));
    plan.subgraph = std::make_shared<const WeightedGraph>(class_subgraph(g, idxs));

    if (plan.T > 1 && plan.T >= plan.edge_count) {
      plan.kind = ClassPlan::Kind::EmptyTarget;
      plan.bound = 0;
    } else if (plan.T < 32) {
      // T = 1, or 1 < T < 32 where the reduction also says: the edge set
      // itself covers the target.
      plan.kind = ClassPlan::Kind::TrivialEdges;
      ExplicitList el;
      for (int idx : idxs) {
        const auto& e = g.edges()[idx];
        el.sets.push_back((Mask{1} << e.u) | (Mask{1} << e.v));
      }
      out.cover.parts.push_back(el);
      plan.bound = plan.Ei;
      if (plan.T > 1 && !inst.reduced_guard) {
        // These sit in the T > 1 subtotal: cost is at most mu = 2^alpha,
        // itself below 32 c^{-1} J1^{-2}.
        Rat c = plan.T / (pow2(plan.alpha) * J * J);
        long s = 0;
        while (pow2(s + 1) < plan.T) ++s;
        if (plan.bound > 32 / c * detail::f_upper(out.J1, s))
          throw std::logic_error("trivial class bound exceeds its f(s) cap");
      }
    } else {
      plan.kind = ClassPlan::Kind::StarForest;
      auto red = reduce_T(plan.T);
      plan.k = red->k;
      plan.T0 = red->T0;
      Schedule sched = build_schedule(plan.k);
      Rat mu = pow2(plan.alpha);
      for (const auto& row : sched.rows) {
        StarForestFamily sf{plan.subgraph, row.b, row.L, J, p};
        out.cover.parts.push_back(sf);
      }
      if (!inst.reduced_guard) {
        plan.chain = cost_bound(*plan.subgraph, J, p, mu, sched);
        plan.bound = plan.chain->theorem_total;
        // Per-class comparison against the summable bound 32 c^{-1} f(s).
        Rat c = plan.T / (mu * J * J);
        long s = 0;
        while (pow2(s + 1) < plan.T) ++s;  // T in (2^s, 2^{s+1}]
        if (plan.bound > 32 / c * detail::f_upper(out.J1, s))
          throw std::logic_error("class bound exceeds its f(s) cap");
      } else {
        Rat dp_total = 0;
        for (const auto& row : sched.rows) {
          StarForestFamily sf{plan.subgraph, row.b, row.L, J, p};
          dp_total += cost(CoverPart{sf}, p).upper_bound;
        }
        plan.bound = dp_total;
      }
    }
    if (plan.kind == ClassPlan::Kind::TrivialEdges && plan.T == 1)
      out.trivial_total += plan.bound;
    else if (plan.kind != ClassPlan::Kind::EmptyTarget && plan.T > 1)
      out.star_total += plan.bound;
    out.classes.push_back(std::move(plan));
  }

  out.trivial_cap = 192 / (out.Rp * out.Rp);
  if (!inst.reduced_guard) {
    // Truncated sum_s 768 f(s): stop once terms are negligible (and past the
    // point where consecutive terms shrink by at least J1^-2), then add the
    // geometric tail bound 2 * 768 f(s*) / (1 - J1^-2).
    Rat total = 0;
    long s = 0;
    for (;; ++s) {
      Rat term = 768 * detail::f_upper(out.J1, s);
      if (s >= 12 && total > 0 && term < pow2(-80) * total) break;
      total += term;
      if (s > 4096) throw std::logic_error("f-sum truncation did not converge");
    }
    out.star_cap_truncation = s;
    out.star_cap_tail = 2 * 768 * detail::f_upper(out.J1, s) / (1 - pow_rat(out.J1, -2));
    out.star_cap = total + out.star_cap_tail;
  }
  return out;
}

struct Diagnostics {
  Rat L;
  bool K_defined = false;
  Rat K;
  std::map<long, Rat> L_i;
  std::map<long, Rat> K_i;  // only where L_i > 0
  std::vector<long> I;      // classes with K_i > R'/2
  bool in_u_star = false;
  bool claim_holds = true;  // for u in U*: some i in I has K_i L_i > c_i
};

// The analysis quantities of the rounded instance at a given u:
// lambda'(D(u)) = L w p, lambda'(G[u]) = K L w p^2, |D_i(u)| = L_i |G_i| p,
// |G_i[u]| = K_i L_i |G_i| p^2.
inline Diagnostics diagnostics(const PipelineResult& res, const WeightedGraph& g, const Rat& p,
                               Mask u) {
  Diagnostics d;
  Rat w = 0;
  for (const auto& plan : res.classes) w += DyadicDecomposition::theta(plan.i) * plan.edge_count;
  Rat du = 0, gu = 0;
  std::map<long, long> d2_i, g_i;  // 2|D_i(u)| and |G_i[u]| per class
  for (const auto& plan : res.classes) {
    const WeightedGraph& sub = *plan.subgraph;
    long dd = sub.boundary_degree_sum(u);
    long gg = sub.induced_edge_count(u);
    d2_i[plan.i] = dd;
    g_i[plan.i] = gg;
    Rat theta = DyadicDecomposition::theta(plan.i);
    du += theta * Rat(dd) / 2;
    gu += theta * gg;
  }
  d.L = du / (w * p);
  if (d.L > 0) {
    d.K_defined = true;
    d.K = gu / (d.L * w * p * p);
  }
  Rat half_R = 0;
  for (const auto& plan : res.classes) {
    Rat li = Rat(d2_i[plan.i]) / (2 * Rat(plan.edge_count) * p);
    d.L_i[plan.i] = li;
    if (li > 0) {
      Rat ki = Rat(g_i[plan.i]) / (li * Rat(plan.edge_count) * p * p);
      d.K_i[plan.i] = ki;
      if (ki > res.Rp / 2) d.I.push_back(plan.i);
    }
  }
  d.in_u_star = gu >= res.Rp * res.Rp * w * p * p && du < res.Rp * w * p;
  if (d.in_u_star) {
    d.claim_holds = false;
    for (const auto& plan : res.classes) {
      auto it = d.K_i.find(plan.i);
      if (it == d.K_i.end()) continue;
      if (it->second > res.Rp / 2 && it->second * d.L_i[plan.i] > plan.cstar) {
        d.claim_holds = true;
        break;
      }
    }
  }
  return d;
}

struct PipelineVerification {
  bool coverage_ok = true;
  Mask counterexample = 0;
  long targets_checked = 0;
  bool claim_ok = true;
  Mask claim_counterexample = 0;
  bool singleton_cap_ok = true;
  bool trivial_cap_ok = true;
  bool star_cap_ok = true;
  bool exhaustive = true;  // sampled audits are never certificate-grade
};

inline bool in_weighted_target(const WeightedGraph& g, const Rat& p, const Rat& R, Mask u) {
  return g.induced_weight(u) >= R * R * g.total_weight() * p * p;
}

inline PipelineVerification verify_pipeline(const PipelineInstance& inst,
                                            const PipelineResult& res, bool exhaustive = true,
                                            long samples = 0, std::uint64_t seed = 0,
                                            int workers = 0) {
  const WeightedGraph& g = inst.graph;
  PipelineVerification rep;
  rep.exhaustive = exhaustive;
  Rat threshold = inst.R * inst.R * g.total_weight() * inst.p * inst.p;
  auto in_target = [&](Mask u) { return g.induced_weight(u) >= threshold; };
  auto covered = [&](Mask u) {
    for (const auto& part : res.cover.parts)
      if (find_member_inside(part, u)) return true;
    return false;
  };
  if (exhaustive) {
    if (g.n() > 12) throw std::invalid_argument("exhaustive pipeline verification capped at n <= 12");
    auto cov_fail = [&](Mask u) { return in_target(u) && !covered(u); };
    auto bad = first_mask_where(full_mask(g.n()), cov_fail, workers);
    if (bad) { rep.coverage_ok = false; rep.counterexample = *bad; }
    auto claim_fail = [&](Mask u) {
      return !diagnostics(res, g, inst.p, u).claim_holds;
    };
    auto badc = first_mask_where(full_mask(g.n()), claim_fail, workers);
    if (badc) { rep.claim_ok = false; rep.claim_counterexample = *badc; }
    Mask full = full_mask(g.n());
    for (Mask u = 0;; ++u) {
      if (in_target(u)) ++rep.targets_checked;
      if (u == full) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    Mask full = full_mask(g.n());
    for (long t = 0; t < samples; ++t) {
      Mask u = rng() & full;
      if (in_target(u)) {
        ++rep.targets_checked;
        if (!covered(u)) {
          rep.coverage_ok = false;
          rep.counterexample = u;
          break;
        }
      }
      auto d = diagnostics(res, g, inst.p, u);
      if (!d.claim_holds) { rep.claim_ok = false; rep.claim_counterexample = u; break; }
    }
  }
  if (!inst.reduced_guard) {
    Rat singleton_cost =
        res.singleton.cost.exact ? *res.singleton.cost.exact : res.singleton.cost.upper_bound;
    rep.singleton_cap_ok = singleton_cost < res.singleton_cap;
    rep.trivial_cap_ok = res.trivial_total <= res.trivial_cap;
    rep.star_cap_ok = res.star_total <= res.star_cap;
  }
  return rep;
}

}  // namespace smallness
