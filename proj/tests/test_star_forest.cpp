#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "smallness/star_forest.hpp"

using namespace smallness;

namespace {

// Disjoint union of c stars K_{1,m}: centers 0..c-1, leaves appended after.
WeightedGraph star_union(int c, int m) {
  std::vector<WeightedGraph::Edge> edges;
  int next = c;
  for (int s = 0; s < c; ++s)
    for (int l = 0; l < m; ++l) edges.push_back({s, next++, Rat(1)});
  return WeightedGraph(c * (m + 1), std::move(edges));
}

}  // namespace

TEST_CASE("reduce_T picks the largest 2^{2k+3} below T") {
  CHECK_FALSE(reduce_T(Rat(31)));
  CHECK_FALSE(reduce_T(rat(63, 2)));
  auto a = reduce_T(Rat(32));
  REQUIRE(a);
  CHECK(a->k == 1);
  CHECK(a->T0 == 32);
  auto b = reduce_T(Rat(1000));
  REQUIRE(b);
  CHECK(b->k == 3);
  CHECK(b->T0 == 512);
  auto c = reduce_T(Rat(128));
  REQUIRE(c);
  CHECK(c->k == 2);
  CHECK(c->T0 == 128);
  CHECK_THROWS_AS(reduce_T(Rat(0)), std::invalid_argument);
}

TEST_CASE("schedule values for k = 1 and k = 2") {
  auto s1 = build_schedule(1);
  REQUIRE(s1.rows.size() == 1);
  CHECK(s1.T0 == 32);
  CHECK(s1.rows[0].L == 1);
  CHECK(s1.rows[0].delta == rat(1, 8));
  CHECK(s1.rows[0].b == 1);

  auto s2 = build_schedule(2);
  REQUIRE(s2.rows.size() == 2);
  CHECK(s2.T0 == 128);
  CHECK(s2.rows[0].L == 1);
  CHECK(s2.rows[0].delta == rat(1, 8));
  CHECK(s2.rows[0].b == 4);
  CHECK(s2.rows[1].L == 2);
  CHECK(s2.rows[1].delta == rat(1, 8));
  CHECK(s2.rows[1].b == 1);
}

TEST_CASE("schedule invariants hold for every k up to 20") {
  for (int k = 1; k <= 20; ++k) {
    auto s = build_schedule(k);
    REQUIRE(static_cast<int>(s.rows.size()) == k);
    Rat dsum = 0;
    for (int i = 1; i <= k; ++i) {
      const auto& row = s.rows[i - 1];
      CHECK(row.L == (1L << (i - 1)));
      long closed = std::max(2 * k + 1 - 3 * i >= 0 ? 1L << (2 * k + 1 - 3 * i) : 0L,
                             1L << (k - i));
      CHECK(row.b == closed);
      CHECK(row.delta == Rat(row.b) * pow2(2 * i) / s.T0);
      CHECK(pow2(row.L + 4) * row.delta >= row.L);
      CHECK(row.delta * 8 * row.L >= 1);
      dsum += row.delta;
    }
    CHECK(dsum <= rat(1, 2));
    CHECK(s.rows.back().b == 1);
    // b_i 4^i = delta_i T0 by definition.
    for (int i = 1; i <= k; ++i)
      CHECK(Rat(s.rows[i - 1].b) * pow2(2 * i) == s.rows[i - 1].delta * s.T0);
  }
  CHECK_THROWS_AS(build_schedule(0), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(29), std::invalid_argument);
}

TEST_CASE("special leaf count uses full-graph degrees") {
  // Star K_{1,8} plus an isolated edge; degrees must come from the whole
  // graph even when attention is restricted to a sub-mask.
  auto g = star_union(1, 8);
  Rat J = Rat(32), p = rat(1, 16);
  // d_0 = 8: L^0 = max{L, ceil(32 * 8 / 16 / 4)} = max{L, 4}.
  CHECK(special_leaf_count(g, 0, 1, J, p) == 4);
  CHECK(special_leaf_count(g, 0, 8, J, p) == 8);
  // A leaf has degree 1: ceil(32/16/4) = 1.
  CHECK(special_leaf_count(g, 3, 1, J, p) == 1);
  CHECK(star_is_good(g, 0, 4, J, p));
  CHECK_FALSE(star_is_good(g, 0, 3, J, p));
}

TEST_CASE("greedy decomposition on a union of stars") {
  auto g = star_union(3, 4);  // centers 0,1,2 with 4 leaves each
  Rat J = Rat(24), p = rat(1, 32);
  Mask all = full_mask(g.n());
  auto res = greedy_decompose(g, J, p, all);
  REQUIRE(res.stars.size() == 3);
  for (auto& s : res.stars) {
    CHECK(s.d == 4);
    CHECK(popcount(s.leaves) == 4);
  }
  CHECK(res.residual == 0);
  // Star sizes never increase along the extraction order.
  for (size_t j = 1; j < res.stars.size(); ++j) CHECK(res.stars[j].d <= res.stars[j - 1].d);
}

TEST_CASE("greedy leaves a residual without good stars") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 6 + static_cast<int>(rng() % 6);
    std::vector<WeightedGraph::Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) edges.push_back({u, v, Rat(1)});
    WeightedGraph g(n, std::move(edges));
    Rat J = Rat(22), p = rat(1, 64);
    Mask u0 = rng() & full_mask(n);
    auto res = greedy_decompose(g, J, p, u0);
    Mask m = res.residual;
    while (m) {
      int v = std::countr_zero(m);
      m &= m - 1;
      long d = popcount(g.adjacency(v) & res.residual & ~(Mask{1} << v));
      CHECK((d < 1 || !star_is_good(g, v, d, J, p)));
    }
  }
}

TEST_CASE("witness extraction lands in gamma(b_i, L_i) for a k = 2 schedule") {
  // Four disjoint edges: greedy extracts four 1-stars, bucket 1 holds all
  // four, so the first schedule row (b_1 = 4, L_1 = 1) fires.
  WeightedGraph g(8, {{0, 1, Rat(1)}, {2, 3, Rat(1)}, {4, 5, Rat(1)}, {6, 7, Rat(1)}});
  Rat J = Rat(22), p = rat(1, 128);
  auto sched = build_schedule(2);
  auto w = find_witness(g, J, p, sched, full_mask(8));
  REQUIRE(w.found);
  CHECK(w.cls == 1);
  CHECK(w.bucket_sizes == std::vector<long>{4, 0});
  CHECK(w.forest.stars.size() == 4);
  CHECK(is_gamma_member(g, 4, 1, J, p, w.forest.vertices()));
}

TEST_CASE("gamma membership by backtracking") {
  auto g = star_union(2, 2);  // centers 0,1; leaves 2,3 and 4,5
  Rat J = Rat(22), p = rat(1, 64);  // L^v = L for these degrees
  // Two disjoint 1-stars: {0,2} u {1,4}.
  CHECK(is_gamma_member(g, 2, 1, J, p, 0b010111));
  // One vertex short.
  CHECK_FALSE(is_gamma_member(g, 2, 1, J, p, 0b000101));
  // Extra vertex breaks exact partition.
  CHECK_FALSE(is_gamma_member(g, 2, 1, J, p, 0b011101));
  // With L = 2 the whole vertex set splits into the two full stars.
  StarForest wit;
  REQUIRE(is_gamma_member(g, 2, 2, J, p, 0b111111, &wit));
  CHECK(wit.stars.size() == 2);
  CHECK(wit.vertices() == 0b111111);
  // find_gamma_member_inside agrees with membership enumeration.
  auto found = find_gamma_member_inside(g, 2, 1, J, p, 0b111111);
  REQUIRE(found);
  CHECK(is_gamma_member(g, 2, 1, J, p, found->vertices()));
}

TEST_CASE("sum of squared star sizes dominates half the induced edges") {
  std::mt19937_64 rng(555);
  Rat J = Rat(22);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 8 + static_cast<int>(rng() % 6);
    std::vector<WeightedGraph::Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 2 == 0) edges.push_back({u, v, Rat(1)});
    if (edges.empty()) continue;
    WeightedGraph g(n, std::move(edges));
    Rat p = rat(1, 4096);
    for (Mask u : {full_mask(n), static_cast<Mask>(rng()) & full_mask(n)}) {
      if (!in_unweighted_target(g, u, Rat(1), J, p)) continue;
      auto res = greedy_decompose(g, J, p, u);
      long sq = 0;
      for (auto& s : res.stars) sq += s.d * s.d;
      CHECK(Rat(2 * sq) >= Rat(g.induced_edge_count(u)));
    }
  }
}

TEST_CASE("cost chain links hold on a concrete instance") {
  auto g = star_union(4, 3);  // 16 vertices, 12 edges
  Rat J = Rat(22);
  auto sched = build_schedule(1);
  // mu <= T0 / (64 e J) keeps the c guard; p^2 |G| <= mu fixes p.
  Rat mu = rat(1, 150);
  Rat p = rat(1, 64);
  REQUIRE(Rat(g.edge_count()) * p * p <= mu);
  auto rep = cost_bound(g, J, p, mu, sched);
  CHECK(rep.c0 == Rat(32) / (mu * J * J));
  REQUIRE(rep.per_class.size() == 1);
  const auto& cc = rep.per_class[0];
  CHECK(cc.esym <= cc.analytic);
  CHECK(cc.analytic <= cc.closed);
  CHECK(rep.closed_total <= rep.theorem_total);
  // Exact enumerated cost on a small graph respects the whole chain; use a
  // sub-instance small enough to enumerate.
  auto h = star_union(2, 3);
  auto reph = cost_bound(h, J, p, mu, sched);
  Rat exact = enumerate_gamma_cost(h, sched.rows[0].b, sched.rows[0].L, J, p, p);
  CHECK(exact <= reph.per_class[0].esym);
  CHECK(exact <= reph.theorem_total);
}

TEST_CASE("cost chain guards") {
  auto g = star_union(1, 2);
  auto sched = build_schedule(1);
  CHECK_THROWS_AS(cost_bound(g, Rat(10), rat(1, 64), rat(1, 100), sched), std::invalid_argument);
  CHECK_THROWS_AS(cost_bound(g, Rat(22), rat(1, 64), Rat(0), sched), std::invalid_argument);
  // mu too large violates c J >= 64 e.
  CHECK_THROWS_AS(cost_bound(g, Rat(22), rat(1, 64), Rat(1), sched), std::invalid_argument);
}
