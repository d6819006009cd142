#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "smallness/lp.hpp"
#include "smallness/solvers.hpp"

using namespace smallness;

namespace {

IncreasingFamily fam_of(int n, std::initializer_list<Mask> gens) {
  return IncreasingFamily::from_generators(n, std::vector<Mask>(gens));
}

// Independent oracle: enumerate basic solutions of min c.x, Ax >= b, x >= 0.
// Append surplus columns, try every m-subset of columns as a basis, solve the
// square system by rational Gaussian elimination, keep feasible solutions.
std::optional<Rat> lp_by_basis_enumeration(std::vector<std::vector<Rat>> A, std::vector<Rat> b,
                                           std::vector<Rat> c) {
  size_t m = A.size(), n = c.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) A[i].push_back(i == j ? Rat(-1) : Rat(0));
  }
  size_t cols = n + m;
  std::optional<Rat> best;
  std::vector<size_t> basis(m);
  auto solve_basis = [&]() {
    std::vector<std::vector<Rat>> M(m, std::vector<Rat>(m + 1));
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) M[i][j] = A[i][basis[j]];
      M[i][m] = b[i];
    }
    for (size_t col = 0; col < m; ++col) {
      size_t piv = col;
      while (piv < m && M[piv][col] == 0) ++piv;
      if (piv == m) return;  // singular basis
      std::swap(M[col], M[piv]);
      Rat d = M[col][col];
      for (auto& v : M[col]) v /= d;
      for (size_t r = 0; r < m; ++r) {
        if (r == col || M[r][col] == 0) continue;
        Rat f = M[r][col];
        for (size_t j = col; j <= m; ++j) M[r][j] -= f * M[col][j];
      }
    }
    std::vector<Rat> x(cols, Rat(0));
    for (size_t j = 0; j < m; ++j) {
      if (M[j][m] < 0) return;  // infeasible basic solution
      x[basis[j]] = M[j][m];
    }
    Rat val = 0;
    for (size_t j = 0; j < n; ++j) val += c[j] * x[j];
    if (!best || val < *best) best = val;
  };
  auto rec = [&](auto&& self, size_t from, size_t depth) -> void {
    if (depth == m) {
      solve_basis();
      return;
    }
    for (size_t j = from; j + (m - depth - 1) < cols; ++j) {
      basis[depth] = j;
      self(self, j + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("simplex on hand-solved instances") {
  // min x subject to x >= 3.
  auto r1 = simplex_min_ge({{Rat(1)}}, {Rat(3)}, {Rat(1)});
  REQUIRE(r1.feasible);
  CHECK(r1.value == 3);
  CHECK(r1.x[0] == 3);

  // min 2x + y subject to x + y >= 4, x >= 1.
  auto r2 = simplex_min_ge({{Rat(1), Rat(1)}, {Rat(1), Rat(0)}}, {Rat(4), Rat(1)},
                           {Rat(2), Rat(1)});
  REQUIRE(r2.feasible);
  CHECK(r2.value == 5);  // x = 1, y = 3

  // Degenerate but feasible: two copies of the same constraint.
  auto r3 = simplex_min_ge({{Rat(1)}, {Rat(1)}}, {Rat(2), Rat(2)}, {Rat(5)});
  REQUIRE(r3.feasible);
  CHECK(r3.value == 10);
}

TEST_CASE("simplex agrees with basic-solution enumeration on random instances") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    size_t m = 1 + rng() % 3, n = 1 + rng() % 4;
    std::vector<std::vector<Rat>> A(m, std::vector<Rat>(n));
    std::vector<Rat> b(m), c(n);
    for (auto& row : A)
      for (auto& v : row) v = rat(static_cast<long>(rng() % 4), 1 + static_cast<long>(rng() % 3));
    for (auto& v : b) v = rat(static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 2));
    for (auto& v : c) v = rat(1 + static_cast<long>(rng() % 6), 1 + static_cast<long>(rng() % 4));
    auto res = simplex_min_ge(A, b, c);
    auto oracle = lp_by_basis_enumeration(A, b, c);
    if (res.feasible) {
      REQUIRE(oracle.has_value());
      CHECK(res.value == *oracle);
      // Returned point is feasible and attains the value.
      Rat val = 0;
      for (size_t j = 0; j < n; ++j) {
        CHECK(res.x[j] >= 0);
        val += c[j] * res.x[j];
      }
      CHECK(val == res.value);
      for (size_t i = 0; i < m; ++i) {
        Rat lhs = 0;
        for (size_t j = 0; j < n; ++j) lhs += A[i][j] * res.x[j];
        CHECK(lhs >= b[i]);
      }
    } else {
      CHECK_FALSE(oracle.has_value());
    }
  }
}

TEST_CASE("fractional cover cost of reference families") {
  // Single generator {0,1}: put all mass on the generator, cost p^2.
  auto f1 = fam_of(2, {0b11});
  Rat p = rat(1, 2);
  auto [v1, c1] = min_fractional_cost(f1, p);
  CHECK(v1 == rat(1, 4));
  REQUIRE(c1.lambda.size() == 1);
  CHECK(c1.lambda[0].first == 0b11);
  CHECK(c1.lambda[0].second == 1);

  // Single singleton generator: cost p.
  auto [v2, c2] = min_fractional_cost(fam_of(1, {0b1}), rat(2, 7));
  CHECK(v2 == rat(2, 7));

  // Triangle edges as generators: oracle via basis enumeration.
  auto tri = fam_of(3, {0b011, 0b101, 0b110});
  for (long t : {1L, 2L, 3L}) {
    Rat pp = rat(t, 4);
    auto cands = cover_candidates(tri);
    std::vector<std::vector<Rat>> A(3, std::vector<Rat>(cands.size(), Rat(0)));
    std::vector<Rat> b(3, Rat(1)), c(cands.size());
    for (size_t j = 0; j < cands.size(); ++j) {
      c[j] = pow_rat(pp, popcount(cands[j]));
      for (size_t i = 0; i < 3; ++i)
        if (subset_of(cands[j], tri.minimal_sets()[i])) A[i][j] = 1;
    }
    auto oracle = lp_by_basis_enumeration(A, b, c);
    auto [v, cert] = min_fractional_cost(tri, pp);
    REQUIRE(oracle.has_value());
    CHECK(v == *oracle);
  }
}

TEST_CASE("integral cover cost and weak duality") {
  auto tri = fam_of(3, {0b011, 0b101, 0b110});
  Rat p = rat(1, 3);
  auto [frac, fcert] = min_fractional_cost(tri, p);
  auto [integ, icert] = min_integral_cost(tri, p);
  CHECK(frac <= integ);
  // Best integral cover here: the three edges themselves, cost 3 p^2 = 1/3
  // (cheaper than the two-singleton cover {0},{1} at cost 2/3).
  CHECK(integ == rat(1, 3));
  // Certificates replay cleanly.
  verify_fractional(tri, fcert);
  verify_integral(tri, icert);
  // Tampered certificates are rejected.
  auto bad = icert;
  bad.cover.pop_back();
  CHECK_THROWS_AS(verify_integral(tri, bad), std::logic_error);
  auto badf = fcert;
  badf.objective += 1;
  CHECK_THROWS_AS(verify_fractional(tri, badf), std::logic_error);
}

TEST_CASE("q and q_f bracket 1/sqrt(2) for a single pair generator") {
  auto f = fam_of(2, {0b11});
  Rat tol = pow2(-30);
  auto qf = q_f(f, tol);
  auto q = q_threshold(f, tol);
  // The family is (weakly) p-small iff p^2 <= 1/2.
  CHECK(qf.interval.lo * qf.interval.lo <= rat(1, 2));
  CHECK(qf.interval.hi * qf.interval.hi >= rat(1, 2));
  CHECK(q.interval.lo * q.interval.lo <= rat(1, 2));
  CHECK(q.interval.hi * q.interval.hi >= rat(1, 2));
  REQUIRE(qf.certificate);
  verify_fractional(f, *qf.certificate);
  REQUIRE(q.certificate);
  verify_integral(f, *q.certificate);
}

TEST_CASE("threshold chain on random small families") {
  std::mt19937_64 rng(4242);
  Rat tol = pow2(-16);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 3 + static_cast<int>(rng() % 4);
    std::vector<Mask> gens;
    int count = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < count; ++t) {
      Mask g = rng() & full_mask(n);
      if (g) gens.push_back(g);
    }
    if (gens.empty()) continue;
    auto f = IncreasingFamily::from_generators(n, gens);
    auto iq = q_threshold(f, tol).interval;
    auto iqf = q_f(f, tol).interval;
    auto ipc = p_c(f, tol);
    CHECK(iq.lo <= iqf.hi);
    CHECK(iqf.lo <= ipc.hi);
  }
}
