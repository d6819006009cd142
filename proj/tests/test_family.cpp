#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "smallness/family.hpp"

using namespace smallness;

namespace {

IncreasingFamily fam_of(int n, std::initializer_list<Mask> gens) {
  return IncreasingFamily::from_generators(n, std::vector<Mask>(gens));
}

}  // namespace

TEST_CASE("construction keeps only the minimal generators") {
  // {0,1} dominates {0,1,2}; duplicate {2} collapses.
  auto f = fam_of(3, {0b011, 0b111, 0b100, 0b100});
  REQUIRE(f.minimal_sets() == std::vector<Mask>{0b011, 0b100});
  CHECK(f.contains(0b011));
  CHECK(f.contains(0b100));
  CHECK(f.contains(0b110));
  CHECK_FALSE(f.contains(0b001));
  CHECK_FALSE(f.contains(0));
}

TEST_CASE("membership is increasing") {
  auto f = fam_of(4, {0b0011, 0b1100});
  for (Mask u = 0; u < 16; ++u) {
    if (!f.contains(u)) continue;
    for (Mask w = u; w < 16; ++w)
      if (subset_of(u, w)) CHECK(f.contains(w));
  }
}

TEST_CASE("properness") {
  CHECK(fam_of(2, {0b01}).proper());
  CHECK_FALSE(fam_of(2, {}).proper());
  CHECK_FALSE(fam_of(2, {0}).proper());  // empty set makes the family everything
  CHECK_THROWS_AS(fam_of(2, {0}).require_proper(), std::invalid_argument);
  CHECK_THROWS_AS(fam_of(2, {0b100}), std::invalid_argument);  // outside ground set
}

TEST_CASE("mu of reference families") {
  Rat p = rat(1, 3), q = rat(2, 3);
  // Single singleton generator: mu = p.
  CHECK(mu_exact(fam_of(1, {0b1}), p) == p);
  // One two-element generator: mu = p^2.
  CHECK(mu_exact(fam_of(2, {0b11}), p) == p * p);
  // Two disjoint singletons: mu = 1 - (1-p)^2.
  CHECK(mu_exact(fam_of(2, {0b01, 0b10}), p) == 1 - q * q);
  // Endpoints.
  CHECK(mu_exact(fam_of(3, {0b101}), Rat(0)) == 0);
  CHECK(mu_exact(fam_of(3, {0b101}), Rat(1)) == 1);
}

TEST_CASE("mu against a direct sweep over subsets") {
  auto f = fam_of(5, {0b00111, 0b11000, 0b10101});
  Rat p = rat(2, 7), total = 0;
  for (Mask u = 0; u < 32; ++u)
    if (f.contains(u)) total += pow_rat(p, popcount(u)) * pow_rat(1 - p, 5 - popcount(u));
  CHECK(mu_exact(f, p) == total);
}

TEST_CASE("mu is monotone in p") {
  auto f = fam_of(6, {0b000111, 0b110001, 0b101010});
  Rat prev = 0;
  for (long t = 1; t <= 20; ++t) {
    Rat cur = mu_exact(f, rat(t, 20));
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("p_c brackets the half point") {
  Rat tol = pow2(-40);
  // mu = p: threshold exactly 1/2.
  auto i1 = p_c(fam_of(1, {0b1}), tol);
  CHECK(i1.lo <= rat(1, 2));
  CHECK(i1.hi >= rat(1, 2));
  CHECK(i1.hi - i1.lo <= tol);
  // mu = p^2: threshold 1/sqrt(2).
  auto i2 = p_c(fam_of(2, {0b11}), tol);
  CHECK(i2.lo * i2.lo <= rat(1, 2));
  CHECK(i2.hi * i2.hi >= rat(1, 2));
  // mu = 1 - (1-p)^2: threshold 1 - 1/sqrt(2).
  auto i3 = p_c(fam_of(2, {0b01, 0b10}), tol);
  Rat a = 1 - i3.hi, b = 1 - i3.lo;
  CHECK(a * a <= rat(1, 2));
  CHECK(b * b >= rat(1, 2));
}

TEST_CASE("p_c endpoints always satisfy the defining inequalities") {
  auto f = fam_of(7, {0b0000111, 0b1110000, 0b1001001, 0b0101010});
  auto iv = p_c(f, pow2(-20));
  CHECK(mu_exact(f, iv.lo) <= rat(1, 2));
  CHECK(mu_exact(f, iv.hi) >= rat(1, 2));
}

TEST_CASE("monte carlo estimate is deterministic and near the exact value") {
  auto f = fam_of(6, {0b000011, 0b111000});
  Rat p = rat(1, 2);
  auto a = mu_montecarlo(f, p, 12345, 20000);
  auto b = mu_montecarlo(f, p, 12345, 20000);
  CHECK(a.estimate == b.estimate);  // same seed, same answer
  double exact = rat_approx(mu_exact(f, p));
  CHECK(std::abs(a.estimate - exact) < 5 * a.standard_error + 1e-9);
  // Degenerate p values.
  CHECK(mu_montecarlo(f, Rat(0), 7, 100).estimate == 0.0);
  CHECK(mu_montecarlo(f, Rat(1), 7, 100).estimate == 1.0);
}
