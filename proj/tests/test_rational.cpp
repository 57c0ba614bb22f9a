#include <doctest.h>

#include <random>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/lp.hpp"

using namespace thom;

TEST_CASE("rational text round trip") {
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(5)) == "5/1");
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational(""), SchemaViolation);
  CHECK_THROWS_AS(parse_rational("1/0"), SchemaViolation);
  CHECK_THROWS_AS(parse_rational("x"), SchemaViolation);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Rational q(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(rng() % 97) + 1);
    q.canonicalize();
    CHECK(parse_rational(to_string(q)) == q);
  }
}

TEST_CASE("from_double is exact") {
  CHECK(from_double(0.5) == Rational(1, 2));
  CHECK(to_double(from_double(0.1)) == 0.1);
  CHECK(from_double(0.1) != Rational(1, 10));
  CHECK_THROWS_AS(from_double(std::numeric_limits<double>::infinity()), InvalidParams);
}

TEST_CASE("periodic reductions") {
  CHECK(reduce_unit(Rational(7, 4)) == Rational(3, 4));
  CHECK(reduce_unit(Rational(-1, 4)) == Rational(3, 4));
  CHECK(reduce_unit(Rational(1)) == 0);
  CHECK(wrap_half(Rational(3, 4)) == Rational(-1, 4));
  CHECK(wrap_half(Rational(1, 2)) == Rational(-1, 2));
  CHECK(wrap_half(Rational(-1, 2)) == Rational(-1, 2));
}

TEST_CASE("exact linear algebra") {
  RMatrix m{{2, 1}, {1, 3}};
  CHECK(determinant(m) == 5);
  CHECK(rank(RMatrix{{1, 2}, {2, 4}}) == 1);
  auto x = solve(m, {3, 5});
  REQUIRE(x);
  CHECK((*x)[0] == Rational(4, 5));
  CHECK((*x)[1] == Rational(7, 5));
  CHECK_FALSE(solve(RMatrix{{1, 2}, {2, 4}}, {1, 1}));
  CHECK(simplex_volume({{0, 0}, {1, 0}, {0, 1}}) == Rational(1, 2));
  CHECK(simplex_volume({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == Rational(1, 6));
  auto b = barycentric({{0, 0}, {1, 0}, {0, 1}}, {Rational(1, 4), Rational(1, 2)});
  REQUIRE(b);
  CHECK(*b == RVec{Rational(1, 4), Rational(1, 4), Rational(1, 2)});
}

TEST_CASE("distance to a simplex matches a brute-force oracle") {
  const std::vector<RVec> tri{{0, 0}, {1, 0}, {0, 1}};
  CHECK(squared_distance_to_simplex(tri, {Rational(1, 4), Rational(1, 4)}) == 0);
  CHECK(squared_distance_to_simplex(tri, {-1, 0}) == 1);
  CHECK(squared_distance_to_simplex(tri, {1, 1}) == Rational(1, 2));
  // Oracle: minimum over a fine barycentric grid bounds the exact value from above.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const RVec p{Rational(static_cast<long>(rng() % 41) - 20, 10), Rational(static_cast<long>(rng() % 41) - 20, 10)};
    const double exact = to_double(squared_distance_to_simplex(tri, p));
    double grid = 1e300;
    const int N = 200;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; i + j <= N; ++j) {
        const double x = static_cast<double>(i) / N, y = static_cast<double>(j) / N;
        const double dx = to_double(p[0]) - x, dy = to_double(p[1]) - y;
        grid = std::min(grid, dx * dx + dy * dy);
      }
    CHECK(exact <= grid + 1e-12);
    CHECK(grid - exact < 0.05);
  }
}

TEST_CASE("Hausdorff distance of simplices") {
  const std::vector<RVec> a{{0, 0}, {1, 0}};
  const std::vector<RVec> b{{0, 1}, {1, 1}};
  CHECK(squared_hausdorff(a, b) == 1);
  CHECK(squared_hausdorff(a, a) == 0);
  CHECK(squared_hausdorff({{0, 0}}, {{0, 0}, {2, 0}}) == 4);
}

TEST_CASE("exact simplex LP") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
  LinearProgram lp;
  lp.num_vars = 2;
  lp.objective = {1, 1};
  lp.le_rows = {{1, 2}, {3, 1}};
  lp.le_rhs = {4, 6};
  const LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rational(14, 5));

  LinearProgram inf;
  inf.num_vars = 1;
  inf.objective = {1};
  inf.eq_rows = {{1}};
  inf.eq_rhs = {-1};
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);

  LinearProgram unb;
  unb.num_vars = 1;
  unb.objective = {1};
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);

  CHECK(l1_distance({{0, 0}}, {{1, 1}}) == 2);
  CHECK(l1_distance({{0, 0}, {2, 0}}, {{1, 1}}) == 1);
}
