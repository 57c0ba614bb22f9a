#include <doctest.h>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/subdivision.hpp"

using namespace thom;

namespace {

// |K_n| from the join decomposition: a nonempty set phi of interior vertices
// joined with the pattern on the complementary face.
std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t pattern_count_oracle(int n) {
  std::vector<std::size_t> c{1};
  for (int m = 1; m <= n; ++m) {
    std::size_t total = 1;
    for (int k = 1; k <= m; ++k) total += binom(static_cast<std::size_t>(m + 1), static_cast<std::size_t>(k)) * c[static_cast<std::size_t>(m - k)];
    c.push_back(total);
  }
  return c.back();
}

ComplexPtr two_triangles() {
  return build_complex(2, {{0, {0, 0}}, {1, {1, 0}}, {2, {0, 1}}, {3, {1, 1}}}, {{0, 1, 2}, {1, 2, 3}});
}

}  // namespace

TEST_CASE("pattern counts") {
  auto k0 = thom_pattern(0);
  CHECK(k0.top_count() == 1);
  auto k1 = thom_pattern(1);
  CHECK(k1.top_count() == 3);
  CHECK(k1.pattern->num_vertices() == 4);
  auto k2 = thom_pattern(2);
  CHECK(k2.top_count() == 13);
  CHECK(k2.pattern->num_vertices() == 12);
  CHECK(k2.pattern->num_simplices(1) == 24);
  CHECK(k2.pattern->euler_characteristic() == 1);
  for (int n = 0; n <= 3; ++n) CHECK(thom_pattern_unchecked(n).top_count() == pattern_count_oracle(n));
}

TEST_CASE("pattern verification") {
  for (int n = 1; n <= 2; ++n) {
    auto rep = verify_pattern(thom_pattern(n));
    CHECK(rep.nondegenerate);
    CHECK(rep.heredity);
    CHECK(rep.tiling.pass);
    CHECK(rep.tiling.volume_sum == rep.tiling.region_volume);
    CHECK(rep.surjective == rep.top_count);
  }
}

TEST_CASE("pattern parameters are validated") {
  CHECK_THROWS_AS(thom_pattern(1, {Rational(1, 4), Rational(2, 3), Rational(1, 3)}), InvalidParams);
  CHECK_THROWS_AS(thom_pattern(2, {Rational(1, 2), Rational(1, 3), Rational(2, 3)}), InvalidParams);
  CHECK_THROWS_AS(thom_pattern(-1), InvalidParams);
}

TEST_CASE("hand-built degenerate pattern is rejected") {
  // Delta^1 split at 1/2 with the midpoint folded onto corner 0: the edge [0, mid] collapses.
  PatternData top;
  top.n = 1;
  top.bary = {{1, 0}, {0, 1}, {Rational(1, 2), Rational(1, 2)}};
  top.sigma = {0, 1, 0};
  top.tops = {{0, 2}, {1, 2}};
  auto p = pattern_from_data(top, {thom_pattern(0).levels[0]});
  auto rep = verify_pattern(p);
  CHECK_FALSE(rep.nondegenerate);
  CHECK_FALSE(rep.pass);
  CHECK(rep.tiling.pass);
}

TEST_CASE("subdividing two triangles glues along the shared edge") {
  const auto T = two_triangles();
  auto sub = thom_subdivide(T, thom_pattern(2));
  CHECK(sub.complex->num_simplices(2) == 26);
  // 12 + 12 minus the 4 vertices of the subdivided shared edge.
  CHECK(sub.complex->num_vertices() == 20);
  CHECK(sub.complex->euler_characteristic() == 1);
  Rational area = 0;
  for (const auto& s : sub.complex->simplices(2)) area += simplex_volume(sub.complex->realize(s));
  CHECK(area == 1);
  for (VertexId v : T->vertex_ids()) CHECK(sub.sigma(v) == v);
}

TEST_CASE("iterated folds multiply counts") {
  auto t1 = iterate_fold(standard_simplex(1), thom_pattern(1), 3);
  CHECK(t1.top()->num_simplices(1) == 27);
  auto t2 = iterate_fold(standard_simplex(2), thom_pattern(2), 2);
  CHECK(t2.complexes[1]->num_simplices(2) == 13);
  CHECK(t2.top()->num_simplices(2) == 169);
  auto rep = verify_fold(t2);
  CHECK(rep.pass);
  CHECK(rep.multiplicative);
  CHECK(rep.bijective == 169);
  CHECK(rep.top_counts == std::vector<std::size_t>{1, 13, 169});
  extend_fold(t2);
  CHECK(t2.order() == 3);
  CHECK(t2.top()->num_simplices(2) == 2197);
  // The composed map agrees with to_base.
  auto comp = t2.composed();
  for (std::size_t i = 0; i < t2.top()->num_vertices(); ++i)
    CHECK(comp.images[i] == t2.to_base.back()[i]);
}

TEST_CASE("unfolding homotopy endpoints and ranks") {
  for (int n = 1; n <= 2; ++n) {
    auto p = thom_pattern(n);
    auto s0 = unfolding_homotopy(p, 0);
    for (std::size_t v = 0; v < s0.domain.size(); ++v) CHECK(s0.domain[v] == p.data().bary[v]);
    auto s1 = unfolding_homotopy(p, 1);
    for (std::size_t v = 0; v < s1.domain.size(); ++v) CHECK(s1.domain[v] == s1.image[v]);
    for (int k = 0; k < 17; ++k) {
      const Rational s(k, 17);
      CHECK(snapshot_rank(p, unfolding_homotopy(p, s)).ok());
    }
  }
  CHECK_THROWS_AS(unfolding_homotopy(thom_pattern(1), Rational(3, 2)), InvalidTime);
}

TEST_CASE("Whitney prism subdivision") {
  auto tri = standard_simplex(2);
  auto prism = whitney_prism_subdivide(tri, 0, 2, {0, 1, 2});
  CHECK(prism->num_simplices(3) == 3);
  Rational vol = 0;
  for (const auto& s : prism->simplices(3)) vol += simplex_volume(prism->realize(s));
  CHECK(vol == 1);
  // Two triangles with a shared edge: both prisms agree on the shared square.
  auto sq = whitney_prism_subdivide(two_triangles(), 0, 1, {3, 2, 1, 0});
  CHECK(sq->num_simplices(3) == 6);
  Rational v2 = 0;
  for (const auto& s : sq->simplices(3)) v2 += simplex_volume(sq->realize(s));
  CHECK(v2 == 1);
  CHECK(sq->euler_characteristic() == 1);
  CHECK_THROWS_AS(whitney_prism_subdivide(tri, 1, 1, {0, 1, 2}), InvalidParams);
}
