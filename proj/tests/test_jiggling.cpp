#include <doctest.h>

#include <set>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/jiggling.hpp"

using namespace thom;

TEST_CASE("exp jiggle lands on the folded vertex modulo the lattice") {
  auto T = torus_triangulation(2, 2);
  auto tower = iterate_fold(T, thom_pattern(2), 1);
  auto sec = jiggle_exp(tower, {2, ModelKind::Torus});
  REQUIRE(sec.lift.size() == tower.top()->num_vertices());
  for (std::size_t i = 0; i < sec.lift.size(); ++i) {
    RVec y = tower.top()->coords_at(i) + sec.lift[i];
    for (auto& q : y) q = reduce_unit(q);
    CHECK(y == T->coords(tower.to_base[1][i]));
    for (const auto& q : sec.lift[i]) {
      CHECK(q >= Rational(-1, 2));
      CHECK(q < Rational(1, 2));
    }
  }
  // Diameter 5/36 keeps every lift inside the disk of radius 1/2.
  CHECK(sec.max_squared_norm() < Rational(1, 4));
}

TEST_CASE("circle jiggle slopes") {
  auto T = torus_triangulation(1, 2);
  auto tower = iterate_fold(T, thom_pattern(1), 1);
  auto sec = jiggle_exp(tower, {1, ModelKind::Torus});
  std::set<Rational> slopes;
  for (const auto& e : tower.top()->simplices(1)) {
    auto pts = tower.top()->realize(e);
    const Rational dx = pts[1][0] - pts[0][0];
    const Rational dj = sec.at(e[1])[0] - sec.at(e[0])[0];
    slopes.insert(dj / dx);
  }
  // Oracle: sigma stretches the outer thirds by 3 and reverses the middle one by 3.
  CHECK(slopes == std::set<Rational>{Rational(2), Rational(-4)});
}

TEST_CASE("colored jiggle follows the coloring") {
  auto T = torus_triangulation(2, 2);
  auto tower = iterate_fold(T, thom_pattern(2), 1);
  auto target = default_target_simplex(2);
  auto sec = jiggle_colored(tower, target);
  for (std::size_t i = 0; i < sec.lift.size(); ++i)
    CHECK(sec.lift[i] == target.vertices[static_cast<std::size_t>(T->color(tower.to_base[1][i]))]);
  // Every top maps onto the full target.
  for (const auto& s : tower.top()->simplices(2)) {
    std::vector<RVec> pts;
    for (VertexId v : s) pts.push_back(sec.at(v));
    CHECK(rank(edge_matrix(pts)) == 2);
  }
  CHECK_THROWS_AS(jiggle_colored(tower, {{{0, 0}, {1, 0}, {2, 0}}}), InvalidParams);
}

TEST_CASE("exp jiggle needs small simplices") {
  auto box = box_triangulation(2, 1);
  auto tower = iterate_fold(box, thom_pattern(2), 1);
  CHECK_THROWS_AS(jiggle_exp(tower, {2, ModelKind::Box}), DiameterTooLarge);
  CHECK_THROWS_AS(jiggle_exp(tower, {1, ModelKind::Box}), DimensionMismatch);
}

TEST_CASE("section homotopy endpoints") {
  auto T = torus_triangulation(2, 2);
  auto tower = iterate_fold(T, thom_pattern(2), 2);
  const FlatModel model{2, ModelKind::Torus};
  auto sec = jiggle_exp(tower, model);
  auto start = section_homotopy_to_zero(tower, model, 1, 0);
  auto graph = sec.graph();
  REQUIRE(start->num_vertices() == graph->num_vertices());
  for (std::size_t i = 0; i < start->num_vertices(); ++i) CHECK(start->coords_at(i) == graph->coords_at(i));
  auto end = section_homotopy_to_zero(tower, model, 0, 1);
  CHECK(end->num_vertices() == T->num_vertices());
  for (std::size_t i = 0; i < end->num_vertices(); ++i) {
    const RVec& p = end->coords_at(i);
    CHECK(p[2] == 0);
    CHECK(p[3] == 0);
  }
  // The exp-image of the graph is sigma^r, which is non-degenerate on every top.
  CHECK(exp_image_full_rank(*start, 2) == start->num_simplices(2));
  auto mid = section_homotopy_to_zero(tower, model, Rational(1, 2), Rational(1, 4));
  // The top level unfolds first.
  CHECK(mid->num_simplices(2) == tower.complexes[2]->num_simplices(2));
  auto late = section_homotopy_to_zero(tower, model, Rational(1, 2), Rational(3, 4));
  CHECK(late->num_simplices(2) == tower.complexes[1]->num_simplices(2));
  CHECK_THROWS_AS(section_homotopy_to_zero(tower, model, 2, 0), InvalidTime);
}

TEST_CASE("Hausdorff profile decreases") {
  auto T = torus_triangulation(2, 2);
  auto samples = default_hausdorff_samples(*T);
  auto prof = hausdorff_profile(T, thom_pattern(2), 4, samples);
  REQUIRE(prof.size() == 4);
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] < prof[i - 1]);
  auto circle = torus_triangulation(1, 2);
  auto prof1 = hausdorff_profile(circle, thom_pattern(1), 3, default_hausdorff_samples(*circle));
  for (std::size_t i = 1; i < prof1.size(); ++i) CHECK(prof1[i] < prof1[i - 1]);
}
