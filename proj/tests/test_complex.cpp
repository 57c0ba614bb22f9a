#include <doctest.h>

#include <random>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/jiggling.hpp"

using namespace thom;

namespace {

ComplexPtr two_triangles() {
  return build_complex(2, {{0, {0, 0}}, {1, {1, 0}}, {2, {0, 1}}, {3, {1, 1}}}, {{0, 1, 2}, {1, 2, 3}});
}

}  // namespace

TEST_CASE("build_complex closes faces and counts") {
  auto c = two_triangles();
  CHECK(c->num_vertices() == 4);
  CHECK(c->num_simplices(1) == 5);
  CHECK(c->num_simplices(2) == 2);
  CHECK(c->euler_characteristic() == 1);
  CHECK(c->contains(Simplex{1, 2}));
  CHECK_FALSE(c->contains(Simplex{0, 3}));
  CHECK(c->maximal_simplices().size() == 2);
  CHECK(is_face_closed({{0}, {1}, {0, 1}}));
  CHECK_FALSE(is_face_closed({{0, 1}}));
}

TEST_CASE("build_complex rejects bad input") {
  CHECK_THROWS_AS(build_complex(2, {{0, {0, 0}}, {1, {1, 1}}, {2, {2, 2}}}, {{0, 1, 2}}), DegenerateSimplex);
  CHECK_THROWS_AS(build_complex(1, {{0, {0}}, {1, {1}}}, {{0, 5}}), DanglingVertexId);
  CHECK_THROWS_AS(build_complex(1, {{0, {0}}, {1, {1}}}, {{0, 1}}, std::map<VertexId, int>{{0, 0}, {1, 0}}),
                  ImproperColoring);
  CHECK_THROWS_AS(build_complex(1, {{0, {0}}, {1, {Rational(1, 2)}}}, {{0, 1}}, std::nullopt, {1, true}), NotSimplicial);
  CHECK_THROWS_AS(build_complex(1, {{0, {0}}, {1, {1}}}, {{0, 0}}), NotSimplicial);
}

TEST_CASE("periodic charts wrap coordinate differences") {
  auto c = build_complex(1, {{0, {Rational(7, 8)}}, {1, {Rational(1, 8)}}}, {{0, 1}}, std::nullopt, {1, true});
  const auto pts = c->realize(Simplex{0, 1});
  CHECK(pts[1][0] - pts[0][0] == Rational(1, 4));
}

TEST_CASE("star and link") {
  auto c = two_triangles();
  auto [star, link] = star_link(c, {1});
  CHECK(star.count(2) == 2);
  CHECK(link.count(1) == 2);  // edges 02 and 23
  CHECK(link.count(0) == 3);
  auto [estar, elink] = star_link(c, {1, 2});
  CHECK(elink.count(0) == 2);
  CHECK_THROWS_AS(star_link(c, {0, 3}), UnknownSimplex);
}

TEST_CASE("barycentric subdivision") {
  auto [sd, map] = barycentric_subdivide(standard_simplex(2));
  CHECK(sd->num_simplices(2) == 6);
  CHECK(sd->num_vertices() == 7);
  CHECK(sd->has_coloring());
  CHECK(tiling_check(sd, standard_simplex_points(2)).pass);
  CHECK(map.target->num_vertices() == 3);
}

TEST_CASE("tiling check finds overlaps and gaps") {
  CHECK(tiling_check(two_triangles(), {{0, 0}, {2, 0}, {0, 2}}).pass == false);
  auto overlap = build_complex(2, {{0, {0, 0}}, {1, {1, 0}}, {2, {0, 1}}, {3, {Rational(1, 2), Rational(1, 2)}}},
                               {{0, 1, 2}, {0, 1, 3}});
  const auto rep = tiling_check(overlap, standard_simplex_points(2));
  CHECK_FALSE(rep.pass);
}

TEST_CASE("find_isomorphism on relabeled complexes") {
  auto c = torus_triangulation(2, 2);
  std::vector<VertexId> perm(c->num_vertices());
  std::iota(perm.begin(), perm.end(), 100);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  std::vector<VertexRecord> verts;
  for (std::size_t i = 0; i < c->num_vertices(); ++i) verts.push_back({perm[i], c->coords_at(i)});
  std::vector<Simplex> tops;
  for (const auto& s : c->maximal_simplices()) {
    Simplex t;
    for (VertexId v : s) t.push_back(perm[c->vertex_index(v)]);
    std::sort(t.begin(), t.end());
    tops.push_back(t);
  }
  auto d = build_complex(2, verts, tops, std::nullopt, {2, true});
  auto iso = find_isomorphism(*c, *d);
  REQUIRE(iso);
  for (const auto& s : c->simplices(2)) {
    Simplex t;
    for (VertexId v : s) t.push_back(iso->at(v));
    std::sort(t.begin(), t.end());
    CHECK(d->contains(t));
  }
  CHECK_FALSE(find_isomorphism(*c, *two_triangles()));
}

TEST_CASE("simplicial maps compose") {
  auto c = two_triangles();
  auto id = identity_map(c);
  auto both = compose(id, id);
  CHECK(both.images == id.images);
  auto fold = make_simplicial_map(c, standard_simplex(2), {0, 1, 2, 0});
  CHECK(fold.image(Simplex{1, 2, 3}) == Simplex{0, 1, 2});
  CHECK_THROWS(make_simplicial_map(c, standard_simplex(1), {0, 1, 1, 5}));
}

TEST_CASE("subcomplex closure") {
  auto c = two_triangles();
  auto sub = make_subcomplex(c, {{1, 2, 3}});
  CHECK(sub.count(0) == 3);
  CHECK(sub.count(1) == 3);
  CHECK(sub.contains({2, 3}));
  CHECK(sub.materialize()->num_simplices(2) == 1);
  CHECK_THROWS_AS(make_subcomplex(c, {{0, 3}}), UnknownSimplex);
}

TEST_CASE("model triangulations") {
  auto t = torus_triangulation(2, 2);
  CHECK(t->num_simplices(2) == 48);
  CHECK(t->euler_characteristic() == 0);
  CHECK(max_squared_diameter(*t) == Rational(5, 36));
  auto circle = torus_triangulation(1, 2);
  CHECK(circle->num_simplices(1) == 4);
  CHECK(circle->euler_characteristic() == 0);
  auto box = box_triangulation(2, 1);
  CHECK(tiling_check(box, {{0, 0}, {2, 0}, {0, 2}}).pass == false);
  CHECK(box->euler_characteristic() == 1);
}
