#include <algorithm>

#include "thomjiggle/complex.hpp"
#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/lp.hpp"

namespace thom {

namespace {

struct Box {
  RVec lo, hi;
};

Box bounding_box(const std::vector<RVec>& pts) {
  Box b{pts[0], pts[0]};
  for (const auto& p : pts)
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] < b.lo[k]) b.lo[k] = p[k];
      if (p[k] > b.hi[k]) b.hi[k] = p[k];
    }
  return b;
}

bool boxes_meet(const Box& a, const Box& b) {
  for (std::size_t k = 0; k < a.lo.size(); ++k)
    if (a.hi[k] < b.lo[k] || b.hi[k] < a.lo[k]) return false;
  return true;
}

// Maximal weight that a common point of S and S' puts on the vertices of S
// outside the shared face; positive means the intersection is not that face.
std::optional<RVec> improper_witness(const std::vector<RVec>& s, const std::vector<char>& shared_in_s,
                                     const std::vector<RVec>& t) {
  const std::size_t d = s[0].size();
  const std::size_t ns = s.size(), nt = t.size();
  LinearProgram lp;
  lp.num_vars = ns + nt;
  lp.objective.assign(lp.num_vars, Rational(0));
  for (std::size_t i = 0; i < ns; ++i)
    if (!shared_in_s[i]) lp.objective[i] = 1;
  for (std::size_t k = 0; k < d; ++k) {
    RVec row(lp.num_vars);
    for (std::size_t i = 0; i < ns; ++i) row[i] = s[i][k];
    for (std::size_t j = 0; j < nt; ++j) row[ns + j] = -t[j][k];
    lp.eq_rows.push_back(std::move(row));
    lp.eq_rhs.push_back(0);
  }
  RVec a(lp.num_vars), b(lp.num_vars);
  for (std::size_t i = 0; i < ns; ++i) a[i] = 1;
  for (std::size_t j = 0; j < nt; ++j) b[ns + j] = 1;
  lp.eq_rows.push_back(a);
  lp.eq_rhs.push_back(1);
  lp.eq_rows.push_back(b);
  lp.eq_rhs.push_back(1);
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal || res.value <= 0) return std::nullopt;
  RVec p(d, Rational(0));
  for (std::size_t i = 0; i < ns; ++i) p = p + res.x[i] * s[i];
  return p;
}

}  // namespace

TilingReport tiling_check(const ComplexPtr& c, const std::vector<RVec>& region) {
  const int n = c->ambient_dim();
  if (static_cast<int>(region.size()) != n + 1 || c->dimension() != n)
    throw DimensionMismatch("tiling_check needs a top-dimensional complex and an n-simplex region in R^n");
  if (c->periodic_dims() != 0) throw DimensionMismatch("tiling_check is defined for non-periodic complexes");
  TilingReport rep;
  rep.region_volume = simplex_volume(region);
  if (rep.region_volume == 0) throw DimensionMismatch("region simplex is degenerate");

  std::vector<Simplex> tops;
  for (const auto& s : c->maximal_simplices()) {
    if (static_cast<int>(s.size()) != n + 1) {
      rep.failure = "lower-dimensional maximal simplex present";
      rep.overlap = std::make_pair(s, s);
      return rep;
    }
    tops.push_back(s);
  }
  std::vector<std::vector<RVec>> geo;
  std::vector<Box> boxes;
  rep.volume_sum = 0;
  for (const auto& s : tops) {
    geo.push_back(c->realize(s));
    boxes.push_back(bounding_box(geo.back()));
    rep.volume_sum += simplex_volume(geo.back());
  }
  for (std::size_t v = 0; v < c->num_vertices(); ++v) {
    auto lam = barycentric(region, c->coords_at(v));
    if (!lam || std::any_of(lam->begin(), lam->end(), [](const Rational& q) { return q < 0; })) {
      rep.failure = "vertex " + std::to_string(c->vertex_ids()[v]) + " lies outside the region";
      rep.witness = c->coords_at(v);
      return rep;
    }
  }
  if (rep.volume_sum != rep.region_volume) {
    rep.failure = "volume sum " + to_string(rep.volume_sum) + " differs from region volume " +
                  to_string(rep.region_volume);
  }
  for (std::size_t a = 0; a < tops.size(); ++a) {
    for (std::size_t b = a + 1; b < tops.size(); ++b) {
      if (!boxes_meet(boxes[a], boxes[b])) continue;
      ++rep.pairs_checked;
      std::vector<char> shared(tops[a].size(), 0);
      for (std::size_t i = 0; i < tops[a].size(); ++i)
        shared[i] = std::binary_search(tops[b].begin(), tops[b].end(), tops[a][i]) ? 1 : 0;
      if (auto w = improper_witness(geo[a], shared, geo[b])) {
        rep.failure = "simplices intersect outside a common face";
        rep.overlap = std::make_pair(tops[a], tops[b]);
        rep.witness = *w;
        return rep;
      }
    }
  }
  rep.pass = rep.failure.empty();
  return rep;
}

}  // namespace thom
