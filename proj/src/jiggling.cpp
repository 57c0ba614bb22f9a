#include "thomjiggle/jiggling.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"

namespace thom {

namespace {

ComplexPtr kuhn_barycentric(int n, int m, bool periodic) {
  if (n < 1 || n > 3) throw UnsupportedDimension("grid triangulations support n in {1,2,3}");
  if (m < 1) throw InvalidParams("grid size m must be positive");
  if (periodic && m < 2)
    throw InvalidParams("m = 1 identifies distinct simplices of the torus onto the same vertex set; use m >= 2");
  const auto nu = static_cast<std::size_t>(n);
  std::unordered_map<RVec, VertexId, RVecHash> index;
  std::vector<VertexRecord> verts;
  std::map<VertexId, int> colors;
  auto vertex = [&](RVec p, int color) {
    if (periodic)
      for (auto& q : p) q = reduce_unit(q);
    auto [it, inserted] = index.emplace(p, static_cast<VertexId>(verts.size()));
    if (inserted) {
      verts.push_back({it->second, p});
      colors[it->second] = color;
    }
    return it->second;
  };
  std::vector<Simplex> tops;
  std::vector<int> cell(nu, 0);
  const Rational h(1, m);
  long cells = 1;
  for (int i = 0; i < n; ++i) cells *= m;
  for (long ci = 0; ci < cells; ++ci) {
    long rest = ci;
    for (std::size_t d = 0; d < nu; ++d) {
      cell[d] = static_cast<int>(rest % m);
      rest /= m;
    }
    std::vector<int> perm(nu);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<RVec> kuhn;
      RVec p(nu);
      for (std::size_t d = 0; d < nu; ++d) p[d] = h * cell[d];
      kuhn.push_back(p);
      for (int d : perm) {
        p[static_cast<std::size_t>(d)] += h;
        kuhn.push_back(p);
      }
      // Barycentric flags of this Kuhn simplex, computed in the cover.
      std::vector<int> order(nu + 1);
      std::iota(order.begin(), order.end(), 0);
      do {
        std::vector<int> face(order.begin(), order.end());
        Simplex flag;
        while (!face.empty()) {
          RVec b(nu, Rational(0));
          for (int v : face) b = b + kuhn[static_cast<std::size_t>(v)];
          b = Rational(1, static_cast<long>(face.size())) * b;
          flag.push_back(vertex(std::move(b), static_cast<int>(face.size()) - 1));
          face.erase(std::find(face.begin(), face.end(), order[nu + 1 - face.size()]));
        }
        std::sort(flag.begin(), flag.end());
        tops.push_back(std::move(flag));
      } while (std::next_permutation(order.begin(), order.end()));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  BuildOptions opt;
  opt.periodic_dims = periodic ? n : 0;
  return build_complex(n, std::move(verts), tops, std::move(colors), opt);
}

}  // namespace

Rational PLSection::max_squared_norm() const {
  Rational best = 0;
  for (const auto& v : lift) best = std::max(best, squared_norm(v));
  return best;
}

ComplexPtr PLSection::graph() const {
  std::vector<VertexRecord> verts;
  for (std::size_t i = 0; i < base->num_vertices(); ++i) {
    RVec p = base->coords_at(i);
    p.insert(p.end(), lift[i].begin(), lift[i].end());
    verts.push_back({base->vertex_ids()[i], std::move(p)});
  }
  return build_complex(base->ambient_dim() + static_cast<int>(lift.empty() ? 0 : lift[0].size()), std::move(verts),
                       base->maximal_simplices(), std::nullopt, {base->periodic_dims(), true});
}

ComplexPtr torus_triangulation(int n, int m) { return kuhn_barycentric(n, m, true); }
ComplexPtr box_triangulation(int n, int m) { return kuhn_barycentric(n, m, false); }

Rational max_squared_diameter(const SimplicialComplex& c) {
  Rational best = 0;
  for (const auto& s : c.maximal_simplices()) {
    auto pts = c.realize(s);
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::max(best, squared_norm(pts[a] - pts[b]));
  }
  return best;
}

PLSection jiggle_exp(const FoldingTower& tower, const FlatModel& model) {
  const ComplexPtr& T = tower.base();
  if (T->ambient_dim() != model.n) throw DimensionMismatch("model dimension differs from the triangulation");
  if (max_squared_diameter(*T) >= Rational(1, 4))
    throw DiameterTooLarge("every simplex of T must have diameter < 1/2");
  const ComplexPtr& top = tower.top();
  const bool torus = model.kind == ModelKind::Torus;
  PLSection sec;
  sec.base = top;
  sec.lift.resize(top->num_vertices());
  for (std::size_t i = 0; i < top->num_vertices(); ++i) {
    RVec d = T->coords(tower.to_base.back()[i]) - top->coords_at(i);
    if (torus)
      for (auto& q : d) q = wrap_half(q);
    sec.lift[i] = std::move(d);
  }
  return sec;
}

TargetSimplex default_target_simplex(int n) {
  TargetSimplex t;
  if (n == 2) {
    t.vertices = {RVec{Rational(-1, 2), Rational(-1, 3)}, RVec{Rational(1, 2), Rational(-1, 3)},
                  RVec{Rational(0), Rational(2, 3)}};
    return t;
  }
  // Standard simplex recentred at its barycenter.
  auto pts = standard_simplex_points(n);
  RVec g(static_cast<std::size_t>(n), Rational(0));
  for (const auto& p : pts) g = g + p;
  g = Rational(1, n + 1) * g;
  for (auto& p : pts) t.vertices.push_back(p - g);
  return t;
}

PLSection jiggle_colored(const FoldingTower& tower, const TargetSimplex& target,
                         const std::optional<std::map<VertexId, int>>& coloring) {
  const ComplexPtr& T = tower.base();
  const int n = T->dimension();
  if (static_cast<int>(target.vertices.size()) != n + 1)
    throw DimensionMismatch("target simplex needs n+1 vertices");
  for (const auto& v : target.vertices)
    if (static_cast<int>(v.size()) != n) throw DimensionMismatch("target simplex lives in R^n");
  if (rank(edge_matrix(target.vertices)) != static_cast<std::size_t>(n))
    throw InvalidParams("target simplex is degenerate");
  std::map<VertexId, int> colors;
  if (coloring) {
    colors = *coloring;
    for (std::size_t i = 0; i < T->num_simplices(1); ++i) {
      auto e = T->simplex(1, i);
      if (colors.at(e[0]) == colors.at(e[1])) throw ImproperColoring("edge joins two vertices of the same color");
    }
  } else {
    if (!T->has_coloring()) throw ImproperColoring("triangulation carries no coloring");
    colors = T->coloring_map();
  }
  const ComplexPtr& top = tower.top();
  PLSection sec;
  sec.base = top;
  sec.radius = 1;
  for (std::size_t i = 0; i < top->num_vertices(); ++i) {
    const int c = colors.at(tower.to_base.back()[i]);
    if (c < 0 || c > n) throw ImproperColoring("color " + std::to_string(c) + " outside 0..n");
    sec.lift.push_back(target.vertices[static_cast<std::size_t>(c)]);
  }
  return sec;
}

ComplexPtr section_homotopy_to_zero(const FoldingTower& tower, const FlatModel& model, const Rational& u,
                                    const Rational& s) {
  if (u < 0 || u > 1 || s < 0 || s > 1) throw InvalidTime("homotopy parameters must lie in [0,1]");
  const ComplexPtr& T = tower.base();
  const int r = tower.order();
  const bool torus = model.kind == ModelKind::Torus;
  // Active level L and local unfolding time within it.
  int L = r;
  Rational local = 0;
  if (r > 0) {
    Rational scaled = s * r;
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    L = r - static_cast<int>(k.get_si());
    local = scaled - Rational(k);
  }
  const ComplexPtr& C = tower.complexes[static_cast<std::size_t>(L)];
  const std::vector<VertexId>& to_base = tower.to_base[static_cast<std::size_t>(L)];
  std::vector<VertexRecord> verts;
  std::optional<UnfoldingSnapshot> snap;
  if (local != 0) snap = unfolding_homotopy(tower.pattern, local);
  for (std::size_t i = 0; i < C->num_vertices(); ++i) {
    RVec x = C->coords_at(i);
    RVec y;  // image point in the chart of x
    if (!snap) {
      y = T->coords(to_base[i]);
    } else {
      const ComplexPtr& P = tower.complexes[static_cast<std::size_t>(L - 1)];
      const VertexOrigin& o = tower.origins[static_cast<std::size_t>(L - 1)][i];
      const Simplex& parent = tower.parents[static_cast<std::size_t>(L - 1)][o.parent];
      const PatternData& pat = tower.pattern.levels[parent.size() - 1];
      // Snapshot positions of the pattern of the parent's dimension.
      UnfoldingSnapshot local_snap;
      if (static_cast<int>(parent.size()) - 1 == tower.pattern.n) {
        local_snap = *snap;
      } else {
        ThomPattern lower = pattern_from_data(pat, std::vector<PatternData>(tower.pattern.levels.begin(),
                                                                            tower.pattern.levels.begin() +
                                                                                static_cast<long>(parent.size() - 1)),
                                              tower.pattern.params);
        local_snap = unfolding_homotopy(lower, local);
      }
      const RVec& dom = local_snap.domain[o.pattern_vertex];
      const RVec& img = local_snap.image[o.pattern_vertex];
      auto geo = P->realize(parent);
      Simplex image_ids;
      for (VertexId v : parent) image_ids.push_back(tower.to_base[static_cast<std::size_t>(L - 1)][P->vertex_index(v)]);
      auto tgeo = T->realize(image_ids);
      x.assign(x.size(), Rational(0));
      y.assign(x.size(), Rational(0));
      for (std::size_t j = 0; j < parent.size(); ++j) {
        if (dom[j] != 0) x = x + dom[j] * geo[j];
        if (img[j] != 0) y = y + img[j] * tgeo[j];
      }
    }
    RVec d = y - x;
    if (torus)
      for (auto& q : d) q = wrap_half(q);
    RVec base = x + (1 - u) * d;
    RVec p = torus ? C->reduce(base) : base;
    RVec fiber = u * d;
    p.insert(p.end(), fiber.begin(), fiber.end());
    verts.push_back({C->vertex_ids()[i], std::move(p)});
  }
  return build_complex(2 * model.n, std::move(verts), C->maximal_simplices(), std::nullopt,
                       {torus ? model.n : 0, true});
}

std::size_t exp_image_full_rank(const SimplicialComplex& embedded, int n) {
  std::size_t ok = 0;
  const auto nu = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < embedded.num_simplices(n); ++i) {
    auto pts = embedded.realize(embedded.simplex(n, i));
    std::vector<RVec> img;
    for (const auto& p : pts) {
      RVec q(nu);
      for (std::size_t k = 0; k < nu; ++k) q[k] = p[k] + p[nu + k];
      img.push_back(std::move(q));
    }
    if (rank(edge_matrix(img)) == nu) ++ok;
  }
  return ok;
}

std::vector<Rational> hausdorff_profile(const ComplexPtr& T, const ThomPattern& p, int r_max,
                                        const std::vector<HausdorffSample>& samples, ExecPolicy policy) {
  const auto tops = T->simplices(T->dimension());
  const std::size_t n = static_cast<std::size_t>(T->dimension());
  std::vector<std::vector<Rational>> per(samples.size());
  parallel_for(
      samples.size(),
      [&](std::size_t si) {
        const HausdorffSample& smp = samples[si];
        const Simplex& tau = tops.at(smp.top);
        auto tau_geo = T->realize(tau);  // chart of tau; all descendants live here
        RVec x(n, Rational(0));
        for (std::size_t j = 0; j <= n; ++j) x = x + smp.bary[j] * tau_geo[j];
        std::vector<RVec> fiber;  // {x} x (tau - x)
        for (const auto& t : tau_geo) {
          RVec q = x;
          RVec d = t - x;
          q.insert(q.end(), d.begin(), d.end());
          fiber.push_back(std::move(q));
        }
        // Current simplex: coordinates and index of the T-vertex each vertex folds onto.
        std::vector<RVec> cur = tau_geo;
        std::vector<std::size_t> img(n + 1);
        std::iota(img.begin(), img.end(), 0);
        const PatternData& pat = p.data();
        for (int r = 1; r <= r_max; ++r) {
          std::vector<RVec> child_pts;
          std::vector<std::size_t> child_img;
          for (std::size_t k = 0; k < pat.bary.size(); ++k) {
            RVec q(n, Rational(0));
            for (std::size_t j = 0; j <= n; ++j)
              if (pat.bary[k][j] != 0) q = q + pat.bary[k][j] * cur[j];
            child_pts.push_back(std::move(q));
            child_img.push_back(img[static_cast<std::size_t>(pat.sigma[k])]);
          }
          bool found = false;
          for (const auto& top : pat.tops) {
            std::vector<RVec> geo;
            for (int v : top) geo.push_back(child_pts[static_cast<std::size_t>(v)]);
            auto lam = barycentric(geo, x);
            if (!lam || std::any_of(lam->begin(), lam->end(), [](const Rational& q) { return q < 0; })) continue;
            // Next identification: by the id of the T-vertex each vertex folds onto.
            std::vector<int> order(top.begin(), top.end());
            std::sort(order.begin(), order.end(), [&](int a, int b) {
              return tau[child_img[static_cast<std::size_t>(a)]] < tau[child_img[static_cast<std::size_t>(b)]];
            });
            std::vector<RVec> next;
            std::vector<std::size_t> next_img;
            for (int v : order) {
              next.push_back(child_pts[static_cast<std::size_t>(v)]);
              next_img.push_back(child_img[static_cast<std::size_t>(v)]);
            }
            cur = std::move(next);
            img = std::move(next_img);
            found = true;
            break;
          }
          if (!found) throw InvalidParams("sample point escaped the pattern (pattern does not tile)");
          std::vector<RVec> jig;
          for (std::size_t j = 0; j <= n; ++j) {
            RVec q = cur[j];
            RVec d = tau_geo[img[j]] - cur[j];
            q.insert(q.end(), d.begin(), d.end());
            jig.push_back(std::move(q));
          }
          per[si].push_back(squared_hausdorff(jig, fiber));
        }
      },
      policy);
  std::vector<Rational> out(static_cast<std::size_t>(r_max), Rational(0));
  for (const auto& v : per)
    for (std::size_t r = 0; r < v.size(); ++r) out[r] = std::max(out[r], v[r]);
  return out;
}

std::vector<HausdorffSample> default_hausdorff_samples(const SimplicialComplex& T) {
  const std::size_t n = static_cast<std::size_t>(T.dimension());
  std::vector<RVec> pts;
  // Generic interior points (avoid pattern faces): small-prime weights.
  const std::vector<std::vector<long>> weights = {{1, 2, 4, 8}, {3, 5, 7, 11}, {13, 2, 5, 3}, {1, 1, 1, 1},
                                                  {7, 1, 3, 2}, {2, 9, 1, 5}};
  for (const auto& w : weights) {
    RVec b(n + 1);
    long total = 0;
    for (std::size_t j = 0; j <= n; ++j) total += w[j];
    for (std::size_t j = 0; j <= n; ++j) b[j] = Rational(w[j], total);
    pts.push_back(std::move(b));
  }
  std::vector<HausdorffSample> out;
  for (std::size_t t = 0; t < T.num_simplices(T.dimension()); ++t)
    for (const auto& b : pts) out.push_back({t, b});
  return out;
}

}  // namespace thom
