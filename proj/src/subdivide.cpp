#include <algorithm>
#include <numeric>
#include <map>
#include <unordered_map>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"
#include "thomjiggle/subdivision.hpp"

namespace thom {

Subdivision thom_subdivide(const ComplexPtr& T, const ThomPattern& p, const std::vector<VertexId>* order_key,
                           ExecPolicy policy) {
  if (T->dimension() != p.n)
    throw DimensionMismatch("complex of dimension " + std::to_string(T->dimension()) + " needs a pattern of that dimension, got " +
                            std::to_string(p.n));
  Subdivision out;
  for (const auto& m : T->maximal_simplices()) {
    Simplex ordered = m;
    if (order_key) {
      std::sort(ordered.begin(), ordered.end(), [&](VertexId a, VertexId b) {
        return (*order_key)[T->vertex_index(a)] < (*order_key)[T->vertex_index(b)];
      });
    }
    out.parents.push_back(std::move(ordered));
  }

  // Per-parent pattern placement (kernel); merged below in parent order.
  struct Placed {
    std::vector<RVec> points;
  };
  std::vector<Placed> placed(out.parents.size());
  parallel_for(
      out.parents.size(),
      [&](std::size_t i) {
        const Simplex& par = out.parents[i];
        const PatternData& pat = p.levels[par.size() - 1];
        auto geo = T->realize(par);
        auto& pts = placed[i].points;
        pts.reserve(pat.bary.size());
        for (const auto& b : pat.bary) {
          RVec x(static_cast<std::size_t>(T->ambient_dim()), Rational(0));
          for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) x = x + b[j] * geo[j];
          pts.push_back(T->reduce(std::move(x)));
        }
      },
      policy);

  std::unordered_map<RVec, VertexId, RVecHash> index;
  std::vector<VertexRecord> verts;
  std::vector<VertexId> images;
  VertexId next = 0;
  for (std::size_t i = 0; i < T->num_vertices(); ++i) {
    const VertexId v = T->vertex_ids()[i];
    index.emplace(T->coords_at(i), v);
    verts.push_back({v, T->coords_at(i)});
    next = std::max(next, static_cast<VertexId>(v + 1));
  }
  std::unordered_map<VertexId, VertexId> image_of;
  std::unordered_map<VertexId, VertexOrigin> origin_of;
  for (VertexId v : T->vertex_ids()) image_of[v] = v;
  std::vector<Simplex> tops;
  for (std::size_t i = 0; i < out.parents.size(); ++i) {
    const Simplex& par = out.parents[i];
    const PatternData& pat = p.levels[par.size() - 1];
    std::vector<VertexId> ids(pat.bary.size());
    for (std::size_t k = 0; k < pat.bary.size(); ++k) {
      const VertexId img = par[static_cast<std::size_t>(pat.sigma[k])];
      auto [it, inserted] = index.emplace(placed[i].points[k], next);
      if (inserted) {
        verts.push_back({next, placed[i].points[k]});
        image_of[next] = img;
        ++next;
      } else if (image_of.at(it->second) != img) {
        throw GluingConflict("vertex " + std::to_string(it->second) + " folds onto both " +
                             std::to_string(image_of.at(it->second)) + " and " + std::to_string(img));
      }
      ids[k] = it->second;
      origin_of.emplace(it->second, VertexOrigin{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k)});
    }
    for (const auto& top : pat.tops) {
      Simplex s;
      for (int k : top) s.push_back(ids[static_cast<std::size_t>(k)]);
      std::sort(s.begin(), s.end());
      tops.push_back(std::move(s));
    }
  }
  out.complex = build_complex(T->ambient_dim(), std::move(verts), tops, std::nullopt, {T->periodic_dims(), true});
  std::vector<VertexId> img_table(out.complex->num_vertices());
  out.origin.resize(out.complex->num_vertices());
  for (std::size_t i = 0; i < out.complex->num_vertices(); ++i) {
    const VertexId v = out.complex->vertex_ids()[i];
    img_table[i] = image_of.at(v);
    out.origin[i] = origin_of.at(v);
  }
  out.sigma = make_simplicial_map(out.complex, T, std::move(img_table));
  return out;
}

SimplicialMap FoldingTower::composed() const {
  return SimplicialMap{top(), base(), to_base.back()};
}

void extend_fold(FoldingTower& tower, ExecPolicy policy) {
  const ComplexPtr prev = tower.complexes.back();
  // Identification order: sigma^{i-1} image in T (ascending id at the first level).
  const std::vector<VertexId>& key = tower.to_base.back();
  Subdivision sub = thom_subdivide(prev, tower.pattern, &key, policy);
  std::vector<VertexId> to_base(sub.complex->num_vertices());
  for (std::size_t v = 0; v < to_base.size(); ++v) to_base[v] = key[prev->vertex_index(sub.sigma.images[v])];
  tower.complexes.push_back(sub.complex);
  tower.sigmas.push_back(std::move(sub.sigma));
  tower.to_base.push_back(std::move(to_base));
  tower.parents.push_back(std::move(sub.parents));
  tower.origins.push_back(std::move(sub.origin));
}

FoldingTower iterate_fold(const ComplexPtr& T, const ThomPattern& p, int r, ExecPolicy policy) {
  if (r < 0) throw InvalidParams("fold order must be non-negative");
  FoldingTower tower;
  tower.pattern = p;
  tower.complexes.push_back(T);
  tower.to_base.push_back(T->vertex_ids());
  for (int i = 1; i <= r; ++i) extend_fold(tower, policy);
  return tower;
}

FoldReport verify_fold(const FoldingTower& tower, ExecPolicy policy) {
  FoldReport rep;
  const ComplexPtr& T = tower.base();
  const int n = T->dimension();
  for (const auto& c : tower.complexes) rep.top_counts.push_back(c->num_simplices(n));
  rep.multiplicative = true;
  std::size_t expect = rep.top_counts[0];
  for (std::size_t i = 1; i < rep.top_counts.size(); ++i) {
    expect *= tower.pattern.top_count();
    rep.multiplicative = rep.multiplicative && rep.top_counts[i] == expect;
  }

  const ComplexPtr& top = tower.top();
  const auto& images = tower.to_base.back();
  rep.tops = top->num_simplices(n);
  std::vector<char> ok(rep.tops, 0);
  parallel_for(
      rep.tops,
      [&](std::size_t i) {
        const auto s = top->simplex(n, i);
        Simplex img;
        for (VertexId v : s) img.push_back(images[top->vertex_index(v)]);
        std::sort(img.begin(), img.end());
        if (std::adjacent_find(img.begin(), img.end()) != img.end() || !T->contains(img)) return;
        const auto n_sz = static_cast<std::size_t>(n);
        ok[i] = rank(edge_matrix(top->realize(s))) == n_sz && rank(edge_matrix(T->realize(img))) == n_sz;
      },
      policy);
  rep.bijective = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));

  std::map<RVec, VertexId> by_coords;
  for (std::size_t i = 0; i < top->num_vertices(); ++i) by_coords.emplace(top->coords_at(i), top->vertex_ids()[i]);
  rep.fixes_base_vertices = true;
  for (std::size_t i = 0; i < T->num_vertices(); ++i) {
    auto it = by_coords.find(T->coords_at(i));
    if (it == by_coords.end() || images[top->vertex_index(it->second)] != T->vertex_ids()[i]) rep.fixes_base_vertices = false;
  }
  rep.pass = rep.multiplicative && rep.bijective == rep.tops && rep.fixes_base_vertices;
  return rep;
}

Simplex staircase_order(std::span<const VertexId> s, const SimplicialComplex& c, const std::vector<std::size_t>& rank) {
  Simplex w(s.begin(), s.end());
  std::sort(w.begin(), w.end(), [&](VertexId a, VertexId b) { return rank[c.vertex_index(a)] < rank[c.vertex_index(b)]; });
  return w;
}

ComplexPtr whitney_prism_subdivide(const ComplexPtr& base, const Rational& t0, const Rational& t1,
                                   const std::vector<VertexId>& vertex_order) {
  if (!(t0 < t1)) throw InvalidParams("need t0 < t1");
  const std::size_t V = base->num_vertices();
  if (vertex_order.size() != V) throw InvalidParams("vertex order must list every vertex once");
  std::vector<std::size_t> rank(V, V);
  for (std::size_t i = 0; i < V; ++i) {
    const std::size_t idx = base->vertex_index(vertex_order[i]);
    if (rank[idx] != V) throw InvalidParams("vertex order repeats a vertex");
    rank[idx] = i;
  }
  std::vector<VertexRecord> verts;
  for (std::size_t i = 0; i < V; ++i) {
    RVec lo = base->coords_at(i), hi = base->coords_at(i);
    lo.push_back(t0);
    hi.push_back(t1);
    verts.push_back({static_cast<VertexId>(i), std::move(lo)});
    verts.push_back({static_cast<VertexId>(V + i), std::move(hi)});
  }
  std::vector<Simplex> tops;
  for (const auto& m : base->maximal_simplices()) {
    Simplex w = staircase_order(m, *base, rank);
    for (std::size_t j = 0; j < w.size(); ++j) {
      Simplex s;
      for (std::size_t q = 0; q <= j; ++q) s.push_back(static_cast<VertexId>(base->vertex_index(w[q])));
      for (std::size_t q = j; q < w.size(); ++q) s.push_back(static_cast<VertexId>(V + base->vertex_index(w[q])));
      std::sort(s.begin(), s.end());
      tops.push_back(std::move(s));
    }
  }
  return build_complex(base->ambient_dim() + 1, std::move(verts), tops, std::nullopt, {base->periodic_dims(), true});
}

}  // namespace thom
