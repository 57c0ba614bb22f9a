#include <algorithm>
#include <numeric>

#include "thomjiggle/collapse.hpp"
#include "thomjiggle/errors.hpp"

namespace thom {

VertexId PrismComplex::vertex(std::size_t slice, VertexId base_vertex) const {
  return static_cast<VertexId>(slice * source->num_vertices() + source->vertex_index(base_vertex));
}

std::size_t PrismComplex::slice_of(VertexId v) const { return v / source->num_vertices(); }

VertexId PrismComplex::base_vertex(VertexId v) const { return source->vertex_ids()[v % source->num_vertices()]; }

PrismComplex prism_complex(const ComplexPtr& T, const std::vector<Rational>& times, std::vector<VertexId> order) {
  if (times.size() < 2) throw InvalidParams("time grid needs at least two entries");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k - 1] < times[k])) throw InvalidParams("time grid must be strictly increasing");
  const std::size_t V = T->num_vertices();
  if (order.empty()) order = T->vertex_ids();
  if (order.size() != V) throw InvalidParams("vertex order must list every vertex once");
  std::vector<std::size_t> rank(V, V);
  for (std::size_t i = 0; i < V; ++i) {
    const std::size_t idx = T->vertex_index(order[i]);
    if (rank[idx] != V) throw InvalidParams("vertex order repeats a vertex");
    rank[idx] = i;
  }

  std::vector<VertexRecord> verts;
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t i = 0; i < V; ++i) {
      RVec p = T->coords_at(i);
      p.push_back(times[k]);
      verts.push_back({static_cast<VertexId>(k * V + i), std::move(p)});
    }

  const auto bases = T->maximal_simplices();
  std::vector<Simplex> tops;
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    for (const auto& m : bases) {
      const Simplex w = staircase_order(m, *T, rank);
      for (std::size_t j = 0; j < w.size(); ++j) {
        Simplex s;
        for (std::size_t q = 0; q <= j; ++q) s.push_back(static_cast<VertexId>(k * V + T->vertex_index(w[q])));
        for (std::size_t q = j; q < w.size(); ++q) s.push_back(static_cast<VertexId>((k + 1) * V + T->vertex_index(w[q])));
        std::sort(s.begin(), s.end());
        tops.push_back(std::move(s));
      }
    }

  PrismComplex pc;
  pc.source = T;
  pc.times = times;
  pc.order = std::move(order);
  pc.complex = build_complex(T->ambient_dim() + 1, std::move(verts), tops, std::nullopt, {T->periodic_dims(), true});

  const int D = pc.complex->dimension();
  const int d = T->dimension();
  for (std::size_t i = 0; i < pc.complex->num_simplices(D); ++i) {
    const auto s = pc.complex->simplex(D, i);
    std::size_t slab = pc.slice_of(s[0]);
    Simplex b;
    for (VertexId v : s) {
      slab = std::min(slab, pc.slice_of(v));
      b.push_back(pc.base_vertex(v));
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    pc.slab_of_top.push_back(slab);
    pc.base_of_top.push_back(T->find(b).value_or(0));
    if (static_cast<int>(b.size()) != d + 1) throw NotSimplicial("prism top does not project onto a base top");
  }
  return pc;
}

Subcomplex prism_slice(const PrismComplex& pc, std::size_t k) {
  if (k >= pc.slices()) throw InvalidParams("slice index out of range");
  Subcomplex out;
  out.parent = pc.complex;
  for (int dim = 0; dim <= pc.source->dimension(); ++dim)
    for (const auto& s : pc.source->simplices(dim)) {
      Simplex t;
      for (VertexId v : s) t.push_back(pc.vertex(k, v));
      std::sort(t.begin(), t.end());
      out.simplices.push_back(std::move(t));
    }
  std::stable_sort(out.simplices.begin(), out.simplices.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

bool slice_matches_source(const PrismComplex& pc, std::size_t k) {
  const Subcomplex slice = prism_slice(pc, k);
  for (const auto& s : slice.simplices)
    if (!pc.complex->contains(s)) return false;
  // Direct check: every prism simplex inside slice k comes from T, with matching coordinates.
  const std::size_t V = pc.source->num_vertices();
  std::size_t inside = 0;
  for (int dim = 0; dim <= pc.complex->dimension(); ++dim)
    for (std::size_t i = 0; i < pc.complex->num_simplices(dim); ++i) {
      const auto s = pc.complex->simplex(dim, i);
      if (!std::all_of(s.begin(), s.end(), [&](VertexId v) { return pc.slice_of(v) == k; })) continue;
      ++inside;
      Simplex b;
      for (VertexId v : s) b.push_back(pc.base_vertex(v));
      std::sort(b.begin(), b.end());
      if (!pc.source->contains(b)) return false;
    }
  if (inside != slice.simplices.size()) return false;
  for (std::size_t i = 0; i < V; ++i) {
    RVec p = pc.complex->coords(static_cast<VertexId>(k * V + i));
    if (p.back() != pc.times[k]) return false;
    p.pop_back();
    if (p != pc.source->coords_at(i)) return false;
  }
  // Independent check by search.
  const ComplexPtr mat = slice.materialize();
  return find_isomorphism(*mat, *pc.source).has_value();
}

EmbeddedPrism embed_prism(const PrismComplex& pc, const std::function<RVec(std::size_t, std::size_t)>& lift) {
  const std::size_t V = pc.source->num_vertices();
  const int d = pc.source->ambient_dim();
  int n = -1;
  std::vector<VertexRecord> verts;
  for (std::size_t k = 0; k < pc.slices(); ++k)
    for (std::size_t i = 0; i < V; ++i) {
      RVec v = lift(k, i);
      if (n < 0) n = static_cast<int>(v.size());
      if (static_cast<int>(v.size()) != n) throw DimensionMismatch("lifts have different fibre dimensions");
      RVec p = pc.source->coords_at(i);
      p.insert(p.end(), v.begin(), v.end());
      p.push_back(pc.times[k]);
      verts.push_back({static_cast<VertexId>(k * V + i), std::move(p)});
    }
  EmbeddedPrism ep;
  ep.prism = pc;
  ep.fiber_dim = n;
  ep.embedded = build_complex(d + n + 1, std::move(verts), pc.complex->maximal_simplices(), std::nullopt,
                              {pc.source->periodic_dims(), true});
  return ep;
}

EmbeddedPrism embed_prism(const PrismComplex& pc, const PLSection& section) {
  if (section.base->num_vertices() != pc.source->num_vertices() ||
      section.base->vertex_ids() != pc.source->vertex_ids())
    throw DimensionMismatch("section lives over a different complex");
  return embed_prism(pc, [&](std::size_t, std::size_t i) { return section.lift[i]; });
}

}  // namespace thom
