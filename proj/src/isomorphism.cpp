#include <algorithm>
#include <set>

#include "thomjiggle/complex.hpp"
#include "thomjiggle/errors.hpp"

namespace thom {

namespace {

struct Graph {
  std::vector<VertexId> ids;
  std::vector<std::vector<int>> signature;  // per vertex: label, then simplex counts per dimension
  std::vector<std::vector<char>> adjacent;
};

Graph make_graph(const SimplicialComplex& c, const std::optional<std::map<VertexId, int>>& labels) {
  Graph g;
  g.ids = c.vertex_ids();
  const std::size_t n = g.ids.size();
  const int dim = c.dimension();
  g.signature.assign(n, std::vector<int>(static_cast<std::size_t>(dim + 2), 0));
  g.adjacent.assign(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) g.signature[i][0] = labels ? labels->at(g.ids[i]) : 0;
  for (int k = 0; k <= dim; ++k)
    for (std::size_t i = 0; i < c.num_simplices(k); ++i)
      for (VertexId v : c.simplex(k, i)) ++g.signature[c.vertex_index(v)][static_cast<std::size_t>(k + 1)];
  for (std::size_t i = 0; i < c.num_simplices(1); ++i) {
    auto e = c.simplex(1, i);
    const auto a = c.vertex_index(e[0]), b = c.vertex_index(e[1]);
    g.adjacent[a][b] = g.adjacent[b][a] = 1;
  }
  return g;
}

struct Search {
  const SimplicialComplex& a;
  const SimplicialComplex& b;
  const Graph& ga;
  const Graph& gb;
  std::vector<std::size_t> order;
  std::vector<long> map;   // a-index -> b-index
  std::vector<char> used;  // b-index

  bool full_check() const {
    for (int k = 2; k <= a.dimension(); ++k)
      for (std::size_t i = 0; i < a.num_simplices(k); ++i) {
        Simplex img;
        for (VertexId v : a.simplex(k, i)) img.push_back(gb.ids[static_cast<std::size_t>(map[a.vertex_index(v)])]);
        std::sort(img.begin(), img.end());
        if (!b.contains(img)) return false;
      }
    return true;
  }

  bool recurse(std::size_t depth) {
    if (depth == order.size()) return full_check();
    const std::size_t va = order[depth];
    for (std::size_t vb = 0; vb < gb.ids.size(); ++vb) {
      if (used[vb] || ga.signature[va] != gb.signature[vb]) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const std::size_t ua = order[d];
        const auto ub = static_cast<std::size_t>(map[ua]);
        if (ga.adjacent[va][ua] != gb.adjacent[vb][ub]) ok = false;
      }
      if (!ok) continue;
      map[va] = static_cast<long>(vb);
      used[vb] = 1;
      if (recurse(depth + 1)) return true;
      used[vb] = 0;
      map[va] = -1;
    }
    return false;
  }
};

}  // namespace

std::optional<std::map<VertexId, VertexId>> find_isomorphism(const SimplicialComplex& a, const SimplicialComplex& b,
                                                             const IsomorphismOptions& options) {
  if (a.total_simplices() > options.simplex_cap || b.total_simplices() > options.simplex_cap)
    throw SizeLimitExceeded("isomorphism search is capped at " + std::to_string(options.simplex_cap) +
                            " simplices");
  if (a.dimension() != b.dimension()) return std::nullopt;
  for (int k = 0; k <= a.dimension(); ++k)
    if (a.num_simplices(k) != b.num_simplices(k)) return std::nullopt;
  if (options.labels_a.has_value() != options.labels_b.has_value())
    throw InvalidParams("labels must be given for both complexes or neither");
  const Graph ga = make_graph(a, options.labels_a);
  const Graph gb = make_graph(b, options.labels_b);
  {
    auto sa = ga.signature, sb = gb.signature;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  const std::size_t n = ga.ids.size();
  // Degree-descending order, growing along edges so adjacency prunes early.
  auto degree = [&](std::size_t v) { return ga.signature[v].size() > 2 ? ga.signature[v][2] : 0; };
  std::vector<std::size_t> order;
  std::vector<char> placed(n, 0);
  while (order.size() < n) {
    long best = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      bool touches = order.empty();
      for (std::size_t u : order)
        if (ga.adjacent[v][u]) touches = true;
      if (!touches) continue;
      if (best < 0 || degree(v) > degree(static_cast<std::size_t>(best))) best = static_cast<long>(v);
    }
    if (best < 0) {
      for (std::size_t v = 0; v < n; ++v)
        if (!placed[v] && (best < 0 || degree(v) > degree(static_cast<std::size_t>(best)))) best = static_cast<long>(v);
    }
    placed[static_cast<std::size_t>(best)] = 1;
    order.push_back(static_cast<std::size_t>(best));
  }
  Search s{a, b, ga, gb, order, std::vector<long>(n, -1), std::vector<char>(n, 0)};
  if (!s.recurse(0)) return std::nullopt;
  std::map<VertexId, VertexId> out;
  for (std::size_t i = 0; i < n; ++i) out[ga.ids[i]] = gb.ids[static_cast<std::size_t>(s.map[i])];
  return out;
}

}  // namespace thom
