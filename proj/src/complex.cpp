#include "thomjiggle/complex.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/exact_linalg.hpp"

namespace thom {

namespace {

constexpr int kMaxDim = 7;
using Packed = std::array<VertexId, kMaxDim + 1>;

std::string tuple_string(std::span<const VertexId> s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

bool lex_less(std::span<const VertexId> a, std::span<const VertexId> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

bool SimplicialComplex::has_vertex(VertexId v) const {
  if (contiguous_) return v < ids_.size();
  return index_.count(v) != 0;
}

std::size_t SimplicialComplex::vertex_index(VertexId v) const {
  if (contiguous_) {
    if (v >= ids_.size()) throw DanglingVertexId("vertex " + std::to_string(v) + " not in complex");
    return v;
  }
  auto it = index_.find(v);
  if (it == index_.end()) throw DanglingVertexId("vertex " + std::to_string(v) + " not in complex");
  return it->second;
}

std::size_t SimplicialComplex::num_simplices(int k) const {
  if (k < 0 || k > dimension()) return 0;
  return flat_[static_cast<std::size_t>(k)].size() / static_cast<std::size_t>(k + 1);
}

std::size_t SimplicialComplex::total_simplices() const {
  std::size_t total = 0;
  for (int k = 0; k <= dimension(); ++k) total += num_simplices(k);
  return total;
}

std::span<const VertexId> SimplicialComplex::simplex(int k, std::size_t i) const {
  const auto stride = static_cast<std::size_t>(k + 1);
  return {flat_[static_cast<std::size_t>(k)].data() + i * stride, stride};
}

Simplex SimplicialComplex::simplex_vec(int k, std::size_t i) const {
  auto s = simplex(k, i);
  return Simplex(s.begin(), s.end());
}

std::vector<Simplex> SimplicialComplex::simplices(int k) const {
  std::vector<Simplex> out;
  out.reserve(num_simplices(k));
  for (std::size_t i = 0; i < num_simplices(k); ++i) out.push_back(simplex_vec(k, i));
  return out;
}

std::optional<std::size_t> SimplicialComplex::find(std::span<const VertexId> s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dimension()) return std::nullopt;
  std::size_t lo = 0, hi = num_simplices(k);
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (lex_less(simplex(k, mid), s))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < num_simplices(k) && std::equal(s.begin(), s.end(), simplex(k, lo).begin())) return lo;
  return std::nullopt;
}

std::vector<Simplex> SimplicialComplex::maximal_simplices() const {
  std::vector<Simplex> out;
  for (int k = 0; k <= dimension(); ++k)
    for (std::size_t i = 0; i < num_simplices(k); ++i)
      if (is_maximal(k, i)) out.push_back(simplex_vec(k, i));
  return out;
}

long SimplicialComplex::euler_characteristic() const {
  long chi = 0;
  for (int k = 0; k <= dimension(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(num_simplices(k));
  return chi;
}

int SimplicialComplex::color(VertexId v) const {
  if (!colors_) throw ImproperColoring("complex carries no coloring");
  return (*colors_)[vertex_index(v)];
}

std::map<VertexId, int> SimplicialComplex::coloring_map() const {
  std::map<VertexId, int> out;
  if (!colors_) return out;
  for (std::size_t i = 0; i < ids_.size(); ++i) out[ids_[i]] = (*colors_)[i];
  return out;
}

std::vector<RVec> SimplicialComplex::realize(std::span<const VertexId> s) const {
  std::vector<RVec> pts;
  pts.reserve(s.size());
  const RVec& base = coords(s[0]);
  pts.push_back(base);
  for (std::size_t i = 1; i < s.size(); ++i) {
    RVec p = coords(s[i]);
    for (int d = 0; d < periodic_dims_; ++d) {
      const auto du = static_cast<std::size_t>(d);
      p[du] = base[du] + wrap_half(p[du] - base[du]);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

RVec SimplicialComplex::reduce(RVec p) const {
  for (int d = 0; d < periodic_dims_; ++d) p[static_cast<std::size_t>(d)] = reduce_unit(p[static_cast<std::size_t>(d)]);
  return p;
}

bool is_face_closed(const std::vector<Simplex>& simplices) {
  std::set<Simplex> all;
  for (auto s : simplices) {
    std::sort(s.begin(), s.end());
    all.insert(s);
  }
  for (const auto& s : all) {
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex f;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != drop) f.push_back(s[i]);
      if (!all.count(f)) return false;
    }
  }
  return true;
}

ComplexPtr build_complex(int ambient_dim, std::vector<VertexRecord> vertices, const std::vector<Simplex>& simplices,
                         std::optional<std::map<VertexId, int>> coloring, BuildOptions options) {
  if (ambient_dim < 0) throw InvalidParams("negative ambient dimension");
  if (options.periodic_dims < 0 || options.periodic_dims > ambient_dim)
    throw InvalidParams("periodic_dims out of range");
  auto c = std::make_shared<SimplicialComplex>();
  c->ambient_dim_ = ambient_dim;
  c->periodic_dims_ = options.periodic_dims;

  std::sort(vertices.begin(), vertices.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i > 0 && vertices[i].id == vertices[i - 1].id)
      throw InvalidParams("duplicate vertex id " + std::to_string(vertices[i].id));
    if (static_cast<int>(vertices[i].coords.size()) != ambient_dim)
      throw DimensionMismatch("vertex " + std::to_string(vertices[i].id) + " has " +
                              std::to_string(vertices[i].coords.size()) + " coordinates, expected " +
                              std::to_string(ambient_dim));
    if (vertices[i].id != i) c->contiguous_ = false;
  }
  c->ids_.reserve(vertices.size());
  c->coords_.reserve(vertices.size());
  for (auto& v : vertices) {
    c->ids_.push_back(v.id);
    c->coords_.push_back(c->reduce(std::move(v.coords)));
  }
  if (!c->contiguous_)
    for (std::size_t i = 0; i < c->ids_.size(); ++i) c->index_[c->ids_[i]] = i;

  // Face closure.
  int maxdim = c->ids_.empty() ? -1 : 0;
  for (const auto& s : simplices) maxdim = std::max(maxdim, static_cast<int>(s.size()) - 1);
  if (maxdim > kMaxDim) throw UnsupportedDimension("simplices above dimension 7 are not supported");
  std::vector<std::vector<Packed>> packed(static_cast<std::size_t>(maxdim + 1));
  for (VertexId v : c->ids_) {
    Packed p{};
    p[0] = v;
    packed[0].push_back(p);
  }
  for (const auto& raw : simplices) {
    if (raw.empty()) continue;
    Simplex s = raw;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw NotSimplicial("simplex " + tuple_string(s) + " repeats a vertex");
    for (VertexId v : s)
      if (!c->has_vertex(v)) throw DanglingVertexId("simplex " + tuple_string(s) + " uses unknown vertex " +
                                                    std::to_string(v));
    const unsigned n = static_cast<unsigned>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Packed p{};
      std::size_t k = 0;
      for (unsigned i = 0; i < n; ++i)
        if (mask & (1u << i)) p[k++] = s[i];
      packed[k - 1].push_back(p);
    }
  }
  c->flat_.resize(packed.size());
  for (std::size_t k = 0; k < packed.size(); ++k) {
    auto& list = packed[k];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    auto& flat = c->flat_[k];
    flat.reserve(list.size() * (k + 1));
    for (const auto& p : list) flat.insert(flat.end(), p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k + 1));
  }
  while (!c->flat_.empty() && c->flat_.back().empty()) c->flat_.pop_back();

  c->maximal_.resize(c->flat_.size());
  for (int k = 0; k <= c->dimension(); ++k) c->maximal_[static_cast<std::size_t>(k)].assign(c->num_simplices(k), 1);
  for (int k = 1; k <= c->dimension(); ++k) {
    Simplex face(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < c->num_simplices(k); ++i) {
      auto s = c->simplex(k, i);
      for (int drop = 0; drop <= k; ++drop) {
        std::size_t j = 0;
        for (int q = 0; q <= k; ++q)
          if (q != drop) face[j++] = s[static_cast<std::size_t>(q)];
        c->maximal_[static_cast<std::size_t>(k - 1)][*c->find(face)] = 0;
      }
    }
  }

  if (coloring) {
    std::vector<int> colors(c->ids_.size());
    for (std::size_t i = 0; i < c->ids_.size(); ++i) {
      auto it = coloring->find(c->ids_[i]);
      if (it == coloring->end()) throw ImproperColoring("vertex " + std::to_string(c->ids_[i]) + " has no color");
      colors[i] = it->second;
    }
    for (const auto& [id, col] : *coloring) {
      (void)col;
      if (!c->has_vertex(id)) throw DanglingVertexId("coloring names unknown vertex " + std::to_string(id));
    }
    c->colors_ = std::move(colors);
  }

  if (options.validate) {
    if (c->colors_) {
      for (std::size_t i = 0; i < c->num_simplices(1); ++i) {
        auto e = c->simplex(1, i);
        if (c->color(e[0]) == c->color(e[1]))
          throw ImproperColoring("simplex " + tuple_string(e) + " has two vertices of color " +
                                 std::to_string(c->color(e[0])));
      }
    }
    for (int k = 1; k <= c->dimension(); ++k) {
      for (std::size_t i = 0; i < c->num_simplices(k); ++i) {
        if (!c->is_maximal(k, i)) continue;
        auto s = c->simplex(k, i);
        if (k > ambient_dim) throw DegenerateSimplex("simplex " + tuple_string(s) + " exceeds ambient dimension");
        auto pts = c->realize(s);
        if (c->periodic_dims_ > 0) {
          for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b)
              for (int d = 0; d < c->periodic_dims_; ++d) {
                Rational diff = abs(pts[a][static_cast<std::size_t>(d)] - pts[b][static_cast<std::size_t>(d)]);
                if (diff >= Rational(1, 2))
                  throw NotSimplicial("simplex " + tuple_string(s) +
                                      " spans half a period or more along a periodic coordinate");
              }
        }
        if (rank(edge_matrix(pts)) != static_cast<std::size_t>(k))
          throw DegenerateSimplex("simplex " + tuple_string(s) + " is geometrically degenerate");
      }
    }
  }
  return c;
}

ComplexPtr with_coloring(const ComplexPtr& c, std::map<VertexId, int> coloring) {
  std::vector<VertexRecord> verts;
  for (std::size_t i = 0; i < c->num_vertices(); ++i) verts.push_back({c->vertex_ids()[i], c->coords_at(i)});
  return build_complex(c->ambient_dim(), std::move(verts), c->maximal_simplices(), std::move(coloring),
                       {c->periodic_dims(), true});
}

bool Subcomplex::contains(const Simplex& s) const {
  auto cmp = [](const Simplex& a, const Simplex& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  };
  return std::binary_search(simplices.begin(), simplices.end(), s, cmp);
}

std::size_t Subcomplex::count(int k) const {
  return static_cast<std::size_t>(std::count_if(simplices.begin(), simplices.end(), [k](const Simplex& s) {
    return static_cast<int>(s.size()) == k + 1;
  }));
}

ComplexPtr Subcomplex::materialize() const {
  std::set<VertexId> used;
  for (const auto& s : simplices) used.insert(s.begin(), s.end());
  std::vector<VertexRecord> verts;
  std::optional<std::map<VertexId, int>> colors;
  if (parent->has_coloring()) colors.emplace();
  for (VertexId v : used) {
    verts.push_back({v, parent->coords(v)});
    if (colors) (*colors)[v] = parent->color(v);
  }
  return build_complex(parent->ambient_dim(), std::move(verts), simplices, colors, {parent->periodic_dims(), true});
}

Subcomplex make_subcomplex(const ComplexPtr& parent, const std::vector<Simplex>& generators) {
  std::set<std::pair<std::size_t, Simplex>> all;
  for (auto s : generators) {
    std::sort(s.begin(), s.end());
    if (!parent->contains(s)) throw UnknownSimplex("simplex " + tuple_string(s) + " is not in the parent complex");
    const unsigned n = static_cast<unsigned>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Simplex f;
      for (unsigned i = 0; i < n; ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      all.insert({f.size(), f});
    }
  }
  Subcomplex sub;
  sub.parent = parent;
  for (auto& [sz, s] : all) {
    (void)sz;
    sub.simplices.push_back(s);
  }
  return sub;
}

Simplex SimplicialMap::image(std::span<const VertexId> s) const {
  Simplex out;
  for (VertexId v : s) out.push_back((*this)(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SimplicialMap make_simplicial_map(ComplexPtr source, ComplexPtr target, std::vector<VertexId> images, bool validate) {
  if (images.size() != source->num_vertices())
    throw InvalidParams("vertex image table has the wrong length");
  SimplicialMap f{std::move(source), std::move(target), std::move(images)};
  for (VertexId w : f.images)
    if (!f.target->has_vertex(w)) throw DanglingVertexId("image vertex " + std::to_string(w) + " not in target");
  if (validate) {
    for (int k = 1; k <= f.source->dimension(); ++k)
      for (std::size_t i = 0; i < f.source->num_simplices(k); ++i) {
        if (!f.source->is_maximal(k, i)) continue;
        auto s = f.source->simplex(k, i);
        if (!f.target->contains(f.image(s)))
          throw NotSimplicial("image of " + tuple_string(s) + " is not a simplex of the target");
      }
  }
  return f;
}

SimplicialMap identity_map(const ComplexPtr& c) {
  return SimplicialMap{c, c, c->vertex_ids()};
}

SimplicialMap compose(const SimplicialMap& first, const SimplicialMap& second) {
  if (first.target.get() != second.source.get())
    throw NotComposable("intermediate complexes are different objects");
  std::vector<VertexId> images(first.images.size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = second(first.images[i]);
  return SimplicialMap{first.source, second.target, std::move(images)};
}

std::pair<Subcomplex, Subcomplex> star_link(const ComplexPtr& c, const Simplex& s_in) {
  Simplex s = s_in;
  std::sort(s.begin(), s.end());
  if (!c->contains(s)) throw UnknownSimplex("simplex " + tuple_string(s) + " is not in the complex");
  std::vector<Simplex> containing;
  for (int k = static_cast<int>(s.size()) - 1; k <= c->dimension(); ++k)
    for (std::size_t i = 0; i < c->num_simplices(k); ++i) {
      auto t = c->simplex(k, i);
      if (std::includes(t.begin(), t.end(), s.begin(), s.end())) containing.push_back(c->simplex_vec(k, i));
    }
  Subcomplex star = make_subcomplex(c, containing);
  Subcomplex link;
  link.parent = c;
  for (const auto& t : star.simplices) {
    bool disjoint = true;
    for (VertexId v : t)
      if (std::binary_search(s.begin(), s.end(), v)) disjoint = false;
    if (disjoint) link.simplices.push_back(t);
  }
  return {std::move(star), std::move(link)};
}

std::pair<ComplexPtr, SimplicialMap> barycentric_subdivide(const ComplexPtr& c) {
  std::vector<std::size_t> offset(static_cast<std::size_t>(c->dimension() + 2), 0);
  for (int k = 0; k <= c->dimension(); ++k)
    offset[static_cast<std::size_t>(k + 1)] = offset[static_cast<std::size_t>(k)] + c->num_simplices(k);
  std::vector<VertexRecord> verts;
  std::map<VertexId, int> colors;
  std::vector<VertexId> images;
  verts.reserve(offset.back());
  for (int k = 0; k <= c->dimension(); ++k) {
    for (std::size_t i = 0; i < c->num_simplices(k); ++i) {
      auto s = c->simplex(k, i);
      auto pts = c->realize(s);
      RVec b(static_cast<std::size_t>(c->ambient_dim()), Rational(0));
      for (const auto& p : pts) b = b + p;
      b = Rational(1, k + 1) * b;
      const auto id = static_cast<VertexId>(offset[static_cast<std::size_t>(k)] + i);
      verts.push_back({id, c->reduce(std::move(b))});
      colors[id] = k;
      images.push_back(s[0]);
    }
  }
  std::vector<Simplex> tops;
  for (const auto& m : c->maximal_simplices()) {
    Simplex perm = m;
    do {
      Simplex flag;
      Simplex face = m;
      for (std::size_t j = 0; j < perm.size(); ++j) {
        const int k = static_cast<int>(face.size()) - 1;
        flag.push_back(static_cast<VertexId>(offset[static_cast<std::size_t>(k)] + *c->find(face)));
        face.erase(std::find(face.begin(), face.end(), perm[j]));
      }
      std::sort(flag.begin(), flag.end());
      tops.push_back(std::move(flag));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  auto sub = build_complex(c->ambient_dim(), std::move(verts), tops, std::move(colors), {c->periodic_dims(), true});
  auto map = make_simplicial_map(sub, c, std::move(images));
  return {sub, map};
}

std::vector<RVec> standard_simplex_points(int n) {
  std::vector<RVec> pts;
  pts.emplace_back(static_cast<std::size_t>(n), Rational(0));
  for (int i = 0; i < n; ++i) {
    RVec e(static_cast<std::size_t>(n), Rational(0));
    e[static_cast<std::size_t>(i)] = 1;
    pts.push_back(std::move(e));
  }
  return pts;
}

ComplexPtr standard_simplex(int n) {
  auto pts = standard_simplex_points(n);
  std::vector<VertexRecord> verts;
  Simplex top;
  for (int i = 0; i <= n; ++i) {
    verts.push_back({static_cast<VertexId>(i), pts[static_cast<std::size_t>(i)]});
    top.push_back(static_cast<VertexId>(i));
  }
  return build_complex(n, std::move(verts), {top});
}

}  // namespace thom
