#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thomjiggle/rational.hpp"

namespace thom {

using VertexId = std::uint32_t;
using Simplex = std::vector<VertexId>;  // ascending vertex ids

struct VertexRecord {
  VertexId id;
  RVec coords;
};

struct BuildOptions {
  /// The leading `periodic_dims` coordinates live on R/Z. Stored values are
  /// reduced into [0,1) and a simplex is realized in the chart of its first
  /// vertex (coordinate differences wrapped into [-1/2,1/2)).
  int periodic_dims = 0;
  bool validate = true;
};

/// Immutable geometric simplicial complex with exact rational coordinates.
class SimplicialComplex {
 public:
  int ambient_dim() const { return ambient_dim_; }
  int periodic_dims() const { return periodic_dims_; }
  /// Largest simplex dimension, -1 for the empty complex.
  int dimension() const { return static_cast<int>(flat_.size()) - 1; }

  std::size_t num_vertices() const { return ids_.size(); }
  const std::vector<VertexId>& vertex_ids() const { return ids_; }
  bool has_vertex(VertexId v) const;
  std::size_t vertex_index(VertexId v) const;
  const RVec& coords(VertexId v) const { return coords_[vertex_index(v)]; }
  const RVec& coords_at(std::size_t index) const { return coords_[index]; }

  std::size_t num_simplices(int k) const;
  std::size_t total_simplices() const;
  std::span<const VertexId> simplex(int k, std::size_t i) const;
  Simplex simplex_vec(int k, std::size_t i) const;
  std::vector<Simplex> simplices(int k) const;
  std::optional<std::size_t> find(std::span<const VertexId> s) const;
  bool contains(std::span<const VertexId> s) const { return find(s).has_value(); }
  bool is_maximal(int k, std::size_t i) const { return maximal_[static_cast<std::size_t>(k)][i] != 0; }
  std::vector<Simplex> maximal_simplices() const;
  long euler_characteristic() const;

  bool has_coloring() const { return colors_.has_value(); }
  int color(VertexId v) const;
  std::map<VertexId, int> coloring_map() const;

  /// Coordinates of the vertices of `s` in one chart (unwrapped for periodic complexes).
  std::vector<RVec> realize(std::span<const VertexId> s) const;
  /// Reduce periodic coordinates into [0,1).
  RVec reduce(RVec p) const;

 private:
  friend std::shared_ptr<const SimplicialComplex> build_complex(int, std::vector<VertexRecord>,
                                                                const std::vector<Simplex>&,
                                                                std::optional<std::map<VertexId, int>>,
                                                                BuildOptions);
  int ambient_dim_ = 0;
  int periodic_dims_ = 0;
  bool contiguous_ = true;
  std::vector<VertexId> ids_;
  std::vector<RVec> coords_;
  std::map<VertexId, std::size_t> index_;  // only used when ids are not 0..V-1
  std::vector<std::vector<VertexId>> flat_;  // flat_[k]: sorted k-simplices, stride k+1
  std::vector<std::vector<char>> maximal_;
  std::optional<std::vector<int>> colors_;  // by vertex index
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

/// Validated constructor; completes face closure silently.
ComplexPtr build_complex(int ambient_dim, std::vector<VertexRecord> vertices, const std::vector<Simplex>& simplices,
                         std::optional<std::map<VertexId, int>> coloring = std::nullopt, BuildOptions options = {});

/// Copy of `c` with a new coloring (validated).
ComplexPtr with_coloring(const ComplexPtr& c, std::map<VertexId, int> coloring);

/// True when every face of every listed simplex is itself listed.
bool is_face_closed(const std::vector<Simplex>& simplices);

/// Face-closed subset of a parent complex.
struct Subcomplex {
  ComplexPtr parent;
  std::vector<Simplex> simplices;  // sorted by (dimension, lexicographic)

  bool contains(const Simplex& s) const;
  std::size_t count(int k) const;
  ComplexPtr materialize() const;
};

/// Closure of `generators` inside `parent`; throws UnknownSimplex if one is absent.
Subcomplex make_subcomplex(const ComplexPtr& parent, const std::vector<Simplex>& generators);

/// Vertex-assignment map; images indexed by source vertex index.
struct SimplicialMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<VertexId> images;

  VertexId operator()(VertexId v) const { return images[source->vertex_index(v)]; }
  Simplex image(std::span<const VertexId> s) const;  // sorted, deduplicated
};

SimplicialMap make_simplicial_map(ComplexPtr source, ComplexPtr target, std::vector<VertexId> images,
                                  bool validate = true);
SimplicialMap identity_map(const ComplexPtr& c);
/// second after first; requires first.target == second.source (same object).
SimplicialMap compose(const SimplicialMap& first, const SimplicialMap& second);

std::pair<Subcomplex, Subcomplex> star_link(const ComplexPtr& c, const Simplex& s);

std::pair<ComplexPtr, SimplicialMap> barycentric_subdivide(const ComplexPtr& c);

struct TilingReport {
  bool pass = false;
  Rational volume_sum;
  Rational region_volume;
  std::size_t pairs_checked = 0;
  std::string failure;
  std::optional<std::pair<Simplex, Simplex>> overlap;
  std::optional<RVec> witness;
};

TilingReport tiling_check(const ComplexPtr& c, const std::vector<RVec>& region);

struct IsomorphismOptions {
  std::size_t simplex_cap = 10000;
  /// Optional vertex labels (by vertex id) that the bijection must preserve.
  std::optional<std::map<VertexId, int>> labels_a;
  std::optional<std::map<VertexId, int>> labels_b;
};

std::optional<std::map<VertexId, VertexId>> find_isomorphism(const SimplicialComplex& a, const SimplicialComplex& b,
                                                             const IsomorphismOptions& options = {});

/// Standard corner simplex conv{0, e_1, ..., e_n} in R^n.
std::vector<RVec> standard_simplex_points(int n);
ComplexPtr standard_simplex(int n);

}  // namespace thom
