#pragma once

#include <memory>
#include <vector>

#include "thomjiggle/complex.hpp"
#include "thomjiggle/parallel.hpp"

namespace thom {

struct PatternParams {
  Rational t{1, 4};   ///< shrink factor of the reflected interior simplex
  Rational u1{1, 3};  ///< position of the interior vertex mapped to 1 on Delta^1
  Rational u0{2, 3};  ///< position of the interior vertex mapped to 0 on Delta^1
};

/// Combinatorial pattern in barycentric form: vertex i sits at bary[i] in
/// Delta^n and folds onto corner sigma[i].
struct PatternData {
  int n = 0;
  std::vector<RVec> bary;
  std::vector<int> sigma;
  std::vector<std::vector<int>> tops;
};

struct ThomPattern {
  int n = 0;
  PatternParams params;
  /// levels[k] is the k-dimensional pattern; levels[n] is this one.
  std::vector<PatternData> levels;
  ComplexPtr pattern;  ///< realized in the standard simplex of R^n, vertex id = pattern index
  ComplexPtr simplex;  ///< standard Delta^n
  SimplicialMap sigma;

  const PatternData& data() const { return levels.back(); }
  std::size_t top_count() const { return data().tops.size(); }
};

/// Builds and verifies K_n. For n >= 3 a failed tiling triggers a search over
/// a small grid of t values before TilingFailure is raised.
ThomPattern thom_pattern(int n, PatternParams params = {});
/// Same construction without verification (used to study n >= 3).
ThomPattern thom_pattern_unchecked(int n, PatternParams params = {});
/// Wrap hand-built data; `lower` supplies the patterns of dimension < n.
ThomPattern pattern_from_data(PatternData top, std::vector<PatternData> lower, PatternParams params = {});

struct PatternReport {
  bool nondegenerate = false;
  std::size_t surjective = 0;
  std::size_t top_count = 0;
  std::vector<std::string> nondegeneracy_failures;
  bool heredity = false;
  std::vector<std::string> heredity_failures;
  TilingReport tiling;
  bool pass = false;
};

PatternReport verify_pattern(const ThomPattern& p);

/// Where a subdivision vertex came from: pattern vertex of an ordered parent simplex.
struct VertexOrigin {
  std::uint32_t parent = 0;
  std::uint32_t pattern_vertex = 0;
};

struct Subdivision {
  ComplexPtr complex;
  SimplicialMap sigma;                  ///< glued folding map onto the input
  std::vector<Simplex> parents;         ///< maximal input simplices in identification order
  std::vector<VertexOrigin> origin;     ///< by output vertex index
};

/// Applies the pattern to every maximal simplex. `order_key` (indexed by
/// vertex index of T) fixes the affine identification with Delta^n; the
/// default is ascending vertex id.
Subdivision thom_subdivide(const ComplexPtr& T, const ThomPattern& p,
                           const std::vector<VertexId>* order_key = nullptr,
                           ExecPolicy policy = ExecPolicy::Parallel);

struct FoldingTower {
  ThomPattern pattern;
  std::vector<ComplexPtr> complexes;          ///< T^0 = T, ..., T^r
  std::vector<SimplicialMap> sigmas;          ///< sigmas[i-1]: T^i -> T^{i-1}
  std::vector<std::vector<VertexId>> to_base; ///< to_base[i][index] = sigma^i image (vertex id of T)
  std::vector<std::vector<Simplex>> parents;  ///< parents[i-1]: ordered parents used to build T^i
  std::vector<std::vector<VertexOrigin>> origins;

  int order() const { return static_cast<int>(complexes.size()) - 1; }
  const ComplexPtr& base() const { return complexes.front(); }
  const ComplexPtr& top() const { return complexes.back(); }
  /// Composed simplicial map T^r -> T.
  SimplicialMap composed() const;
};

/// K^r = (sigma^{r-1})^{-1}(K): each level identifies a simplex of T^{i-1} with
/// Delta^n by ordering its vertices by their sigma^{i-1} images in T.
FoldingTower iterate_fold(const ComplexPtr& T, const ThomPattern& p, int r,
                          ExecPolicy policy = ExecPolicy::Parallel);
/// Adds one level to the tower.
void extend_fold(FoldingTower& tower, ExecPolicy policy = ExecPolicy::Parallel);

struct FoldReport {
  std::vector<std::size_t> top_counts;  ///< per level
  bool multiplicative = false;          ///< count(T^i) = count(T) * |K_n|^i
  std::size_t tops = 0;                 ///< top simplices of T^r
  std::size_t bijective = 0;            ///< tops mapped affinely onto a top of T
  bool fixes_base_vertices = false;
  bool pass = false;
};

/// Exact re-check of the tower: counts, and sigma^r on every top simplex of
/// T^r (distinct images spanning a top of T, both edge matrices of full rank).
FoldReport verify_fold(const FoldingTower& tower, ExecPolicy policy = ExecPolicy::Parallel);

/// Time-s snapshot of the unfolding homotopy on the pattern: per pattern
/// vertex, its (moved) position in Delta^n and its image, both in barycentric form.
struct UnfoldingSnapshot {
  std::vector<RVec> domain;
  std::vector<RVec> image;
};

UnfoldingSnapshot unfolding_homotopy(const ThomPattern& p, const Rational& s);

struct SnapshotRank {
  std::size_t full_rank = 0;
  std::size_t orientation_kept = 0;
  std::size_t tops = 0;
  bool ok() const { return full_rank == tops && orientation_kept == tops; }
};

/// Exact rank of the snapshot on every top simplex, and whether the moved
/// domain simplex keeps the orientation it has at s = 0.
SnapshotRank snapshot_rank(const ThomPattern& p, const UnfoldingSnapshot& snap);

/// Staircase triangulation of base x [t0, t1]. Vertex (v, t0) keeps index i
/// of v, (v, t1) gets index V + i; coordinates gain a trailing time entry.
ComplexPtr whitney_prism_subdivide(const ComplexPtr& base, const Rational& t0, const Rational& t1,
                                   const std::vector<VertexId>& vertex_order);

/// Vertices of a maximal simplex sorted by rank in a total order (rank indexed by vertex index).
Simplex staircase_order(std::span<const VertexId> s, const SimplicialComplex& c, const std::vector<std::size_t>& rank);

/// Cartesian coordinates in R^n (dropping the 0th barycentric coordinate).
RVec bary_to_cartesian(const RVec& bary);

}  // namespace thom
