#pragma once

#include <optional>

#include "thomjiggle/subdivision.hpp"

namespace thom {

enum class ModelKind { Torus, Box };

/// Flat model: exp_x(v) = x + v, reduced mod Z^n on the torus.
struct FlatModel {
  int n = 2;
  ModelKind kind = ModelKind::Torus;
};

/// Piecewise-affine section of M x R^n: affine on each simplex of `base`.
struct PLSection {
  ComplexPtr base;
  std::vector<RVec> lift;  ///< by base vertex index
  Rational radius{1, 2};   ///< disk-bundle radius the lift must respect

  const RVec& at(VertexId v) const { return lift[base->vertex_index(v)]; }
  Rational max_squared_norm() const;
  /// Embedded graph {(x, lift(x))} as a complex in R^{2n} (periodic base coordinates kept).
  ComplexPtr graph() const;
};

/// Kuhn/Freudenthal triangulation of the m-grid torus followed by one
/// barycentric subdivision (done in the cover), colored by dimension.
ComplexPtr torus_triangulation(int n, int m);
/// Same construction on the unit box [0,1]^n without identifications.
ComplexPtr box_triangulation(int n, int m);

/// Largest squared diameter over the maximal simplices (chart coordinates).
Rational max_squared_diameter(const SimplicialComplex& c);

/// j^r with exp_x(j^r(x)) = sigma^r(x).
PLSection jiggle_exp(const FoldingTower& tower, const FlatModel& model);

/// Colored target simplex: vertex c is the point for color c.
struct TargetSimplex {
  std::vector<RVec> vertices;
};

TargetSimplex default_target_simplex(int n);

/// j^r(x) = target vertex of color c(sigma^r(x)). Uses the base coloring
/// unless one is supplied.
PLSection jiggle_colored(const FoldingTower& tower, const TargetSimplex& target,
                         const std::optional<std::map<VertexId, int>>& coloring = std::nullopt);

/// Snapshot (u, s) of the homotopy from j^r (u=1, s=0) to the zero section
/// (u=0, s=1). Stage u is the homothety by u in the fibres of exp; stage s
/// unfolds the tower one level at a time, top level first. Returned as an
/// embedded complex in R^{2n} over the combinatorics of the active level.
ComplexPtr section_homotopy_to_zero(const FoldingTower& tower, const FlatModel& model, const Rational& u,
                                    const Rational& s);

/// Number of n-simplices of an embedded (x, v) complex whose exp-image x + v is non-degenerate.
std::size_t exp_image_full_rank(const SimplicialComplex& embedded, int n);

/// A point x inside T-simplex `top` (barycentric coordinates `bary`).
struct HausdorffSample {
  std::size_t top = 0;
  RVec bary;
};

/// For r = 1..r_max: max over samples of the exact squared Hausdorff distance
/// between (id, lift)(delta) and {x} x (tau - x), delta the T^r-simplex containing x.
/// Descends through the tower locally, so r = 4 stays cheap.
std::vector<Rational> hausdorff_profile(const ComplexPtr& T, const ThomPattern& p, int r_max,
                                        const std::vector<HausdorffSample>& samples,
                                        ExecPolicy policy = ExecPolicy::Parallel);

/// Deterministic interior sample points for every top simplex of T.
std::vector<HausdorffSample> default_hausdorff_samples(const SimplicialComplex& T);

}  // namespace thom
