#pragma once

#include <optional>
#include <vector>

#include "thomjiggle/rational.hpp"

namespace thom {

using RMatrix = std::vector<RVec>;  // row-major

std::size_t rank(RMatrix rows);
Rational determinant(RMatrix m);
/// Unique solution of the square system m x = b, or nullopt when singular.
std::optional<RVec> solve(RMatrix m, RVec b);

/// Rows are the edge vectors p_i - p_0 of a point list.
RMatrix edge_matrix(const std::vector<RVec>& points);

/// Barycentric coordinates of `x` with respect to a full-dimensional simplex
/// (points.size() == x.size() + 1); nullopt when the simplex is degenerate.
std::optional<RVec> barycentric(const std::vector<RVec>& points, const RVec& x);

/// Exact squared Euclidean distance from `x` to the convex hull of `points`.
Rational squared_distance_to_simplex(const std::vector<RVec>& points, const RVec& x);

/// Exact squared Hausdorff distance between two simplices (convex hulls).
Rational squared_hausdorff(const std::vector<RVec>& a, const std::vector<RVec>& b);

Rational factorial(unsigned k);
/// Unsigned k-volume of a full-dimensional simplex in R^k.
Rational simplex_volume(const std::vector<RVec>& points);

}  // namespace thom
