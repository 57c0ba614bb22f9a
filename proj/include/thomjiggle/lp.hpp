#pragma once

#include "thomjiggle/exact_linalg.hpp"

namespace thom {

/// maximize objective . x  subject to  eq_rows x = eq_rhs,  le_rows x <= le_rhs,  x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  RVec objective;
  RMatrix eq_rows;
  RVec eq_rhs;
  RMatrix le_rows;
  RVec le_rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RVec x;
};

/// Exact two-phase dense simplex method with Bland's anti-cycling rule.
LpResult solve_lp(const LinearProgram& lp);

/// Exact L1 distance between the convex hulls of two point sets.
Rational l1_distance(const std::vector<RVec>& a, const std::vector<RVec>& b);

/// max c.y over { y : L1-dist(y, conv(a)) <= ea, L1-dist(y, conv(b)) <= eb }.
/// Returns nullopt when that set is empty.
std::optional<Rational> max_over_neighborhood_intersection(const RVec& c, const std::vector<RVec>& a,
                                                           const Rational& ea, const std::vector<RVec>& b,
                                                           const Rational& eb);

}  // namespace thom
