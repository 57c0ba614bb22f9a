#pragma once

#include <string>
#include <vector>

#include "thomjiggle/holonomy.hpp"

namespace thom {

// ---- epsilon-neighborhood systems and boxes ------------------------------

/// N(alpha) = alpha + eps_{dim alpha} * (unit L1 ball), for strict faces alpha of the target.
struct NeighborhoodReport {
  bool condition1 = false;  ///< disjoint faces have disjoint neighborhoods
  bool condition2 = false;  ///< meeting, non-nested faces: intersection interior to N(alpha ^ beta)
  bool condition3 = false;  ///< N(Delta) inside the ball
  std::size_t pairs_checked = 0;
  std::size_t lps_solved = 0;
  std::vector<std::string> failures;
  bool pass = false;
};

NeighborhoodReport neighborhood_system_check(const TargetSimplex& delta, const std::vector<Rational>& eps,
                                             const Rational& ball_radius = 1);

/// Is v in N(face)? `face` lists target color indices; the full simplex uses N(Delta).
bool in_neighborhood(const TargetSimplex& delta, const std::vector<Rational>& eps, const std::vector<int>& face,
                     const RVec& v);

struct BoxSystem {
  ComplexPtr host;          ///< T^r
  std::vector<int> colors;  ///< c(sigma^r(v)) by host vertex index
  TargetSimplex delta;
  std::vector<Rational> eps;
  Rational eta{1, 64};
  Rational ball_radius{1};
};

/// Checks the neighborhood conditions (InvalidParams otherwise).
BoxSystem make_box_system(const FoldingTower& tower, TargetSimplex delta, std::vector<Rational> eps,
                          Rational eta = Rational(1, 64), Rational ball_radius = 1);

struct CoverageReport {
  std::size_t simplices = 0;          ///< top simplices of the host
  std::size_t covered_simplices = 0;  ///< all samples in some reduced box
  std::size_t samples = 0;
  std::size_t uncovered_samples = 0;
  std::size_t disjointness_violations = 0;  ///< sample in reduced boxes of two disjoint simplices
  double max_displacement = 0;        ///< largest |transported - original| fibre displacement
  bool pass = false;
};

/// Reduced-box membership of the colored section, sampled on a barycentric lattice.
CoverageReport box_cover(const BoxSystem& system, const TwoFormField& omega, const PLSection& section,
                         int samples_per_dim = 3, const TransportOptions& transport = {},
                         ExecPolicy policy = ExecPolicy::Parallel);

// ---- cochains --------------------------------------------------------------

/// Values on the ascending-id orientation of the k-simplices, by simplex index.
struct Cochain {
  ComplexPtr complex;
  int degree = 0;
  std::vector<double> values;

  /// Value on an arbitrarily ordered simplex (sign of the sorting permutation applied).
  double at(std::span<const VertexId> oriented) const;
  double max_abs() const;
  double l2() const;
};

Cochain zero_cochain(const ComplexPtr& c, int degree);
/// (delta a)(s) = sum_i (-1)^i a(s without vertex i).
Cochain coboundary(const Cochain& a);
/// Sign of the permutation sorting `oriented` ascending.
int orientation_sign(std::span<const VertexId> oriented);

/// Host complex with the pulled-back coloring.
struct CocycleHost {
  std::string name;
  ComplexPtr complex;
  std::vector<int> colors;  ///< by vertex index
};

CocycleHost host_from_tower(const FoldingTower& tower, std::string name);
/// Torus T^2 (m-grid, barycentric) folded r times.
CocycleHost torus_host(int m, int r, ExecPolicy policy = ExecPolicy::Parallel);
/// Boundary of the octahedron in R^3, barycentrically subdivided, folded r times.
CocycleHost sphere_host(int r, ExecPolicy policy = ExecPolicy::Parallel);

struct MuOptions {
  int quadrature_order = 16;
};

/// <mu, tau> = sum_i <Lambda, {b(e_i)} x [p_{c(i-1)}, p_{c(i)}]> + <Lambda, [b(e_i), b(e_{i+1})] x p_{c(i)}>
/// with the vertices of tau ordered by color and e_i = [v_{i-1}, v_i].
Cochain mu_cocycle(const OneFormField& lambda, const CocycleHost& host, const TargetSimplex& delta,
                   const MuOptions& opts = {}, ExecPolicy policy = ExecPolicy::Parallel);

struct SweptOptions {
  int theta_order = 16;
  TransportOptions transport;
  double fd_step = 1e-5;
};

/// Independent route: for each side of the colored fibre triangle, transport
/// it from b(e_i) to the barycenter of tau along the Omega-orthogonal lift and
/// integrate the swept omega_0-area (variational equation for the side tangent).
Cochain swept_area_cochain(const TwoFormField& omega, const CocycleHost& host, const TargetSimplex& delta,
                           const SweptOptions& opts = {}, ExecPolicy policy = ExecPolicy::Parallel);

struct CoboundaryResult {
  Cochain alpha;
  double residual = 0;           ///< |delta alpha - mu|_2
  double relative_residual = 0;  ///< residual / |mu|_2 (0 when mu = 0)
  long iterations = 0;
  bool success = false;
};

/// Least squares delta alpha = mu by conjugate gradients on the normal
/// equations from alpha = 0 (minimum-norm solution).
CoboundaryResult coboundary_solve(const Cochain& mu, double rel_tol = 1e-6);

/// +-1 per triangle making the sum a 2-cycle on a closed oriented surface,
/// or empty when the host is not an orientable closed surface.
std::vector<int> fundamental_cycle(const SimplicialComplex& surface);

/// Least-squares residual predicted by the cokernel of delta on a closed
/// oriented surface: |sum_tau eps_tau mu_tau| / sqrt(#triangles).
double harmonic_residual(const Cochain& mu);

}  // namespace thom
