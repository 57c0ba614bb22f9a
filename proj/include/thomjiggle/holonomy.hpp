#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "thomjiggle/jiggling.hpp"
#include "thomjiggle/ode.hpp"

namespace thom {

/// Points are (x, v) with x in R^base_dim and v in R^fiber_dim.
struct OneFormField {
  using Covector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using TwoMatrix = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  int base_dim = 0;
  int fiber_dim = 0;
  Covector lambda;
  TwoMatrix d_lambda;  ///< optional; W_ab = d_a lambda_b - d_b lambda_a
  bool vertical_vanishing = false;

  int dim() const { return base_dim + fiber_dim; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& p) const { return lambda(p); }
  /// Analytic exterior derivative when present, central differences (h = 1e-5) otherwise.
  Eigen::MatrixXd d(const Eigen::VectorXd& p) const;
  Eigen::MatrixXd d_numeric(const Eigen::VectorXd& p, double h = 1e-5) const;
};

struct FormCheck {
  double max_d_error = 0;     ///< analytic vs finite-difference exterior derivative
  double max_vertical = 0;    ///< |lambda(p) . (0, w)| over vertical probes
  std::size_t probes = 0;
  bool pass = false;
};

/// Deterministic probe points in [-1,1]^base_dim x (disk of radius `fiber_radius`).
std::vector<Eigen::VectorXd> probe_points(int base_dim, int fiber_dim, std::size_t count, std::uint64_t seed,
                                          double fiber_radius = 0.8);
FormCheck check_one_form(const OneFormField& f, const std::vector<Eigen::VectorXd>& probes, double tol = 1e-6);
/// Validates the analytic derivative and the vertical flag; throws FormCheckFailed.
OneFormField validated(OneFormField f, std::size_t probes = 32, std::uint64_t seed = 7);

/// Standard fiber form: blocks [[0,1],[-1,0]] (dv1 ^ dv2 for n = 2).
Eigen::MatrixXd omega0_matrix(int fiber_dim);

/// Omega = Omega_0 (pulled back from the fibre) + d Lambda.
struct TwoFormField {
  OneFormField lambda;
  Eigen::MatrixXd omega0;

  int base_dim() const { return lambda.base_dim; }
  int fiber_dim() const { return lambda.fiber_dim; }
  Eigen::MatrixXd matrix(const Eigen::VectorXd& p) const;
};

TwoFormField two_form(OneFormField lambda);

struct FiberCheck {
  double max_deviation = 0;  ///< |Omega_vv - omega_0| over probes
  double min_abs_det = 0;    ///< of Omega_vv
  bool pass = false;
};
FiberCheck check_fiber_restriction(const TwoFormField& omega, const std::vector<Eigen::VectorXd>& probes,
                                   double tol = 1e-8);

/// ker Omega at p = {(u, A u)}: A = -Omega_vv^{-1} Omega_vx (fiber_dim x base_dim).
Eigen::MatrixXd kernel_map(const TwoFormField& omega, const Eigen::VectorXd& p);

struct TransportOptions {
  OdeOptions ode;
  double disk_radius = 1.0;  ///< LeftDomain when |v| exceeds it
};

/// Lift of the base polyline into the leaves of ker Omega starting at v0.
Eigen::VectorXd holonomy_transport(const TwoFormField& omega, const std::vector<Eigen::VectorXd>& path,
                                   const Eigen::VectorXd& v0, const TransportOptions& opts = {},
                                   OdeStats* stats = nullptr);

/// omega_0-area ratio of probe triangles (v0, v0 + h e1, v0 + h e2) after transport
/// around `loop`, Richardson-extrapolated over the sizes h and h/2.
double loop_area_ratio(const TwoFormField& omega, const std::vector<Eigen::VectorXd>& loop, const Eigen::VectorXd& v0,
                       double h = 1e-3, const TransportOptions& opts = {});

// ---- Form library -------------------------------------------------------

OneFormField zero_form(int base_dim, int fiber_dim);
/// g(x) dv_1 with g(x) = g0 + grad . x.
OneFormField linear_g_dv1(const Eigen::VectorXd& grad, double g0, int fiber_dim);
/// x_1 dx_2 on the base (not periodic; d = base area form).
OneFormField base_area_form(int base_dim, int fiber_dim);
/// Closed base form sum c_k dx_k + d(a sin(2 pi k.x)).
OneFormField closed_base_form(const Eigen::VectorXd& c, const Eigen::VectorXd& k, double a, int fiber_dim);

struct RandomFamilyOptions {
  bool periodic = true;    ///< integer wave vectors (torus) or real ones (embedded hosts)
  double amplitude = 0.04;
  int modes = 2;
};

/// Lambda = d_v B + psi(v) sum_k a_k(x,v) dx_k + dG with B = sum_c f_c(x) chi_c(v),
/// chi_c = 3 l_c^2 - 2 l_c^3 for the barycentric coordinates l_c of the target, and
/// psi = prod_c |v - p_c|^2. d Lambda vanishes on the colored vertex fibres.
/// dLambda is computed by automatic differentiation.
struct RandomFamily {
  OneFormField form;
  /// f_c at a base point (the colored-vertex values of B).
  std::function<double(int, const Eigen::VectorXd&)> f;
};
RandomFamily random_family(int base_dim, const TargetSimplex& target, std::uint64_t seed,
                           const RandomFamilyOptions& opts = {});

Eigen::VectorXd to_eigen(const RVec& v);

}  // namespace thom
