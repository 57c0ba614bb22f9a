#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace thom {

struct OdeOptions {
  double tol = 1e-10;     ///< per-step local error bound (mixed absolute/relative)
  double h_init = 1.0 / 16;
  double h_min = 1e-12;   ///< hard step floor, relative to the interval length
  long max_steps = 2000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
/// Called after each accepted step; throwing aborts the integration.
using OdeMonitor = std::function<void(double, const Eigen::VectorXd&)>;

/// Classical RK4 with step doubling and Richardson extrapolation; forward in time.
Eigen::VectorXd integrate_rk4(const OdeRhs& f, double t0, double t1, Eigen::VectorXd y, const OdeOptions& opts = {},
                              OdeStats* stats = nullptr, const OdeMonitor& monitor = {});

struct QuadratureRule {
  std::vector<double> nodes;    ///< on [0, 1]
  std::vector<double> weights;  ///< sum to 1
};

/// Gauss-Legendre rule of the given order mapped to [0, 1].
QuadratureRule gauss_legendre(int order);

}  // namespace thom
