#include "thomjiggle/ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thomjiggle/errors.hpp"

namespace thom {

namespace {

Eigen::VectorXd rk4_step(const OdeRhs& f, double t, const Eigen::VectorXd& y, double h) {
  const Eigen::VectorXd k1 = f(t, y);
  const Eigen::VectorXd k2 = f(t + h / 2, y + (h / 2) * k1);
  const Eigen::VectorXd k3 = f(t + h / 2, y + (h / 2) * k2);
  const Eigen::VectorXd k4 = f(t + h, y + h * k3);
  return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

Eigen::VectorXd integrate_rk4(const OdeRhs& f, double t0, double t1, Eigen::VectorXd y, const OdeOptions& opts,
                              OdeStats* stats, const OdeMonitor& monitor) {
  if (!(t1 >= t0)) throw InvalidParams("integration interval must run forward");
  const double span = t1 - t0;
  if (span == 0) return y;
  const double floor = opts.h_min * span;
  double t = t0;
  double h = std::min(opts.h_init * span, span);
  long steps = 0;
  while (t < t1) {
    if (++steps > opts.max_steps) throw StepUnderflow("step budget exhausted");
    if (t + h > t1) h = t1 - t;
    const Eigen::VectorXd big = rk4_step(f, t, y, h);
    const Eigen::VectorXd half = rk4_step(f, t, y, h / 2);
    const Eigen::VectorXd two = rk4_step(f, t + h / 2, half, h / 2);
    const Eigen::VectorXd diff = two - big;
    double err = 0;
    for (Eigen::Index i = 0; i < diff.size(); ++i)
      err = std::max(err, std::abs(diff(i)) / (15.0 * (1.0 + std::abs(two(i)))));
    if (!std::isfinite(err)) throw StepUnderflow("non-finite derivative during integration");
    if (err <= opts.tol) {
      y = two + diff / 15.0;
      t = (t1 - (t + h) <= floor * 1e-3) ? t1 : t + h;
      if (stats) ++stats->accepted;
      if (monitor) monitor(t, y);
      const double grow = err > 0 ? 0.9 * std::pow(opts.tol / err, 0.2) : 4.0;
      h *= std::clamp(grow, 0.2, 4.0);
    } else {
      if (stats) ++stats->rejected;
      h *= std::clamp(0.9 * std::pow(opts.tol / err, 0.2), 0.1, 0.5);
      if (h < floor) throw StepUnderflow("step size fell below the floor at t = " + std::to_string(t));
    }
  }
  return y;
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw InvalidParams("quadrature order must be positive");
  QuadratureRule q;
  const int n = order;
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    const double wi = 2 / ((1 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back((x[static_cast<std::size_t>(i)] + 1) / 2);
    q.weights.push_back(w[static_cast<std::size_t>(i)] / 2);
  }
  return q;
}

}  // namespace thom
