#include <cmath>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/holonomy.hpp"

namespace thom {

Eigen::MatrixXd kernel_map(const TwoFormField& omega, const Eigen::VectorXd& p) {
  const int d = omega.base_dim(), n = omega.fiber_dim();
  if (p.size() != d + n) throw DimensionMismatch("point has the wrong number of coordinates");
  const Eigen::MatrixXd W = omega.matrix(p);
  const Eigen::MatrixXd vv = W.bottomRightCorner(n, n);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(vv);
  const auto& sv = svd.singularValues();
  if (!(sv(n - 1) > 1e-10 * std::max(1.0, sv(0)))) throw DegenerateFiberForm("form is degenerate on the fibre");
  return -vv.partialPivLu().solve(W.bottomLeftCorner(n, d));
}

Eigen::VectorXd holonomy_transport(const TwoFormField& omega, const std::vector<Eigen::VectorXd>& path,
                                   const Eigen::VectorXd& v0, const TransportOptions& opts, OdeStats* stats) {
  const int d = omega.base_dim(), n = omega.fiber_dim();
  if (v0.size() != n) throw DimensionMismatch("fibre point has the wrong dimension");
  for (const auto& x : path)
    if (x.size() != d) throw DimensionMismatch("path point has the wrong dimension");
  const auto guard = [&](double, const Eigen::VectorXd& v) {
    if (!(v.norm() <= opts.disk_radius)) throw LeftDomain("transport left the disk bundle");
  };
  Eigen::VectorXd v = v0;
  guard(0, v);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Eigen::VectorXd a = path[i - 1];
    const Eigen::VectorXd dx = path[i] - path[i - 1];
    if (dx.squaredNorm() == 0) continue;
    const OdeRhs rhs = [&](double s, const Eigen::VectorXd& y) {
      Eigen::VectorXd p(d + n);
      p << a + s * dx, y;
      return (kernel_map(omega, p) * dx).eval();
    };
    v = integrate_rk4(rhs, 0.0, 1.0, v, opts.ode, stats, guard);
  }
  return v;
}

double loop_area_ratio(const TwoFormField& omega, const std::vector<Eigen::VectorXd>& loop, const Eigen::VectorXd& v0,
                       double h, const TransportOptions& opts) {
  if (omega.fiber_dim() < 2) throw InvalidParams("probe triangles need a fibre of dimension >= 2");
  auto ratio = [&](double size) {
    std::vector<Eigen::VectorXd> pts{v0, v0, v0};
    pts[1](0) += size;
    pts[2](1) += size;
    auto area = [&](const std::vector<Eigen::VectorXd>& q) { return 0.5 * (q[1] - q[0]).dot(omega.omega0 * (q[2] - q[0])); };
    const double before = area(pts);
    for (auto& q : pts) q = holonomy_transport(omega, loop, q, opts);
    return area(pts) / before;
  };
  // The straight probe triangle has an O(h) bias; extrapolate it away.
  return 2 * ratio(h / 2) - ratio(h);
}

}  // namespace thom
