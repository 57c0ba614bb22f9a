#include <doctest.h>

#include <cmath>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/holonomy.hpp"

using namespace thom;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::vector<Eigen::VectorXd> square_loop(double a) {
  return {vec({0, 0}), vec({a, 0}), vec({a, a}), vec({0, a}), vec({0, 0})};
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int order : {1, 2, 5, 16}) {
    const auto q = gauss_legendre(order);
    double wsum = 0;
    for (double w : q.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int deg = 0; deg < 2 * order; ++deg) {
      double s = 0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], deg);
      CHECK(s == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), InvalidParams);
}

TEST_CASE("RK4 matches the exponential") {
  OdeStats stats;
  const auto y = integrate_rk4([](double, const Eigen::VectorXd& v) { return v; }, 0, 1, vec({1}), {}, &stats);
  CHECK(y(0) == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
  CHECK(stats.accepted > 0);
  // Rotation preserves the norm.
  const auto r = integrate_rk4([](double, const Eigen::VectorXd& v) { return vec({-v(1), v(0)}); }, 0, 2 * M_PI,
                               vec({1, 0}));
  CHECK(r(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(r(1)) < 1e-9);
  CHECK_THROWS_AS(integrate_rk4([](double, const Eigen::VectorXd& v) { return v; }, 1, 0, vec({1})), InvalidParams);
}

TEST_CASE("one-form checks") {
  auto fam = random_family(2, default_target_simplex(2), 3);
  const auto probes = probe_points(2, 2, 16, 5);
  auto c = check_one_form(fam.form, probes);
  CHECK(c.pass);
  CHECK(c.max_d_error < 1e-6);
  CHECK(check_one_form(base_area_form(2, 2), probes).pass);
  CHECK(check_one_form(linear_g_dv1(vec({0.3, -0.2}), 0.1, 2), probes).pass);
  CHECK(check_one_form(closed_base_form(vec({0.2, 0.1}), vec({1, 2}), 0.05, 2), probes).pass);
  // A wrong analytic derivative is caught.
  OneFormField bad = base_area_form(2, 2);
  bad.d_lambda = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(4, 4).eval(); };
  CHECK_THROWS_AS(validated(bad), FormCheckFailed);
  CHECK(check_fiber_restriction(two_form(fam.form), probes).pass);
}

TEST_CASE("transport under g(x) dv1 is affine") {
  // ker Omega = {(u, (0, grad . u))}: v2 moves by grad . dx.
  const auto grad = vec({0.3, -0.2});
  const auto omega = two_form(linear_g_dv1(grad, 0.1, 2));
  const auto A = kernel_map(omega, vec({0.1, 0.2, 0.0, 0.0}));
  CHECK(A.isApprox((Eigen::MatrixXd(2, 2) << 0, 0, 0.3, -0.2).finished()));
  const auto v = holonomy_transport(omega, {vec({0, 0}), vec({0.5, 0.25})}, vec({0.1, 0.2}));
  CHECK(v(0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(v(1) == doctest::Approx(0.2 + 0.3 * 0.5 - 0.2 * 0.25).epsilon(1e-12));
}

TEST_CASE("transport is reversible and area preserving") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto omega = two_form(random_family(2, default_target_simplex(2), seed).form);
    const std::vector<Eigen::VectorXd> path{vec({0, 0}), vec({0.4, 0.1}), vec({0.2, 0.5})};
    std::vector<Eigen::VectorXd> back(path.rbegin(), path.rend());
    const auto v0 = vec({0.1, -0.05});
    const auto there = holonomy_transport(omega, path, v0);
    const auto again = holonomy_transport(omega, back, there);
    CHECK((again - v0).norm() < 1e-8);
    CHECK(std::abs(loop_area_ratio(omega, square_loop(0.3), v0) - 1.0) < 1e-5);
  }
  // The base area form is vertical-free, so transport is trivial.
  const auto flat = two_form(base_area_form(2, 2));
  CHECK((holonomy_transport(flat, square_loop(0.5), vec({0.2, 0.1})) - vec({0.2, 0.1})).norm() < 1e-12);
}

TEST_CASE("transport failures") {
  const auto omega = two_form(linear_g_dv1(vec({2.0, 0.0}), 0, 2));
  TransportOptions small;
  small.disk_radius = 0.3;
  CHECK_THROWS_AS(holonomy_transport(omega, {vec({0, 0}), vec({1, 0})}, vec({0, 0.1}), small), LeftDomain);
  // Lambda = -v1 dv2 cancels omega_0 on the fibre.
  OneFormField cancel;
  cancel.base_dim = 2;
  cancel.fiber_dim = 2;
  cancel.lambda = [](const Eigen::VectorXd& p) { return vec({0, 0, 0, -p(2)}); };
  cancel.d_lambda = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(4, 4);
    W(2, 3) = -1;
    W(3, 2) = 1;
    return W;
  };
  CHECK(check_one_form(cancel, probe_points(2, 2, 8, 1)).pass);
  CHECK_THROWS_AS(kernel_map(two_form(cancel), vec({0, 0, 0, 0})), DegenerateFiberForm);
  CHECK_THROWS_AS(holonomy_transport(omega, {vec({0, 0, 0})}, vec({0, 0})), DimensionMismatch);
  CHECK_THROWS_AS(omega0_matrix(3), InvalidParams);
}
