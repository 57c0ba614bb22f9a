#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/transversality.hpp"

using namespace thom;

namespace {

Eigen::MatrixXd cols(std::initializer_list<std::initializer_list<double>> columns) {
  const auto k = static_cast<Eigen::Index>(columns.size());
  const auto D = static_cast<Eigen::Index>(columns.begin()->size());
  Eigen::MatrixXd m(D, k);
  Eigen::Index j = 0;
  for (const auto& c : columns) {
    Eigen::Index i = 0;
    for (double x : c) m(i++, j) = x;
    ++j;
  }
  return m;
}

}  // namespace

TEST_CASE("frame margin on hand cases") {
  // Complementary dimensions: smallest singular value of [T P].
  CHECK(frame_margin(cols({{1, 0}}), cols({{0, 1}})) == doctest::Approx(1.0));
  CHECK(frame_margin(cols({{1, 0}}), cols({{1, 0}})) == doctest::Approx(0.0));
  // Two unit vectors at angle theta: sqrt(1 - cos theta).
  const double th = std::numbers::pi / 4;
  CHECK(frame_margin(cols({{1, 0}}), cols({{std::cos(th), std::sin(th)}})) ==
        doctest::Approx(std::sqrt(1 - std::cos(th))));
  // Low dimensions: principal angle.
  CHECK(frame_margin(cols({{1, 0, 0}}), cols({{0, 1, 0}})) == doctest::Approx(std::numbers::pi / 2));
  CHECK(frame_margin(cols({{1, 0, 1}}), cols({{1, 0, 0}})) == doctest::Approx(std::numbers::pi / 4));
  CHECK(frame_margin(cols({{0, 0, 0}}), cols({{1, 0, 0}})) == 0.0);
  // Excess dimensions: D-th singular value.
  CHECK(frame_margin(cols({{1, 0}, {0, 1}}), cols({{1, 0}})) == doctest::Approx(1.0));
  // Scaling the frame does not change the margin.
  CHECK(frame_margin(cols({{3, 0}}), cols({{1, 2}})) == doctest::Approx(frame_margin(cols({{1, 0}}), cols({{1, 2}}))));
  CHECK_THROWS_AS(frame_margin(cols({{1, 0}}), cols({{1, 0, 0}})), DimensionMismatch);
}

TEST_CASE("zero section is tangent to the horizontal field") {
  auto T = torus_triangulation(2, 2);
  auto tower = iterate_fold(T, thom_pattern(2), 0);
  PLSection zero;
  zero.base = tower.top();
  zero.lift.assign(zero.base->num_vertices(), RVec{0, 0});
  auto rep = certify_transversality(zero, horizontal_field(2));
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_margin < 1e-12);
  CHECK(rep.failing == rep.margins.size());
  // The exp field is transverse to the zero section.
  CHECK(certify_transversality(zero, exp_field(2)).pass);
}

TEST_CASE("certification is dimension checked") {
  auto T = torus_triangulation(1, 2);
  auto sec = jiggle_exp(iterate_fold(T, thom_pattern(1), 1), {1, ModelKind::Torus});
  CHECK_THROWS_AS(certify_transversality(sec, exp_field(2)), DimensionMismatch);
}

TEST_CASE("transversal order scans") {
  const auto circle = torus_triangulation(1, 2);
  CHECK(min_transversal_order(circle, thom_pattern(1), {1, ModelKind::Torus}, {exp_field(1)}, 4) == 1);
  CHECK(min_transversal_order(circle, thom_pattern(1), {1, ModelKind::Torus}, {horizontal_field(1)}, 4) == 1);
  const auto torus = torus_triangulation(2, 2);
  auto s = scan_transversal_order(torus, thom_pattern(2), {2, ModelKind::Torus}, {exp_field(2)}, 4);
  CHECK(s.order >= 1);
  CHECK(s.order <= 4);
  CHECK(s.best_margin.back() > 1e-6);
  CHECK_THROWS_AS(min_transversal_order(torus, thom_pattern(2), {2, ModelKind::Torus}, {horizontal_field(2)}, 0, 0),
                  OrderExhausted);
  CHECK_THROWS_AS(scan_transversal_order(torus, thom_pattern(2), {2, ModelKind::Torus}, {}, 2), InvalidParams);
}

TEST_CASE("field interpolation and schedules") {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 0.3);
  auto P = horizontal_field(2), Q = exp_field(2);
  CHECK(interpolate_fields(P, Q, 0).L(x).isApprox(P.L(x)));
  CHECK(interpolate_fields(P, Q, 1).L(x).isApprox(Q.L(x)));
  CHECK(interpolate_fields(P, Q, 0.5).L(x).isApprox(-0.5 * Eigen::MatrixXd::Identity(2, 2)));
  CHECK_THROWS_AS(interpolate_fields(P, exp_field(1), 0.5), DomainMismatch);
  CHECK_THROWS_AS(interpolate_fields(P, Q, 2), InvalidParams);

  auto S = schedule_field(P, Q, 0.25);
  CHECK(S.timed);
  auto at = [&](double t) {
    Eigen::VectorXd p(5);
    p << x, t;
    return S.L(p);
  };
  CHECK(at(0).isApprox(P.L(x)));
  CHECK(at(1.25).isApprox(P.L(x)));
  CHECK(at(3).isApprox(Q.L(x)));
  CHECK(at(1.5).isApprox(-(1.0 / 3) * Eigen::MatrixXd::Identity(2, 2)));
  CHECK(freeze_time(S, 2.5).L(x).isApprox(Q.L(x)));
  CHECK_THROWS_AS(freeze_time(S, 4), InvalidTime);
  CHECK(schedule_family(P, Q, 0.25, {0, 1, 2, 3}).size() == 4);
  CHECK_THROWS_AS(schedule_field(P, Q, 1.5), InvalidParams);
}

TEST_CASE("suspended fields contain the time direction") {
  auto F = suspend_field(horizontal_field(2));
  CHECK(F.timed);
  CHECK(F.plane_dim() == 3);
  CHECK(F.ambient_dim() == 5);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(5);
  Eigen::MatrixXd dt = Eigen::MatrixXd::Zero(5, 1);
  dt(4, 0) = 1;
  CHECK(frame_margin(dt, F.basis(p)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(suspend_field(F), InvalidParams);
}

TEST_CASE("barycentric lattice counts") {
  CHECK(barycentric_lattice(1, 4).size() == 5);
  CHECK(barycentric_lattice(2, 4).size() == 15);
  CHECK(barycentric_lattice(3, 4).size() == 35);
  auto c = barycentric_lattice(2, 0);
  REQUIRE(c.size() == 1);
  CHECK(c[0][0] == doctest::Approx(1.0 / 3));
  for (const auto& b : barycentric_lattice(3, 3)) {
    double s = 0;
    for (double q : b) s += q;
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("serial and parallel certification agree") {
  auto T = torus_triangulation(2, 2);
  auto sec = jiggle_exp(iterate_fold(T, thom_pattern(2), 1), {2, ModelKind::Torus});
  auto F = freeze_time(schedule_field(horizontal_field(2), exp_field(2), 0.25), 1.5);
  auto a = certify_transversality(sec, F, {}, ExecPolicy::Serial);
  auto b = certify_transversality(sec, F, {}, ExecPolicy::Parallel);
  REQUIRE(a.margins.size() == b.margins.size());
  for (std::size_t i = 0; i < a.margins.size(); ++i) CHECK(a.margins[i].margin == b.margins[i].margin);
}
