#include <doctest.h>

#include <atomic>
#include <cstdlib>

#include "thomjiggle/cocycle.hpp"
#include "thomjiggle/errors.hpp"
#include "thomjiggle/io.hpp"
#include "thomjiggle/transversality.hpp"

using namespace thom;

constexpr ExecPolicy S = ExecPolicy::Serial;
constexpr ExecPolicy P = ExecPolicy::Parallel;

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, P);
  for (int h : hits) CHECK(h == 1);
  // The lowest failing index is reported, as in a serial run.
  auto fail = [](std::size_t i) {
    if (i % 100 == 37) throw InvalidParams("index " + std::to_string(i));
  };
  for (ExecPolicy pol : {S, P}) {
    try {
      parallel_for(500, fail, pol);
      FAIL("expected a throw");
    } catch (const InvalidParams& e) {
      CHECK(std::string(e.what()).find("index 37") != std::string::npos);
    }
  }
}

TEST_CASE("thread cap honors the environment") {
  const int base = thread_cap();
  CHECK(base >= 1);
  setenv("THOM_JIGGLE_THREADS", "1", 1);
  CHECK(thread_cap() == 1);
  setenv("THOM_JIGGLE_THREADS", "junk", 1);
  CHECK(thread_cap() == base);
  setenv("THOM_JIGGLE_THREADS", "1", 1);
  std::atomic<int> sum{0};
  parallel_for(64, [&](std::size_t i) { sum += static_cast<int>(i); }, P);
  CHECK(sum == 64 * 63 / 2);
  unsetenv("THOM_JIGGLE_THREADS");
}

TEST_CASE("folding is policy independent") {
  const auto T = torus_triangulation(2, 2);
  const auto p = thom_pattern(2);
  const auto a = iterate_fold(T, p, 2, S);
  const auto b = iterate_fold(T, p, 2, P);
  CHECK(complex_to_text(*a.top()) == complex_to_text(*b.top()));
  CHECK(a.to_base == b.to_base);
  const auto ra = verify_fold(a, S), rb = verify_fold(b, P);
  CHECK(ra.pass == rb.pass);
  CHECK(ra.bijective == rb.bijective);
}

TEST_CASE("certification is policy independent") {
  const auto tower = iterate_fold(torus_triangulation(2, 2), thom_pattern(2), 1);
  const auto sec = jiggle_exp(tower, {2, ModelKind::Torus});
  const auto F = freeze_time(schedule_field(horizontal_field(2), exp_field(2), 0.25), 1.5);
  const auto a = certify_transversality(sec, F, {}, S);
  const auto b = certify_transversality(sec, F, {}, P);
  REQUIRE(a.margins.size() == b.margins.size());
  for (std::size_t i = 0; i < a.margins.size(); ++i) CHECK(a.margins[i].margin == b.margins[i].margin);
  CHECK(a.min_margin == b.min_margin);
}

TEST_CASE("Hausdorff profile is policy independent") {
  const auto T = torus_triangulation(2, 2);
  const auto samples = default_hausdorff_samples(*T);
  CHECK(hausdorff_profile(T, thom_pattern(2), 3, samples, S) == hausdorff_profile(T, thom_pattern(2), 3, samples, P));
}

TEST_CASE("cochains are policy independent") {
  const auto delta = default_target_simplex(2);
  const auto host = torus_host(2, 0);
  const auto form = random_family(2, delta, 2).form;
  CHECK(mu_cocycle(form, host, delta, {}, S).values == mu_cocycle(form, host, delta, {}, P).values);
  CHECK(swept_area_cochain(two_form(form), host, delta, {}, S).values ==
        swept_area_cochain(two_form(form), host, delta, {}, P).values);
}

TEST_CASE("box cover is policy independent") {
  const auto delta = default_target_simplex(2);
  const auto tower = iterate_fold(torus_triangulation(2, 2), thom_pattern(2), 0);
  const auto sys = make_box_system(tower, delta, {Rational(1, 4), Rational(1, 16)});
  const auto sec = jiggle_colored(tower, delta);
  const auto omega = two_form(random_family(2, delta, 5).form);
  const auto a = box_cover(sys, omega, sec, 2, {}, S);
  const auto b = box_cover(sys, omega, sec, 2, {}, P);
  CHECK(a.uncovered_samples == b.uncovered_samples);
  CHECK(a.disjointness_violations == b.disjointness_violations);
  CHECK(a.max_displacement == b.max_displacement);
}
