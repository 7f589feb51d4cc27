#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tocs/geometry.hpp"
#include "tocs/timeopt.hpp"

using namespace tocs;
using namespace tocs::timeopt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic test-local generator.
struct Rng {
  std::uint64_t s = 0x12345678;
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = s;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
  double uniform(double a, double b) {
    return a + (b - a) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
};

}  // namespace

TEST_CASE("signum") {
  CHECK(signum(3.2) == 1);
  CHECK(signum(0.0) == 0);
  CHECK(signum(-0.0) == 0);
  CHECK(signum(-1e-300) == -1);
}

TEST_CASE("sat") {
  CHECK(sat(2.0, 1.0) == 1.0);
  CHECK(sat(0.3, 0.5) == doctest::Approx(0.6));
  CHECK(sat(-5.0, 2.0) == -1.0);
  // continuous at |x| = delta
  CHECK(sat(1.0, 1.0) == 1.0);
  CHECK(sat(-2.0, 2.0) == -1.0);
  CHECK_THROWS_AS(sat(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(sat(1.0, -1.0), std::domain_error);
}

TEST_CASE("step_count solves the step polynomial") {
  auto sc = step_count(2, 3.0, 1.0, 1.0);
  CHECK(sc.k == 3);
  CHECK(sc.kprime == doctest::Approx(3.0).epsilon(1e-10));

  sc = step_count(3, 4.0, 1.0, 1.0);
  CHECK(sc.k == 4);
  CHECK(sc.kprime == doctest::Approx(4.0).epsilon(1e-10));

  // quadratic formula oracle: k'(k'-1) = 2.2
  sc = step_count(2, 1.1, 1.0, 1.0);
  const double expect = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * 2.2));
  CHECK(sc.kprime == doctest::Approx(expect).epsilon(1e-10));
  CHECK(sc.k == 3);
  CHECK(sc.kprime > sc.k - 1);
  CHECK(sc.kprime <= sc.k + 1e-9);

  CHECK_THROWS_AS(step_count(2, 0.9, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(step_count(2, 1.0, 1.0, 1.0), std::domain_error);  // boundary is linear
}

TEST_CASE("fsun examples") {
  CHECK(fsun(0.5, 0.0, 1.0, 1.0) == doctest::Approx(-0.5));
  // closed loop reaches the origin in exactly two steps
  geometry::SystemParams p{2, 1.0, 1.0};
  geometry::StateVector x{0.5, 0.0};
  x = geometry::propagate(p, x, fsun(x[0], x[1], 1.0, 1.0));
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(-0.5));
  x = geometry::propagate(p, x, fsun(x[0], x[1], 1.0, 1.0));
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[1] == doctest::Approx(0.0));

  CHECK(fsun(-6.0, 3.0, 1.0, 1.0) == doctest::Approx(-1.0));
  CHECK(fsun(0.0, 0.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("fxiao examples") {
  geometry::SystemParams p3{3, 1.0, 1.0};
  CHECK(fxiao(std::vector{20.0, -10.0, 4.0}, p3) == doctest::Approx(-1.0));
  CHECK(fxiao(std::vector{0.0, 0.0, 0.0}, p3) == 0.0);
  geometry::SystemParams p2{2, 1.0, 1.0};
  CHECK(fxiao(std::vector{0.5, 0.0}, p2) == doctest::Approx(fsun(0.5, 0.0, 1.0, 1.0)));
}

TEST_CASE("linear_synthesis examples") {
  CHECK(linear_synthesis(std::vector{1.0, 0.0}, 1.0) == doctest::Approx(-1.0));
  CHECK(linear_synthesis(std::vector{1.0, 0.0, 0.0}, 1.0) == doctest::Approx(-1.0));
  CHECK(linear_synthesis(std::vector{0.0, 0.0, 0.0, 0.0}, 0.25) == 0.0);
}

TEST_CASE("fxiao_tracking examples") {
  geometry::SystemParams p3{3, 1.0, 1.0};
  CHECK(fxiao_tracking(std::vector{7.0, 0.0, 0.0}, 7.0, p3, 1.0) == 0.0);
  geometry::SystemParams p2{2, 1.0, 1.0};
  CHECK(fxiao_tracking(std::vector{0.0, 0.0}, 1.0, p2, 1.0) == doctest::Approx(1.0));
  CHECK(fxiao_tracking(std::vector{-2.5, 0.0}, -3.0, p2, 1.0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(fxiao_tracking(std::vector{0.0, 0.0}, 0.0, p2, 0.5), std::domain_error);
}

TEST_CASE("boundedness: |fsun| and |fxiao| never exceed r") {
  Rng rng;
  for (int i = 0; i < 2000; ++i) {
    const double r = rng.uniform(0.1, 10.0);
    const double h = rng.uniform(0.01, 2.0);
    CHECK(std::abs(fsun(rng.uniform(-100, 100), rng.uniform(-100, 100), r, h)) <= r);
    const int m = 2 + static_cast<int>(rng.uniform(0, 3.999));
    std::vector<double> lv(m);
    for (auto& v : lv) v = rng.uniform(-100, 100);
    geometry::SystemParams p{m, h, r};
    CHECK(std::abs(fxiao(lv, p)) <= r);
  }
}

TEST_CASE("shift invariance of the tracking form") {
  Rng rng;
  geometry::SystemParams p{3, 0.5, 2.0};
  for (int i = 0; i < 500; ++i) {
    std::vector<double> lv{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double v = rng.uniform(-5, 5);
    const double n0 = rng.uniform(1.0, 10.0);
    std::vector<double> shifted{lv[0] - v, lv[1], lv[2]};
    geometry::SystemParams q{3, n0 * p.h, p.r};
    CHECK(fxiao_tracking(lv, v, p, n0) == fxiao(shifted, q));
  }
}

TEST_CASE("m = 2 reduction: fxiao equals fsun") {
  Rng rng;
  for (int i = 0; i < 10000; ++i) {
    const double h = rng.uniform(0.05, 2.0);
    const double r = rng.uniform(0.1, 5.0);
    const double x1 = rng.uniform(-50, 50);
    const double x2 = rng.uniform(-50, 50);
    geometry::SystemParams p{2, h, r};
    const double a = fxiao(std::vector{x1, x2}, p);
    const double b = fsun(x1, x2, r, h);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("r = infinity collapses fxiao to linear_synthesis") {
  Rng rng;
  for (int i = 0; i < 200; ++i) {
    const int m = 2 + static_cast<int>(rng.uniform(0, 3.999));
    const double h = rng.uniform(0.05, 1.0);
    std::vector<double> lv(m);
    for (auto& v : lv) v = rng.uniform(-10, 10);
    geometry::SystemParams p{m, h, kInf};
    CHECK(fxiao(lv, p) == linear_synthesis(lv, h));
    CHECK(std::abs(fsun(lv[0], lv[1], kInf, h) -
                   linear_synthesis(std::vector{lv[0], lv[1]}, h)) <= 1e-12);
  }
}

TEST_CASE("descent: on M(k) between the N planes the control is (-1)^m r s") {
  for (int m = 2; m <= 5; ++m) {
    for (double h : {0.5, 1.0}) {
      geometry::SystemParams p{m, h, 1.0};
      for (auto branch : {geometry::Branch::minus, geometry::Branch::plus}) {
        for (int k = m; k <= 10; ++k) {
          const auto ak = geometry::extremal_point(p, {geometry::PointKind::a, branch, k});
          const auto ak1 = (k - 1 >= 1)
                               ? geometry::extremal_point(p, {geometry::PointKind::a, branch, k - 1})
                               : geometry::StateVector(m, 0.0);
          const int s = geometry::point_sign(p, {geometry::PointKind::a, branch, k});
          const double want = ((m % 2 == 0) ? 1.0 : -1.0) * p.r * s;
          // dyadic interpolation weights keep every coordinate exact
          for (double beta : {0.125, 0.25, 0.5, 0.75, 0.875, 1.0}) {
            geometry::StateVector x(m);
            for (int i = 0; i < m; ++i) x[i] = beta * ak[i] + (1.0 - beta) * ak1[i];
            CAPTURE(m);
            CAPTURE(k);
            CAPTURE(beta);
            CHECK(fxiao(x, p) == want);
          }
        }
      }
    }
  }
}

TEST_CASE("deadbeat spot check: a_5 for m = 3 reaches the origin in 5 steps") {
  geometry::SystemParams p{3, 0.5, 1.0};
  geometry::ExtremalPointSpec spec{geometry::PointKind::a, geometry::Branch::minus, 5};
  auto x = geometry::extremal_point(p, spec);
  for (int step = 0; step < 5; ++step) {
    double nrm = 0.0;
    for (double v : x) nrm = std::max(nrm, std::abs(v));
    CHECK(nrm > 1e-6);  // not yet at the origin
    x = geometry::propagate(p, x, fxiao(x, p));
  }
  for (double v : x) CHECK(std::abs(v) <= 1e-12);
}
