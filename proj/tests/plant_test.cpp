#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tocs/errors.hpp"
#include "tocs/geometry.hpp"
#include "tocs/plant.hpp"

using namespace tocs;
using namespace tocs::plant;

TEST_CASE("wgn variance follows the dBW level") {
  NoiseStream ns{42, 0};
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = wgn_sample(ns, -20.0);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) <= 3.0 * 0.1 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(0.01).epsilon(0.05));

  NoiseStream ns0{42, 7};
  double var0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = wgn_sample(ns0, 0.0);
    var0 += x * x;
  }
  CHECK(var0 / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("noise streams are deterministic and independent") {
  NoiseStream a{7, 0}, b{7, 0}, c{7, 1};
  std::vector<double> xs, ys, zs;
  for (int i = 0; i < 100000; ++i) {
    xs.push_back(wgn_sample(a, -20.0));
    ys.push_back(wgn_sample(b, -20.0));
    zs.push_back(wgn_sample(c, -20.0));
  }
  CHECK(xs == ys);  // same (seed, stream) -> identical sequence
  double dot = 0.0, nx = 0.0, nz = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    dot += xs[i] * zs[i];
    nx += xs[i] * xs[i];
    nz += zs[i] * zs[i];
  }
  CHECK(std::abs(dot / std::sqrt(nx * nz)) < 0.02);
  // different seeds differ
  NoiseStream d{8, 0};
  CHECK(wgn_sample(d, -20.0) != xs[0]);
}

TEST_CASE("disturbance kinds") {
  NoiseStream ns{1, 0};
  DisturbanceSpec sines{DisturbanceKind::sines_256, 20.0, 6.28, 0.0, -20.0, 0.0};
  CHECK(disturbance(sines, 0.0, ns) == 0.0);

  DisturbanceSpec squares{DisturbanceKind::squares_259, 20.0, 6.28, 0.0, -20.0, 0.0};
  CHECK(disturbance(squares, 0.0, ns) == 0.0);  // sign(0) three times
  CHECK(disturbance(squares, 0.01, ns) == 60.0);

  DisturbanceSpec constant{DisturbanceKind::custom, 20.0, 6.28, 0.0, -20.0, -3.5};
  CHECK(disturbance(constant, 123.0, ns) == -3.5);

  // noise term scales with amplitude * g_sm at -20 dBW
  DisturbanceSpec noisy{DisturbanceKind::custom, 20.0, 6.28, 0.1, -20.0, 0.0};
  double var = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double f = disturbance(noisy, 0.0, ns);
    var += f * f;
  }
  CHECK(var / 100000 == doctest::Approx(0.04).epsilon(0.05));  // (20*0.1*0.1)^2
}

TEST_CASE("chain_step") {
  NoiseStream ns{1, 0};
  DisturbanceSpec none{DisturbanceKind::custom, 0.0, 0.0, 0.0, -20.0, 0.0};
  const auto next = chain_step({1.0, 2.0, 3.0}, 0.0, none, 1.0, 0.1, 0.0, ns);
  CHECK(next[0] == doctest::Approx(1.2));
  CHECK(next[1] == doctest::Approx(2.3));
  CHECK(next[2] == 3.0);

  // constant disturbance cancelled by u = -c/b keeps the bottom level fixed
  DisturbanceSpec c5{DisturbanceKind::custom, 0.0, 0.0, 0.0, -20.0, 5.0};
  const auto fixed = chain_step({0.0, 0.0, 1.5}, -2.5, c5, 2.0, 0.1, 0.0, ns);
  CHECK(fixed[2] == 1.5);

  // bottom level integrates h * f1(t)
  DisturbanceSpec sines{DisturbanceKind::sines_256, 20.0, 6.28, 0.0, -20.0, 0.0};
  const double t = 0.25, h = 5e-4;
  const double f1 = 20.0 * (std::sin(0.2 * 6.28 * t) + std::sin(0.1 * 6.28 * t) +
                            std::sin(0.05 * 6.28 * t));
  const auto kicked = chain_step({0.0, 0.0, 0.0}, 0.0, sines, 1.0, h, t, ns);
  CHECK(kicked[2] == doctest::Approx(h * f1).epsilon(1e-12));

  CHECK_THROWS_AS(chain_step({0.0, 0.0}, 0.0, none, 0.0, 0.1, 0.0, ns),
                  std::domain_error);
}

TEST_CASE("chain_step with no disturbance agrees with geometry::propagate") {
  NoiseStream ns{1, 0};
  DisturbanceSpec none{DisturbanceKind::custom, 0.0, 0.0, 0.0, -20.0, 0.0};
  geometry::SystemParams p{4, 0.5, 10.0};
  std::vector<double> x{1.0, -2.0, 0.25, 3.0};
  const double u = -1.75;
  CHECK(chain_step(x, u, none, 1.0, p.h, 0.0, ns) == geometry::propagate(p, x, u));
}

TEST_CASE("lorenz_step") {
  LorenzParams p;
  const std::array<double, 3> zero{0.0, 0.0, 0.0};
  CHECK(lorenz_step(zero, 0.0, p, 1e-4) == zero);

  // one Euler step from the initial condition of the chaotic run
  const std::array<double, 3> x0{-4.47, -0.505, 28.02};
  const double h = 1e-4;
  const auto next = lorenz_step(x0, 0.0, p, h);
  CHECK(next[0] == doctest::Approx(x0[0] + h * (10.0 * (x0[1] - x0[0]))).epsilon(1e-14));
  CHECK(next[1] ==
        doctest::Approx(x0[1] + h * (28.0 * x0[0] - x0[1] - x0[0] * x0[2])).epsilon(1e-14));
  CHECK(next[2] ==
        doctest::Approx(x0[2] + h * (-8.0 / 3.0 * x0[2] + x0[0] * x0[1])).epsilon(1e-14));

  // exact-feedback cancellation: u = x2 + x1 x3 - rho x1 gives Dx2 = -x2
  auto x = x0;
  double prev = std::abs(x[1]);
  for (int i = 0; i < 200; ++i) {
    const double u = x[1] + x[0] * x[2] - p.rho * x[0];
    x = lorenz_step(x, u, p, 1e-3);
    CHECK(std::abs(x[1]) <= prev);
    prev = std::abs(x[1]);
  }

  // rk4 stays close to euler over one small step
  const auto rk = lorenz_step(x0, 0.0, p, h, true);
  for (int i = 0; i < 3; ++i) CHECK(rk[i] == doctest::Approx(next[i]).epsilon(1e-4));

  CHECK_THROWS_AS(lorenz_step({1e6, 1e6, 1e6}, 0.0, p, 10.0), DivergenceError);
}

TEST_CASE("measure_output") {
  NoiseStream ns{5, 1};
  CHECK(measure_output(2.0, 2.0, 0.0, ns) == 2.0);

  double var = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double chi = measure_output(2.0, 2.0, 0.1, ns);
    var += (chi - 2.0) * (chi - 2.0);
  }
  CHECK(var / n == doctest::Approx(0.0004).epsilon(0.05));  // (0.1*2*0.1)^2
}
