#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace tocs::plant {

// Counter-based deterministic Gaussian source. Distinct (seed, stream_id)
// pairs give independent sequences; the cursor is the only mutable state.
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t cursor = 0;
};

// Zero-mean Gaussian draw with variance 10^(dbw/10).
double wgn_sample(NoiseStream& ns, double dbw);

enum class DisturbanceKind { sines_256, squares_259, custom };

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::custom;
  double amplitude = 20.0;
  double omega = 6.28;       // rad/s
  double noise_gain = 0.0;   // g_sm
  double noise_dbw = -20.0;
  double custom_value = 0.0;  // constant term for kind == custom
};

// Deterministic part of the disturbance, without the noise term.
double disturbance_clean(const DisturbanceSpec& spec, double t);

// f(t) = f_1(t) + amplitude * g_sm * wgn(noise_dbw).
double disturbance(const DisturbanceSpec& spec, double t, NoiseStream& ns);

// Forward Euler step of the m-order chain with total disturbance on the
// bottom level: x_m += h * (f(t) + b * u). Throws on b == 0.
std::vector<double> chain_step(const std::vector<double>& x, double u,
                               const DisturbanceSpec& spec, double b, double h,
                               double t, NoiseStream& ns);

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double b1 = 8.0 / 3.0;
  std::array<double, 3> x0{-4.47, -0.505, 28.02};
};

// One step of the Lorenz system with the control input on the second
// equation. rk4 switches to the classical 4th-order one-step rule with u
// held constant over the step. Throws DivergenceError past |x| = 1e6.
std::array<double, 3> lorenz_step(const std::array<double, 3>& x, double u,
                                  const LorenzParams& p, double h, bool rk4 = false);

// chi = x1 + vm * gsm1 * wgn(-20 dBW).
double measure_output(double x1, double vm, double gsm1, NoiseStream& ns,
                      double dbw = -20.0);

}  // namespace tocs::plant
