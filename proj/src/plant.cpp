#include "tocs/plant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tocs/errors.hpp"
#include "tocs/timeopt.hpp"

namespace tocs::plant {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1]; the +1 keeps log() away from zero.
double to_unit(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t stream_key(const NoiseStream& ns) {
  return splitmix64(splitmix64(ns.seed) ^ splitmix64(~ns.stream_id));
}

}  // namespace

double wgn_sample(NoiseStream& ns, double dbw) {
  const std::uint64_t key = stream_key(ns);
  const double u1 = to_unit(splitmix64(key + 2 * ns.cursor));
  const double u2 = to_unit(splitmix64(key + 2 * ns.cursor + 1));
  ++ns.cursor;
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return std::pow(10.0, dbw / 20.0) * z;
}

double disturbance_clean(const DisturbanceSpec& spec, double t) {
  switch (spec.kind) {
    case DisturbanceKind::sines_256:
      return spec.amplitude * (std::sin(0.2 * spec.omega * t) +
                               std::sin(0.1 * spec.omega * t) +
                               std::sin(0.05 * spec.omega * t));
    case DisturbanceKind::squares_259:
      return spec.amplitude *
             (timeopt::signum(std::sin(0.2 * spec.omega * t)) +
              timeopt::signum(std::sin(0.1 * spec.omega * t)) +
              timeopt::signum(std::sin(0.05 * spec.omega * t)));
    case DisturbanceKind::custom:
      return spec.custom_value;
  }
  return 0.0;
}

double disturbance(const DisturbanceSpec& spec, double t, NoiseStream& ns) {
  double f = disturbance_clean(spec, t);
  if (spec.noise_gain > 0.0)
    f += spec.amplitude * spec.noise_gain * wgn_sample(ns, spec.noise_dbw);
  return f;
}

std::vector<double> chain_step(const std::vector<double>& x, double u,
                               const DisturbanceSpec& spec, double b, double h,
                               double t, NoiseStream& ns) {
  if (b == 0.0) throw std::domain_error("chain_step: b must be nonzero");
  if (x.size() < 1) throw std::domain_error("chain_step: empty state");
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) next[i] = x[i] + h * x[i + 1];
  next.back() = x.back() + h * (disturbance(spec, t, ns) + b * u);
  return next;
}

namespace {

std::array<double, 3> lorenz_rhs(const std::array<double, 3>& x, double u,
                                 const LorenzParams& p) {
  return {p.sigma * (x[1] - x[0]),
          p.rho * x[0] - x[1] - x[0] * x[2] + u,
          -p.b1 * x[2] + x[0] * x[1]};
}

}  // namespace

std::array<double, 3> lorenz_step(const std::array<double, 3>& x, double u,
                                  const LorenzParams& p, double h, bool rk4) {
  std::array<double, 3> next;
  if (!rk4) {
    const auto d = lorenz_rhs(x, u, p);
    for (int i = 0; i < 3; ++i) next[i] = x[i] + h * d[i];
  } else {
    const auto k1 = lorenz_rhs(x, u, p);
    std::array<double, 3> tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    const auto k2 = lorenz_rhs(tmp, u, p);
    for (int i = 0; i < 3; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    const auto k3 = lorenz_rhs(tmp, u, p);
    for (int i = 0; i < 3; ++i) tmp[i] = x[i] + h * k3[i];
    const auto k4 = lorenz_rhs(tmp, u, p);
    for (int i = 0; i < 3; ++i)
      next[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  for (int i = 0; i < 3; ++i)
    if (!(std::abs(next[i]) <= 1e6))
      throw DivergenceError("lorenz_step: state magnitude exceeded 1e6", -1);
  return next;
}

double measure_output(double x1, double vm, double gsm1, NoiseStream& ns, double dbw) {
  if (gsm1 <= 0.0) return x1;
  return x1 + vm * gsm1 * wgn_sample(ns, dbw);
}

}  // namespace tocs::plant
