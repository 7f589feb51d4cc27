#include "tocs/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tocs/combin.hpp"
#include "tocs/errors.hpp"
#include "tocs/timeopt.hpp"

namespace tocs::geometry {

namespace {

double sign_pow(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

void require_finite_r(const SystemParams& p, const char* who) {
  if (!std::isfinite(p.r))
    throw std::domain_error(std::string(who) + ": requires a finite control bound r");
}

void validate_spec(const ExtremalPointSpec& spec) {
  const int kmin = (spec.kind == PointKind::a) ? 1 : 2;
  if (spec.k < kmin)
    throw std::domain_error("extremal point: k >= " + std::to_string(kmin) +
                            " for this kind (got k=" + std::to_string(spec.k) + ")");
}

double hpow(double h, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= h;
  return acc;
}

}  // namespace

void validate(const SystemParams& p) {
  if (p.m < 2) throw ConfigError("SystemParams: m must be >= 2");
  if (!(p.h > 0.0) || !std::isfinite(p.h)) throw ConfigError("SystemParams: h must be > 0");
  if (!(p.r > 0.0)) throw ConfigError("SystemParams: r must be > 0");
}

int point_sign(const SystemParams& p, const ExtremalPointSpec& spec) {
  const bool minus_family = (spec.kind == PointKind::a) == (spec.branch == Branch::minus);
  // {a-, b+} carry (-1)^(m-1); {a+, b-} carry (-1)^m.
  const int e = minus_family ? p.m - 1 : p.m;
  return (e % 2 == 0) ? 1 : -1;
}

std::vector<std::vector<double>> matrix_power(const SystemParams& p, int k) {
  validate(p);
  if (k < 0) throw std::domain_error("matrix_power: k must be >= 0");
  std::vector<std::vector<double>> a(p.m, std::vector<double>(p.m, 0.0));
  for (int i = 0; i < p.m; ++i)
    for (int j = i; j < p.m; ++j)
      a[i][j] = static_cast<double>(combin::binom(k, j - i)) * hpow(p.h, j - i);
  return a;
}

std::vector<std::vector<double>> matrix_power_inverse(const SystemParams& p, int k) {
  validate(p);
  if (k < 1) throw std::domain_error("matrix_power_inverse: k must be >= 1");
  std::vector<std::vector<double>> a(p.m, std::vector<double>(p.m, 0.0));
  for (int i = 0; i < p.m; ++i)
    for (int j = i; j < p.m; ++j)
      a[i][j] = sign_pow(j - i) * static_cast<double>(combin::binom(k + j - i - 1, j - i)) *
                hpow(p.h, j - i);
  return a;
}

StateVector extremal_point(const SystemParams& p, const ExtremalPointSpec& spec) {
  validate(p);
  validate_spec(spec);
  require_finite_r(p, "extremal_point");
  const double s = point_sign(p, spec);
  StateVector x(p.m);
  for (int i = 1; i <= p.m; ++i) {
    double c = static_cast<double>(combin::binom(p.m + spec.k - i, p.m - i + 1));
    if (spec.kind == PointKind::b) c -= 2.0;
    x[i - 1] = sign_pow(i - 1) * c * hpow(p.h, p.m - i + 1) * p.r * s;
  }
  return x;
}

SwitchValues switch_values(const SystemParams& p, const StateVector& x,
                           std::optional<int> k) {
  validate(p);
  if (static_cast<int>(x.size()) != p.m)
    throw std::domain_error("switch_values: state length != m");
  SwitchValues out;
  double hp = 1.0;
  for (int i = 0; i < p.m; ++i) {
    out.y += static_cast<double>(combin::binom(p.m - 1, i)) * hp * x[i];
    out.ybar += static_cast<double>(combin::binom(p.m, i)) * hp * x[i];
    hp *= p.h;
  }
  out.s = timeopt::signum(out.y);
  if (k) {
    if (*k < p.m - 1)
      throw std::domain_error("switch_values: z(k) needs k >= m-1");
    double z = 0.0;
    hp = 1.0;
    for (int i = 0; i < p.m; ++i) {
      z += static_cast<double>(combin::binom(*k, i)) * hp * x[i];
      hp *= p.h;
    }
    out.z = z;
  }
  return out;
}

double plane_residual(const SystemParams& p, const StateVector& x,
                      const PlaneSpec& plane) {
  validate(p);
  require_finite_r(p, "plane_residual");
  const double hm = hpow(p.h, p.m);
  const double rs = p.r * static_cast<double>(plane.s);
  const int k = plane.k;

  if (plane.family == PlaneFamily::N) {
    const auto sv = switch_values(p, x);
    return sv.y - static_cast<double>(combin::binom(k, p.m)) * hm * rs;
  }
  if (plane.family == PlaneFamily::Nbar) {
    const auto sv = switch_values(p, x);
    const double rhs =
        (static_cast<double>(combin::binom(k - 1, p.m)) + sign_pow(p.m - 1)) * hm * rs;
    return sv.ybar - rhs;
  }

  // M family planes all live between N(k) and N(k-1) and need k >= m-1.
  if (k < p.m - 1)
    throw std::domain_error("plane_residual: M-family planes need k >= m-1");
  const auto sv = switch_values(p, x, k);
  double c = static_cast<double>(combin::binom(k, p.m));
  switch (plane.family) {
    case PlaneFamily::M:
      break;
    case PlaneFamily::Mbar:
      c -= 2.0 * static_cast<double>(combin::binom(k - 1, p.m - 1));
      break;
    case PlaneFamily::Mbeta:
      if (plane.beta < 0.0 || plane.beta > 1.0)
        throw std::domain_error("plane_residual: beta must be in [0, 1]");
      c -= 2.0 * (1.0 - plane.beta) * static_cast<double>(combin::binom(k - 1, p.m - 1));
      break;
    default:
      break;
  }
  return *sv.z - sign_pow(p.m - 1) * c * hm * rs;
}

double nested_plane_residual(const SystemParams& p, const StateVector& x, int mu) {
  validate(p);
  if (static_cast<int>(x.size()) != p.m)
    throw std::domain_error("nested_plane_residual: state length != m");
  if (mu < 0 || mu > p.m - 1)
    throw std::domain_error("nested_plane_residual: mu must be in [0, m-1]");
  double acc = 0.0, hp = 1.0;
  for (int i = 0; i <= p.m - (mu + 1); ++i) {
    acc += static_cast<double>(combin::binom(p.m - (mu + 1), i)) * hp * x[i + mu];
    hp *= p.h;
  }
  return acc;
}

StateVector propagate(const SystemParams& p, const StateVector& x, double u) {
  validate(p);
  if (static_cast<int>(x.size()) != p.m)
    throw std::domain_error("propagate: state length != m");
  if (std::isfinite(p.r) && std::abs(u) > p.r)
    throw std::domain_error("propagate: |u| exceeds the control bound r");
  StateVector next(p.m);
  for (int i = 0; i + 1 < p.m; ++i) next[i] = x[i] + p.h * x[i + 1];
  next[p.m - 1] = x[p.m - 1] + p.h * u;
  return next;
}

Polyline reach_origin_polyline(const SystemParams& p, const ExtremalPointSpec& spec) {
  validate(p);
  validate_spec(spec);
  require_finite_r(p, "reach_origin_polyline");
  Polyline out;
  const double sign_first = (spec.branch == Branch::minus) ? -1.0 : 1.0;
  if (spec.kind == PointKind::a) {
    out.controls.assign(spec.k, sign_first * p.r);
  } else {
    // b points take one step of the branch sign, then k-1 of the opposite.
    out.controls.assign(spec.k, -sign_first * p.r);
    out.controls[0] = sign_first * p.r;
  }
  out.states.push_back(extremal_point(p, spec));
  for (double u : out.controls) out.states.push_back(propagate(p, out.states.back(), u));
  return out;
}

}  // namespace tocs::geometry
