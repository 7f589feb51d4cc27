#include "tocs/timeopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tocs/combin.hpp"

namespace tocs::timeopt {

int signum(double x) {
  if (x > 0.0) return 1;
  if (x < 0.0) return -1;
  return 0;
}

double sat(double x, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("sat: delta must be > 0");
  if (std::abs(x) > delta) return static_cast<double>(signum(x));
  return x / delta;
}

namespace {

// prod_{i=0..m-1}(kp - i), strictly increasing for kp > m-1.
double step_poly(int m, double kp) {
  double acc = 1.0;
  for (int i = 0; i < m; ++i) acc *= kp - static_cast<double>(i);
  return acc;
}

double factorial_real(int m) {
  double acc = 1.0;
  for (int i = 2; i <= m; ++i) acc *= i;
  return acc;
}

// Ceiling with a downward nudge so roots that are integers up to float noise
// map to themselves instead of the next slab.
int nudged_ceil(double kp, int floor_k) {
  int k = static_cast<int>(std::ceil(kp - 1e-9));
  return std::max(k, floor_k);
}

}  // namespace

StepCount step_count(int m, double yabs, double h, double r) {
  if (m < 2) throw std::domain_error("step_count: m must be >= 2");
  if (!(h > 0.0) || !(r > 0.0) || !std::isfinite(r))
    throw std::domain_error("step_count: need h > 0 and finite r > 0");
  const double hm = std::pow(h, m);
  if (!(yabs > hm * r))
    throw std::domain_error("step_count: |y| <= h^m r is the linear region");

  const double target = factorial_real(m) * yabs / (hm * r);
  double lo = static_cast<double>(m - 1);
  double hi = std::max(static_cast<double>(m), std::pow(target, 1.0 / m) + m);
  if (hi > 1e9) throw std::domain_error("step_count: step count exceeds 1e9");
  for (int it = 0; it < 300 && (hi - lo) > 1e-12 * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (step_poly(m, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const double kp = 0.5 * (lo + hi);
  return {nudged_ceil(kp, m), kp};
}

double fsun(double x1, double x2, double r, double h) {
  if (!(h > 0.0) || !(r > 0.0)) throw std::domain_error("fsun: need h > 0, r > 0");
  const double h2 = h * h;
  if (!std::isfinite(r)) return -(x1 + 2.0 * h * x2) / h2;

  const double y = x1 + h * x2;
  double a;
  if (std::abs(y) <= h2 * r) {
    a = (x1 + 2.0 * h * x2) / h2;
  } else {
    const int s = signum(y);
    const double kp = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 * std::abs(y) / (h2 * r)));
    if (kp > 1e9) throw std::domain_error("fsun: step count exceeds 1e9");
    const int k = std::max(static_cast<int>(std::ceil(kp - 1e-9)), 2);
    a = -(1.0 - 0.5 * k) * r * s + (x1 + k * h * x2) / ((k - 1) * h2);
  }
  return -r * sat(a, r);
}

double linear_synthesis(std::span<const double> levels, double h) {
  if (!(h > 0.0)) throw std::domain_error("linear_synthesis: need h > 0");
  const int m = static_cast<int>(levels.size());
  double acc = 0.0, hp = 1.0;
  for (int i = 0; i < m; ++i) {
    acc += static_cast<double>(combin::binom(m, i)) * hp * levels[i];
    hp *= h;
  }
  return -acc / hp;  // hp == h^m after the loop
}

double fxiao(std::span<const double> levels, const geometry::SystemParams& p) {
  const int m = static_cast<int>(levels.size());
  if (m < 2) throw std::domain_error("fxiao: need at least 2 levels");
  if (m != p.m) throw std::domain_error("fxiao: levels length != params.m");
  if (!(p.h > 0.0) || !(p.r > 0.0)) throw std::domain_error("fxiao: need h > 0, r > 0");
  const double h = p.h, r = p.r;
  if (!std::isfinite(r)) return linear_synthesis(levels, h);

  double y = 0.0, hp = 1.0;
  for (int i = 0; i < m; ++i) {
    y += static_cast<double>(combin::binom(m - 1, i)) * hp * levels[i];
    hp *= h;
  }
  const double hm = hp;

  double a;
  if (std::abs(y) <= hm * r) {
    double acc = 0.0;
    hp = 1.0;
    for (int i = 0; i < m; ++i) {
      acc += static_cast<double>(combin::binom(m, i)) * hp * levels[i];
      hp *= h;
    }
    a = acc / hm;
  } else {
    const int s = signum(y);
    const auto sc = step_count(m, std::abs(y), h, r);
    const int k = sc.k;
    double acc = 0.0;
    hp = 1.0;
    for (int i = 0; i < m; ++i) {
      acc += combin::binom_real(k, i) * hp * levels[i];
      hp *= h;
    }
    const double lead = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m-1)
    a = lead * (1.0 - static_cast<double>(k) / m) * r * s +
        acc / (combin::binom_real(k - 1, m - 1) * hm);
  }
  return -r * sat(a, r);
}

double fxiao_tracking(std::span<const double> levels, double v,
                      const geometry::SystemParams& p, double n0) {
  if (!(n0 >= 1.0)) throw std::domain_error("fxiao_tracking: need n0 >= 1");
  std::vector<double> shifted(levels.begin(), levels.end());
  shifted[0] -= v;
  geometry::SystemParams q{p.m, n0 * p.h, p.r};
  return fxiao(shifted, q);
}

}  // namespace tocs::timeopt
