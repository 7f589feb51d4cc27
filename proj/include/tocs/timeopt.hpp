#pragma once

#include <span>

#include "tocs/geometry.hpp"

namespace tocs::timeopt {

// Three-valued sign; signum(0) == 0.
int signum(double x);

// Unit saturation with linear zone |x| <= delta. Throws std::domain_error
// for delta <= 0.
double sat(double x, double delta);

struct StepCount {
  int k = 0;        // step count, >= m
  double kprime = 0;  // root of the step polynomial, in (k-1, k]
};

// Solves prod_{i=0..m-1}(k' - i) = m! * yabs / (h^m r) for the unique root
// k' > m-1, then k = ceil(k' - 1e-9) clamped to >= m. Requires
// yabs > h^m r (the nonlinear region); otherwise throws std::domain_error.
StepCount step_count(int m, double yabs, double h, double r);

// 2nd-order time-optimal control input. Self-contained closed form
// (quadratic step count), used as the cross-check route for fxiao at m = 2.
double fsun(double x1, double x2, double r, double h);

// m-order time-optimal control input for the chain described by p.
// p.r = +infinity degenerates to linear_synthesis.
double fxiao(std::span<const double> levels, const geometry::SystemParams& p);

// r -> infinity limit: u = -sum C(m,i) h^i x_{i+1} / h^m.
double linear_synthesis(std::span<const double> levels, double h);

// Tracking form: fxiao on (x1 - v, x2, ..., xm) with the filter factor n0
// scaling the step inside the synthesis function only. Requires n0 >= 1.
double fxiao_tracking(std::span<const double> levels, double v,
                      const geometry::SystemParams& p, double n0);

}  // namespace tocs::timeopt
