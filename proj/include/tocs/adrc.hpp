#pragma once

#include <array>
#include <vector>

#include "tocs/extract.hpp"

namespace tocs::adrc {

// TDT estimate variants. The predictive form is kept for the dynamic
// compensation linearization check only; in live loops it oscillates.
enum class TdtMode { lagged_240, mixed_241, predictive_242 };

// Feedback law variants: raw levels, compensated levels, compensated levels
// against a led target, or re-compensated levels.
enum class FbMode { plain_244, comp_245, comp_247, comp_249 };

struct TransitionParams {
  int m1 = 2;
  double n1 = 1.0;
  double r1 = 1.0;  // may be +infinity
};

struct EsoParams {
  double n2 = 1.0;
  double r2 = 1.0;  // may be +infinity; observer order is always m + 2
};

struct CtrlParams {
  double n3 = 1.0;
  double r3 = 1.0;  // may be +infinity
};

struct AdrcConfig {
  int m = 2;       // plant relative order
  double b = 1.0;  // control gain, nonzero
  TransitionParams transition;
  EsoParams eso;
  CtrlParams ctrl;
  TdtMode tdt_mode = TdtMode::mixed_241;
  FbMode fb_mode = FbMode::comp_247;
};

// Throws ConfigError when any invariant fails.
void validate(const AdrcConfig& cfg);

// Improved ESO: two (m+2)-order tracking differentiators, one on the output
// chi, one on the control effort xi delayed by one step.
struct EsoState {
  extract::DifferentiatorState ychan;   // levels y_1..y_{m+2}
  extract::DifferentiatorState xichan;  // levels xi_1..xi_{m+2}
  double xi_lag = 0.0;                  // one-step lag buffer for xi
  std::vector<double> y_prev;           // ychan levels before the last step
};

EsoState make_eso(const AdrcConfig& cfg, double h);
extract::DifferentiatorState make_transition(const AdrcConfig& cfg, double h);

// One transition-arrangement step toward the raw target v.
extract::DifferentiatorState transition_step(const extract::DifferentiatorState& tstate,
                                             double v);

// Advances ychan against chi and xichan against the buffered one-step-old
// control effort, then replaces the buffer with xi_now.
EsoState eso_step(const EsoState& eso, double chi, double xi_now);

// Indirect total-disturbance estimate per the configured mode.
double tdt_estimate(const EsoState& eso, const AdrcConfig& cfg, double h, TdtMode mode);

// Normalized control input from the first m observer levels and the arranged
// transition (v_1 and, for comp_247, v_2).
double feedback_u0(const EsoState& eso, const extract::DifferentiatorState& transition,
                   const AdrcConfig& cfg, double h);

// u = (u0 - f_est) / b. Throws std::domain_error on b == 0.
double actual_input(double u0, double f_est, double b);

// Classic linear ESO gains placing a triple pole at -1/(n2 h).
std::array<double, 3> linear_eso_gains(double n2, double h);

struct LinearEsoState {
  double y1 = 0.0, y2 = 0.0, y3 = 0.0;
  std::array<double, 3> gains{3.0, 3.0, 1.0};
};

// Forward Euler step of the classic 2nd-order linear ESO.
void linear_eso_step(LinearEsoState& st, double chi, double xi, double h);

}  // namespace tocs::adrc
