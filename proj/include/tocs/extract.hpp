#pragma once

#include <span>
#include <vector>

namespace tocs::extract {

struct DiffParams {
  int order = 2;    // >= 2
  double r = 1.0;   // may be +infinity
  double h = 1.0;   // integration step, > 0
  double n0 = 1.0;  // filter factor, >= 1
};

struct DifferentiatorState {
  std::vector<double> levels;  // x_1..x_order
  DiffParams params;
};

// Zero-initialized differentiator. Throws ConfigError on bad params.
DifferentiatorState make_differentiator(const DiffParams& params);

// One step: u = fxiao_tracking(levels, sample, r, n0), then a forward Euler
// step of size h. The filter factor scales the step inside the synthesis
// function only; the chain itself always integrates with h.
DifferentiatorState td_step(const DifferentiatorState& st, double sample);

struct CompensationSpec {
  int order = 2;
  double n0 = 1.0;
  double h = 1.0;
  double lead_extra = 0.0;  // extra lead seconds beyond order * n0 * h
};

// Predictive compensation of the first order-1 levels:
//   xhat_{i+1} = sum_{mu=0}^{order-1-i} C(order-1-i, mu) (L/(order-1-i))^mu x_{i+1+mu}
// with L = order * n0 * h + lead_extra. The last level has no compensation.
std::vector<double> compensate_levels(std::span<const double> levels,
                                      const CompensationSpec& spec);
std::vector<double> compensate_levels(const DifferentiatorState& st,
                                      const CompensationSpec& spec);

struct PhaseAmplitude {
  double delay_s = 0.0;  // positive when sig lags ref
  double ratio = 1.0;    // RMS(sig) / RMS(ref), window means removed
};

// Delay from the argmax of the cross-correlation over the steady-state
// window [skip_s, end), refined to sub-sample precision by quadratic
// interpolation. Requires ref and sig of equal length covering at least
// 4 periods of omega past the skip; throws std::invalid_argument otherwise.
PhaseAmplitude measure_phase_amplitude(std::span<const double> ref,
                                       std::span<const double> sig, double h,
                                       double omega, double skip_s);

}  // namespace tocs::extract
