#include "tocs/adrc.hpp"

#include <cmath>
#include <stdexcept>

#include "tocs/errors.hpp"
#include "tocs/timeopt.hpp"

namespace tocs::adrc {

void validate(const AdrcConfig& cfg) {
  if (cfg.m < 2) throw ConfigError("AdrcConfig: m must be >= 2");
  if (cfg.b == 0.0 || !std::isfinite(cfg.b)) throw ConfigError("AdrcConfig: b must be nonzero");
  if (cfg.transition.m1 < 2) throw ConfigError("AdrcConfig: transition.m1 must be >= 2");
  if (!(cfg.transition.n1 > 0.0)) throw ConfigError("AdrcConfig: transition.n1 must be > 0");
  if (!(cfg.transition.r1 > 0.0)) throw ConfigError("AdrcConfig: transition.r1 must be > 0");
  if (!(cfg.eso.n2 > 0.0)) throw ConfigError("AdrcConfig: eso.n2 must be > 0");
  if (!(cfg.eso.r2 > 0.0)) throw ConfigError("AdrcConfig: eso.r2 must be > 0");
  if (!(cfg.ctrl.n3 > 0.0)) throw ConfigError("AdrcConfig: ctrl.n3 must be > 0");
  if (!(cfg.ctrl.r3 > 0.0)) throw ConfigError("AdrcConfig: ctrl.r3 must be > 0");
}

EsoState make_eso(const AdrcConfig& cfg, double h) {
  validate(cfg);
  extract::DiffParams p{cfg.m + 2, cfg.eso.r2, h, cfg.eso.n2};
  EsoState eso;
  eso.ychan = extract::make_differentiator(p);
  eso.xichan = extract::make_differentiator(p);
  eso.y_prev = eso.ychan.levels;
  return eso;
}

extract::DifferentiatorState make_transition(const AdrcConfig& cfg, double h) {
  validate(cfg);
  return extract::make_differentiator(
      {cfg.transition.m1, cfg.transition.r1, h, cfg.transition.n1});
}

extract::DifferentiatorState transition_step(const extract::DifferentiatorState& tstate,
                                             double v) {
  return extract::td_step(tstate, v);
}

EsoState eso_step(const EsoState& eso, double chi, double xi_now) {
  EsoState next;
  next.y_prev = eso.ychan.levels;
  next.ychan = extract::td_step(eso.ychan, chi);
  next.xichan = extract::td_step(eso.xichan, eso.xi_lag);
  next.xi_lag = xi_now;
  return next;
}

double tdt_estimate(const EsoState& eso, const AdrcConfig& cfg, double h, TdtMode mode) {
  const int m = cfg.m;
  switch (mode) {
    case TdtMode::lagged_240:
      return eso.y_prev[m] - eso.xichan.levels[0];
    case TdtMode::mixed_241:
      return eso.ychan.levels[m] - eso.xichan.levels[0];
    case TdtMode::predictive_242: {
      // y_{m+1} led from the previous step, xi_1 led by the same horizon
      // plus the channel's one-step lag.
      const double y_lead = (static_cast<double>(m + 2) * cfg.eso.n2 + 1.0) * h;
      const double y_hat = eso.y_prev[m] + y_lead * eso.y_prev[m + 1];
      extract::CompensationSpec cs{m + 2, cfg.eso.n2, h, h};
      const double xi_hat = extract::compensate_levels(eso.xichan.levels, cs)[0];
      return y_hat - xi_hat;
    }
  }
  return 0.0;
}

double feedback_u0(const EsoState& eso, const extract::DifferentiatorState& transition,
                   const AdrcConfig& cfg, double h) {
  const int m = cfg.m;
  if (transition.levels.empty())
    throw ConfigError("feedback_u0: transition state is empty");
  const double v1 = transition.levels[0];

  std::vector<double> lv;
  switch (cfg.fb_mode) {
    case FbMode::plain_244:
      lv.assign(eso.ychan.levels.begin(), eso.ychan.levels.begin() + m);
      break;
    case FbMode::comp_245:
    case FbMode::comp_247: {
      extract::CompensationSpec cs{m + 2, cfg.eso.n2, h, 0.0};
      auto hat = extract::compensate_levels(eso.ychan.levels, cs);
      lv.assign(hat.begin(), hat.begin() + m);
      break;
    }
    case FbMode::comp_249: {
      extract::CompensationSpec cs{m + 2, cfg.eso.n2, h, m * cfg.ctrl.n3 * h};
      auto bar = extract::compensate_levels(eso.ychan.levels, cs);
      lv.assign(bar.begin(), bar.begin() + m);
      break;
    }
  }

  double target = v1;
  if (cfg.fb_mode == FbMode::comp_247) {
    if (transition.levels.size() < 2)
      throw ConfigError("feedback_u0: comp_247 needs v_2 from the transition");
    target = v1 + m * cfg.ctrl.n3 * h * transition.levels[1];
  }

  geometry::SystemParams p{m, h, cfg.ctrl.r3};
  return timeopt::fxiao_tracking(lv, target, p, cfg.ctrl.n3);
}

double actual_input(double u0, double f_est, double b) {
  if (b == 0.0) throw std::domain_error("actual_input: b must be nonzero");
  return (u0 - f_est) / b;
}

std::array<double, 3> linear_eso_gains(double n2, double h) {
  if (!(n2 > 0.0) || !(h > 0.0))
    throw std::domain_error("linear_eso_gains: need n2 > 0 and h > 0");
  const double w = 1.0 / (n2 * h);
  return {3.0 * w, 3.0 * w * w, w * w * w};
}

void linear_eso_step(LinearEsoState& st, double chi, double xi, double h) {
  const double e = st.y1 - chi;
  st.y1 += h * (st.y2 - st.gains[0] * e);
  st.y2 += h * (st.y3 - st.gains[1] * e + xi);
  st.y3 += h * (-st.gains[2] * e);
}

}  // namespace tocs::adrc
