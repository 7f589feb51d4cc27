#include "tocs/extract.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tocs/combin.hpp"
#include "tocs/errors.hpp"
#include "tocs/timeopt.hpp"

namespace tocs::extract {

namespace {

void validate(const DiffParams& p) {
  if (p.order < 2) throw ConfigError("DiffParams: order must be >= 2");
  if (!(p.h > 0.0) || !std::isfinite(p.h)) throw ConfigError("DiffParams: h must be > 0");
  if (!(p.r > 0.0)) throw ConfigError("DiffParams: r must be > 0");
  if (!(p.n0 >= 1.0)) throw ConfigError("DiffParams: n0 must be >= 1");
}

}  // namespace

DifferentiatorState make_differentiator(const DiffParams& params) {
  validate(params);
  return {std::vector<double>(params.order, 0.0), params};
}

DifferentiatorState td_step(const DifferentiatorState& st, double sample) {
  const auto& p = st.params;
  geometry::SystemParams sp{p.order, p.h, p.r};
  const double u = timeopt::fxiao_tracking(st.levels, sample, sp, p.n0);
  DifferentiatorState next = st;
  next.levels = geometry::propagate(sp, st.levels, u);
  return next;
}

std::vector<double> compensate_levels(std::span<const double> levels,
                                      const CompensationSpec& spec) {
  if (spec.order < 2) throw std::domain_error("compensate_levels: order must be >= 2");
  if (static_cast<int>(levels.size()) != spec.order)
    throw std::invalid_argument("compensate_levels: levels length != spec.order");
  if (spec.lead_extra < 0.0)
    throw std::domain_error("compensate_levels: lead_extra must be >= 0");
  const double lead = spec.order * spec.n0 * spec.h + spec.lead_extra;
  std::vector<double> out(spec.order - 1);
  for (int i = 0; i <= spec.order - 2; ++i) {
    const int p = spec.order - 1 - i;
    const double step = lead / p;
    double acc = 0.0, sp = 1.0;
    for (int mu = 0; mu <= p; ++mu) {
      acc += static_cast<double>(combin::binom(p, mu)) * sp * levels[i + mu];
      sp *= step;
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> compensate_levels(const DifferentiatorState& st,
                                      const CompensationSpec& spec) {
  if (spec.order != st.params.order)
    throw std::invalid_argument("compensate_levels: spec.order != differentiator order");
  return compensate_levels(st.levels, spec);
}

PhaseAmplitude measure_phase_amplitude(std::span<const double> ref,
                                       std::span<const double> sig, double h,
                                       double omega, double skip_s) {
  if (ref.size() != sig.size())
    throw std::invalid_argument("measure_phase_amplitude: channel lengths differ");
  if (!(h > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("measure_phase_amplitude: need h > 0 and omega > 0");
  const double period = 2.0 * std::numbers::pi / omega;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(ref.size());
  const std::ptrdiff_t skip =
      std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::ceil(skip_s / h)), 0, n);
  const std::ptrdiff_t avail = n - skip;
  if (static_cast<double>(avail) * h < 4.0 * period)
    throw std::invalid_argument(
        "measure_phase_amplitude: insufficient data, window shorter than 4 periods");

  // Lags are capped below half a period so the periodic correlation of a
  // sinusoid has a unique maximum in range.
  const double period_samples = period / h;
  const std::ptrdiff_t maxlag = std::max<std::ptrdiff_t>(
      1, std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(0.45 * period_samples),
                                  avail / 4));

  // Evaluate over a fixed region spanning a whole number of periods; a
  // partial period would bias both the correlation phase and the RMS ratio.
  const double w_raw = static_cast<double>(avail - 2 * maxlag);
  const std::ptrdiff_t nper =
      std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(w_raw / period_samples));
  const std::ptrdiff_t w = std::min<std::ptrdiff_t>(
      static_cast<std::ptrdiff_t>(std::llround(nper * period_samples)),
      static_cast<std::ptrdiff_t>(w_raw));
  const std::ptrdiff_t t0 = skip + maxlag;

  double mr = 0.0, ms = 0.0;
  for (std::ptrdiff_t t = t0; t < t0 + w; ++t) {
    mr += ref[t];
    ms += sig[t];
  }
  mr /= w;
  ms /= w;

  double pr = 0.0, ps = 0.0;
  for (std::ptrdiff_t t = t0; t < t0 + w; ++t) {
    pr += (ref[t] - mr) * (ref[t] - mr);
    ps += (sig[t] - ms) * (sig[t] - ms);
  }
  if (pr == 0.0)
    throw std::invalid_argument("measure_phase_amplitude: reference channel is constant");

  // c(tau) = sum over the fixed region of sig(t) ref(t - tau); positive tau
  // means sig lags ref.
  std::vector<double> c(2 * maxlag + 1, 0.0);
  for (std::ptrdiff_t lag = -maxlag; lag <= maxlag; ++lag) {
    double acc = 0.0;
    for (std::ptrdiff_t t = t0; t < t0 + w; ++t)
      acc += (sig[t] - ms) * (ref[t - lag] - mr);
    c[lag + maxlag] = acc;
  }
  std::ptrdiff_t best = 0;
  for (std::ptrdiff_t i = 1; i < static_cast<std::ptrdiff_t>(c.size()); ++i)
    if (c[i] > c[best]) best = i;

  double refine = 0.0;
  if (best > 0 && best + 1 < static_cast<std::ptrdiff_t>(c.size())) {
    const double den = c[best - 1] - 2.0 * c[best] + c[best + 1];
    if (den < 0.0) refine = 0.5 * (c[best - 1] - c[best + 1]) / den;
  }

  PhaseAmplitude out;
  out.delay_s = (static_cast<double>(best - maxlag) + refine) * h;
  out.ratio = std::sqrt(ps / pr);
  return out;
}

}  // namespace tocs::extract
