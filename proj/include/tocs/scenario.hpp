#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tocs/adrc.hpp"
#include "tocs/plant.hpp"
#include "tocs/trace.hpp"

namespace tocs::harness {

inline constexpr int kSchemaVersion = 1;

enum class PlantType { chain, lorenz };

struct TargetSpec {
  enum class Type { constant, sinusoid };
  Type type = Type::constant;
  double value = 0.0;    // constant
  double vm = 1.0;       // sinusoid amplitude (also the noise reference scale)
  double omega = 6.28;   // sinusoid angular frequency, rad/s
  double noise_g = 0.0;  // g_sm applied to the given signal itself
};

struct NoiseConfig {
  double g_sm1 = 0.0;  // measurement-noise gain on chi
  std::uint64_t seed = 0;
  bool seed_set = false;
};

// Differentiator-only mode: the given signal drives a single tracking
// differentiator and its compensated levels.
struct DiffModeConfig {
  int order = 3;
  double n0 = 10.0;
  double r = std::numeric_limits<double>::infinity();
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string name = "scenario";
  PlantType plant_type = PlantType::chain;
  int chain_m = 3;
  plant::LorenzParams lorenz;
  bool lorenz_rk4 = false;
  long steps = 1000;
  double h = 5e-4;
  TargetSpec target;
  bool differentiator_mode = false;
  DiffModeConfig diff;
  adrc::AdrcConfig adrc;
  plant::DisturbanceSpec disturbance;
  NoiseConfig noise;
  std::vector<std::string> outputs;  // empty = every produced channel
  double metrics_window_frac = 0.5;  // steady-state window, fraction from the end
};

void validate(const ScenarioConfig& cfg);

// Built-in parameter blocks: EX7-3, EX7-4, EX10-1, EX10-2, EX10-3.
ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();
bool is_builtin_scenario(const std::string& name);

// JSON config parsing. Unknown keys are an error naming the field path.
// The ADRC_SEED environment variable, when set, overrides the config seed.
ScenarioConfig parse_scenario_json(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

// Deterministic closed-loop run; length steps + 1. Throws ConfigError for an
// invalid config and DivergenceError (with step index) on numeric blow-up.
Trace run_scenario(const ScenarioConfig& cfg);

// Runs scenarios concurrently, at most jobs at a time, preserving order.
std::vector<Trace> run_scenarios(const std::vector<ScenarioConfig>& cfgs, int jobs);

struct Metrics {
  double phase_delay_s = 0.0;
  double amplitude_ratio = 1.0;
  double rms_error = 0.0;
  double settling_time_s = 0.0;
  double final_band = 0.0;
};

// Steady-state metrics of sig against ref. When omega > 0, phase delay and
// amplitude ratio come from extract::measure_phase_amplitude over the final
// window_frac of the trace; rms_error and final_band always cover that
// window, and settling_time_s is the earliest time after which
// |sig - final ref| stays within 2% of the final ref level.
Metrics summarize(const Trace& tr, const std::string& ref, const std::string& sig,
                  double omega, double window_frac);

}  // namespace tocs::harness
