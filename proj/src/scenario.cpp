#include "tocs/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tocs/errors.hpp"
#include "tocs/extract.hpp"
#include "tocs/timeopt.hpp"

namespace tocs::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceBound = 1e6;

// Noise stream ids; disjoint so the channels stay uncorrelated.
constexpr std::uint64_t kStreamDisturbance = 0;
constexpr std::uint64_t kStreamMeasurement = 1;
constexpr std::uint64_t kStreamTarget = 2;

double clean_target(const TargetSpec& ts, double t, int derivative) {
  if (ts.type == TargetSpec::Type::constant)
    return derivative == 0 ? ts.value : 0.0;
  // d^n/dt^n of vm sin(wt)
  const double a = ts.vm * std::pow(ts.omega, derivative);
  switch (derivative % 4) {
    case 0: return a * std::sin(ts.omega * t);
    case 1: return a * std::cos(ts.omega * t);
    case 2: return -a * std::sin(ts.omega * t);
    default: return -a * std::cos(ts.omega * t);
  }
}

double noisy_target(const TargetSpec& ts, double t, plant::NoiseStream& ns) {
  double v = clean_target(ts, t, 0);
  if (ts.noise_g > 0.0) v += ts.vm * ts.noise_g * plant::wgn_sample(ns, -20.0);
  return v;
}

void check_state(const std::vector<double>& x, long step) {
  for (double xi : x)
    if (!(std::abs(xi) <= kDivergenceBound))
      throw DivergenceError("scenario diverged at step " + std::to_string(step), step);
}

// Observer levels legitimately peak far above plant scale while settling
// (r = inf has no slew limit), so only non-finite values count as divergence.
void check_finite(const std::vector<double>& x, long step) {
  for (double xi : x)
    if (!std::isfinite(xi))
      throw DivergenceError("scenario diverged at step " + std::to_string(step), step);
}

struct ChannelSink {
  Trace full;
  std::vector<std::vector<double>*> cols;

  void init(const std::vector<std::string>& names) {
    for (const auto& n : names) full.add_channel(n);
    // collect pointers only once the channel vector has its final size
    for (auto& col : full.channels) cols.push_back(&col);
  }
};

Trace select_outputs(Trace&& full, const ScenarioConfig& cfg) {
  if (cfg.outputs.empty()) return std::move(full);
  Trace out;
  out.t = std::move(full.t);
  for (const auto& name : cfg.outputs) {
    if (!full.has(name))
      throw ConfigError("outputs: no channel named '" + name + "' in scenario '" +
                        cfg.name + "'");
    out.add_channel(name) = full.channel(name);
  }
  return out;
}

Trace run_differentiator(const ScenarioConfig& cfg) {
  const int m = cfg.diff.order;
  auto td = extract::make_differentiator({m, cfg.diff.r, cfg.h, cfg.diff.n0});
  const extract::CompensationSpec comp{m, cfg.diff.n0, cfg.h, 0.0};
  plant::NoiseStream target_ns{cfg.noise.seed, kStreamTarget};

  ChannelSink sink;
  std::vector<std::string> names{"v"};
  for (int i = 1; i <= m - 1; ++i) names.push_back("v" + std::to_string(i));
  for (int i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= m - 1; ++i) names.push_back("xiu" + std::to_string(i));
  sink.init(names);

  std::vector<double> row(names.size());
  auto record = [&](double t, double v) {
    std::size_t c = 0;
    row[c++] = v;
    for (int i = 0; i < m - 1; ++i) row[c++] = clean_target(cfg.target, t, i);
    for (int i = 0; i < m; ++i) row[c++] = td.levels[i];
    const auto xiu = extract::compensate_levels(td, comp);
    for (int i = 0; i < m - 1; ++i) row[c++] = xiu[i];
    sink.full.t.push_back(t);
    for (std::size_t i = 0; i < row.size(); ++i) sink.cols[i]->push_back(row[i]);
  };

  for (long k = 0; k < cfg.steps; ++k) {
    const double t = k * cfg.h;
    const double v = noisy_target(cfg.target, t, target_ns);
    record(t, v);
    td = extract::td_step(td, v);
    check_state(td.levels, k);
  }
  const double t_end = cfg.steps * cfg.h;
  record(t_end, noisy_target(cfg.target, t_end, target_ns));
  return select_outputs(std::move(sink.full), cfg);
}

double lorenz_tdt(const std::array<double, 3>& x, const plant::LorenzParams& p) {
  // Total disturbance of the order-2 reduction: everything in D^2 x1
  // except the sigma*u control term.
  return p.sigma * (p.rho * x[0] - x[1] - x[0] * x[2] + p.sigma * (x[0] - x[1]));
}

Trace run_adrc(const ScenarioConfig& cfg) {
  const int m = cfg.adrc.m;
  const bool lorenz = cfg.plant_type == PlantType::lorenz;

  auto transition = adrc::make_transition(cfg.adrc, cfg.h);
  auto eso = adrc::make_eso(cfg.adrc, cfg.h);
  plant::NoiseStream dist_ns{cfg.noise.seed, kStreamDisturbance};
  plant::NoiseStream meas_ns{cfg.noise.seed, kStreamMeasurement};
  plant::NoiseStream target_ns{cfg.noise.seed, kStreamTarget};

  std::vector<double> chain_x(cfg.chain_m, 0.0);
  std::array<double, 3> lor_x = cfg.lorenz.x0;

  const int nstate = lorenz ? 3 : cfg.chain_m;
  ChannelSink sink;
  std::vector<std::string> names{"v", "v1", "v2", "chi"};
  for (int i = 1; i <= nstate; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= m + 2; ++i) names.push_back("y" + std::to_string(i));
  names.insert(names.end(), {"xi1", "f0", "f1", "u0", "u"});
  sink.init(names);

  auto record = [&](double t, double v, double chi, double f0, double f1, double u0,
                    double u) {
    sink.full.t.push_back(t);
    std::size_t c = 0;
    auto put = [&](double val) { sink.cols[c++]->push_back(val); };
    put(v);
    put(transition.levels[0]);
    put(transition.levels[1]);
    put(chi);
    if (lorenz)
      for (int i = 0; i < 3; ++i) put(lor_x[i]);
    else
      for (int i = 0; i < cfg.chain_m; ++i) put(chain_x[i]);
    for (int i = 0; i < m + 2; ++i) put(eso.ychan.levels[i]);
    put(eso.xichan.levels[0]);
    put(f0);
    put(f1);
    put(u0);
    put(u);
  };

  double chi_prev = 0.0, xi_prev = 0.0;
  double f0 = 0.0, u0 = 0.0, u = 0.0;
  for (long k = 0; k < cfg.steps; ++k) {
    const double t = k * cfg.h;
    const double v = noisy_target(cfg.target, t, target_ns);
    transition = adrc::transition_step(transition, v);

    const double x1 = lorenz ? lor_x[0] : chain_x[0];
    const double chi = plant::measure_output(x1, cfg.target.vm, cfg.noise.g_sm1, meas_ns);

    eso = adrc::eso_step(eso, chi_prev, xi_prev);
    chi_prev = chi;

    f0 = adrc::tdt_estimate(eso, cfg.adrc, cfg.h, cfg.adrc.tdt_mode);
    u0 = adrc::feedback_u0(eso, transition, cfg.adrc, cfg.h);
    u = adrc::actual_input(u0, f0, cfg.adrc.b);
    xi_prev = cfg.adrc.b * u;

    const double f1 = lorenz ? lorenz_tdt(lor_x, cfg.lorenz)
                             : plant::disturbance_clean(cfg.disturbance, t);
    record(t, v, chi, f0, f1, u0, u);

    try {
      if (lorenz)
        lor_x = plant::lorenz_step(lor_x, u, cfg.lorenz, cfg.h, cfg.lorenz_rk4);
      else
        chain_x = plant::chain_step(chain_x, u, cfg.disturbance, cfg.adrc.b, cfg.h, t,
                                    dist_ns);
    } catch (const DivergenceError&) {
      throw DivergenceError("scenario diverged at step " + std::to_string(k), k);
    }
    if (!lorenz) check_state(chain_x, k);
    check_finite(eso.ychan.levels, k);
  }
  const double t_end = cfg.steps * cfg.h;
  const double x1 = lorenz ? lor_x[0] : chain_x[0];
  const double chi = plant::measure_output(x1, cfg.target.vm, cfg.noise.g_sm1, meas_ns);
  const double f1 = lorenz ? lorenz_tdt(lor_x, cfg.lorenz)
                           : plant::disturbance_clean(cfg.disturbance, t_end);
  record(t_end, noisy_target(cfg.target, t_end, target_ns), chi, f0, f1, u0, u);
  return select_outputs(std::move(sink.full), cfg);
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  if (cfg.schema_version != kSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion));
  if (cfg.steps < 1) throw ConfigError("steps: must be >= 1");
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw ConfigError("h: must be > 0");
  if (cfg.metrics_window_frac <= 0.0 || cfg.metrics_window_frac > 1.0)
    throw ConfigError("metrics_window: must be in (0, 1]");
  const bool any_noise = cfg.target.noise_g > 0.0 || cfg.noise.g_sm1 > 0.0 ||
                         (!cfg.differentiator_mode && cfg.disturbance.noise_gain > 0.0);
  if (any_noise && !cfg.noise.seed_set)
    throw ConfigError("noise.seed: mandatory when any noise gain is > 0");
  if (cfg.differentiator_mode) {
    if (cfg.diff.order < 2) throw ConfigError("differentiator.order: must be >= 2");
    if (!(cfg.diff.n0 >= 1.0)) throw ConfigError("differentiator.n0: must be >= 1");
    if (!(cfg.diff.r > 0.0)) throw ConfigError("differentiator.r: must be > 0");
  } else {
    adrc::validate(cfg.adrc);
    if (cfg.plant_type == PlantType::chain && cfg.chain_m != cfg.adrc.m)
      throw ConfigError("plant.m: must equal adrc.m for chain plants");
    if (cfg.plant_type == PlantType::lorenz && cfg.adrc.m != 2)
      throw ConfigError("adrc.m: the Lorenz plant has relative order 2");
  }
}

Trace run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  return cfg.differentiator_mode ? run_differentiator(cfg) : run_adrc(cfg);
}

std::vector<Trace> run_scenarios(const std::vector<ScenarioConfig>& cfgs, int jobs) {
  if (jobs < 1) jobs = 1;
  std::vector<Trace> out(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        out[i] = run_scenario(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<std::size_t>(jobs, cfgs.size());
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Built-in scenarios

std::vector<std::string> builtin_scenario_names() {
  return {"EX7-3", "EX7-4", "EX10-1", "EX10-2", "EX10-3"};
}

bool is_builtin_scenario(const std::string& name) {
  for (const auto& n : builtin_scenario_names())
    if (n == name) return true;
  return false;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  if (name == "EX7-3" || name == "EX7-4") {
    cfg.differentiator_mode = true;
    cfg.diff.order = (name == "EX7-3") ? 3 : 4;
    cfg.diff.n0 = 10.0;
    cfg.diff.r = kInf;
    cfg.h = 5e-4;
    cfg.steps = 14000;
    cfg.target = {TargetSpec::Type::sinusoid, 0.0, 2.0, 6.28, 0.001};
    cfg.noise.seed = (name == "EX7-3") ? 101 : 102;
    cfg.noise.seed_set = true;
    if (name == "EX7-3")
      cfg.outputs = {"v", "v1", "v2", "x1", "x2", "xiu1", "xiu2"};
    else
      cfg.outputs = {"v",  "v1", "v2",   "v3",   "x1",  "x2",
                     "x3", "x4", "xiu1", "xiu2", "xiu3"};
    return cfg;
  }
  if (name == "EX10-1" || name == "EX10-2") {
    cfg.plant_type = PlantType::chain;
    cfg.chain_m = 3;
    cfg.h = 5e-4;
    cfg.steps = 12000;
    cfg.target = {TargetSpec::Type::constant, 2.0, 2.0, 6.28, 0.0};
    cfg.adrc = {3, 1.0, {5, 20.0, kInf}, {30.0, kInf}, {500.0, kInf},
                adrc::TdtMode::mixed_241, adrc::FbMode::comp_247};
    cfg.disturbance.kind = (name == "EX10-1") ? plant::DisturbanceKind::sines_256
                                              : plant::DisturbanceKind::squares_259;
    cfg.disturbance.amplitude = 20.0;
    cfg.disturbance.omega = 6.28;
    cfg.disturbance.noise_gain = 0.001;
    cfg.noise.g_sm1 = 0.001;
    cfg.noise.seed = (name == "EX10-1") ? 103 : 104;
    cfg.noise.seed_set = true;
    cfg.outputs = {"v",  "v1", "v2", "chi", "x1", "x2",
                   "x3", "y1", "f0", "f1",  "u0", "u"};
    return cfg;
  }
  if (name == "EX10-3") {
    cfg.plant_type = PlantType::lorenz;
    cfg.h = 1e-4;
    cfg.steps = 40000;
    cfg.target = {TargetSpec::Type::constant, 2.0, 2.0, 6.28, 0.0};
    // Effective gain on D^2 x1 is sigma, so b = sigma = 10.
    cfg.adrc = {2, 10.0, {4, 200.0, kInf}, {20.0, kInf}, {200.0, kInf},
                adrc::TdtMode::mixed_241, adrc::FbMode::comp_247};
    cfg.noise.g_sm1 = 0.001;
    cfg.noise.seed = 105;
    cfg.noise.seed_set = true;
    cfg.outputs = {"v", "v1", "chi", "x1", "x2", "x3", "y1", "f0", "u0", "u"};
    return cfg;
  }
  throw ConfigError("unknown built-in scenario '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON config parsing

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

double get_num(const json& obj, const std::string& path, const char* key,
               std::optional<double> def = std::nullopt) {
  if (!obj.contains(key)) {
    if (def) return *def;
    fail(path + "." + key, "missing required value");
  }
  const auto& v = obj.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return kInf;
  if (!v.is_number()) fail(path + "." + key, "expected a number or \"inf\"");
  return v.get<double>();
}

long get_int(const json& obj, const std::string& path, const char* key,
             std::optional<long> def = std::nullopt) {
  if (!obj.contains(key)) {
    if (def) return *def;
    fail(path + "." + key, "missing required value");
  }
  if (!obj.at(key).is_number_integer()) fail(path + "." + key, "expected an integer");
  return obj.at(key).get<long>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    std::optional<std::string> def = std::nullopt) {
  if (!obj.contains(key)) {
    if (def) return *def;
    fail(path + "." + key, "missing required value");
  }
  if (!obj.at(key).is_string()) fail(path + "." + key, "expected a string");
  return obj.at(key).get<std::string>();
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "", {"schema_version", "name", "plant", "steps", "h", "target",
                        "mode", "differentiator", "adrc", "disturbance", "noise",
                        "outputs", "metrics_window"});

  ScenarioConfig cfg;
  cfg.schema_version = static_cast<int>(get_int(root, "", "schema_version"));
  if (cfg.schema_version != kSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion) +
                      ", got " + std::to_string(cfg.schema_version));
  cfg.name = get_str(root, "", "name", std::string("scenario"));
  cfg.steps = get_int(root, "", "steps");
  cfg.h = get_num(root, "", "h");
  cfg.metrics_window_frac = get_num(root, "", "metrics_window", 0.5);

  const std::string mode = get_str(root, "", "mode");
  if (mode == "differentiator")
    cfg.differentiator_mode = true;
  else if (mode != "adrc")
    fail("mode", "expected \"adrc\" or \"differentiator\"");

  if (root.contains("target")) {
    const auto& t = root.at("target");
    check_keys(t, "target", {"type", "value", "vm", "omega", "noise_g"});
    const std::string ty = get_str(t, "target", "type");
    if (ty == "constant") {
      cfg.target.type = TargetSpec::Type::constant;
      cfg.target.value = get_num(t, "target", "value");
      cfg.target.vm = get_num(t, "target", "vm", std::abs(cfg.target.value));
    } else if (ty == "sinusoid") {
      cfg.target.type = TargetSpec::Type::sinusoid;
      cfg.target.vm = get_num(t, "target", "vm");
      cfg.target.omega = get_num(t, "target", "omega");
    } else {
      fail("target.type", "expected \"constant\" or \"sinusoid\"");
    }
    cfg.target.noise_g = get_num(t, "target", "noise_g", 0.0);
  } else {
    fail("target", "missing required value");
  }

  if (cfg.differentiator_mode) {
    if (!root.contains("differentiator")) fail("differentiator", "missing required value");
    const auto& d = root.at("differentiator");
    check_keys(d, "differentiator", {"order", "n0", "r"});
    cfg.diff.order = static_cast<int>(get_int(d, "differentiator", "order"));
    cfg.diff.n0 = get_num(d, "differentiator", "n0");
    cfg.diff.r = get_num(d, "differentiator", "r", kInf);
  } else {
    if (!root.contains("plant")) fail("plant", "missing required value");
    const auto& pl = root.at("plant");
    check_keys(pl, "plant", {"type", "m", "sigma", "rho", "b1", "x0", "integrator"});
    const std::string pt = get_str(pl, "plant", "type");
    if (pt == "chain") {
      cfg.plant_type = PlantType::chain;
      cfg.chain_m = static_cast<int>(get_int(pl, "plant", "m"));
    } else if (pt == "lorenz") {
      cfg.plant_type = PlantType::lorenz;
      cfg.lorenz.sigma = get_num(pl, "plant", "sigma", 10.0);
      cfg.lorenz.rho = get_num(pl, "plant", "rho", 28.0);
      cfg.lorenz.b1 = get_num(pl, "plant", "b1", 8.0 / 3.0);
      if (pl.contains("x0")) {
        const auto& x0 = pl.at("x0");
        if (!x0.is_array() || x0.size() != 3)
          fail("plant.x0", "expected an array of 3 numbers");
        for (int i = 0; i < 3; ++i) cfg.lorenz.x0[i] = x0.at(i).get<double>();
      }
      const std::string integ = get_str(pl, "plant", "integrator", std::string("euler"));
      if (integ == "rk4")
        cfg.lorenz_rk4 = true;
      else if (integ != "euler")
        fail("plant.integrator", "expected \"euler\" or \"rk4\"");
    } else {
      fail("plant.type", "expected \"chain\" or \"lorenz\"");
    }

    if (!root.contains("adrc")) fail("adrc", "missing required value");
    const auto& a = root.at("adrc");
    check_keys(a, "adrc", {"m", "b", "transition", "eso", "ctrl", "tdt_mode", "fb_mode"});
    cfg.adrc.m = static_cast<int>(
        get_int(a, "adrc", "m", cfg.plant_type == PlantType::lorenz ? 2 : cfg.chain_m));
    cfg.adrc.b = get_num(a, "adrc", "b");
    if (!a.contains("transition")) fail("adrc.transition", "missing required value");
    {
      const auto& tr = a.at("transition");
      check_keys(tr, "adrc.transition", {"m1", "n1", "r1"});
      cfg.adrc.transition.m1 = static_cast<int>(get_int(tr, "adrc.transition", "m1"));
      cfg.adrc.transition.n1 = get_num(tr, "adrc.transition", "n1");
      cfg.adrc.transition.r1 = get_num(tr, "adrc.transition", "r1", kInf);
    }
    if (!a.contains("eso")) fail("adrc.eso", "missing required value");
    {
      const auto& es = a.at("eso");
      check_keys(es, "adrc.eso", {"n2", "r2"});
      cfg.adrc.eso.n2 = get_num(es, "adrc.eso", "n2");
      cfg.adrc.eso.r2 = get_num(es, "adrc.eso", "r2", kInf);
    }
    if (!a.contains("ctrl")) fail("adrc.ctrl", "missing required value");
    {
      const auto& ct = a.at("ctrl");
      check_keys(ct, "adrc.ctrl", {"n3", "r3"});
      cfg.adrc.ctrl.n3 = get_num(ct, "adrc.ctrl", "n3");
      cfg.adrc.ctrl.r3 = get_num(ct, "adrc.ctrl", "r3", kInf);
    }
    const std::string tdt = get_str(a, "adrc", "tdt_mode", std::string("mixed_241"));
    if (tdt == "lagged_240")
      cfg.adrc.tdt_mode = adrc::TdtMode::lagged_240;
    else if (tdt == "mixed_241")
      cfg.adrc.tdt_mode = adrc::TdtMode::mixed_241;
    else if (tdt == "predictive_242")
      cfg.adrc.tdt_mode = adrc::TdtMode::predictive_242;
    else
      fail("adrc.tdt_mode", "expected lagged_240, mixed_241 or predictive_242");
    const std::string fb = get_str(a, "adrc", "fb_mode", std::string("comp_247"));
    if (fb == "plain_244")
      cfg.adrc.fb_mode = adrc::FbMode::plain_244;
    else if (fb == "comp_245")
      cfg.adrc.fb_mode = adrc::FbMode::comp_245;
    else if (fb == "comp_247")
      cfg.adrc.fb_mode = adrc::FbMode::comp_247;
    else if (fb == "comp_249")
      cfg.adrc.fb_mode = adrc::FbMode::comp_249;
    else
      fail("adrc.fb_mode", "expected plain_244, comp_245, comp_247 or comp_249");

    if (root.contains("disturbance")) {
      const auto& d = root.at("disturbance");
      check_keys(d, "disturbance",
                 {"kind", "amplitude", "omega", "g_sm", "noise_dbw", "value"});
      const std::string kind = get_str(d, "disturbance", "kind");
      if (kind == "sines_256")
        cfg.disturbance.kind = plant::DisturbanceKind::sines_256;
      else if (kind == "squares_259")
        cfg.disturbance.kind = plant::DisturbanceKind::squares_259;
      else if (kind == "custom")
        cfg.disturbance.kind = plant::DisturbanceKind::custom;
      else
        fail("disturbance.kind", "expected sines_256, squares_259 or custom");
      cfg.disturbance.amplitude = get_num(d, "disturbance", "amplitude", 20.0);
      cfg.disturbance.omega = get_num(d, "disturbance", "omega", 6.28);
      cfg.disturbance.noise_gain = get_num(d, "disturbance", "g_sm", 0.0);
      cfg.disturbance.noise_dbw = get_num(d, "disturbance", "noise_dbw", -20.0);
      cfg.disturbance.custom_value = get_num(d, "disturbance", "value", 0.0);
    }
  }

  if (root.contains("noise")) {
    const auto& n = root.at("noise");
    check_keys(n, "noise", {"g_sm1", "seed"});
    cfg.noise.g_sm1 = get_num(n, "noise", "g_sm1", 0.0);
    if (n.contains("seed")) {
      cfg.noise.seed = static_cast<std::uint64_t>(get_int(n, "noise", "seed"));
      cfg.noise.seed_set = true;
    }
  }

  if (root.contains("outputs")) {
    const auto& o = root.at("outputs");
    if (!o.is_array()) fail("outputs", "expected an array of channel names");
    for (const auto& name : o) cfg.outputs.push_back(name.get<std::string>());
  }

  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ScenarioConfig cfg = parse_scenario_json(buf.str());
  if (const char* env_seed = std::getenv("ADRC_SEED")) {
    cfg.noise.seed = std::strtoull(env_seed, nullptr, 10);
    cfg.noise.seed_set = true;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Metrics

Metrics summarize(const Trace& tr, const std::string& ref, const std::string& sig,
                  double omega, double window_frac) {
  const auto& r = tr.channel(ref);
  const auto& s = tr.channel(sig);
  const std::size_t n = tr.t.size();
  if (n < 2) throw ConfigError("summarize: trace too short");
  const double h = tr.t[1] - tr.t[0];
  const std::size_t start =
      static_cast<std::size_t>(std::floor(n * (1.0 - window_frac)));

  Metrics out;
  if (omega > 0.0) {
    const auto pa = extract::measure_phase_amplitude(r, s, h, omega, tr.t[start]);
    out.phase_delay_s = pa.delay_s;
    out.amplitude_ratio = pa.ratio;
  } else {
    out.phase_delay_s = std::numeric_limits<double>::quiet_NaN();
    out.amplitude_ratio = std::numeric_limits<double>::quiet_NaN();
  }

  double acc = 0.0, band = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double e = s[i] - r[i];
    acc += e * e;
    band = std::max(band, std::abs(e));
  }
  out.rms_error = std::sqrt(acc / static_cast<double>(n - start));
  out.final_band = band;

  // Settling: earliest time after which sig stays within 2% of the final
  // reference level.
  double final_ref = 0.0;
  const std::size_t tail = std::max<std::size_t>(1, n / 20);
  for (std::size_t i = n - tail; i < n; ++i) final_ref += r[i];
  final_ref /= static_cast<double>(tail);
  const double settle_band = 0.02 * std::max(std::abs(final_ref), 1e-12);
  std::size_t idx = n;
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(s[i] - final_ref) > settle_band) break;
    idx = i;
  }
  out.settling_time_s =
      (idx == n) ? std::numeric_limits<double>::infinity() : tr.t[idx];
  return out;
}

}  // namespace tocs::harness
