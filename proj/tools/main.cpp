#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tocs/combin.hpp"
#include "tocs/errors.hpp"
#include "tocs/extract.hpp"
#include "tocs/geometry.hpp"
#include "tocs/scenario.hpp"
#include "tocs/trace.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tocs;

int cmd_identities(int max_m, int max_k) {
  long total_cases = 0, total_failures = 0;
  std::printf("%-8s %10s %10s %8s\n", "theorem", "cases", "failures", "status");
  for (auto id : combin::kAllIdentities) {
    const auto tally = combin::sweep_identity(id, max_m, max_k);
    total_cases += tally.cases;
    total_failures += tally.failures;
    std::printf("%-8s %10ld %10ld %8s\n", combin::identity_name(id), tally.cases,
                tally.failures, tally.failures == 0 ? "pass" : "FAIL");
  }
  std::printf("%-8s %10ld %10ld %8s\n", "total", total_cases, total_failures,
              total_failures == 0 ? "pass" : "FAIL");
  return total_failures == 0 ? 0 : 1;
}

int cmd_geometry(int m, int max_k, double h, double r) {
  geometry::SystemParams p{m, h, r};
  std::printf("kind,branch,k,s");
  for (int i = 1; i <= m; ++i) std::printf(",x%d", i);
  std::printf(",res_N,res_Nbar,res_M,res_Mbar\n");
  for (auto kind : {geometry::PointKind::a, geometry::PointKind::b}) {
    for (auto branch : {geometry::Branch::minus, geometry::Branch::plus}) {
      const int kmin = kind == geometry::PointKind::a ? 1 : 2;
      for (int k = kmin; k <= max_k; ++k) {
        geometry::ExtremalPointSpec spec{kind, branch, k};
        const auto x = geometry::extremal_point(p, spec);
        const int s = geometry::point_sign(p, spec);
        std::printf("%c,%s,%d,%d", kind == geometry::PointKind::a ? 'a' : 'b',
                    branch == geometry::Branch::minus ? "minus" : "plus", k, s);
        for (double xi : x) std::printf(",%.17g", xi);
        const double rn =
            geometry::plane_residual(p, x, {geometry::PlaneFamily::N, k, 0.0, s});
        const double rnb =
            geometry::plane_residual(p, x, {geometry::PlaneFamily::Nbar, k, 0.0, s});
        double rm = std::numeric_limits<double>::quiet_NaN();
        double rmb = std::numeric_limits<double>::quiet_NaN();
        if (k >= m - 1) {
          rm = geometry::plane_residual(p, x, {geometry::PlaneFamily::M, k, 0.0, s});
          rmb = geometry::plane_residual(p, x, {geometry::PlaneFamily::Mbar, k, 0.0, s});
        }
        std::printf(",%.17g,%.17g,%.17g,%.17g\n", rn, rnb, rm, rmb);
      }
    }
  }
  return 0;
}

harness::ScenarioConfig resolve_config(const std::string& spec) {
  if (harness::is_builtin_scenario(spec)) return harness::builtin_scenario(spec);
  return harness::load_scenario_file(spec);
}

void export_outputs(const harness::Trace& tr, const std::string& name,
                    const std::string& out_dir, bool plot) {
  fs::create_directories(out_dir);
  const fs::path csv = fs::path(out_dir) / (name + ".csv");
  harness::write_csv_file(tr, csv.string());
  std::printf("wrote %s (%zu rows, %zu channels)\n", csv.string().c_str(), tr.t.size(),
              tr.names.size());
  if (plot) {
    const fs::path gp = fs::path(out_dir) / (name + ".gnuplot");
    std::ofstream out(gp);
    harness::write_plot_script(tr, csv.filename().string(), out);
    std::printf("wrote %s\n", gp.string().c_str());
  }
}

int cmd_simulate(const std::vector<std::string>& specs, const std::string& out_dir,
                 int jobs, bool plot) {
  std::vector<harness::ScenarioConfig> cfgs;
  for (const auto& s : specs) cfgs.push_back(resolve_config(s));
  const auto traces = harness::run_scenarios(cfgs, jobs);
  for (std::size_t i = 0; i < traces.size(); ++i)
    export_outputs(traces[i], cfgs[i].name, out_dir, plot);
  return 0;
}

int cmd_differentiate(const std::string& scenario, int order, double n0, double gsm,
                      long steps, const std::string& out_dir, bool plot) {
  auto cfg = harness::builtin_scenario(scenario);
  if (!cfg.differentiator_mode)
    throw ConfigError("differentiate: scenario must be EX7-3 or EX7-4");
  if (order > 0) cfg.diff.order = order;
  if (n0 > 0) cfg.diff.n0 = n0;
  if (gsm >= 0) cfg.target.noise_g = gsm;
  if (steps > 0) cfg.steps = steps;
  cfg.outputs.clear();  // emit every channel for overridden orders
  const auto tr = harness::run_scenario(cfg);
  char suffix[64];
  std::snprintf(suffix, sizeof suffix, "_n0_%g_gsm_%g", cfg.diff.n0, cfg.target.noise_g);
  export_outputs(tr, cfg.name + suffix, out_dir, plot);
  const double skip = std::max(2.0 * 2.0 * std::numbers::pi / cfg.target.omega,
                               5.0 * cfg.diff.order * cfg.diff.n0 * cfg.h);
  auto report = [&](const char* sig) {
    const auto pa = extract::measure_phase_amplitude(tr.channel("v1"), tr.channel(sig),
                                                     cfg.h, cfg.target.omega, skip);
    std::printf("%s vs v1: delay %.6g s (= %.4g h), amplitude ratio %.6g\n", sig,
                pa.delay_s, pa.delay_s / cfg.h, pa.ratio);
  };
  report("x1");
  report("xiu1");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-optimal synthesis functions, tracking differentiators and ADRC loops"};
  app.require_subcommand(1);

  auto* identities = app.add_subcommand("identities", "check the combinatorial identity families");
  int max_m = 8, max_k = 20;
  identities->add_option("--max-m", max_m, "largest order m");
  identities->add_option("--max-k", max_k, "largest index k");

  auto* geom = app.add_subcommand("geometry", "dump extremal points and plane residuals as CSV");
  int gm = 3, gk = 10;
  double gh = 1.0, gr = 1.0;
  geom->add_option("--m", gm, "chain order");
  geom->add_option("--k", gk, "largest step count");
  geom->add_option("--step", gh, "control step h");
  geom->add_option("--bound", gr, "control bound r");

  auto* diff = app.add_subcommand("differentiate", "run a built-in signal-extraction scenario");
  std::string dscenario = "EX7-3", dout = ".";
  int dorder = 0;
  double dn0 = 0, dgsm = -1;
  long dsteps = 0;
  bool dplot = false;
  diff->add_option("--scenario", dscenario, "EX7-3 or EX7-4")->required();
  diff->add_option("--order", dorder, "differentiator order override");
  diff->add_option("--n0", dn0, "filter factor override");
  diff->add_option("--gsm", dgsm, "signal noise gain override");
  diff->add_option("--steps", dsteps, "step count override");
  diff->add_option("--out", dout, "output directory");
  diff->add_flag("--plot", dplot, "emit a gnuplot script next to the CSV");

  auto* sim = app.add_subcommand("simulate", "run scenario config files or built-ins");
  std::vector<std::string> sspecs;
  std::string sout = ".";
  int sjobs = 1;
  bool splot = false;
  sim->add_option("configs", sspecs, "config files or built-in names")->required();
  sim->add_option("--out", sout, "output directory");
  sim->add_option("--jobs", sjobs, "run up to N scenarios concurrently");
  sim->add_flag("--plot", splot, "emit gnuplot scripts next to the CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (identities->parsed()) return cmd_identities(max_m, max_k);
    if (geom->parsed()) return cmd_geometry(gm, gk, gh, gr);
    if (diff->parsed())
      return cmd_differentiate(dscenario, dorder, dn0, dgsm, dsteps, dout, dplot);
    if (sim->parsed()) return cmd_simulate(sspecs, sout, sjobs, splot);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
