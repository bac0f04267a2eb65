// Command-line front end: every subcommand assembles a scenario and hands it
// to the runner, so flags and config files go through identical code paths.

#include "membrane/scenario.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

// Registers --flag so that, when given, its text lands in kv[key] verbatim;
// the scenario runner does all parsing and validation.
void kv_flag(CLI::App* sub, std::map<std::string, std::string>& kv,
          const std::string& flag, const std::string& key, const std::string& desc) {
  sub->add_option_function<std::string>(
      flag, [&kv, key](const std::string& v) { kv[key] = v; }, desc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for membrane self-duality flows"};
  app.require_subcommand(1);
  int exit_code = 0;

  std::string outdir = "out";
  app.add_option("--out", outdir, "output directory (default: out)");

  auto run_one = [&](const std::string& kind, const std::string& name,
                     std::map<std::string, std::string> kv, bool echo_report) {
    membrane::Scenario sc;
    sc.name = name.empty() ? kind : name;
    sc.kv = std::move(kv);
    sc.kv["kind"] = kind;
    membrane::ScenarioOutcome out = membrane::run_scenario(sc, outdir);
    if (echo_report) {
      std::ifstream in(out.report_path, std::ios::binary);
      std::cout << in.rdbuf();
    } else {
      std::cout << out.name << ": "
                << (out.code == 0 ? "pass" : out.code == 3 ? "numerical abort" : "FAIL")
                << "  (" << out.report_path << ")\n";
    }
    exit_code = out.code;
  };

  // verify <what>
  std::string verify_what = "algebra";
  auto* verify = app.add_subcommand("verify", "exact algebraic identity checks");
  verify->add_option("what", verify_what, "what to verify (algebra)");
  verify->callback([&]() {
    if (verify_what != "algebra")
      throw membrane::ConfigError("verify: unknown target '" + verify_what + "'");
    run_one("verify-algebra", "verify-algebra", {}, true);
  });

  std::string flow_name, nahm_name, sol_name, susy_name, conv_name;
  std::map<std::string, std::string> flow_kv, nahm_kv, sol_kv, susy_kv, conv_kv;

  auto* flow = app.add_subcommand("flow", "evolve a surface configuration along the self-dual flow");
  flow->add_option("--name", flow_name, "scenario name (names the output subdirectory)");
  kv_flag(flow, flow_kv, "--dim", "dim", "target dimension, 3 or 7");
  kv_flag(flow, flow_kv, "--topology", "topology", "sphere or torus");
  kv_flag(flow, flow_kv, "--grid", "grid", "grid size N1xN2");
  kv_flag(flow, flow_kv, "--dt", "dt", "time step");
  kv_flag(flow, flow_kv, "--steps", "steps", "number of steps");
  kv_flag(flow, flow_kv, "--record-every", "record_every", "series sampling stride");
  kv_flag(flow, flow_kv, "--preset", "preset", "initial data: collapse or random");
  kv_flag(flow, flow_kv, "--r0", "r0", "initial radius (collapse preset)");
  kv_flag(flow, flow_kv, "--lmax", "lmax", "band limit (random preset)");
  kv_flag(flow, flow_kv, "--amplitude", "amplitude", "amplitude (random preset)");
  kv_flag(flow, flow_kv, "--seed", "seed", "random seed");
  kv_flag(flow, flow_kv, "--wind1", "wind1", "winding numbers along the first angle (torus)");
  kv_flag(flow, flow_kv, "--wind2", "wind2", "winding numbers along the second angle (torus)");
  kv_flag(flow, flow_kv, "--blowup-threshold", "blowup_threshold", "abort when max |X| passes this");
  kv_flag(flow, flow_kv, "--tol-gauss", "tol_gauss", "Gauss constraint tolerance");
  kv_flag(flow, flow_kv, "--tol-eom", "tol_eom", "second-order equation tolerance");
  kv_flag(flow, flow_kv, "--tol-charge", "tol_charge", "charge drift tolerance");
  kv_flag(flow, flow_kv, "--tol-radius", "tol_radius", "collapse radius tolerance");
  kv_flag(flow, flow_kv, "--tol-conservation", "tol_conservation", "transport relation tolerance");
  kv_flag(flow, flow_kv, "--write-state", "write_state", "write final snapshot (1/0)");
  flow->callback([&]() { run_one("flow", flow_name, flow_kv, false); });

  auto* nahm = app.add_subcommand("nahm", "factorized matrix flow and its diagonal reduction");
  nahm->add_option("--name", nahm_name, "scenario name");
  kv_flag(nahm, nahm_kv, "--mode", "mode", "matrix or diagonal");
  kv_flag(nahm, nahm_kv, "--init", "init", "identity, diagonal, or random");
  kv_flag(nahm, nahm_kv, "--c", "c", "identity scale");
  kv_flag(nahm, nahm_kv, "--values", "values", "seven comma-separated diagonal values");
  kv_flag(nahm, nahm_kv, "--amplitude", "amplitude", "random init amplitude");
  kv_flag(nahm, nahm_kv, "--seed", "seed", "random seed");
  kv_flag(nahm, nahm_kv, "--dt", "dt", "time step");
  kv_flag(nahm, nahm_kv, "--steps", "steps", "number of steps");
  kv_flag(nahm, nahm_kv, "--record-every", "record_every", "series sampling stride");
  kv_flag(nahm, nahm_kv, "--blowup-threshold", "blowup_threshold", "abort threshold");
  kv_flag(nahm, nahm_kv, "--tol-pole", "tol_pole", "pole-law relative tolerance");
  kv_flag(nahm, nahm_kv, "--tol-offdiag", "tol_offdiag", "off-diagonal leakage tolerance");
  kv_flag(nahm, nahm_kv, "--tol-ansatz", "tol_ansatz", "product-form residual tolerance");
  nahm->callback([&]() { run_one("nahm", nahm_name, nahm_kv, false); });

  auto* sol = app.add_subcommand("solutions", "evaluate closed-form solutions and their residuals");
  sol->add_option("--name", sol_name, "scenario name");
  kv_flag(sol, sol_kv, "--solution", "name", "collapse-3d, toda-sphere, or string-7d");
  kv_flag(sol, sol_kv, "--grid", "grid", "grid size N1xN2");
  kv_flag(sol, sol_kv, "--time", "time", "evaluation time");
  kv_flag(sol, sol_kv, "--tol", "tol", "residual tolerance");
  kv_flag(sol, sol_kv, "--r0", "r0", "initial radius (collapse-3d)");
  kv_flag(sol, sol_kv, "--kappa", "kappa", "profile rate (toda-sphere)");
  kv_flag(sol, sol_kv, "--t0", "t0", "singularity time (toda-sphere)");
  kv_flag(sol, sol_kv, "--a", "a", "seven comma-separated winding integers, first angle");
  kv_flag(sol, sol_kv, "--b", "b", "seven comma-separated winding integers, second angle");
  kv_flag(sol, sol_kv, "--modes", "modes", "profile modes plane:k:re:im separated by ';'");
  sol->callback([&]() { run_one("solutions", sol_name, sol_kv, false); });

  auto* susy = app.add_subcommand("susy", "count preserved spinor parameters of a snapshot");
  susy->add_option("--name", susy_name, "scenario name");
  kv_flag(susy, susy_kv, "--state", "state", "snapshot file to analyze");
  kv_flag(susy, susy_kv, "--preset", "preset", "collapse-3d, random-7d, or noise-7d");
  kv_flag(susy, susy_kv, "--grid", "grid", "grid size N1xN2");
  kv_flag(susy, susy_kv, "--time", "time", "evaluation time (presets)");
  kv_flag(susy, susy_kv, "--r0", "r0", "initial radius (collapse preset)");
  kv_flag(susy, susy_kv, "--lmax", "lmax", "band limit (random presets)");
  kv_flag(susy, susy_kv, "--amplitude", "amplitude", "amplitude (random presets)");
  kv_flag(susy, susy_kv, "--seed", "seed", "random seed");
  kv_flag(susy, susy_kv, "--tol", "tol", "kernel threshold");
  kv_flag(susy, susy_kv, "--sector", "sector", "both, plus, or minus");
  kv_flag(susy, susy_kv, "--expect", "expect", "assert this kernel dimension");
  susy->callback([&]() { run_one("susy", susy_name, susy_kv, true); });

  auto* conv = app.add_subcommand("convergence", "resolution and step-size convergence studies");
  conv->add_option("--name", conv_name, "scenario name");
  kv_flag(conv, conv_kv, "--study", "study", "fuzzy, rk4, bracket, or all");
  kv_flag(conv, conv_kv, "--seed", "seed", "random seed");
  conv->callback([&]() { run_one("convergence", conv_name, conv_kv, true); });

  std::string config_path;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "run every scenario of a config file");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--jobs", jobs, "scenarios to run in parallel");
  run->callback([&]() { exit_code = membrane::run_config(config_path, outdir, jobs); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int c = app.exit(e);
    return c == 0 ? 0 : 2;
  } catch (const membrane::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
