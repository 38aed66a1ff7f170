// Copyright 2026 The svoctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svoctl/config.hpp"
#include "svoctl/gradcheck.hpp"
#include "svoctl/metrics.hpp"
#include "svoctl/scenario.hpp"

namespace svoctl::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<double> window;
  double dt = 0.0;
};

void add_common(CLI::App* cmd, CommonOptions* opts, bool out_required) {
  cmd->add_option("--config", opts->config_path,
                  "Scenario config (JSON); defaults to the built-in five-vehicle preset");
  auto* out = cmd->add_option("--out", opts->out_dir, "Output directory");
  if (out_required) {
    out->required();
  }
  cmd->add_option("--window", opts->window, "Metrics window as start,end seconds")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--dt", opts->dt, "Override the grid step (s)");
}

RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig run;
  if (!opts.config_path.empty()) {
    run = load_config(opts.config_path);
  } else {
    run.scenario = five_vehicle_preset();
  }
  if (opts.dt > 0.0) {
    run.scenario.horizon.dt = opts.dt;
    validate(run.scenario.horizon);
  }
  if (opts.window.size() == 2) {
    run.window = Window{opts.window[0], opts.window[1]};
  }
  return run;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out.good()) {
    throw std::runtime_error("write failure on " + path.string());
  }
}

void write_run_outputs(const SimResult& result, const Window& window,
                       const fs::path& dir) {
  fs::create_directories(dir);
  export_trajectories(result, dir / "trajectories.csv");
  const MetricsReport metrics = compute_metrics(result, window);
  write_file(dir / "metrics.json", metrics_json(result, metrics));
  write_file(dir / "report.json", solve_report_json(result));
}

int cmd_simulate(const CommonOptions& opts, bool baseline) {
  const RunConfig run = resolve_config(opts);
  const SimResult result =
      baseline ? run_baseline(run.scenario) : run_scenario(run.scenario);
  write_run_outputs(result, run.window, opts.out_dir);
  if (result.report) {
    std::printf("solver: %zu iterations, %s (%s)\n", result.report->iterations,
                result.report->converged ? "converged" : "not converged",
                to_string(result.report->stop_reason).c_str());
  }
  std::printf("wrote trajectories.csv, metrics.json, report.json to %s\n",
              opts.out_dir.c_str());
  return 0;
}

void print_sweep_table(const SweepResult& sweep, const Window& window) {
  const std::size_t n_vehicles = sweep.entries.front().metrics.vehicles.size();
  const std::size_t av = sweep.entries.front().result.av_index;

  std::printf("full horizon:\n");
  std::printf("%10s %12s", "phi", "|U_av|");
  for (std::size_t i = av + 1; i < n_vehicles; ++i) {
    std::printf("   avg v#%zu", i + 1);
  }
  std::printf("\n");
  for (const SweepEntry& entry : sweep.entries) {
    std::printf("%10.6f %12.4f", entry.phi, entry.metrics.abs_payoff_self_full);
    for (std::size_t i = av + 1; i < n_vehicles; ++i) {
      std::printf(" %9.4f", entry.metrics.vehicles[i].avg_speed_full);
    }
    std::printf("\n");
  }

  std::printf("\nwindow [%g, %g] s, percent change vs phi=%g:\n", window.start,
              window.end, sweep.entries[sweep.base_index].phi);
  std::printf("%10s %12s", "phi", "|U_av|");
  for (std::size_t i = av + 1; i < n_vehicles; ++i) {
    std::printf("   avg v#%zu", i + 1);
  }
  std::printf("\n");
  for (const SweepEntry& entry : sweep.entries) {
    std::printf("%10.6f %+11.2f%%", entry.phi, entry.vs_base.abs_payoff_window);
    for (std::size_t i = av + 1; i < n_vehicles; ++i) {
      std::printf(" %+8.2f%%", entry.vs_base.avg_speed_window[i]);
    }
    std::printf("\n");
  }
}

int cmd_sweep(const CommonOptions& opts, std::vector<double> phis, double base) {
  const RunConfig run = resolve_config(opts);
  if (phis.empty()) {
    phis = {0.1, std::numbers::pi / 4, std::numbers::pi / 2};
  }
  const SweepResult sweep = sweep_svo(run.scenario, phis, base, run.window);
  print_sweep_table(sweep, run.window);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    write_file(fs::path(opts.out_dir) / "sweep.json", sweep_json(sweep));
    for (std::size_t i = 0; i < sweep.entries.size(); ++i) {
      const fs::path entry_dir = fs::path(opts.out_dir) / ("phi" + std::to_string(i));
      write_run_outputs(sweep.entries[i].result, run.window, entry_dir);
    }
    std::printf("\nwrote sweep.json and per-angle runs to %s\n", opts.out_dir.c_str());
  }
  return 0;
}

int cmd_gradcheck(unsigned seed, int scenarios) {
  const GradcheckReport report = run_gradient_check(seed, scenarios);
  std::printf("gradient check: %d scenarios, fd step %g\n", report.scenarios,
              report.fd_step);
  std::printf("max relative error = %.6e (tolerance %.1e): %s\n", report.max_rel_error,
              report.tolerance, report.pass ? "pass" : "FAIL");
  return report.pass ? 0 : 1;
}

int cmd_convergence(const CommonOptions& opts) {
  const RunConfig run = resolve_config(opts);
  const OcpProblem problem = build_ocp(run.scenario);
  const SolveResult sol = solve(problem, run.scenario.solver);
  std::printf("iteration,J3\n");
  for (std::size_t i = 0; i < sol.report.objective_history.size(); ++i) {
    std::printf("%zu,%.10g\n", i + 1, sol.report.objective_history[i]);
  }
  std::printf("# %s after %zu iterations (%s)\n",
              sol.report.converged ? "converged" : "stopped", sol.report.iterations,
              to_string(sol.report.stop_reason).c_str());
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    std::string csv = "iteration,J3\n";
    for (std::size_t i = 0; i < sol.report.objective_history.size(); ++i) {
      csv += std::to_string(i + 1) + "," +
             std::to_string(sol.report.objective_history[i]) + "\n";
    }
    write_file(fs::path(opts.out_dir) / "convergence.csv", csv);
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Mixed-platoon simulator with SVO-weighted optimal AV control"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  CLI::App* simulate = app.add_subcommand("simulate",
                                          "Solve one scenario and export trajectories and metrics");
  add_common(simulate, &sim_opts, /*out_required=*/true);

  CommonOptions base_opts;
  CLI::App* baseline = app.add_subcommand("baseline",
                                          "Simulate the platoon with zero additive control");
  add_common(baseline, &base_opts, /*out_required=*/true);

  CommonOptions sweep_opts;
  std::vector<double> phis;
  double base_phi = 0.1;
  CLI::App* sweep = app.add_subcommand("sweep", "Run an SVO sweep and compare against a base angle");
  add_common(sweep, &sweep_opts, /*out_required=*/false);
  sweep->add_option("--phis", phis, "Comma-separated SVO angles (radians)")->delimiter(',');
  sweep->add_option("--base", base_phi, "Base angle for percent changes");

  unsigned seed = 7;
  int scenarios = 20;
  CLI::App* gradcheck = app.add_subcommand("gradcheck",
                                           "Compare the adjoint gradient against finite differences");
  gradcheck->add_option("--seed", seed, "Randomization seed");
  gradcheck->add_option("--scenarios", scenarios, "Number of randomized scenarios")
      ->check(CLI::PositiveNumber);

  CommonOptions conv_opts;
  CLI::App* convergence = app.add_subcommand("convergence",
                                             "Print the objective value per solver iteration");
  add_common(convergence, &conv_opts, /*out_required=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error);
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opts, false);
    if (baseline->parsed()) return cmd_simulate(base_opts, true);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, phis, base_phi);
    if (gradcheck->parsed()) return cmd_gradcheck(seed, scenarios);
    if (convergence->parsed()) return cmd_convergence(conv_opts);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return 0;
}

}  // namespace svoctl::cli
