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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured quantities; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "svoctl/gradcheck.hpp"
#include "svoctl/metrics.hpp"
#include "svoctl/scenario.hpp"
#include "svoctl/solver.hpp"

namespace {

using namespace svoctl;

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return std::string(buffer);
}

// --- criterion 1: adjoint gradient vs central finite differences ------------

void criterion_gradient_correctness() {
  const auto start = std::chrono::steady_clock::now();
  const GradcheckReport r = run_gradient_check(/*seed=*/7, /*n_scenarios=*/20,
                                               /*tolerance=*/1e-3, /*fd_step=*/1e-4);
  const double elapsed = seconds_since(start);
  const bool pass = r.pass && elapsed < 30.0;
  report(1, "gradient correctness (20 randomized scenarios)", pass,
         fmt("max relative error %.3e vs tolerance 1e-3 (1e-6 floor), %.1f s < 30 s",
             r.max_rel_error, elapsed));
}

// --- criterion 2: brute-force control-grid equivalence ----------------------

OcpProblem toy_problem(double lead_decel, double phi, double lambda, double v0) {
  OcpProblem p;
  p.horizon = Horizon{0.0, 3.0, 1.0};
  p.objective.phi = SvoAngle{phi};
  p.objective.lambda = lambda;
  p.objective.v0 = v0;
  const std::size_t n = p.horizon.nodes();
  p.exo.length = 5.0;
  p.exo.position.resize(n);
  p.exo.speed.resize(n);
  const double x0 = ovrv_equilibrium_gap(p.av_model, 15.0) + 5.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = p.horizon.time_at(k);
    p.exo.speed[k] = 15.0 - lead_decel * t;
    p.exo.position[k] = x0 + 15.0 * t - 0.5 * lead_decel * t * t;
  }
  p.initial = {0.0, 15.0, -(idm_equilibrium_gap(p.follower_model, 15.0) + 5.0), 15.0};
  return p;
}

double toy_objective(const OcpProblem& p, const std::vector<double>& intervals) {
  ControlGrid u{{intervals[0], intervals[1], intervals[2], 0.0}, p.bounds};
  const std::vector<OcpState> traj = forward_integrate(p, u);
  return evaluate_objective(traj, u.values, p.exo, p.objective, p.av_model, p.horizon);
}

// Exhaustive 5-point grid per interval, then local coordinate bisection.
double brute_force_minimum(const OcpProblem& p) {
  const double grid[5] = {p.bounds.u_min, p.bounds.u_min / 2, 0.0, p.bounds.u_max / 2,
                          p.bounds.u_max};
  std::vector<double> best = {0.0, 0.0, 0.0};
  double best_value = 1e300;
  for (double a : grid) {
    for (double b : grid) {
      for (double c : grid) {
        const double value = toy_objective(p, {a, b, c});
        if (value < best_value) {
          best_value = value;
          best = {a, b, c};
        }
      }
    }
  }
  double step = (p.bounds.u_max - p.bounds.u_min) / 8.0;
  while (step > 1e-7) {
    bool improved = false;
    for (int i = 0; i < 3; ++i) {
      for (double direction : {-step, step}) {
        std::vector<double> candidate = best;
        candidate[i] =
            std::clamp(candidate[i] + direction, p.bounds.u_min, p.bounds.u_max);
        const double value = toy_objective(p, candidate);
        if (value < best_value - 1e-13) {
          best_value = value;
          best = candidate;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_value;
}

void criterion_brute_force_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  // Reference parameterization (clamped optimum) and a near-interior variant.
  const OcpProblem toys[2] = {toy_problem(1.0, kPi / 4, 0.01, 30.0),
                              toy_problem(1.0, 0.3, 0.005, 15.0)};
  double worst_gap = 0.0;
  for (const OcpProblem& p : toys) {
    const double oracle = brute_force_minimum(p);
    SolverConfig config;
    config.epsilon = 0.05;
    config.n_max = 5000;
    config.upsilon = 1e-10;
    config.delta = 1e-12;
    const SolveResult sol = solve(p, config);
    const double solved = evaluate_objective(sol.states, sol.control.values, p.exo,
                                             p.objective, p.av_model, p.horizon);
    worst_gap = std::max(worst_gap, (solved - oracle) / oracle);
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_gap <= 0.02 && elapsed < 10.0;
  report(2, "brute-force equivalence on the 3-interval toy", pass,
         fmt("solver within %+.4f%% of the refined exhaustive minimum (limit 2%%), "
             "%.1f s < 10 s",
             100.0 * worst_gap, elapsed));
}

// --- criteria 3 and 4: preset sweep orderings --------------------------------

struct SweepOutcome {
  double abs_payoff[3];
  double avg3_full[3];
  double window_gain[3];  // percent change of #3..#5 window speed, prosocial vs egoistic
  double elapsed;
};

SweepOutcome run_preset_sweep() {
  const auto start = std::chrono::steady_clock::now();
  const Scenario base = five_vehicle_preset();
  const double phis[3] = {0.1, kPi / 4, kPi / 2};
  const SweepResult sweep = sweep_svo(base, phis, 0.1, Window{30.0, 60.0});
  SweepOutcome out;
  for (int i = 0; i < 3; ++i) {
    out.abs_payoff[i] = sweep.entries[i].metrics.abs_payoff_self_full;
    out.avg3_full[i] = sweep.entries[i].metrics.vehicles[2].avg_speed_full;
  }
  for (int v = 0; v < 3; ++v) {
    out.window_gain[v] = sweep.entries[1].vs_base.avg_speed_window[2 + v];
  }
  out.elapsed = seconds_since(start);
  return out;
}

void criterion_svo_monotonicity(const SweepOutcome& s) {
  const bool payoff_ordered =
      s.abs_payoff[0] <= s.abs_payoff[1] && s.abs_payoff[1] <= s.abs_payoff[2];
  const bool speed_ordered =
      s.avg3_full[0] <= s.avg3_full[1] && s.avg3_full[1] <= s.avg3_full[2];
  const bool pass = payoff_ordered && speed_ordered && s.elapsed < 120.0;
  report(3, "SVO monotonicity on the synthetic preset", pass,
         fmt("|U_av| %.4f / %.4f / %.4f for phi 0.1 / pi/4 / pi/2 (%s), "
             "avg speed #3 %.5f / %.5f / %.5f (%s), %.1f s < 120 s",
             s.abs_payoff[0], s.abs_payoff[1], s.abs_payoff[2],
             payoff_ordered ? "non-decreasing ok" : "ordering violated",
             s.avg3_full[0], s.avg3_full[1], s.avg3_full[2],
             speed_ordered ? "non-decreasing ok" : "ordering violated", s.elapsed));
}

void criterion_proximity_benefit(const SweepOutcome& s) {
  const double slack = 0.5;  // percentage points
  const bool ordered = s.window_gain[0] >= s.window_gain[1] - slack &&
                       s.window_gain[1] >= s.window_gain[2] - slack;
  report(4, "proximity-benefit ordering over the slowdown window", ordered,
         fmt("prosocial-vs-egoistic window gains #3 %+.2f%% >= #4 %+.2f%% >= #5 "
             "%+.2f%% (0.5 pp slack)",
             s.window_gain[0], s.window_gain[1], s.window_gain[2]));
}

// --- criterion 5: convergence behavior ---------------------------------------

void criterion_convergence_behavior() {
  const auto start = std::chrono::steady_clock::now();
  Scenario scenario = five_vehicle_preset();
  scenario.objective.phi = SvoAngle{0.1};
  scenario.solver = SolverConfig{0.01, 300, 1e-4, 1e-6};
  const OcpProblem problem = build_ocp(scenario);
  const SolveResult sol = solve(problem, scenario.solver);
  const std::vector<double>& history = sol.report.objective_history;

  bool running_min_ok = true;
  double running = history.front();
  for (double v : history) {
    running = std::min(running, v);
    if (running > v + 1e-15) running_min_ok = false;
  }
  const double final_step =
      history.size() >= 2 ? std::abs(history.back() - history[history.size() - 2]) : 0.0;
  const bool stalled = sol.report.converged &&
                       sol.report.stop_reason == StopReason::ObjectiveStalled &&
                       final_step <= 1e-4;
  const double elapsed = seconds_since(start);
  const bool pass =
      sol.report.iterations <= 300 && running_min_ok && stalled && elapsed < 60.0;
  report(5, "convergence of the sweep solver on the preset", pass,
         fmt("%zu iterations (<= 300), stop %s, final |dJ3| %.2e <= 1e-4, running "
             "minimum %s, %.1f s < 60 s",
             sol.report.iterations, to_string(sol.report.stop_reason).c_str(),
             final_step, running_min_ok ? "non-increasing" : "violated", elapsed));
}

// --- criterion 6: equilibrium fixed point ------------------------------------

void criterion_equilibrium_fixed_point() {
  Scenario scenario = five_vehicle_preset();
  scenario.lead = LeadProfile{{{0.0, 15.0}, {10.0, 15.0}}};
  scenario.horizon = Horizon{0.0, 10.0, 0.1};
  const SimResult result = run_baseline(scenario);
  double worst = 0.0;
  for (const VehicleSeries& vehicle : result.vehicles) {
    for (double v : vehicle.speed) {
      worst = std::max(worst, std::abs(v - 15.0));
    }
  }
  report(6, "equilibrium fixed point under zero control", worst <= 1e-6,
         fmt("max speed deviation %.2e m/s <= 1e-6 over 10 s", worst));
}

// --- criterion 7: feasibility and determinism --------------------------------

void criterion_feasibility_determinism() {
  Scenario scenario = five_vehicle_preset();
  const SimResult a = run_scenario(scenario);
  const SimResult b = run_scenario(scenario);
  bool feasible = true;
  for (double u : a.control) {
    feasible = feasible && u >= -0.6 && u <= 0.6;
  }
  std::ostringstream csv_a, csv_b;
  export_trajectories(a, csv_a);
  export_trajectories(b, csv_b);
  const bool identical = csv_a.str() == csv_b.str();
  report(7, "control feasibility and bit-identical reruns", feasible && identical,
         fmt("all controls in [-0.6, 0.6]: %s; trajectory CSVs byte-identical: %s",
             feasible ? "yes" : "NO", identical ? "yes" : "NO"));
}

// --- criterion 8: altruistic degeneracy ---------------------------------------

void criterion_altruistic_degeneracy() {
  Scenario scenario = five_vehicle_preset();
  scenario.objective.phi = SvoAngle{kPi / 2};
  const OcpProblem problem = build_ocp(scenario);
  const SolveResult sol = solve(problem, scenario.solver);
  const AdjointTrajectory adjoint = backward_integrate(problem, sol.states, sol.control);
  const std::vector<double> hu =
      hamiltonian_gradient_nodes(problem, sol.states, adjoint, sol.control);
  double worst = 0.0;
  for (std::size_t k = 0; k < hu.size(); ++k) {
    worst = std::max(worst, std::abs(hu[k] - adjoint.psi[k][1]));
  }
  report(8, "altruistic degeneracy H_u = psi2 at phi = pi/2", worst <= 1e-12,
         fmt("max |H_u - psi2| = %.2e over %zu nodes (cos(pi/2) residual only)",
             worst, hu.size()));
}

}  // namespace

int main() {
  std::printf("acceptance suite: %s\n", "svoctl");
  criterion_gradient_correctness();
  criterion_brute_force_equivalence();
  const SweepOutcome sweep = run_preset_sweep();
  criterion_svo_monotonicity(sweep);
  criterion_proximity_benefit(sweep);
  criterion_convergence_behavior();
  criterion_equilibrium_fixed_point();
  criterion_feasibility_determinism();
  criterion_altruistic_degeneracy();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
