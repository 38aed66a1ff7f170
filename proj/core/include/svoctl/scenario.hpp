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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "svoctl/solver.hpp"

namespace svoctl {

/// Time-speed recording executed by the platoon's first vehicle.
struct LeadProfile {
  struct Sample {
    double t;  // seconds
    double v;  // m/s
  };
  std::vector<Sample> samples;

  double start_time() const { return samples.front().t; }
  double end_time() const { return samples.back().t; }
  /// Linear interpolation; t must lie within the sampled span.
  double speed_at(double t) const;
};

/// Parses the lead-profile CSV ("t,v" header, one "<seconds>,<m/s>" row per
/// sample, LF or CRLF). Throws ProfileParseError with the offending line.
LeadProfile load_lead_profile(std::istream& in);
LeadProfile load_lead_profile(const std::filesystem::path& path);

/// Built-in 120 s profile: 15 m/s cruise with two slowdowns to near standstill,
/// standing in for a signalized corridor recording.
LeadProfile synthetic_two_stop_profile();

/// Lead speeds at the horizon grid nodes, linearly interpolated. Throws
/// std::invalid_argument when the horizon leaves the profile span.
std::vector<double> resample_profile(const LeadProfile& profile, const Horizon& horizon);

/// Trapezoidal integration of the gridded speeds into positions from x0.
ExogenousTrajectory integrate_lead(std::span<const double> speeds, double x0,
                                   const Horizon& horizon, double lead_length);

/// A complete experiment description.
struct Scenario {
  std::vector<VehicleSpec> platoon;  // [0] is the profile-driven lead
  LeadProfile lead;
  Horizon horizon;
  ObjectiveParams objective;
  ControlBounds bounds;
  SolverConfig solver;
  std::optional<double> initial_speed;             // default: lead speed at t0
  std::optional<std::vector<double>> initial_gaps; // default: per-model equilibrium
};

void validate(const Scenario& scenario);

/// 0-based platoon position of the single autonomous vehicle.
std::size_t av_index(const Scenario& scenario);

/// Every vehicle at the lead's initial speed, gaps at each follower's model
/// equilibrium unless overridden; positions accumulate rearward from the lead
/// at x = 0 including vehicle lengths.
std::vector<VehicleState> init_platoon(const Scenario& scenario);

struct VehicleSeries {
  std::vector<double> position;
  std::vector<double> speed;
  std::vector<double> accel;
};

struct SimResult {
  Horizon horizon;
  std::size_t av_index = 1;            // 0-based platoon position
  std::vector<double> vehicle_lengths;
  std::vector<VehicleSeries> vehicles; // [0] is the lead
  std::vector<double> control;         // AV additive control per node
  std::optional<SolveReport> report;   // absent for baseline runs
  bool baseline = false;
};

/// One RK4 step of the follower chain from the node-k states. `followers`
/// holds vehicles 1..n-1; the lead is taken from `lead` at interval k; `u` is
/// the additive input of the autonomous entry, if any.
std::vector<VehicleState> platoon_step(std::span<const VehicleSpec> platoon,
                                       std::span<const VehicleState> followers,
                                       const ExogenousTrajectory& lead,
                                       std::size_t k, double dt, double u);

/// Simulates the whole platoon under a prescribed additive control series.
SimResult simulate_platoon(const Scenario& scenario, std::span<const double> control);

/// Full pipeline: lead trajectory, optimal control for the AV-follower pair,
/// then a re-simulation of the entire platoon under the optimal control.
SimResult run_scenario(const Scenario& scenario);

/// Same pipeline with the additive control fixed at zero; no solve.
SimResult run_baseline(const Scenario& scenario);

/// Builds the OCP slice run_scenario hands to the solver (exposed for tests
/// and the convergence trace).
OcpProblem build_ocp(const Scenario& scenario);

/// Lead HV + AV + three HV followers on the synthetic two-stop profile.
Scenario five_vehicle_preset();

}  // namespace svoctl
