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
#include <string>
#include <vector>

#include "svoctl/scenario.hpp"

namespace svoctl {

/// Evaluation time window within the horizon.
struct Window {
  double start = 30.0;
  double end = 60.0;
};

/// |U| of the AV's eco-driving payoff over the full horizon, computed from
/// its realized total acceleration.
double abs_payoff_self(const SimResult& result);

/// Same, restricted to a window (piecewise-linear integrand).
double abs_payoff_self(const SimResult& result, Window window);

/// Trapezoidal time average of a vehicle's speed over the window.
double average_speed(const SimResult& result, std::size_t vehicle, Window window);

/// 100 * (value - base) / base; throws std::invalid_argument for base == 0.
double percent_change(double value, double base);

struct VehicleMetrics {
  double avg_speed_full;
  double avg_speed_window;
};

struct MetricsReport {
  double abs_payoff_self_full = 0.0;
  double abs_payoff_self_window = 0.0;
  Window window;
  std::vector<VehicleMetrics> vehicles;  // per platoon position, lead first
};

MetricsReport compute_metrics(const SimResult& result, Window window);

/// Percentage changes of one report against a base report.
struct PercentChanges {
  double abs_payoff_full;
  double abs_payoff_window;
  std::vector<double> avg_speed_full;
  std::vector<double> avg_speed_window;
};

PercentChanges percent_changes(const MetricsReport& value, const MetricsReport& base);

struct SweepEntry {
  double phi;
  MetricsReport metrics;
  PercentChanges vs_base;
  SimResult result;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // ordered as the input phi list
  std::size_t base_index = 0;
};

/// Runs the scenario once per SVO angle (entries execute concurrently) and
/// compares every entry against the base angle.
SweepResult sweep_svo(const Scenario& scenario, std::span<const double> phis,
                      double base_phi, Window window);

/// Writes the trajectory CSV: "t,x1,v1,a1,...", with an additional u column
/// for the AV, one row per grid node, shortest round-trip decimals, LF.
void export_trajectories(const SimResult& result, std::ostream& out);
void export_trajectories(const SimResult& result, const std::filesystem::path& path);

/// Metrics document (JSON syntax) for one run.
std::string metrics_json(const SimResult& result, const MetricsReport& metrics,
                         const PercentChanges* vs_base = nullptr);

/// Solver report document for one run; empty solver section for baselines.
std::string solve_report_json(const SimResult& result);

/// Comparison document for a sweep.
std::string sweep_json(const SweepResult& sweep);

}  // namespace svoctl
