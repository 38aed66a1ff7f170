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

#include "svoctl/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace svoctl {

namespace {

// Integral over [a, b] of the piecewise-linear interpolant of node values.
double window_integral(std::span<const double> values, const Horizon& horizon,
                       Window window) {
  if (!(window.start < window.end) || window.start < horizon.t0 - 1e-9 ||
      window.end > horizon.tf + 1e-9) {
    throw std::invalid_argument("window must lie within the horizon");
  }
  const double a = std::max(window.start, horizon.t0);
  const double b = std::min(window.end, horizon.tf);
  const double dt = horizon.dt;

  auto value_at = [&](double t) {
    const double pos = (t - horizon.t0) / dt;
    const std::size_t k = std::min(static_cast<std::size_t>(pos), values.size() - 2);
    const double frac = pos - static_cast<double>(k);
    return values[k] + frac * (values[k + 1] - values[k]);
  };

  const std::size_t first_full = static_cast<std::size_t>(std::ceil((a - horizon.t0) / dt - 1e-12));
  const std::size_t last_full = static_cast<std::size_t>(std::floor((b - horizon.t0) / dt + 1e-12));

  double sum = 0.0;
  const double t_first = horizon.time_at(first_full);
  const double t_last = horizon.time_at(last_full);
  if (t_first >= t_last) {
    // Window inside one interval.
    return 0.5 * (value_at(a) + value_at(b)) * (b - a);
  }
  if (a < t_first) {
    sum += 0.5 * (value_at(a) + values[first_full]) * (t_first - a);
  }
  for (std::size_t k = first_full; k < last_full; ++k) {
    sum += 0.5 * (values[k] + values[k + 1]) * dt;
  }
  if (b > t_last) {
    sum += 0.5 * (values[last_full] + value_at(b)) * (b - t_last);
  }
  return sum;
}

std::vector<double> half_square(std::span<const double> values) {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](double v) { return 0.5 * v * v; });
  return out;
}

}  // namespace

double abs_payoff_self(const SimResult& result) {
  return std::abs(
      payoff_self(result.vehicles[result.av_index].accel, result.horizon.dt));
}

double abs_payoff_self(const SimResult& result, Window window) {
  const std::vector<double> integrand = half_square(result.vehicles[result.av_index].accel);
  return window_integral(integrand, result.horizon, window);
}

double average_speed(const SimResult& result, std::size_t vehicle, Window window) {
  if (vehicle >= result.vehicles.size()) {
    throw std::invalid_argument("average_speed: vehicle index out of range");
  }
  return window_integral(result.vehicles[vehicle].speed, result.horizon, window) /
         (std::min(window.end, result.horizon.tf) - std::max(window.start, result.horizon.t0));
}

double percent_change(double value, double base) {
  if (base == 0.0) {
    throw std::invalid_argument("percent_change: zero base");
  }
  return 100.0 * (value - base) / base;
}

MetricsReport compute_metrics(const SimResult& result, Window window) {
  MetricsReport report;
  report.window = window;
  report.abs_payoff_self_full = abs_payoff_self(result);
  report.abs_payoff_self_window = abs_payoff_self(result, window);
  const Window full{result.horizon.t0, result.horizon.tf};
  for (std::size_t i = 0; i < result.vehicles.size(); ++i) {
    report.vehicles.push_back(
        {average_speed(result, i, full), average_speed(result, i, window)});
  }
  return report;
}

PercentChanges percent_changes(const MetricsReport& value, const MetricsReport& base) {
  if (value.vehicles.size() != base.vehicles.size()) {
    throw std::invalid_argument("percent_changes: vehicle count mismatch");
  }
  PercentChanges out;
  out.abs_payoff_full = percent_change(value.abs_payoff_self_full, base.abs_payoff_self_full);
  out.abs_payoff_window =
      percent_change(value.abs_payoff_self_window, base.abs_payoff_self_window);
  for (std::size_t i = 0; i < value.vehicles.size(); ++i) {
    out.avg_speed_full.push_back(
        percent_change(value.vehicles[i].avg_speed_full, base.vehicles[i].avg_speed_full));
    out.avg_speed_window.push_back(percent_change(value.vehicles[i].avg_speed_window,
                                                  base.vehicles[i].avg_speed_window));
  }
  return out;
}

SweepResult sweep_svo(const Scenario& scenario, std::span<const double> phis,
                      double base_phi, Window window) {
  if (phis.empty()) {
    throw std::invalid_argument("sweep_svo: empty phi list");
  }
  for (std::size_t i = 0; i < phis.size(); ++i) {
    for (std::size_t j = i + 1; j < phis.size(); ++j) {
      if (phis[i] == phis[j]) {
        throw std::invalid_argument("sweep_svo: phi values must be distinct");
      }
    }
  }
  const auto base_it = std::find(phis.begin(), phis.end(), base_phi);
  if (base_it == phis.end()) {
    throw std::invalid_argument("sweep_svo: base phi missing from the phi list");
  }
  const std::size_t base_index = static_cast<std::size_t>(base_it - phis.begin());

  std::vector<std::future<SimResult>> runs;
  runs.reserve(phis.size());
  for (double phi : phis) {
    Scenario variant = scenario;
    variant.objective.phi = SvoAngle{phi};
    runs.push_back(std::async(std::launch::async, [variant = std::move(variant), phi]() {
      try {
        return run_scenario(variant);
      } catch (const std::exception& error) {
        throw std::runtime_error("sweep entry phi=" + std::to_string(phi) +
                                 " failed: " + error.what());
      }
    }));
  }

  SweepResult sweep;
  sweep.base_index = base_index;
  std::vector<MetricsReport> reports;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    SimResult result = runs[i].get();
    reports.push_back(compute_metrics(result, window));
    sweep.entries.push_back({phis[i], reports.back(), PercentChanges{}, std::move(result)});
  }
  for (SweepEntry& entry : sweep.entries) {
    entry.vs_base = percent_changes(entry.metrics, reports[base_index]);
  }
  return sweep;
}

namespace {

void append_number(std::string& row, double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  row.append(buffer, ptr);
}

}  // namespace

void export_trajectories(const SimResult& result, std::ostream& out) {
  std::string header = "t";
  for (std::size_t i = 0; i < result.vehicles.size(); ++i) {
    const std::string n = std::to_string(i + 1);
    header += ",x" + n + ",v" + n + ",a" + n;
    if (i == result.av_index) {
      header += ",u" + n;
    }
  }
  out << header << '\n';

  const std::size_t n_nodes = result.horizon.nodes();
  std::string row;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    row.clear();
    append_number(row, result.horizon.time_at(k));
    for (std::size_t i = 0; i < result.vehicles.size(); ++i) {
      const VehicleSeries& s = result.vehicles[i];
      row.push_back(',');
      append_number(row, s.position[k]);
      row.push_back(',');
      append_number(row, s.speed[k]);
      row.push_back(',');
      append_number(row, s.accel[k]);
      if (i == result.av_index) {
        row.push_back(',');
        append_number(row, result.control[k]);
      }
    }
    out << row << '\n';
  }
}

void export_trajectories(const SimResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // keep LF endings everywhere
  if (!out) {
    throw std::runtime_error("cannot write trajectories to " + path.string());
  }
  export_trajectories(result, out);
  if (!out.good()) {
    throw std::runtime_error("write failure on " + path.string());
  }
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json metrics_to_json_value(const SimResult& result, const MetricsReport& metrics,
                                   const PercentChanges* vs_base) {
  ordered_json doc;
  doc["abs_payoff_self"] = {{"full", metrics.abs_payoff_self_full},
                            {"window", metrics.abs_payoff_self_window}};
  doc["window"] = {metrics.window.start, metrics.window.end};

  ordered_json speeds = ordered_json::array();
  for (std::size_t i = 0; i < metrics.vehicles.size(); ++i) {
    speeds.push_back({{"vehicle", i + 1},
                      {"full", metrics.vehicles[i].avg_speed_full},
                      {"window", metrics.vehicles[i].avg_speed_window}});
  }
  doc["avg_speed"] = std::move(speeds);

  if (vs_base != nullptr) {
    ordered_json pc;
    pc["abs_payoff_self"] = {{"full", vs_base->abs_payoff_full},
                             {"window", vs_base->abs_payoff_window}};
    ordered_json per_vehicle = ordered_json::array();
    for (std::size_t i = 0; i < vs_base->avg_speed_full.size(); ++i) {
      per_vehicle.push_back({{"vehicle", i + 1},
                             {"full", vs_base->avg_speed_full[i]},
                             {"window", vs_base->avg_speed_window[i]}});
    }
    pc["avg_speed"] = std::move(per_vehicle);
    doc["percent_change"] = std::move(pc);
  } else {
    doc["percent_change"] = nullptr;
  }

  if (result.report) {
    doc["solver"] = {{"iterations", result.report->iterations},
                     {"converged", result.report->converged},
                     {"stop_reason", to_string(result.report->stop_reason)}};
  } else {
    doc["solver"] = nullptr;
  }
  return doc;
}

}  // namespace

std::string metrics_json(const SimResult& result, const MetricsReport& metrics,
                         const PercentChanges* vs_base) {
  return metrics_to_json_value(result, metrics, vs_base).dump(2) + "\n";
}

std::string solve_report_json(const SimResult& result) {
  ordered_json doc;
  doc["baseline"] = result.baseline;
  if (result.report) {
    doc["solver"] = {{"iterations", result.report->iterations},
                     {"converged", result.report->converged},
                     {"stop_reason", to_string(result.report->stop_reason)},
                     {"objective_history", result.report->objective_history}};
  } else {
    doc["solver"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& sweep) {
  ordered_json doc;
  doc["base_phi"] = sweep.entries[sweep.base_index].phi;
  ordered_json entries = ordered_json::array();
  for (const SweepEntry& entry : sweep.entries) {
    ordered_json item;
    item["phi"] = entry.phi;
    item["metrics"] = metrics_to_json_value(entry.result, entry.metrics, &entry.vs_base);
    entries.push_back(std::move(item));
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

}  // namespace svoctl
