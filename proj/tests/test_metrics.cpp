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

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace svoctl {
namespace {

SimResult synthetic_result(std::size_t vehicles, const Horizon& h) {
  SimResult result;
  result.horizon = h;
  result.av_index = 1;
  result.baseline = false;
  result.vehicle_lengths.assign(vehicles, 5.0);
  result.control.assign(h.nodes(), 0.0);
  for (std::size_t i = 0; i < vehicles; ++i) {
    VehicleSeries s;
    for (std::size_t k = 0; k < h.nodes(); ++k) {
      const double t = h.time_at(k);
      s.position.push_back(100.0 * static_cast<double>(vehicles - i) + 10.0 * t);
      s.speed.push_back(10.0);
      s.accel.push_back(0.0);
    }
    result.vehicles.push_back(std::move(s));
  }
  return result;
}

TEST(AbsPayoffSelf, ZeroAndConstantAcceleration) {
  SimResult result = synthetic_result(3, Horizon{0.0, 10.0, 0.1});
  EXPECT_DOUBLE_EQ(abs_payoff_self(result), 0.0);
  for (double& a : result.vehicles[1].accel) a = 1.0;
  EXPECT_NEAR(abs_payoff_self(result), 5.0, 1e-12);
}

TEST(AbsPayoffSelf, SignFlipInvariance) {
  SimResult result = synthetic_result(3, Horizon{0.0, 10.0, 0.1});
  std::mt19937 rng(41);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double& a : result.vehicles[1].accel) a = noise(rng);
  const double direct = abs_payoff_self(result);
  for (double& a : result.vehicles[1].accel) a = -a;
  EXPECT_DOUBLE_EQ(abs_payoff_self(result), direct);
}

TEST(AbsPayoffSelf, WindowedConsistentWithFullHorizon) {
  SimResult result = synthetic_result(3, Horizon{0.0, 10.0, 0.1});
  std::mt19937 rng(42);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double& a : result.vehicles[1].accel) a = noise(rng);
  EXPECT_NEAR(abs_payoff_self(result, Window{0.0, 10.0}), abs_payoff_self(result), 1e-12);
}

TEST(AverageSpeed, ConstantAndRamp) {
  SimResult result = synthetic_result(3, Horizon{0.0, 10.0, 0.1});
  EXPECT_NEAR(average_speed(result, 0, Window{0.0, 10.0}), 10.0, 1e-12);
  EXPECT_NEAR(average_speed(result, 0, Window{2.5, 7.5}), 10.0, 1e-12);

  for (std::size_t k = 0; k < result.vehicles[2].speed.size(); ++k) {
    result.vehicles[2].speed[k] = result.horizon.time_at(k);  // ramp 0..10
  }
  EXPECT_NEAR(average_speed(result, 2, Window{0.0, 10.0}), 5.0, 1e-12);
  EXPECT_NEAR(average_speed(result, 2, Window{2.0, 4.0}), 3.0, 1e-12);
  // Fractional endpoints on the piecewise-linear series.
  EXPECT_NEAR(average_speed(result, 2, Window{2.05, 4.55}), 3.3, 1e-12);
}

TEST(AverageSpeed, BadWindowRaises) {
  SimResult result = synthetic_result(3, Horizon{0.0, 10.0, 0.1});
  EXPECT_THROW(average_speed(result, 0, Window{5.0, 11.0}), std::invalid_argument);
  EXPECT_THROW(average_speed(result, 0, Window{6.0, 6.0}), std::invalid_argument);
  EXPECT_THROW(average_speed(result, 9, Window{0.0, 5.0}), std::invalid_argument);
}

TEST(PercentChange, BasicContract) {
  EXPECT_DOUBLE_EQ(percent_change(10.0, 10.0), 0.0);
  EXPECT_DOUBLE_EQ(percent_change(11.0, 10.0), 10.0);
  EXPECT_DOUBLE_EQ(percent_change(-3.0, -3.0), 0.0);
  EXPECT_THROW(percent_change(1.0, 0.0), std::invalid_argument);
}

TEST(ComputeMetrics, WindowDegeneracy) {
  SimResult result = synthetic_result(4, Horizon{0.0, 20.0, 0.1});
  std::mt19937 rng(43);
  std::normal_distribution<double> noise(10.0, 2.0);
  for (VehicleSeries& v : result.vehicles) {
    for (double& s : v.speed) s = std::abs(noise(rng));
  }
  const MetricsReport full = compute_metrics(result, Window{0.0, 20.0});
  for (const VehicleMetrics& v : full.vehicles) {
    EXPECT_NEAR(v.avg_speed_full, v.avg_speed_window, 1e-12);
  }
}

TEST(SweepSvo, SinglePhiHasZeroChanges) {
  Scenario s = five_vehicle_preset();
  s.horizon = Horizon{0.0, 10.0, 0.1};
  s.solver.n_max = 20;
  const double phis[1] = {0.1};
  const SweepResult sweep = sweep_svo(s, phis, 0.1, Window{2.0, 8.0});
  ASSERT_EQ(sweep.entries.size(), 1u);
  EXPECT_EQ(sweep.base_index, 0u);
  EXPECT_DOUBLE_EQ(sweep.entries[0].vs_base.abs_payoff_full, 0.0);
  for (double pc : sweep.entries[0].vs_base.avg_speed_window) {
    EXPECT_DOUBLE_EQ(pc, 0.0);
  }
}

TEST(SweepSvo, ValidatesInput) {
  Scenario s = five_vehicle_preset();
  s.horizon = Horizon{0.0, 10.0, 0.1};
  const std::vector<double> empty;
  EXPECT_THROW(sweep_svo(s, empty, 0.1, Window{2.0, 8.0}), std::invalid_argument);
  const double dup[2] = {0.1, 0.1};
  EXPECT_THROW(sweep_svo(s, dup, 0.1, Window{2.0, 8.0}), std::invalid_argument);
  const double missing_base[2] = {0.2, 0.3};
  EXPECT_THROW(sweep_svo(s, missing_base, 0.1, Window{2.0, 8.0}),
               std::invalid_argument);
}

TEST(SweepSvo, DeterministicMetricsDocuments) {
  Scenario s = five_vehicle_preset();
  s.horizon = Horizon{0.0, 12.0, 0.1};
  s.solver.n_max = 25;
  const double phis[2] = {0.1, 0.9};
  const SweepResult a = sweep_svo(s, phis, 0.1, Window{2.0, 10.0});
  const SweepResult b = sweep_svo(s, phis, 0.1, Window{2.0, 10.0});
  EXPECT_EQ(sweep_json(a), sweep_json(b));
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      double value = 0.0;
      std::from_chars(line.data() + start, line.data() + end, value);
      row.push_back(value);
      start = end + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TEST(ExportTrajectories, HeaderRowCountAndRoundTrip) {
  Scenario s = five_vehicle_preset();
  s.horizon = Horizon{0.0, 10.0, 0.1};
  s.solver.n_max = 15;
  const SimResult result = run_scenario(s);

  std::ostringstream out;
  export_trajectories(result, out);
  const std::string text = out.str();

  std::string header;
  const std::vector<std::vector<double>> rows = parse_csv(text, &header);
  EXPECT_EQ(header, "t,x1,v1,a1,x2,v2,a2,u2,x3,v3,a3,x4,v4,a4,x5,v5,a5");
  ASSERT_EQ(rows.size(), s.horizon.nodes());
  ASSERT_EQ(rows[0].size(), 17u);

  // Bit-exact round trip through the shortest decimal representation.
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k][0], result.horizon.time_at(k));
    EXPECT_EQ(rows[k][1], result.vehicles[0].position[k]);
    EXPECT_EQ(rows[k][6], result.vehicles[1].accel[k]);
    EXPECT_EQ(rows[k][7], result.control[k]);
    EXPECT_EQ(rows[k][16], result.vehicles[4].accel[k]);
  }

  // Byte determinism.
  std::ostringstream again;
  export_trajectories(result, again);
  EXPECT_EQ(text, again.str());

  // LF line endings only.
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(MetricsJson, ContainsRequiredKeys) {
  Scenario s = five_vehicle_preset();
  s.horizon = Horizon{0.0, 10.0, 0.1};
  s.solver.n_max = 15;
  const SimResult result = run_scenario(s);
  const MetricsReport metrics = compute_metrics(result, Window{2.0, 8.0});
  const std::string doc = metrics_json(result, metrics);
  for (const char* key : {"abs_payoff_self", "avg_speed", "percent_change", "solver",
                          "iterations", "converged", "stop_reason"}) {
    EXPECT_NE(doc.find(key), std::string::npos) << key;
  }
  const SimResult base = run_baseline(s);
  const MetricsReport base_metrics = compute_metrics(base, Window{2.0, 8.0});
  const std::string base_doc = metrics_json(base, base_metrics);
  EXPECT_NE(base_doc.find("\"solver\": null"), std::string::npos);
}

}  // namespace
}  // namespace svoctl
