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

#include "svoctl/scenario.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "svoctl/errors.hpp"

namespace svoctl {

double LeadProfile::speed_at(double t) const {
  if (samples.empty()) {
    throw std::invalid_argument("LeadProfile: no samples");
  }
  if (t <= samples.front().t) return samples.front().v;
  if (t >= samples.back().t) return samples.back().v;
  const auto it = std::upper_bound(
      samples.begin(), samples.end(), t,
      [](double value, const Sample& s) { return value < s.t; });
  const Sample& hi = *it;
  const Sample& lo = *std::prev(it);
  const double frac = (t - lo.t) / (hi.t - lo.t);
  return lo.v + frac * (hi.v - lo.v);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view field, std::size_t line, const char* what) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ProfileParseError(std::string("malformed ") + what + " value", line);
  }
  return value;
}

}  // namespace

LeadProfile load_lead_profile(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.empty()) {
    throw ProfileParseError("empty lead-profile input", 1);
  }
  if (trim(lines.front()) != "t,v") {
    throw ProfileParseError("expected header \"t,v\"", 1);
  }
  if (lines.size() < 2) {
    throw ProfileParseError("profile has no samples", 2);
  }

  LeadProfile profile;
  profile.samples.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view row = trim(lines[i]);
    const std::size_t comma = row.find(',');
    if (comma == std::string_view::npos ||
        row.find(',', comma + 1) != std::string_view::npos) {
      throw ProfileParseError("expected exactly two comma-separated fields", line_no);
    }
    const double t = parse_number(row.substr(0, comma), line_no, "time");
    const double v = parse_number(row.substr(comma + 1), line_no, "speed");
    if (!profile.samples.empty() && !(t > profile.samples.back().t)) {
      throw ProfileParseError("times must be strictly increasing", line_no);
    }
    if (!(v >= 0.0)) {
      throw ProfileParseError("speeds must be non-negative", line_no);
    }
    profile.samples.push_back({t, v});
  }
  return profile;
}

LeadProfile load_lead_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open lead profile: " + path.string());
  }
  return load_lead_profile(in);
}

LeadProfile synthetic_two_stop_profile() {
  // Cruise at 15 m/s with two near-stops, as at consecutive red signals. The
  // first slowdown sits inside the default [30, 60] s metrics window.
  return LeadProfile{{{0.0, 15.0},
                      {25.0, 15.0},
                      {35.0, 0.2},
                      {43.0, 0.2},
                      {58.0, 15.0},
                      {70.0, 15.0},
                      {80.0, 0.2},
                      {86.0, 0.2},
                      {101.0, 15.0},
                      {120.0, 15.0}}};
}

std::vector<double> resample_profile(const LeadProfile& profile, const Horizon& horizon) {
  validate(horizon);
  if (profile.samples.empty()) {
    throw std::invalid_argument("resample_profile: profile has no samples");
  }
  constexpr double kSpanSlack = 1e-9;
  if (horizon.t0 < profile.start_time() - kSpanSlack ||
      horizon.tf > profile.end_time() + kSpanSlack) {
    throw std::invalid_argument("resample_profile: horizon outside the profile span");
  }
  std::vector<double> speeds(horizon.nodes());
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    speeds[k] = profile.speed_at(horizon.time_at(k));
  }
  return speeds;
}

ExogenousTrajectory integrate_lead(std::span<const double> speeds, double x0,
                                   const Horizon& horizon, double lead_length) {
  if (speeds.size() != horizon.nodes()) {
    throw std::invalid_argument("integrate_lead: speeds off the horizon grid");
  }
  ExogenousTrajectory out;
  out.length = lead_length;
  out.speed.assign(speeds.begin(), speeds.end());
  out.position.resize(speeds.size());
  double x = x0;
  out.position[0] = x;
  for (std::size_t k = 0; k + 1 < speeds.size(); ++k) {
    x += 0.5 * horizon.dt * (speeds[k] + speeds[k + 1]);
    out.position[k + 1] = x;
  }
  return out;
}

std::size_t av_index(const Scenario& scenario) {
  std::size_t index = scenario.platoon.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < scenario.platoon.size(); ++i) {
    if (scenario.platoon[i].kind == VehicleKind::Autonomous) {
      index = i;
      ++count;
    }
  }
  if (count != 1) {
    throw std::invalid_argument("Scenario: platoon must contain exactly one AV");
  }
  return index;
}

void validate(const Scenario& scenario) {
  if (scenario.platoon.size() < 3) {
    throw std::invalid_argument("Scenario: platoon needs at least 3 vehicles");
  }
  for (const VehicleSpec& spec : scenario.platoon) {
    validate(spec);
  }
  const std::size_t av = av_index(scenario);
  if (av == 0) {
    throw std::invalid_argument("Scenario: the AV must not lead the platoon");
  }
  if (av + 1 >= scenario.platoon.size() ||
      scenario.platoon[av + 1].kind != VehicleKind::HumanDriven) {
    throw std::invalid_argument(
        "Scenario: the AV must be immediately followed by a human-driven vehicle");
  }
  validate(scenario.horizon);
  validate(scenario.objective);
  validate(scenario.bounds);
  validate(scenario.solver);
  if (scenario.lead.samples.empty()) {
    throw std::invalid_argument("Scenario: lead profile is empty");
  }
  if (scenario.initial_gaps &&
      scenario.initial_gaps->size() != scenario.platoon.size() - 1) {
    throw std::invalid_argument("Scenario: initial_gaps must have one entry per follower");
  }
  if (scenario.initial_gaps) {
    for (double gap : *scenario.initial_gaps) {
      if (!(gap > 0.0)) {
        throw std::invalid_argument("Scenario: initial gaps must be positive");
      }
    }
  }
  if (scenario.initial_speed && !(*scenario.initial_speed >= 0.0)) {
    throw std::invalid_argument("Scenario: initial speed must be non-negative");
  }
}

std::vector<VehicleState> init_platoon(const Scenario& scenario) {
  validate(scenario);
  const double lead_speed = scenario.lead.speed_at(scenario.horizon.t0);
  const double follower_speed = scenario.initial_speed.value_or(lead_speed);

  std::vector<VehicleState> states(scenario.platoon.size());
  states[0] = {0.0, lead_speed};
  for (std::size_t i = 1; i < scenario.platoon.size(); ++i) {
    const VehicleSpec& spec = scenario.platoon[i];
    double gap;
    if (scenario.initial_gaps) {
      gap = (*scenario.initial_gaps)[i - 1];
    } else if (spec.kind == VehicleKind::HumanDriven) {
      gap = idm_equilibrium_gap(std::get<IdmParams>(spec.model), follower_speed);
    } else {
      gap = ovrv_equilibrium_gap(std::get<OvrvParams>(spec.model), follower_speed);
    }
    states[i].x = states[i - 1].x - scenario.platoon[i - 1].length - gap;
    states[i].v = follower_speed;
  }
  return states;
}

namespace {

struct FollowerChain {
  std::span<const VehicleSpec> platoon;
  const ExogenousTrajectory* lead;
};

// Derivative [dx, dv] per follower at one RK4 stage.
void chain_derivative(const FollowerChain& chain, std::span<const double> z,
                      const ExoSample& exo, double u, std::span<double> dz) {
  const std::size_t m = z.size() / 2;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t p = i + 1;  // platoon index
    const double x = z[2 * i];
    const double v = z[2 * i + 1];
    double leader_x, leader_v, leader_len;
    if (i == 0) {
      leader_x = exo.x_p;
      leader_v = exo.v_p;
      leader_len = exo.l_p;
    } else {
      leader_x = z[2 * (i - 1)];
      leader_v = z[2 * (i - 1) + 1];
      leader_len = chain.platoon[p - 1].length;
    }
    const double gap = leader_x - x - leader_len;
    double accel;
    if (chain.platoon[p].kind == VehicleKind::Autonomous) {
      accel = ovrv_accel(std::get<OvrvParams>(chain.platoon[p].model), gap, v, leader_v) + u;
    } else {
      accel = idm_accel(std::get<IdmParams>(chain.platoon[p].model), gap, v,
                        relative_speed(leader_v, v));
    }
    dz[2 * i] = v;
    dz[2 * i + 1] = accel;
  }
}

std::vector<double> chain_rk4_step(const FollowerChain& chain,
                                   std::span<const double> z, std::size_t k,
                                   double dt, double u) {
  const std::size_t dim = z.size();
  std::vector<double> s1(dim), s2(dim), s3(dim), s4(dim), stage(dim), next(dim);

  const ExoSample exo0 = chain.lead->at_node(k);
  const ExoSample exo_half = chain.lead->interpolate(k, 0.5);
  const ExoSample exo1 = chain.lead->at_node(k + 1);

  chain_derivative(chain, z, exo0, u, s1);
  for (std::size_t i = 0; i < dim; ++i) stage[i] = z[i] + 0.5 * dt * s1[i];
  chain_derivative(chain, stage, exo_half, u, s2);
  for (std::size_t i = 0; i < dim; ++i) stage[i] = z[i] + 0.5 * dt * s2[i];
  chain_derivative(chain, stage, exo_half, u, s3);
  for (std::size_t i = 0; i < dim; ++i) stage[i] = z[i] + dt * s3[i];
  chain_derivative(chain, stage, exo1, u, s4);

  for (std::size_t i = 0; i < dim; ++i) {
    next[i] = z[i] + (dt / 6.0) * (s1[i] + 2.0 * s2[i] + 2.0 * s3[i] + s4[i]);
  }
  for (std::size_t i = 1; i < dim; i += 2) {
    next[i] = std::max(next[i], 0.0);
  }
  return next;
}

double recorded_accel(const FollowerChain& chain, std::span<const double> z,
                      std::size_t i, const ExoSample& exo, double u) {
  const std::size_t p = i + 1;
  const double x = z[2 * i];
  const double v = z[2 * i + 1];
  double leader_x, leader_v, leader_len;
  if (i == 0) {
    leader_x = exo.x_p;
    leader_v = exo.v_p;
    leader_len = exo.l_p;
  } else {
    leader_x = z[2 * (i - 1)];
    leader_v = z[2 * (i - 1) + 1];
    leader_len = chain.platoon[p - 1].length;
  }
  const double gap = leader_x - x - leader_len;
  double accel;
  if (chain.platoon[p].kind == VehicleKind::Autonomous) {
    accel = ovrv_accel(std::get<OvrvParams>(chain.platoon[p].model), gap, v, leader_v) + u;
  } else {
    accel = idm_accel(std::get<IdmParams>(chain.platoon[p].model), gap, v,
                      relative_speed(leader_v, v));
  }
  // While pinned at standstill a further deceleration is not executed.
  if (v <= 0.0 && accel < 0.0) {
    accel = 0.0;
  }
  return accel;
}

}  // namespace

std::vector<VehicleState> platoon_step(std::span<const VehicleSpec> platoon,
                                       std::span<const VehicleState> followers,
                                       const ExogenousTrajectory& lead,
                                       std::size_t k, double dt, double u) {
  if (followers.size() + 1 != platoon.size()) {
    throw std::invalid_argument("platoon_step: follower count must be platoon size - 1");
  }
  FollowerChain chain{platoon, &lead};
  std::vector<double> z(2 * followers.size());
  for (std::size_t i = 0; i < followers.size(); ++i) {
    z[2 * i] = followers[i].x;
    z[2 * i + 1] = followers[i].v;
  }
  const std::vector<double> next = chain_rk4_step(chain, z, k, dt, u);
  std::vector<VehicleState> out(followers.size());
  for (std::size_t i = 0; i < followers.size(); ++i) {
    out[i] = {next[2 * i], next[2 * i + 1]};
  }
  return out;
}

namespace {

// Integrates followers 1..count over the horizon and records the series.
// `control` is the AV's additive input, ignored when the chain has no AV.
std::vector<VehicleSeries> simulate_chain(std::span<const VehicleSpec> platoon,
                                          std::span<const VehicleState> initial,
                                          const ExogenousTrajectory& lead,
                                          const Horizon& horizon,
                                          std::span<const double> control) {
  const std::size_t m = platoon.size() - 1;  // followers
  const std::size_t n_nodes = horizon.nodes();
  FollowerChain chain{platoon, &lead};

  std::vector<VehicleSeries> series(m);
  for (VehicleSeries& s : series) {
    s.position.reserve(n_nodes);
    s.speed.reserve(n_nodes);
    s.accel.reserve(n_nodes);
  }

  std::vector<double> z(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    z[2 * i] = initial[i + 1].x;
    z[2 * i + 1] = initial[i + 1].v;
  }

  auto check_gaps_and_record = [&](std::size_t k) {
    const ExoSample exo = lead.at_node(k);
    const double t = horizon.time_at(k);
    for (std::size_t i = 0; i < m; ++i) {
      const double leader_x = (i == 0) ? exo.x_p : z[2 * (i - 1)];
      const double leader_len = (i == 0) ? exo.l_p : platoon[i].length;
      const double gap = leader_x - z[2 * i] - leader_len;
      if (!(gap > 0.0)) {
        throw CollisionError("vehicle reached its leader", t, static_cast<int>(i + 2));
      }
      const bool is_av = platoon[i + 1].kind == VehicleKind::Autonomous;
      const double u = (is_av && !control.empty()) ? control[k] : 0.0;
      series[i].position.push_back(z[2 * i]);
      series[i].speed.push_back(z[2 * i + 1]);
      series[i].accel.push_back(recorded_accel(chain, z, i, exo, u));
    }
  };

  check_gaps_and_record(0);
  for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
    const double u = control.empty() ? 0.0 : control[k];
    try {
      z = chain_rk4_step(chain, z, k, horizon.dt, u);
    } catch (const CollisionError&) {
      throw CollisionError("collision during integration step", horizon.time_at(k));
    }
    check_gaps_and_record(k + 1);
  }
  return series;
}

std::vector<double> lead_accel_series(std::span<const double> speeds, double dt) {
  std::vector<double> accel(speeds.size());
  if (speeds.size() < 2) {
    return accel;
  }
  accel.front() = (speeds[1] - speeds[0]) / dt;
  accel.back() = (speeds[speeds.size() - 1] - speeds[speeds.size() - 2]) / dt;
  for (std::size_t k = 1; k + 1 < speeds.size(); ++k) {
    accel[k] = (speeds[k + 1] - speeds[k - 1]) / (2.0 * dt);
  }
  return accel;
}

}  // namespace

SimResult simulate_platoon(const Scenario& scenario, std::span<const double> control) {
  validate(scenario);
  const Horizon& horizon = scenario.horizon;
  if (control.size() != horizon.nodes()) {
    throw std::invalid_argument("simulate_platoon: control series off the horizon grid");
  }
  const std::size_t av = av_index(scenario);

  const std::vector<double> speeds = resample_profile(scenario.lead, horizon);
  const ExogenousTrajectory lead =
      integrate_lead(speeds, 0.0, horizon, scenario.platoon.front().length);
  const std::vector<VehicleState> initial = init_platoon(scenario);

  SimResult result;
  result.horizon = horizon;
  result.av_index = av;
  result.control.assign(control.begin(), control.end());
  result.baseline = false;
  for (const VehicleSpec& spec : scenario.platoon) {
    result.vehicle_lengths.push_back(spec.length);
  }

  VehicleSeries lead_series;
  lead_series.position = lead.position;
  lead_series.speed = lead.speed;
  lead_series.accel = lead_accel_series(lead.speed, horizon.dt);
  result.vehicles.push_back(std::move(lead_series));

  std::vector<VehicleSeries> followers =
      simulate_chain(scenario.platoon, initial, lead, horizon, control);
  for (VehicleSeries& s : followers) {
    result.vehicles.push_back(std::move(s));
  }
  return result;
}

OcpProblem build_ocp(const Scenario& scenario) {
  validate(scenario);
  const Horizon& horizon = scenario.horizon;
  const std::size_t av = av_index(scenario);

  const std::vector<double> speeds = resample_profile(scenario.lead, horizon);
  const ExogenousTrajectory lead =
      integrate_lead(speeds, 0.0, horizon, scenario.platoon.front().length);
  const std::vector<VehicleState> initial = init_platoon(scenario);

  ExogenousTrajectory predecessor;
  if (av == 1) {
    predecessor = lead;
  } else {
    // Human-driven vehicles between the lead and the AV do not react to the
    // AV, so their trajectories are fixed and can be simulated up front.
    std::span<const VehicleSpec> prefix(scenario.platoon.data(), av);
    const std::vector<VehicleSeries> chain =
        simulate_chain(prefix, std::span(initial.data(), av), lead, horizon, {});
    predecessor.position = chain.back().position;
    predecessor.speed = chain.back().speed;
    predecessor.length = scenario.platoon[av - 1].length;
  }

  OcpProblem problem;
  problem.initial = {initial[av].x, initial[av].v, initial[av + 1].x, initial[av + 1].v};
  problem.exo = std::move(predecessor);
  problem.objective = scenario.objective;
  problem.av_model = std::get<OvrvParams>(scenario.platoon[av].model);
  problem.follower_model = std::get<IdmParams>(scenario.platoon[av + 1].model);
  problem.av_length = scenario.platoon[av].length;
  problem.bounds = scenario.bounds;
  problem.horizon = horizon;
  return problem;
}

SimResult run_scenario(const Scenario& scenario) {
  const OcpProblem problem = build_ocp(scenario);
  const SolveResult sol = solve(problem, scenario.solver);
  SimResult result = simulate_platoon(scenario, sol.control.values);
  result.report = sol.report;
  return result;
}

SimResult run_baseline(const Scenario& scenario) {
  validate(scenario);
  const std::vector<double> zeros(scenario.horizon.nodes(), 0.0);
  SimResult result = simulate_platoon(scenario, zeros);
  result.baseline = true;
  return result;
}

Scenario five_vehicle_preset() {
  Scenario scenario;
  scenario.platoon = {make_human_driven(), make_autonomous(), make_human_driven(),
                      make_human_driven(), make_human_driven()};
  scenario.lead = synthetic_two_stop_profile();
  scenario.horizon = Horizon{0.0, 120.0, 0.1};
  scenario.objective = ObjectiveParams{};
  scenario.bounds = ControlBounds{-0.6, 0.6};
  scenario.solver = SolverConfig{};
  return scenario;
}

}  // namespace svoctl
