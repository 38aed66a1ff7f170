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

#include "svoctl/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "svoctl/errors.hpp"

namespace svoctl {

namespace {

// Sinusoidal predecessor speed with a closed-form position, sampled exactly
// on the grid so the trajectory is smooth at every resolution.
ExogenousTrajectory sinusoidal_predecessor(const Horizon& horizon, double x0,
                                           double v_mean, double amplitude,
                                           double omega, double phase,
                                           double length) {
  ExogenousTrajectory exo;
  exo.length = length;
  const std::size_t n = horizon.nodes();
  exo.position.resize(n);
  exo.speed.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = horizon.time_at(k) - horizon.t0;
    exo.speed[k] = v_mean + amplitude * std::sin(omega * t + phase);
    exo.position[k] = x0 + v_mean * t -
                      (amplitude / omega) * (std::cos(omega * t + phase) - std::cos(phase));
  }
  return exo;
}

}  // namespace

GradcheckProblem random_gradcheck_problem(std::mt19937& rng) {
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  for (int attempt = 0; attempt < 64; ++attempt) {
    OcpProblem problem;
    problem.horizon = Horizon{0.0, 3.0, 0.01};
    problem.bounds = ControlBounds{-0.6, 0.6};
    problem.objective.phi = SvoAngle{uniform(0.0, std::numbers::pi / 2.0)};
    problem.objective.lambda = 0.01;
    problem.objective.s_d = 10.0;
    problem.objective.v0 = 30.0;

    const double v_mean = uniform(8.0, 25.0);
    const double amplitude = uniform(0.0, 2.0);
    const double omega = uniform(0.2, 1.0);
    const double phase = uniform(0.0, 2.0 * std::numbers::pi);

    const double av_speed = std::clamp(v_mean + uniform(-2.0, 2.0), 1.0, 28.0);
    const double follower_speed = std::clamp(av_speed + uniform(-2.0, 2.0), 1.0, 28.0);

    const double av_gap =
        ovrv_equilibrium_gap(problem.av_model, av_speed) * uniform(0.85, 1.25);
    const double follower_gap =
        idm_equilibrium_gap(problem.follower_model, follower_speed) * uniform(0.9, 1.3);

    problem.initial.av_pos = 0.0;
    problem.initial.av_speed = av_speed;
    problem.initial.follower_pos = -(follower_gap + problem.av_length);
    problem.initial.follower_speed = follower_speed;

    problem.exo = sinusoidal_predecessor(problem.horizon, av_gap + 5.0, v_mean,
                                         amplitude, omega, phase, 5.0);

    ControlGrid control;
    control.bounds = problem.bounds;
    control.values.resize(problem.horizon.nodes());
    for (double& u : control.values) {
      u = uniform(problem.bounds.u_min, problem.bounds.u_max);
    }

    try {
      forward_integrate(problem, control);
      return GradcheckProblem{std::move(problem), std::move(control)};
    } catch (const CollisionError&) {
      // Rare crash draw; sample again.
    }
  }
  throw std::runtime_error("random_gradcheck_problem: no feasible draw in 64 attempts");
}

double max_relative_error(std::span<const double> a, std::span<const double> b,
                          double floor) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("max_relative_error: length mismatch");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double scale = std::max({std::abs(a[k]), std::abs(b[k]), floor});
    worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  return worst;
}

GradcheckReport run_gradient_check(unsigned seed, int n_scenarios, double tolerance,
                                   double fd_step) {
  std::mt19937 rng(seed);
  GradcheckReport report;
  report.scenarios = n_scenarios;
  report.fd_step = fd_step;
  report.tolerance = tolerance;
  const double floor = 1e-6 / tolerance;  // keeps the 1e-6 absolute floor
  for (int i = 0; i < n_scenarios; ++i) {
    const GradcheckProblem sample = random_gradcheck_problem(rng);
    const std::vector<double> adjoint = adjoint_gradient(sample.problem, sample.control);
    const std::vector<double> fd =
        finite_difference_gradient(sample.problem, sample.control, fd_step);
    report.max_rel_error =
        std::max(report.max_rel_error, max_relative_error(adjoint, fd, floor));
  }
  report.pass = report.max_rel_error < tolerance;
  return report;
}

}  // namespace svoctl
