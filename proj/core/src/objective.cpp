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

#include "svoctl/objective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svoctl {

namespace {

// Trapezoidal integral of 1/2 * w(k)^2 over the grid.
double half_square_trapezoid(std::span<const double> values, double dt,
                             auto&& transform) {
  if (values.size() < 2) {
    throw std::invalid_argument("trajectory needs at least two grid nodes");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double d = transform(k);
    const double weight = (k == 0 || k + 1 == values.size()) ? 0.5 : 1.0;
    sum += weight * 0.5 * d * d;
  }
  return sum * dt;
}

}  // namespace

std::size_t Horizon::steps() const {
  return static_cast<std::size_t>(std::llround((tf - t0) / dt));
}

void validate(const SvoAngle& phi) {
  if (!(phi.phi >= 0.0 && phi.phi <= std::numbers::pi / 2.0)) {
    throw std::invalid_argument("SvoAngle: phi must lie in [0, pi/2]");
  }
}

void validate(const ObjectiveParams& p) {
  validate(p.phi);
  if (!(p.lambda >= 0.0)) {
    throw std::invalid_argument("ObjectiveParams: lambda must be >= 0");
  }
  if (!(p.s_d > 0.0)) {
    throw std::invalid_argument("ObjectiveParams: s_d must be positive");
  }
  if (!(p.v0 > 0.0)) {
    throw std::invalid_argument("ObjectiveParams: v0 must be positive");
  }
}

void validate(const Horizon& h) {
  if (!(h.tf > h.t0)) {
    throw std::invalid_argument("Horizon: tf must exceed t0");
  }
  if (!(h.dt > 0.0)) {
    throw std::invalid_argument("Horizon: dt must be positive");
  }
  const double raw_steps = (h.tf - h.t0) / h.dt;
  if (std::abs(raw_steps - std::llround(raw_steps)) > 1e-9 * raw_steps + 1e-9) {
    throw std::invalid_argument("Horizon: (tf - t0)/dt must be a whole number of steps");
  }
}

SvoWeights svo_weights(SvoAngle phi) {
  return {std::cos(phi.phi), std::sin(phi.phi)};
}

ExoSample ExogenousTrajectory::interpolate(std::size_t k, double frac) const {
  if (frac == 0.0 || k + 1 >= nodes()) {
    return at_node(k);
  }
  return {position[k] + frac * (position[k + 1] - position[k]),
          speed[k] + frac * (speed[k + 1] - speed[k]), length};
}

double payoff_self(std::span<const double> accel, double dt) {
  return -half_square_trapezoid(accel, dt, [&](std::size_t k) { return accel[k]; });
}

double payoff_follower(std::span<const double> follower_speed,
                       std::span<const double> self_speed,
                       const ObjectiveParams& params, double dt) {
  if (follower_speed.size() != self_speed.size()) {
    throw std::invalid_argument("payoff_follower: grid-length mismatch");
  }
  switch (params.follower_payoff) {
    case FollowerPayoff::DesiredSpeed:
      return -half_square_trapezoid(follower_speed, dt, [&](std::size_t k) {
        return follower_speed[k] - params.v0;
      });
    case FollowerPayoff::MaxSpeed:
      return half_square_trapezoid(follower_speed, dt,
                                   [&](std::size_t k) { return follower_speed[k]; });
    case FollowerPayoff::Smoothness:
      return -half_square_trapezoid(follower_speed, dt, [&](std::size_t k) {
        return follower_speed[k] - self_speed[k];
      });
  }
  throw std::logic_error("payoff_follower: unknown payoff kind");
}

namespace {

// Follower deviation term F(y) of the running cost and its nonzero partials.
// MaxSpeed enters negated: minimizing J flips the sign of a payoff that is
// defined with a positive integral.
struct FollowerTerm {
  double value;
  double d_follower_speed;
  double d_av_speed;
};

FollowerTerm follower_term(const OcpState& y, const ObjectiveParams& params) {
  switch (params.follower_payoff) {
    case FollowerPayoff::DesiredSpeed: {
      const double d = y.follower_speed - params.v0;
      return {d * d, 2.0 * d, 0.0};
    }
    case FollowerPayoff::MaxSpeed: {
      const double v = y.follower_speed;
      return {-v * v, -2.0 * v, 0.0};
    }
    case FollowerPayoff::Smoothness: {
      const double d = y.follower_speed - y.av_speed;
      return {d * d, 2.0 * d, -2.0 * d};
    }
  }
  throw std::logic_error("follower_term: unknown payoff kind");
}

}  // namespace

double running_cost(const OcpState& y, double u, const ExoSample& exo,
                    const ObjectiveParams& params, const OvrvParams& ovrv) {
  const SvoWeights w = svo_weights(params.phi);
  const double gap = exo.x_p - y.av_pos - exo.l_p;
  const double av_accel = ovrv_accel(ovrv, gap, y.av_speed, exo.v_p) + u;
  const double spacing_dev = gap - params.s_d;
  return 0.5 * (w.self * av_accel * av_accel + w.other * follower_term(y, params).value +
                params.lambda * spacing_dev * spacing_dev);
}

Eigen::Vector4d running_cost_state_gradient(const OcpState& y, double u,
                                            const ExoSample& exo,
                                            const ObjectiveParams& params,
                                            const OvrvParams& ovrv) {
  const SvoWeights w = svo_weights(params.phi);
  const double gap = exo.x_p - y.av_pos - exo.l_p;
  const double av_accel = ovrv_accel(ovrv, gap, y.av_speed, exo.v_p) + u;
  const double spacing_dev = gap - params.s_d;
  const FollowerTerm f = follower_term(y, params);

  Eigen::Vector4d grad;
  // d(av_accel)/d(av_pos) = -k1, d(av_accel)/d(av_speed) = -k1*tau2 - k2,
  // d(gap)/d(av_pos) = -1.
  grad[0] = w.self * av_accel * (-ovrv.k1) - params.lambda * spacing_dev;
  grad[1] = w.self * av_accel * (-ovrv.k1 * ovrv.tau2 - ovrv.k2) +
            0.5 * w.other * f.d_av_speed;
  grad[2] = 0.0;
  grad[3] = 0.5 * w.other * f.d_follower_speed;
  return grad;
}

double running_cost_control_derivative(const OcpState& y, double u,
                                       const ExoSample& exo,
                                       const ObjectiveParams& params,
                                       const OvrvParams& ovrv) {
  const double gap = exo.x_p - y.av_pos - exo.l_p;
  const double av_accel = ovrv_accel(ovrv, gap, y.av_speed, exo.v_p) + u;
  return svo_weights(params.phi).self * av_accel;
}

double evaluate_objective(std::span<const OcpState> states,
                          std::span<const double> controls,
                          const ExogenousTrajectory& exo,
                          const ObjectiveParams& params, const OvrvParams& ovrv,
                          const Horizon& horizon) {
  const std::size_t n = horizon.nodes();
  if (states.size() != n || controls.size() != n || exo.nodes() != n) {
    throw std::invalid_argument("evaluate_objective: grid-length mismatch");
  }
  // Per-interval trapezoid. The control is piecewise constant, so the right
  // endpoint of each interval is evaluated with the interval's own control;
  // the final node value never enters the integral.
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double u = controls[k];
    sum += 0.5 * (running_cost(states[k], u, exo.at_node(k), params, ovrv) +
                  running_cost(states[k + 1], u, exo.at_node(k + 1), params, ovrv));
  }
  return sum * horizon.dt;
}

}  // namespace svoctl
