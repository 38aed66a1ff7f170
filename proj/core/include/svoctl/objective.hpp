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

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

#include "svoctl/car_following.hpp"

namespace svoctl {

/// Social value orientation angle in radians, restricted to the rational
/// range [0, pi/2]: 0 egoistic, pi/4 prosocial, pi/2 altruistic.
struct SvoAngle {
  double phi = 0.1;
};

/// How the follower's utility is scored.
enum class FollowerPayoff {
  DesiredSpeed,  // -integral 1/2 (v_f - v0)^2
  MaxSpeed,      // +integral 1/2 v_f^2 (sign-flipped when minimized)
  Smoothness,    // -integral 1/2 (v_f - v_self)^2
};

struct ObjectiveParams {
  SvoAngle phi{0.1};
  double lambda = 0.01;  // soft spacing-constraint weight (>= 0)
  double s_d = 10.0;     // desired spacing behind the predecessor (m)
  double v0 = 30.0;      // follower desired speed / speed limit (m/s)
  FollowerPayoff follower_payoff = FollowerPayoff::DesiredSpeed;
};

/// Uniform time grid [t0, tf] with step dt; (tf - t0)/dt must be integral.
struct Horizon {
  double t0 = 0.0;
  double tf = 120.0;
  double dt = 0.1;

  std::size_t steps() const;                 // number of intervals
  std::size_t nodes() const { return steps() + 1; }
  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

void validate(const SvoAngle& phi);
void validate(const ObjectiveParams& p);
void validate(const Horizon& h);

struct SvoWeights {
  double self;   // cos(phi)
  double other;  // sin(phi)
};

SvoWeights svo_weights(SvoAngle phi);

/// Optimization state y = [x_av, v_av, x_follower, v_follower].
struct OcpState {
  double av_pos = 0.0;
  double av_speed = 0.0;
  double follower_pos = 0.0;
  double follower_speed = 0.0;

  Eigen::Vector4d vec() const {
    return {av_pos, av_speed, follower_pos, follower_speed};
  }
  static OcpState from_vec(const Eigen::Vector4d& y) {
    return {y[0], y[1], y[2], y[3]};
  }
};

/// Predecessor sample seen by the AV at one instant.
struct ExoSample {
  double x_p = 0.0;  // predecessor position (m)
  double v_p = 0.0;  // predecessor speed (m/s)
  double l_p = 5.0;  // predecessor length (m)
};

/// Predecessor position/speed per grid node plus its constant length.
struct ExogenousTrajectory {
  std::vector<double> position;
  std::vector<double> speed;
  double length = 5.0;

  std::size_t nodes() const { return position.size(); }
  ExoSample at_node(std::size_t k) const {
    return {position[k], speed[k], length};
  }
  /// Linear interpolation at fraction `frac` in [0,1] of interval k.
  ExoSample interpolate(std::size_t k, double frac) const;
};

/// Eco-driving payoff to self: -integral of 1/2 accel^2 dt, trapezoidal.
double payoff_self(std::span<const double> accel, double dt);

/// Follower payoff per ObjectiveParams::follower_payoff, trapezoidal.
double payoff_follower(std::span<const double> follower_speed,
                       std::span<const double> self_speed,
                       const ObjectiveParams& params, double dt);

/// Running cost of the augmented objective, explicit in (y, u):
///   1/2 * [cos(phi)*(f_av + u)^2 + sin(phi)*F(y) + lambda*(s - s_d)^2]
/// with s = x_p - x_av - l_p and F the follower deviation term for the
/// selected payoff kind (negated for MaxSpeed).
double running_cost(const OcpState& y, double u, const ExoSample& exo,
                    const ObjectiveParams& params, const OvrvParams& ovrv);

/// Gradient of running_cost with respect to the state y.
Eigen::Vector4d running_cost_state_gradient(const OcpState& y, double u,
                                            const ExoSample& exo,
                                            const ObjectiveParams& params,
                                            const OvrvParams& ovrv);

/// Derivative of running_cost with respect to u: cos(phi)*(f_av + u).
double running_cost_control_derivative(const OcpState& y, double u,
                                       const ExoSample& exo,
                                       const ObjectiveParams& params,
                                       const OvrvParams& ovrv);

/// Trapezoidal quadrature of running_cost over the horizon. All trajectories
/// must share the horizon grid; throws std::invalid_argument otherwise.
double evaluate_objective(std::span<const OcpState> states,
                          std::span<const double> controls,
                          const ExogenousTrajectory& exo,
                          const ObjectiveParams& params, const OvrvParams& ovrv,
                          const Horizon& horizon);

}  // namespace svoctl
