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

#include <variant>

namespace svoctl {

/// Intelligent driver model parameters. Defaults are the standard freeway
/// calibration used throughout the built-in presets.
struct IdmParams {
  double v0 = 30.0;   // desired speed (m/s)
  double tau1 = 1.5;  // desired time headway (s)
  double s0 = 2.0;    // minimum spacing (m)
  double a = 1.0;     // maximum acceleration (m/s^2)
  double b = 1.5;     // comfortable deceleration (m/s^2)
};

/// Optimal-velocity-with-relative-velocity (ACC style) parameters.
struct OvrvParams {
  double k1 = 0.1;    // gain on the gap term (1/s^2)
  double k2 = 0.6;    // gain on relative speed (1/s)
  double eta = 21.51; // jam distance, inter-vehicle spacing at rest (m)
  double tau2 = 1.71; // desired time gap (s)
};

/// Position/speed of one vehicle at one instant.
struct VehicleState {
  double x = 0.0;  // position (m)
  double v = 0.0;  // speed (m/s)
};

enum class VehicleKind { HumanDriven, Autonomous };

/// One platoon entry: who drives it, how long it is, and its model.
struct VehicleSpec {
  VehicleKind kind = VehicleKind::HumanDriven;
  double length = 5.0;  // vehicle length (m)
  std::variant<IdmParams, OvrvParams> model = IdmParams{};
};

VehicleSpec make_human_driven(IdmParams params = {}, double length = 5.0);
VehicleSpec make_autonomous(OvrvParams params = {}, double length = 5.0);

/// Box constraint on the additive acceleration input. Zero must be feasible.
struct ControlBounds {
  double u_min = -0.6;  // m/s^2
  double u_max = 0.6;   // m/s^2
};

void validate(const IdmParams& p);
void validate(const OvrvParams& p);
void validate(const VehicleSpec& spec);
void validate(const ControlBounds& b);

/// v_leader - v_follower.
double relative_speed(double leader_v, double follower_v);

/// Desired gap s*(v, dv) = s0 + tau1*v - v*dv / (2*sqrt(a*b)), with
/// dv = v_leader - v_follower. Evaluated as written, including negative
/// values under strong closing from behind.
double idm_desired_gap(const IdmParams& p, double v, double dv);

/// IDM acceleration a*[1 - (v/v0)^4 - (s*/gap)^2]. Throws CollisionError for
/// gap <= 0.
double idm_accel(const IdmParams& p, double gap, double v, double dv);

/// OVRV acceleration k1*(gap - eta - tau2*v) + k2*(leader_v - v).
double ovrv_accel(const OvrvParams& p, double gap, double v, double leader_v);

/// Gap at which idm_accel vanishes for matched speeds:
/// s*(v,0) / sqrt(1 - (v/v0)^4). Throws std::domain_error for v >= v0.
double idm_equilibrium_gap(const IdmParams& p, double v);

/// Gap at which ovrv_accel vanishes for matched speeds: eta + tau2*v.
double ovrv_equilibrium_gap(const OvrvParams& p, double v);

/// Partial derivatives of idm_accel with respect to (gap, dv, v), used by the
/// adjoint system.
struct IdmPartials {
  double d_gap;  // df/ds   = 2*a*s*^2 / s^3
  double d_dv;   // df/d(dv) = a*s**v / (s^2*sqrt(a*b))
  double d_v;    // df/dv   = -4*a*v^3/v0^4 - (2*a*s*/s^2)*(tau1 - dv/(2*sqrt(a*b)))
};

IdmPartials idm_accel_partials(const IdmParams& p, double gap, double v, double dv);

}  // namespace svoctl
