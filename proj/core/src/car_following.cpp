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

#include "svoctl/car_following.hpp"

#include <cmath>
#include <stdexcept>

#include "svoctl/errors.hpp"

namespace svoctl {

VehicleSpec make_human_driven(IdmParams params, double length) {
  return VehicleSpec{VehicleKind::HumanDriven, length, params};
}

VehicleSpec make_autonomous(OvrvParams params, double length) {
  return VehicleSpec{VehicleKind::Autonomous, length, params};
}

void validate(const IdmParams& p) {
  if (!(p.v0 > 0.0 && p.tau1 > 0.0 && p.s0 > 0.0 && p.a > 0.0 && p.b > 0.0)) {
    throw std::invalid_argument("IdmParams: all fields must be strictly positive");
  }
}

void validate(const OvrvParams& p) {
  if (!(p.k1 > 0.0 && p.k2 > 0.0 && p.tau2 > 0.0) || !(p.eta >= 0.0)) {
    throw std::invalid_argument(
        "OvrvParams: require k1 > 0, k2 > 0, eta >= 0, tau2 > 0");
  }
}

void validate(const VehicleSpec& spec) {
  if (!(spec.length > 0.0)) {
    throw std::invalid_argument("VehicleSpec: length must be positive");
  }
  const bool is_idm = std::holds_alternative<IdmParams>(spec.model);
  if (spec.kind == VehicleKind::HumanDriven && !is_idm) {
    throw std::invalid_argument("VehicleSpec: human-driven vehicle needs IdmParams");
  }
  if (spec.kind == VehicleKind::Autonomous && is_idm) {
    throw std::invalid_argument("VehicleSpec: autonomous vehicle needs OvrvParams");
  }
  if (is_idm) {
    validate(std::get<IdmParams>(spec.model));
  } else {
    validate(std::get<OvrvParams>(spec.model));
  }
}

void validate(const ControlBounds& b) {
  if (!(b.u_min <= 0.0 && 0.0 <= b.u_max)) {
    throw std::invalid_argument("ControlBounds: require u_min <= 0 <= u_max");
  }
}

double relative_speed(double leader_v, double follower_v) {
  return leader_v - follower_v;
}

double idm_desired_gap(const IdmParams& p, double v, double dv) {
  return p.s0 + p.tau1 * v - v * dv / (2.0 * std::sqrt(p.a * p.b));
}

double idm_accel(const IdmParams& p, double gap, double v, double dv) {
  if (!(gap > 0.0)) {
    throw CollisionError("idm_accel: non-positive gap");
  }
  const double speed_term = std::pow(v / p.v0, 4);
  const double spacing_ratio = idm_desired_gap(p, v, dv) / gap;
  return p.a * (1.0 - speed_term - spacing_ratio * spacing_ratio);
}

double ovrv_accel(const OvrvParams& p, double gap, double v, double leader_v) {
  return p.k1 * (gap - p.eta - p.tau2 * v) + p.k2 * (leader_v - v);
}

double idm_equilibrium_gap(const IdmParams& p, double v) {
  if (!(v >= 0.0) || v >= p.v0) {
    throw std::domain_error(
        "idm_equilibrium_gap: no finite equilibrium gap for v >= v0 or v < 0");
  }
  return idm_desired_gap(p, v, 0.0) / std::sqrt(1.0 - std::pow(v / p.v0, 4));
}

double ovrv_equilibrium_gap(const OvrvParams& p, double v) {
  return p.eta + p.tau2 * v;
}

IdmPartials idm_accel_partials(const IdmParams& p, double gap, double v, double dv) {
  if (!(gap > 0.0)) {
    throw CollisionError("idm_accel_partials: non-positive gap");
  }
  const double sqrt_ab = std::sqrt(p.a * p.b);
  const double s_star = idm_desired_gap(p, v, dv);
  const double gap2 = gap * gap;
  IdmPartials out;
  out.d_gap = 2.0 * p.a * s_star * s_star / (gap2 * gap);
  out.d_dv = p.a * s_star * v / (gap2 * sqrt_ab);
  out.d_v = -4.0 * p.a * v * v * v / std::pow(p.v0, 4) -
            (2.0 * p.a * s_star / gap2) * (p.tau1 - dv / (2.0 * sqrt_ab));
  return out;
}

}  // namespace svoctl
