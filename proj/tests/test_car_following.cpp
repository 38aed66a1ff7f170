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
#include <random>

#include <gtest/gtest.h>

#include "svoctl/errors.hpp"

namespace svoctl {
namespace {

TEST(RelativeSpeed, DirectSubtraction) {
  EXPECT_EQ(relative_speed(10.0, 10.0), 0.0);
  EXPECT_EQ(relative_speed(12.0, 10.0), 2.0);
  EXPECT_EQ(relative_speed(10.0, 12.0), -2.0);
}

TEST(RelativeSpeed, AntisymmetryExact) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> speed(0.0, 35.0);
  for (int i = 0; i < 200; ++i) {
    const double a = speed(rng), b = speed(rng);
    EXPECT_EQ(relative_speed(a, b), -relative_speed(b, a));
  }
}

TEST(IdmDesiredGap, ReducesToMinimumSpacingAtRest) {
  IdmParams p;
  EXPECT_DOUBLE_EQ(idm_desired_gap(p, 0.0, 0.0), 2.0);
}

TEST(IdmDesiredGap, DefaultParamsAtCruise) {
  IdmParams p;
  EXPECT_NEAR(idm_desired_gap(p, 30.0, 0.0), 47.0, 1e-12);
}

TEST(IdmDesiredGap, ClosingSpeedTerm) {
  IdmParams p;
  p.a = 1.0;
  p.b = 1.5;
  // 2 + 15 - 20 / (2*sqrt(1.5))
  EXPECT_NEAR(idm_desired_gap(p, 10.0, 2.0), 8.8350, 1e-4);
}

TEST(IdmAccel, StationaryAtMinimumSpacing) {
  IdmParams p;
  EXPECT_NEAR(idm_accel(p, p.s0, 0.0, 0.0), 0.0, 1e-15);
}

TEST(IdmAccel, AtDesiredSpeed) {
  IdmParams p;
  EXPECT_NEAR(idm_accel(p, 470.0, 30.0, 0.0), -0.01, 1e-12);
}

TEST(IdmAccel, CollisionStateRaises) {
  IdmParams p;
  EXPECT_THROW(idm_accel(p, 0.0, 10.0, 0.0), CollisionError);
  EXPECT_THROW(idm_accel(p, -3.0, 10.0, 0.0), CollisionError);
}

TEST(IdmAccel, DefaultsMatchStandardCalibration) {
  IdmParams p;
  EXPECT_EQ(p.v0, 30.0);
  EXPECT_EQ(p.tau1, 1.5);
  EXPECT_EQ(p.s0, 2.0);
  EXPECT_EQ(p.a, 1.0);
  EXPECT_EQ(p.b, 1.5);
  EXPECT_EQ(VehicleSpec{}.length, 5.0);
}

TEST(IdmAccel, StrictlyIncreasingInGapForPositiveDesiredGap) {
  IdmParams p;
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> speed(0.5, 28.0);
  std::uniform_real_distribution<double> dv(-3.0, 3.0);
  std::uniform_real_distribution<double> gap(3.0, 120.0);
  for (int i = 0; i < 300; ++i) {
    const double v = speed(rng), d = dv(rng), s = gap(rng);
    if (idm_desired_gap(p, v, d) <= 0.0) continue;
    const double h = 1e-4;
    const double slope = (idm_accel(p, s + h, v, d) - idm_accel(p, s - h, v, d)) / (2 * h);
    EXPECT_GT(slope, 0.0) << "gap " << s << " v " << v << " dv " << d;
  }
}

TEST(OvrvAccel, EquilibriumFixedPoint) {
  OvrvParams p;
  const double v = 13.0;
  EXPECT_DOUBLE_EQ(ovrv_accel(p, p.eta + p.tau2 * v, v, v), 0.0);
}

TEST(OvrvAccel, HandComputedValue) {
  OvrvParams p;
  // 0.1*(40 - 21.51 - 17.1) + 0.6*2
  EXPECT_NEAR(ovrv_accel(p, 40.0, 10.0, 12.0), 1.339, 1e-12);
}

TEST(OvrvAccel, DefaultsMatchStandardCalibration) {
  OvrvParams p;
  EXPECT_EQ(p.k1, 0.1);
  EXPECT_EQ(p.k2, 0.6);
  EXPECT_EQ(p.eta, 21.51);
  EXPECT_EQ(p.tau2, 1.71);
}

TEST(OvrvAccel, AffineInAllArguments) {
  OvrvParams p;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-50.0, 150.0);
  for (int i = 0; i < 300; ++i) {
    const double gap = u(rng), v = std::abs(u(rng)) / 5.0, lv = std::abs(u(rng)) / 5.0;
    const double expected =
        p.k1 * gap + (-p.k1 * p.tau2 - p.k2) * v + p.k2 * lv - p.k1 * p.eta;
    EXPECT_NEAR(ovrv_accel(p, gap, v, lv), expected, 1e-12);
  }
}

TEST(IdmEquilibriumGap, RestEqualsMinimumSpacing) {
  IdmParams p;
  EXPECT_DOUBLE_EQ(idm_equilibrium_gap(p, 0.0), 2.0);
}

TEST(IdmEquilibriumGap, MidSpeedClosedForm) {
  IdmParams p;
  // 24.5 / sqrt(1 - 0.5^4)
  EXPECT_NEAR(idm_equilibrium_gap(p, 15.0), 24.5 / std::sqrt(0.9375), 1e-12);
  EXPECT_NEAR(idm_equilibrium_gap(p, 15.0), 25.3035, 1e-3);
}

TEST(IdmEquilibriumGap, RootOfAcceleration) {
  IdmParams p;
  for (double v = 0.0; v < 0.995 * p.v0; v += 0.9) {
    const double gap = idm_equilibrium_gap(p, v);
    EXPECT_NEAR(idm_accel(p, gap, v, 0.0), 0.0, 1e-12) << "v " << v;
  }
  const double near_limit = idm_equilibrium_gap(p, 29.9);
  EXPECT_GT(near_limit, 300.0);
  EXPECT_NEAR(idm_accel(p, near_limit, 29.9, 0.0), 0.0, 1e-9);
}

TEST(IdmEquilibriumGap, NoEquilibriumAtOrAboveDesiredSpeed) {
  IdmParams p;
  EXPECT_THROW(idm_equilibrium_gap(p, 30.0), std::domain_error);
  EXPECT_THROW(idm_equilibrium_gap(p, 31.0), std::domain_error);
}

TEST(OvrvEquilibriumGap, ClosedForm) {
  OvrvParams p;
  EXPECT_DOUBLE_EQ(ovrv_equilibrium_gap(p, 0.0), 21.51);
  EXPECT_NEAR(ovrv_equilibrium_gap(p, 15.0), 47.16, 1e-12);
  EXPECT_DOUBLE_EQ(ovrv_accel(p, ovrv_equilibrium_gap(p, 15.0), 15.0, 15.0), 0.0);
}

TEST(IdmPartials, MatchFiniteDifferences) {
  IdmParams p;
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> speed(0.5, 28.0);
  std::uniform_real_distribution<double> dvd(-4.0, 4.0);
  std::uniform_real_distribution<double> gapd(4.0, 120.0);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double v = speed(rng), dv = dvd(rng), gap = gapd(rng);
    const IdmPartials out = idm_accel_partials(p, gap, v, dv);
    const double fd_gap =
        (idm_accel(p, gap + h, v, dv) - idm_accel(p, gap - h, v, dv)) / (2 * h);
    const double fd_dv =
        (idm_accel(p, gap, v, dv + h) - idm_accel(p, gap, v, dv - h)) / (2 * h);
    const double fd_v =
        (idm_accel(p, gap, v + h, dv) - idm_accel(p, gap, v - h, dv)) / (2 * h);
    EXPECT_NEAR(out.d_gap, fd_gap, 1e-5 * std::max(1.0, std::abs(fd_gap)));
    EXPECT_NEAR(out.d_dv, fd_dv, 1e-5 * std::max(1.0, std::abs(fd_dv)));
    EXPECT_NEAR(out.d_v, fd_v, 1e-5 * std::max(1.0, std::abs(fd_v)));
  }
}

TEST(Validation, RejectsBadParams) {
  IdmParams idm;
  idm.a = 0.0;
  EXPECT_THROW(validate(idm), std::invalid_argument);
  OvrvParams ovrv;
  ovrv.k1 = -0.1;
  EXPECT_THROW(validate(ovrv), std::invalid_argument);
  ControlBounds bounds{0.1, 0.6};
  EXPECT_THROW(validate(bounds), std::invalid_argument);
  VehicleSpec mismatched{VehicleKind::Autonomous, 5.0, IdmParams{}};
  EXPECT_THROW(validate(mismatched), std::invalid_argument);
  EXPECT_NO_THROW(validate(make_autonomous()));
  EXPECT_NO_THROW(validate(make_human_driven()));
}

}  // namespace
}  // namespace svoctl
