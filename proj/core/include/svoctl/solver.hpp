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
#include <string>
#include <vector>

#include "svoctl/objective.hpp"

namespace svoctl {

/// Piecewise-constant additive control on the horizon grid: values[k] acts on
/// [t_k, t_{k+1}); the final node value enters the terminal quadrature node.
struct ControlGrid {
  std::vector<double> values;
  ControlBounds bounds;
};

/// Componentwise clamp of a raw control grid into [u_min, u_max].
ControlGrid project_control(std::vector<double> values, const ControlBounds& bounds);

bool is_feasible(const ControlGrid& u);

/// Costate psi = [psi1..psi4] per grid node; the terminal node is zero.
struct AdjointTrajectory {
  std::vector<Eigen::Vector4d> psi;
};

struct SolverConfig {
  double epsilon = 0.01;   // descent step size, in (0, 1)
  std::size_t n_max = 300; // maximum number of iterates
  double upsilon = 1e-4;   // objective-stall threshold
  double delta = 1e-6;     // threshold on dt * sum_k H_u(k)^2
};

void validate(const SolverConfig& config);

enum class StopReason { GradientSmall, ObjectiveStalled, MaxIterations };

std::string to_string(StopReason reason);

struct SolveReport {
  std::size_t iterations = 0;            // equals objective_history.size()
  std::vector<double> objective_history; // J3 per iterate
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIterations;
};

/// One AV-follower optimal control problem: initial state, the predecessor
/// trajectory seen by the AV, models, objective, bounds, and the grid.
struct OcpProblem {
  OcpState initial;
  ExogenousTrajectory exo;
  ObjectiveParams objective;
  OvrvParams av_model;
  IdmParams follower_model;
  double av_length = 5.0;
  ControlBounds bounds;
  Horizon horizon;
};

void validate(const OcpProblem& problem);

/// Right-hand side [v_av, f_av + u, v_f, f_hv] of the state equation. Throws
/// CollisionError when the follower gap closes.
Eigen::Vector4d system_dynamics(const OcpState& y, double u, const ExoSample& exo,
                                const OvrvParams& ovrv, const IdmParams& idm,
                                double av_length);

/// Jacobian of system_dynamics with respect to the state.
Eigen::Matrix4d dynamics_state_jacobian(const OcpState& y, const ExoSample& exo,
                                        const OvrvParams& ovrv, const IdmParams& idm,
                                        double av_length);

/// H = <g, psi> + running cost.
double hamiltonian(const OcpState& y, double u, const Eigen::Vector4d& psi,
                   const ExoSample& exo, const ObjectiveParams& objective,
                   const OvrvParams& ovrv, const IdmParams& idm, double av_length);

/// Costate derivative -g_y^T psi - l_y.
Eigen::Vector4d adjoint_rhs(const OcpState& y, double u, const Eigen::Vector4d& psi,
                            const ExoSample& exo, const ObjectiveParams& objective,
                            const OvrvParams& ovrv, const IdmParams& idm,
                            double av_length);

/// H_u = psi2 + cos(phi) * (f_av + u).
double hamiltonian_gradient(const OcpState& y, double u, double psi2,
                            const ExoSample& exo, SvoAngle phi,
                            const OvrvParams& ovrv);

/// Fixed-step RK4 trajectory of the state equation on the horizon grid, with
/// node speeds clamped at zero from below. Throws CollisionError carrying the
/// failure time.
std::vector<OcpState> forward_integrate(const OcpProblem& problem,
                                        const ControlGrid& controls);

/// RK4 backward sweep of the costate from psi(tf) = 0, with stored states and
/// predecessor samples interpolated linearly at half steps.
AdjointTrajectory backward_integrate(const OcpProblem& problem,
                                     std::span<const OcpState> states,
                                     const ControlGrid& controls);

/// H_u evaluated at every grid node from the (state, control, costate) triple.
std::vector<double> hamiltonian_gradient_nodes(const OcpProblem& problem,
                                               std::span<const OcpState> states,
                                               const AdjointTrajectory& adjoint,
                                               const ControlGrid& controls);

/// Adjoint-based estimate of dJ3/du_k for every control component, assembled
/// from the costate and the control derivative of the running cost so that it
/// is consistent with the trapezoidal objective.
std::vector<double> adjoint_gradient(const OcpProblem& problem, const ControlGrid& u);

/// Central finite differences of the objective under per-component control
/// perturbation; the reference oracle for adjoint_gradient.
std::vector<double> finite_difference_gradient(const OcpProblem& problem,
                                               const ControlGrid& u, double step);

struct SolveResult {
  ControlGrid control;           // best-J3 iterate
  std::vector<OcpState> states;  // trajectory under that control
  SolveReport report;
};

/// Projected-gradient forward-backward sweep: iterate
/// u <- project(u - epsilon * H_u) until the gradient norm test, the
/// objective stall test, or the iteration cap fires. Returns the best-J3
/// iterate seen.
SolveResult solve(const OcpProblem& problem, const SolverConfig& config,
                  const ControlGrid& u_init);

/// Same, starting from u = 0.
SolveResult solve(const OcpProblem& problem, const SolverConfig& config);

}  // namespace svoctl
