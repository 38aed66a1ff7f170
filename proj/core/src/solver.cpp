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

#include "svoctl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svoctl/errors.hpp"

namespace svoctl {

ControlGrid project_control(std::vector<double> values, const ControlBounds& bounds) {
  validate(bounds);
  for (double& v : values) {
    v = std::clamp(v, bounds.u_min, bounds.u_max);
  }
  return ControlGrid{std::move(values), bounds};
}

bool is_feasible(const ControlGrid& u) {
  return std::all_of(u.values.begin(), u.values.end(), [&](double v) {
    return v >= u.bounds.u_min && v <= u.bounds.u_max;
  });
}

void validate(const SolverConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
    throw std::invalid_argument("SolverConfig: epsilon must lie in (0, 1)");
  }
  if (config.n_max < 1) {
    throw std::invalid_argument("SolverConfig: n_max must be >= 1");
  }
  if (!(config.upsilon > 0.0) || !(config.delta > 0.0)) {
    throw std::invalid_argument("SolverConfig: upsilon and delta must be positive");
  }
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GradientSmall:
      return "gradient_small";
    case StopReason::ObjectiveStalled:
      return "objective_stalled";
    case StopReason::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

void validate(const OcpProblem& problem) {
  validate(problem.horizon);
  validate(problem.objective);
  validate(problem.av_model);
  validate(problem.follower_model);
  validate(problem.bounds);
  if (!(problem.av_length > 0.0)) {
    throw std::invalid_argument("OcpProblem: av_length must be positive");
  }
  if (problem.exo.nodes() != problem.horizon.nodes() ||
      problem.exo.speed.size() != problem.exo.position.size()) {
    throw std::invalid_argument("OcpProblem: exogenous trajectory off the horizon grid");
  }
  const double lead_gap =
      problem.exo.position.front() - problem.initial.av_pos - problem.exo.length;
  if (!(lead_gap > 0.0)) {
    throw CollisionError("OcpProblem: predecessor not strictly ahead of the AV at t0",
                         problem.horizon.t0);
  }
  const double follower_gap =
      problem.initial.av_pos - problem.initial.follower_pos - problem.av_length;
  if (!(follower_gap > 0.0)) {
    throw CollisionError("OcpProblem: follower gap non-positive at t0",
                         problem.horizon.t0);
  }
}

Eigen::Vector4d system_dynamics(const OcpState& y, double u, const ExoSample& exo,
                                const OvrvParams& ovrv, const IdmParams& idm,
                                double av_length) {
  const double follower_gap = y.av_pos - y.follower_pos - av_length;
  if (!(follower_gap > 0.0)) {
    throw CollisionError("system_dynamics: non-positive follower gap");
  }
  const double av_gap = exo.x_p - y.av_pos - exo.l_p;
  const double av_accel = ovrv_accel(ovrv, av_gap, y.av_speed, exo.v_p) + u;
  const double follower_accel =
      idm_accel(idm, follower_gap, y.follower_speed,
                relative_speed(y.av_speed, y.follower_speed));
  return {y.av_speed, av_accel, y.follower_speed, follower_accel};
}

Eigen::Matrix4d dynamics_state_jacobian(const OcpState& y, const ExoSample& exo,
                                        const OvrvParams& ovrv, const IdmParams& idm,
                                        double av_length) {
  const double follower_gap = y.av_pos - y.follower_pos - av_length;
  const double dv = relative_speed(y.av_speed, y.follower_speed);
  const IdmPartials f = idm_accel_partials(idm, follower_gap, y.follower_speed, dv);

  Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
  jac(0, 1) = 1.0;
  jac(1, 0) = -ovrv.k1;
  jac(1, 1) = -ovrv.k1 * ovrv.tau2 - ovrv.k2;
  jac(2, 3) = 1.0;
  jac(3, 0) = f.d_gap;
  jac(3, 1) = f.d_dv;
  jac(3, 2) = -f.d_gap;
  jac(3, 3) = -f.d_dv + f.d_v;
  return jac;
}

double hamiltonian(const OcpState& y, double u, const Eigen::Vector4d& psi,
                   const ExoSample& exo, const ObjectiveParams& objective,
                   const OvrvParams& ovrv, const IdmParams& idm, double av_length) {
  return system_dynamics(y, u, exo, ovrv, idm, av_length).dot(psi) +
         running_cost(y, u, exo, objective, ovrv);
}

Eigen::Vector4d adjoint_rhs(const OcpState& y, double u, const Eigen::Vector4d& psi,
                            const ExoSample& exo, const ObjectiveParams& objective,
                            const OvrvParams& ovrv, const IdmParams& idm,
                            double av_length) {
  const Eigen::Matrix4d jac = dynamics_state_jacobian(y, exo, ovrv, idm, av_length);
  const Eigen::Vector4d cost_grad =
      running_cost_state_gradient(y, u, exo, objective, ovrv);
  return -(jac.transpose() * psi) - cost_grad;
}

double hamiltonian_gradient(const OcpState& y, double u, double psi2,
                            const ExoSample& exo, SvoAngle phi,
                            const OvrvParams& ovrv) {
  const double av_gap = exo.x_p - y.av_pos - exo.l_p;
  return psi2 + std::cos(phi.phi) * (ovrv_accel(ovrv, av_gap, y.av_speed, exo.v_p) + u);
}

namespace {

Eigen::Vector4d clamp_speeds(Eigen::Vector4d y) {
  y[1] = std::max(y[1], 0.0);
  y[3] = std::max(y[3], 0.0);
  return y;
}

void check_lead_gap(const OcpProblem& problem, const OcpState& y, double t) {
  // The OVRV law stays finite through contact, so the predecessor gap is
  // policed at nodes rather than inside the dynamics.
  std::size_t k = static_cast<std::size_t>(std::llround((t - problem.horizon.t0) / problem.horizon.dt));
  k = std::min(k, problem.exo.nodes() - 1);
  if (!(problem.exo.position[k] - y.av_pos - problem.exo.length > 0.0)) {
    throw CollisionError("forward_integrate: AV reached its predecessor", t);
  }
}

}  // namespace

std::vector<OcpState> forward_integrate(const OcpProblem& problem,
                                        const ControlGrid& controls) {
  const Horizon& h = problem.horizon;
  const std::size_t n_nodes = h.nodes();
  if (controls.values.size() != n_nodes) {
    throw std::invalid_argument("forward_integrate: control grid off the horizon grid");
  }

  std::vector<OcpState> states;
  states.reserve(n_nodes);
  states.push_back(problem.initial);
  check_lead_gap(problem, problem.initial, h.t0);

  Eigen::Vector4d y = problem.initial.vec();
  for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
    const double u = controls.values[k];
    const ExoSample exo0 = problem.exo.at_node(k);
    const ExoSample exo_half = problem.exo.interpolate(k, 0.5);
    const ExoSample exo1 = problem.exo.at_node(k + 1);
    const double t = h.time_at(k);

    try {
      const Eigen::Vector4d s1 = system_dynamics(OcpState::from_vec(y), u, exo0,
                                                 problem.av_model,
                                                 problem.follower_model,
                                                 problem.av_length);
      const Eigen::Vector4d s2 = system_dynamics(
          OcpState::from_vec(y + 0.5 * h.dt * s1), u, exo_half, problem.av_model,
          problem.follower_model, problem.av_length);
      const Eigen::Vector4d s3 = system_dynamics(
          OcpState::from_vec(y + 0.5 * h.dt * s2), u, exo_half, problem.av_model,
          problem.follower_model, problem.av_length);
      const Eigen::Vector4d s4 = system_dynamics(
          OcpState::from_vec(y + h.dt * s3), u, exo1, problem.av_model,
          problem.follower_model, problem.av_length);
      y = clamp_speeds(y + (h.dt / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4));
    } catch (const CollisionError&) {
      throw CollisionError("forward_integrate: follower gap closed", t);
    }

    const OcpState next = OcpState::from_vec(y);
    check_lead_gap(problem, next, h.time_at(k + 1));
    states.push_back(next);
  }
  return states;
}

AdjointTrajectory backward_integrate(const OcpProblem& problem,
                                     std::span<const OcpState> states,
                                     const ControlGrid& controls) {
  const Horizon& h = problem.horizon;
  const std::size_t n_nodes = h.nodes();
  if (states.size() != n_nodes || controls.values.size() != n_nodes) {
    throw std::invalid_argument("backward_integrate: trajectories off the horizon grid");
  }

  AdjointTrajectory out;
  out.psi.assign(n_nodes, Eigen::Vector4d::Zero());

  auto rhs = [&](const Eigen::Vector4d& state_vec, double u, const ExoSample& exo,
                 const Eigen::Vector4d& psi) {
    return adjoint_rhs(OcpState::from_vec(state_vec), u, psi, exo, problem.objective,
                       problem.av_model, problem.follower_model, problem.av_length);
  };

  Eigen::Vector4d psi = Eigen::Vector4d::Zero();
  for (std::size_t k = n_nodes - 1; k-- > 0;) {
    // Sweep over [t_k, t_{k+1}] with the interval's control; stored states
    // interpolated linearly at the half step.
    const double u = controls.values[k];
    const Eigen::Vector4d y0 = states[k].vec();
    const Eigen::Vector4d y1 = states[k + 1].vec();
    const Eigen::Vector4d y_half = 0.5 * (y0 + y1);
    const ExoSample exo0 = problem.exo.at_node(k);
    const ExoSample exo_half = problem.exo.interpolate(k, 0.5);
    const ExoSample exo1 = problem.exo.at_node(k + 1);

    const Eigen::Vector4d s1 = rhs(y1, u, exo1, psi);
    const Eigen::Vector4d s2 = rhs(y_half, u, exo_half, psi - 0.5 * h.dt * s1);
    const Eigen::Vector4d s3 = rhs(y_half, u, exo_half, psi - 0.5 * h.dt * s2);
    const Eigen::Vector4d s4 = rhs(y0, u, exo0, psi - h.dt * s3);
    psi -= (h.dt / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
    out.psi[k] = psi;
  }
  return out;
}

std::vector<double> hamiltonian_gradient_nodes(const OcpProblem& problem,
                                               std::span<const OcpState> states,
                                               const AdjointTrajectory& adjoint,
                                               const ControlGrid& controls) {
  const std::size_t n_nodes = problem.horizon.nodes();
  std::vector<double> hu(n_nodes);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    hu[k] = hamiltonian_gradient(states[k], controls.values[k], adjoint.psi[k][1],
                                 problem.exo.at_node(k), problem.objective.phi,
                                 problem.av_model);
  }
  return hu;
}

std::vector<double> adjoint_gradient(const OcpProblem& problem, const ControlGrid& u) {
  const Horizon& h = problem.horizon;
  const std::size_t n_nodes = h.nodes();
  const std::vector<OcpState> states = forward_integrate(problem, u);
  const AdjointTrajectory adjoint = backward_integrate(problem, states, u);

  // dJ3/du_k is the trapezoid of H_u over [t_k, t_{k+1}] with the interval's
  // control at both ends, matching the objective quadrature. The final node
  // value never enters the objective, so its component is zero.
  std::vector<double> grad(n_nodes, 0.0);
  for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
    const double left =
        hamiltonian_gradient(states[k], u.values[k], adjoint.psi[k][1],
                             problem.exo.at_node(k), problem.objective.phi,
                             problem.av_model);
    const double right =
        hamiltonian_gradient(states[k + 1], u.values[k], adjoint.psi[k + 1][1],
                             problem.exo.at_node(k + 1), problem.objective.phi,
                             problem.av_model);
    grad[k] = 0.5 * h.dt * (left + right);
  }
  return grad;
}

std::vector<double> finite_difference_gradient(const OcpProblem& problem,
                                               const ControlGrid& u, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite_difference_gradient: step must be positive");
  }
  const std::size_t n_nodes = problem.horizon.nodes();
  std::vector<double> grad(n_nodes);

  auto objective_at = [&](const std::vector<double>& values) {
    ControlGrid candidate{values, u.bounds};
    const std::vector<OcpState> states = forward_integrate(problem, candidate);
    return evaluate_objective(states, candidate.values, problem.exo,
                              problem.objective, problem.av_model, problem.horizon);
  };

  std::vector<double> values = u.values;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double base = values[k];
    values[k] = base + step;
    const double plus = objective_at(values);
    values[k] = base - step;
    const double minus = objective_at(values);
    values[k] = base;
    grad[k] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

namespace {

double objective_of(const OcpProblem& problem, const ControlGrid& u,
                    std::span<const OcpState> states) {
  const double value = evaluate_objective(states, u.values, problem.exo,
                                          problem.objective, problem.av_model,
                                          problem.horizon);
  if (!std::isfinite(value)) {
    throw std::runtime_error("solve: objective is not finite");
  }
  return value;
}

}  // namespace

SolveResult solve(const OcpProblem& problem, const SolverConfig& config,
                  const ControlGrid& u_init) {
  validate(problem);
  validate(config);
  if (u_init.values.size() != problem.horizon.nodes()) {
    throw std::invalid_argument("solve: u_init off the horizon grid");
  }
  if (!is_feasible(u_init)) {
    throw std::invalid_argument("solve: u_init violates the control bounds");
  }

  const double dt = problem.horizon.dt;
  ControlGrid u = u_init;
  std::vector<OcpState> states = forward_integrate(problem, u);
  double objective = objective_of(problem, u, states);

  SolveReport report;
  report.objective_history.push_back(objective);

  ControlGrid best_u = u;
  std::vector<OcpState> best_states = states;
  double best_objective = objective;

  report.stop_reason = StopReason::MaxIterations;
  report.converged = false;

  while (true) {
    if (report.objective_history.size() >= config.n_max) {
      break;
    }

    const AdjointTrajectory adjoint = backward_integrate(problem, states, u);
    const std::vector<double> hu = hamiltonian_gradient_nodes(problem, states, adjoint, u);

    double gradient_norm2 = 0.0;
    for (double v : hu) {
      gradient_norm2 += v * v;
    }
    gradient_norm2 *= dt;
    if (gradient_norm2 < config.delta) {
      report.stop_reason = StopReason::GradientSmall;
      report.converged = true;
      break;
    }

    std::vector<double> next_values = u.values;
    for (std::size_t k = 0; k < next_values.size(); ++k) {
      next_values[k] -= config.epsilon * hu[k];
    }
    u = project_control(std::move(next_values), problem.bounds);

    states = forward_integrate(problem, u);
    const double next_objective = objective_of(problem, u, states);
    report.objective_history.push_back(next_objective);
    if (next_objective < best_objective) {
      best_objective = next_objective;
      best_u = u;
      best_states = states;
    }

    const bool stalled = std::abs(next_objective - objective) <= config.upsilon;
    objective = next_objective;
    if (stalled) {
      report.stop_reason = StopReason::ObjectiveStalled;
      report.converged = true;
      break;
    }
  }

  report.iterations = report.objective_history.size();
  return SolveResult{std::move(best_u), std::move(best_states), std::move(report)};
}

SolveResult solve(const OcpProblem& problem, const SolverConfig& config) {
  ControlGrid zero{std::vector<double>(problem.horizon.nodes(), 0.0), problem.bounds};
  return solve(problem, config, zero);
}

}  // namespace svoctl
