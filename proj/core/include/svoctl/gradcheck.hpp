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

#include <random>

#include "svoctl/solver.hpp"

namespace svoctl {

/// A randomized feasible OCP: smooth sinusoidal predecessor, states perturbed
/// off equilibrium, controls drawn inside the bounds, random SVO angle.
struct GradcheckProblem {
  OcpProblem problem;
  ControlGrid control;
};

GradcheckProblem random_gradcheck_problem(std::mt19937& rng);

struct GradcheckReport {
  int scenarios = 0;
  double max_rel_error = 0.0;  // relative with a 1e-6 absolute floor
  double fd_step = 1e-4;
  double tolerance = 1e-3;
  bool pass = false;
};

/// Compares the adjoint-based gradient against central finite differences on
/// `n_scenarios` randomized problems.
GradcheckReport run_gradient_check(unsigned seed, int n_scenarios = 20,
                                   double tolerance = 1e-3, double fd_step = 1e-4);

/// max_k |a_k - b_k| / max(|a_k|, |b_k|, floor); the floor turns the absolute
/// tolerance tol*floor into the pass criterion near zero.
double max_relative_error(std::span<const double> a, std::span<const double> b,
                          double floor = 1e-3);

}  // namespace svoctl
