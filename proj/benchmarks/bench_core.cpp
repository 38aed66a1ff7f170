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

#include <benchmark/benchmark.h>

#include "svoctl/scenario.hpp"
#include "svoctl/solver.hpp"

namespace {

using namespace svoctl;

void BM_IdmAccel(benchmark::State& state) {
  const IdmParams params;
  double gap = 30.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(idm_accel(params, gap, 14.0, 1.3));
    gap += 1e-9;  // defeat constant folding
  }
}
BENCHMARK(BM_IdmAccel);

OcpProblem bench_problem(double tf) {
  Scenario scenario = five_vehicle_preset();
  scenario.horizon = Horizon{0.0, tf, 0.1};
  return build_ocp(scenario);
}

void BM_ForwardIntegrate(benchmark::State& state) {
  const OcpProblem problem = bench_problem(static_cast<double>(state.range(0)));
  const ControlGrid u{std::vector<double>(problem.horizon.nodes(), 0.1),
                      problem.bounds};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_integrate(problem, u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForwardIntegrate)->Arg(30)->Arg(60)->Arg(120)->Complexity(benchmark::oN);

void BM_BackwardIntegrate(benchmark::State& state) {
  const OcpProblem problem = bench_problem(120.0);
  const ControlGrid u{std::vector<double>(problem.horizon.nodes(), 0.1),
                      problem.bounds};
  const std::vector<OcpState> traj = forward_integrate(problem, u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(backward_integrate(problem, traj, u));
  }
}
BENCHMARK(BM_BackwardIntegrate);

void BM_SolveSweepIterations(benchmark::State& state) {
  const OcpProblem problem = bench_problem(120.0);
  SolverConfig config;
  config.n_max = static_cast<std::size_t>(state.range(0));
  config.upsilon = 1e-12;  // force the iteration cap
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(problem, config));
  }
}
BENCHMARK(BM_SolveSweepIterations)->Arg(10)->Arg(50);

void BM_RunScenarioPreset(benchmark::State& state) {
  Scenario scenario = five_vehicle_preset();
  scenario.solver.n_max = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(scenario));
  }
}
BENCHMARK(BM_RunScenarioPreset);

}  // namespace

BENCHMARK_MAIN();
