// Copyright 2026 The flexopf Authors
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

#include <fstream>
#include <sstream>

#include "builders.hpp"
#include "flexopf/analysis.hpp"
#include "flexopf/case_io.hpp"
#include "flexopf/formulation.hpp"
#include "flexopf/lp.hpp"

namespace {

using namespace flexopf;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = FLEXOPF_DATA_DIR;

void BM_build_four_bus(benchmark::State& state) {
  const Network net = flexopf::testing::four_bus_network();
  const ScenarioSet scen = flexopf::testing::four_bus_scenarios(20);
  for (auto _ : state) {
    StochasticProgram prog = build(net, scen);
    benchmark::DoNotOptimize(prog.lp.num_rows());
  }
}
BENCHMARK(BM_build_four_bus)->Unit(benchmark::kMillisecond);

void BM_solve_four_bus_20x20(benchmark::State& state) {
  Network net = flexopf::testing::four_bus_network();
  net = with_uniform_flexibility(net, 0.2);
  const ScenarioSet scen = flexopf::testing::four_bus_scenarios(20);
  const StochasticProgram prog = build(net, scen);
  for (auto _ : state) {
    LpSolution sol = solve(prog.lp);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_solve_four_bus_20x20)->Unit(benchmark::kMillisecond);

void BM_parse_case39(benchmark::State& state) {
  const std::string text = slurp(kData + "/case39.m");
  for (auto _ : state) {
    CaseDocument doc = parse_matpower(text);
    benchmark::DoNotOptimize(doc.network.buses.size());
  }
}
BENCHMARK(BM_parse_case39)->Unit(benchmark::kMillisecond);

void BM_solve_case39_S20_T12(benchmark::State& state) {
  const std::string text = slurp(kData + "/case39_flex_7_8_12.json");
  Network net = parse_native(text).network;
  net = with_uniform_flexibility(net, 0.1);
  const ScenarioSet master = parse_scenarios(slurp(kData + "/scen39_100.csv"), 2, 12);
  const ScenarioSet scen = subset_scenarios(master, sample_scenario_indices(100, 20, 1));
  const StochasticProgram prog = build(net, scen);
  for (auto _ : state) {
    LpSolution sol = solve(prog.lp);
    benchmark::DoNotOptimize(sol.objective);
  }
}
BENCHMARK(BM_solve_case39_S20_T12)->Unit(benchmark::kMillisecond);

void BM_lp_refactor_case39(benchmark::State& state) {
  // Measures a cold solve's factorization-dominated startup by solving with
  // an iteration cap.
  const std::string text = slurp(kData + "/case39_flex_7_8_12.json");
  const Network net = parse_native(text).network;
  const ScenarioSet master = parse_scenarios(slurp(kData + "/scen39_100.csv"), 2, 12);
  const ScenarioSet scen = subset_scenarios(master, sample_scenario_indices(100, 50, 1));
  const StochasticProgram prog = build(net, scen);
  SolverParams params;
  params.iteration_limit = 1;
  for (auto _ : state) {
    LpSolution sol = solve(prog.lp, params);
    benchmark::DoNotOptimize(sol.iterations);
  }
}
BENCHMARK(BM_lp_refactor_case39)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
