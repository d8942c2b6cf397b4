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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "builders.hpp"
#include "doctest.h"
#include "flexopf/analysis.hpp"

using namespace flexopf;
using flexopf::testing::four_bus_network;
using flexopf::testing::four_bus_scenarios;

TEST_CASE("flexibility level zero reproduces the inflexible baseline") {
  const Network net = four_bus_network();
  const ScenarioSet scen = four_bus_scenarios(10);
  const SweepResult sweep = flexibility_sweep(net, scen, {0.0});
  REQUIRE(sweep.points.size() == 1);
  REQUIRE(sweep.points[0].ok);

  // The f = 0 network builds the very same LP as the untouched one.
  const Network pinned = with_uniform_flexibility(net, 0.0);
  const StochasticProgram a = build(net, scen);
  const StochasticProgram b = build(pinned, scen);
  CHECK(a.lp.num_rows() == b.lp.num_rows());
  CHECK(a.lp.num_vars() == b.lp.num_vars());
  CHECK(a.lp.A.nonzeros() == b.lp.A.nonzeros());
  const LpSolution sol = solve(b.lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(sweep.points[0].total_cost).epsilon(1e-9));
}

TEST_CASE("cost is non-increasing in demand flexibility") {
  const Network net = four_bus_network();
  const ScenarioSet scen = four_bus_scenarios(10);
  const SweepResult sweep = flexibility_sweep(net, scen, {0.0, 0.1, 0.2, 0.3});
  REQUIRE(sweep.points.size() == 4);
  for (std::size_t k = 0; k < sweep.points.size(); ++k) {
    REQUIRE(sweep.points[k].ok);
    if (k > 0) {
      CHECK(sweep.points[k].total_cost <=
            sweep.points[k - 1].total_cost + 1e-6 * (1.0 + sweep.points[k - 1].total_cost));
    }
    CHECK(sweep.points[k].improvement >= -1e-9);
  }
}

TEST_CASE("penetration sweep: zero wind equals the no-wind dispatch, cost falls") {
  const Network net = four_bus_network();
  const ScenarioSet scen = four_bus_scenarios(10);
  const SweepResult sweep = penetration_sweep(net, scen, {0.0, 0.5, 1.0, 1.5});
  REQUIRE(sweep.points.size() == 4);
  for (const auto& p : sweep.points) REQUIRE(p.ok);

  // factor 0: solve the same network against an all-zero scenario set
  ScenarioSet none = scale_outputs(scen, 0.0);
  const StochasticProgram prog = build(net, none);
  const LpSolution sol = solve(prog.lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sweep.points[0].total_cost == doctest::Approx(sol.objective).epsilon(1e-9));

  for (std::size_t k = 1; k < sweep.points.size(); ++k) {
    CHECK(sweep.points[k].total_cost <=
          sweep.points[k - 1].total_cost + 1e-6 * (1.0 + sweep.points[k - 1].total_cost));
  }
  // More available wind on fixed demand cannot shrink spilled energy.
  for (std::size_t k = 1; k < sweep.points.size(); ++k) {
    CHECK(sweep.points[k].expected_spillage_mwh >=
          sweep.points[k - 1].expected_spillage_mwh - 1e-6);
  }
}

TEST_CASE("sweep points are independent: permuting the axis permutes results") {
  const Network net = four_bus_network();
  const ScenarioSet scen = four_bus_scenarios(8);
  const SweepResult fwd = flexibility_sweep(net, scen, {0.0, 0.15, 0.3});
  const SweepResult rev = flexibility_sweep(net, scen, {0.3, 0.15, 0.0});
  REQUIRE(fwd.points.size() == 3);
  REQUIRE(rev.points.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(fwd.points[k].total_cost ==
          doctest::Approx(rev.points[2 - k].total_cost).epsilon(1e-12));
  }
}

TEST_CASE("scenario robustness: identical subsets give identical costs") {
  const Network net = four_bus_network();
  const ScenarioSet master = four_bus_scenarios(40);
  const RobustnessResult a = scenario_robustness(net, master, {10, 10}, 7);
  REQUIRE(a.points.size() == 2);
  REQUIRE(a.points[0].ok);
  REQUIRE(a.points[1].ok);
  CHECK(a.points[0].total_cost == a.points[1].total_cost);
  CHECK(a.points[1].cost_rel_diff_vs_first == doctest::Approx(0.0));
}

TEST_CASE("nested subsets growing with high-wind scenarios raise mean spillage") {
  const Network net = four_bus_network();
  ScenarioSet master = four_bus_scenarios(20);
  // Scenarios 10..19 get oversized output so the larger nested set must spill.
  for (int s = 10; s < 20; ++s) {
    for (int t = 0; t < master.horizon; ++t) master.output(0, s, t) = 150.0;
  }
  std::vector<int> small_ids(10), large_ids(20);
  std::iota(small_ids.begin(), small_ids.end(), 0);
  std::iota(large_ids.begin(), large_ids.end(), 0);
  const ScenarioSet small = subset_scenarios(master, small_ids);
  const ScenarioSet large = subset_scenarios(master, large_ids);

  const StochasticProgram ps = build(net, small);
  const StochasticProgram pl = build(net, large);
  const LpSolution ss = solve(ps.lp);
  const LpSolution sl = solve(pl.lp);
  REQUIRE(ss.status == SolveStatus::optimal);
  REQUIRE(sl.status == SolveStatus::optimal);
  const DispatchReport rs = extract(ps, ss, net, small);
  const DispatchReport rl = extract(pl, sl, net, large);
  CHECK(rl.expected_spillage_mwh >= rs.expected_spillage_mwh - 1e-9);
}

TEST_CASE("improvement table: zero flexibility rows report zero improvement") {
  ImprovementRowSpec spec;
  spec.case_name = "four-bus";
  spec.network = four_bus_network();
  spec.network.wind_farms.clear();  // farms come from the placement
  spec.wind_buses = {1};
  spec.penetration = 0.15;
  spec.flexible_buses = {2, 3};
  spec.flexibility = 0.0;
  const ScenarioSet shapes = four_bus_scenarios(10);
  const auto rows = improvement_table({spec}, shapes);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].ok);
  CHECK(rows[0].improvement == doctest::Approx(0.0));
  CHECK(rows[0].d0_load_share == doctest::Approx(75.0 / 100.0));
}

TEST_CASE("improvement table: flexibility never hurts") {
  ImprovementRowSpec spec;
  spec.case_name = "four-bus";
  spec.network = four_bus_network();
  spec.network.wind_farms.clear();
  spec.wind_buses = {1};
  spec.penetration = 0.15;
  spec.flexible_buses = {2};
  spec.flexibility = 0.1;
  const ScenarioSet shapes = four_bus_scenarios(10);
  const auto rows = improvement_table({spec}, shapes);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].ok);
  CHECK(rows[0].improvement >= -1e-9);
}

TEST_CASE("doubling spillage cost with zero spillage leaves improvement unchanged") {
  Network net = four_bus_network();
  // One scenario and tiny wind: the deterministic dispatch absorbs all of it,
  // so nothing is spilled at the optimum.
  ScenarioSet scen = scale_outputs(four_bus_scenarios(1), 0.05);
  const SweepResult before = flexibility_sweep(net, scen, {0.0, 0.2});
  for (auto& farm : net.wind_farms) farm.spillage_cost *= 2.0;
  const SweepResult after = flexibility_sweep(net, scen, {0.0, 0.2});
  REQUIRE(before.points[1].ok);
  REQUIRE(after.points[1].ok);
  CHECK(before.points[0].expected_spillage_mwh == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(before.points[1].improvement ==
        doctest::Approx(after.points[1].improvement).epsilon(1e-9));
}

TEST_CASE("timing study: one repetition makes min equal mean equal max") {
  TimingCase tc;
  tc.name = "four-bus";
  tc.network = four_bus_network();
  tc.scenarios = four_bus_scenarios(5);
  const auto points = timing_study({tc}, 1);
  REQUIRE(points.size() == 1);
  REQUIRE(points[0].ok);
  CHECK(points[0].min_seconds == doctest::Approx(points[0].mean_seconds));
  CHECK(points[0].mean_seconds == doctest::Approx(points[0].max_seconds));
  CHECK(points[0].rows > 0);
}

TEST_CASE("per-point failures do not abort a sweep") {
  Network net = four_bus_network();
  // Clamp capacity below demand: infeasible without wind at factor 0.
  net.generators[0].p_max_mw = 50.0;
  net.generators[0].ramp_down_mw = -5.0;
  net.generators[0].ramp_up_mw = 5.0;
  const ScenarioSet scen = four_bus_scenarios(5);
  const SweepResult sweep = penetration_sweep(net, scen, {0.0, 20.0});
  REQUIRE(sweep.points.size() == 2);
  CHECK_FALSE(sweep.points[0].ok);
  CHECK(sweep.points[0].error.find("infeasible") != std::string::npos);
  CHECK(sweep.points[1].ok);  // plentiful wind restores feasibility
}

TEST_CASE("CSV emission has the documented columns") {
  const Network net = four_bus_network();
  const ScenarioSet scen = four_bus_scenarios(5);
  const SweepResult sweep = flexibility_sweep(net, scen, {0.0, 0.1});
  const std::string csv = to_csv(sweep);
  CHECK(csv.rfind("axis,status,total_cost,improvement,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}
