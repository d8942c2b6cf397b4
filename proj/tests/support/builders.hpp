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

#ifndef FLEXOPF_TESTS_SUPPORT_BUILDERS_HPP_
#define FLEXOPF_TESTS_SUPPORT_BUILDERS_HPP_

#include <cmath>
#include <vector>

#include "flexopf/model.hpp"
#include "test_rng.hpp"

namespace flexopf::testing {

// Four buses in a line-plus-spur, one generator and one wind farm at bus 1,
// three flexible loads, horizon T with a mild evening-peak profile.
inline Network four_bus_network(int horizon = 20) {
  Network net;
  net.base_mva = 100.0;
  net.horizon_length = horizon;
  net.buses = {{1, true}, {2, false}, {3, false}, {4, false}};
  net.lines = {
      {1, 1, 2, 10.0, 1.0, {}},
      {2, 2, 3, 8.0, 1.0, {}},
      {3, 2, 4, 12.5, 1.0, {}},
  };
  Generator gen;
  gen.id = 1;
  gen.bus = 1;
  gen.p_min_mw = 0.0;
  gen.p_max_mw = 120.0;
  gen.cost = CostFunction::quadratic(0.02, 10.0, 0.0);
  gen.ramp_down_mw = -10.0;
  gen.ramp_up_mw = 10.0;
  net.generators = {gen};
  net.wind_farms = {{1, 1, 1.0}};

  // Profile multipliers, worst step 6% of the 100 MW total between t=18,19.
  const std::vector<double> shape = {0.78, 0.76, 0.75, 0.74, 0.735, 0.74, 0.76,
                                     0.79, 0.83, 0.87, 0.91, 0.945, 0.97, 0.985,
                                     0.99, 1.0, 0.995, 0.98, 0.92, 0.89};
  const double base[3] = {40.0, 35.0, 25.0};
  for (int d = 0; d < 3; ++d) {
    Load load;
    load.id = d + 1;
    load.bus = d + 2;
    load.is_flexible = true;
    load.demand_mw.resize(horizon);
    for (int t = 0; t < horizon; ++t) {
      load.demand_mw[t] = base[d] * shape[t % static_cast<int>(shape.size())];
    }
    load.flex_lo.assign(horizon, 1.0);
    load.flex_hi.assign(horizon, 1.0);
    net.loads.push_back(load);
  }
  return net;
}

// Smooth autocorrelated wind trajectories for one farm, mean near 15 MW.
inline ScenarioSet four_bus_scenarios(int num_scenarios = 20, int horizon = 20,
                                      std::uint64_t seed = 9001) {
  Rng rng(seed);
  ScenarioSet scen;
  scen.num_farms = 1;
  scen.num_scenarios = num_scenarios;
  scen.horizon = horizon;
  scen.probabilities.assign(num_scenarios, 1.0 / num_scenarios);
  scen.output_mw.assign(static_cast<std::size_t>(num_scenarios) * horizon, 0.0);
  for (int s = 0; s < num_scenarios; ++s) {
    double level = 8.0 + 14.0 * rng.uniform01();
    for (int t = 0; t < horizon; ++t) {
      level += 4.0 * (rng.uniform01() - 0.5);
      if (level < 0.0) level = 0.0;
      if (level > 32.0) level = 32.0;
      scen.output(0, s, t) = level;
    }
  }
  return scen;
}

// Three buses, two generators, one load; used with S=1 as a deterministic
// multiperiod instance with a hand-computable optimum.
inline Network three_bus_network() {
  Network net;
  net.base_mva = 100.0;
  net.horizon_length = 3;
  net.buses = {{1, true}, {2, false}, {3, false}};
  net.lines = {
      {1, 1, 2, 10.0, 1.0, {}},
      {2, 2, 3, 10.0, 1.0, {}},
      {3, 1, 3, 5.0, 1.0, {}},
  };
  Generator g1;
  g1.id = 1;
  g1.bus = 1;
  g1.p_min_mw = 0.0;
  g1.p_max_mw = 100.0;
  g1.cost = CostFunction::linear(10.0, 0.0);
  g1.ramp_down_mw = -40.0;
  g1.ramp_up_mw = 40.0;
  Generator g2 = g1;
  g2.id = 2;
  g2.bus = 2;
  g2.cost = CostFunction::linear(30.0, 0.0);
  g2.ramp_down_mw = -100.0;
  g2.ramp_up_mw = 100.0;
  net.generators = {g1, g2};

  Load load;
  load.id = 1;
  load.bus = 3;
  load.is_flexible = false;
  load.demand_mw = {50.0, 120.0, 80.0};
  load.flex_lo = {1.0, 1.0, 1.0};
  load.flex_hi = {1.0, 1.0, 1.0};
  net.loads = {load};
  return net;
}

}  // namespace flexopf::testing

#endif  // FLEXOPF_TESTS_SUPPORT_BUILDERS_HPP_
