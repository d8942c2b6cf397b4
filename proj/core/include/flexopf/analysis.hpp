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

#ifndef FLEXOPF_ANALYSIS_HPP_
#define FLEXOPF_ANALYSIS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "flexopf/formulation.hpp"
#include "flexopf/lp.hpp"
#include "flexopf/model.hpp"

namespace flexopf {

// One solved point of a sweep. Failures are recorded, never thrown, so a bad
// point does not abort the rest of the axis.
struct SweepPoint {
  double axis = 0.0;
  bool ok = false;
  std::string error;
  double total_cost = 0.0;
  double improvement = 0.0;  // vs the first point of the sweep
  double expected_spillage_mwh = 0.0;
  double mean_spillage_mw = 0.0;
  std::vector<double> system_price;
  double wall_seconds = 0.0;
  std::int64_t iterations = 0;
};

struct SweepResult {
  std::string kind;
  std::vector<SweepPoint> points;
  BuildOptions options;
  std::uint64_t seed = 0;
};

// Applies F- = 1-f, F+ = 1+f uniformly to all flexible loads and solves once
// per level. improvement(f) = (cost(first) - cost(f)) / cost(first).
SweepResult flexibility_sweep(const Network& network, const ScenarioSet& scenarios,
                              const std::vector<double>& flex_levels,
                              const BuildOptions& options = {},
                              const SolverParams& params = {});

// Multiplies all scenario outputs by each factor and solves.
SweepResult penetration_sweep(const Network& network, const ScenarioSet& scenarios,
                              const std::vector<double>& scale_factors,
                              const BuildOptions& options = {},
                              const SolverParams& params = {});

struct RobustnessPoint {
  int scenario_count = 0;
  bool ok = false;
  std::string error;
  double total_cost = 0.0;
  double mean_spillage_mw = 0.0;
  double cost_rel_diff_vs_first = 0.0;
};

struct RobustnessResult {
  std::vector<RobustnessPoint> points;
  std::uint64_t seed = 0;
};

// Seeded subsampling (without replacement) from a master scenario set, with
// probabilities renormalized per subset.
RobustnessResult scenario_robustness(const Network& network, const ScenarioSet& master,
                                     const std::vector<int>& scenario_counts,
                                     std::uint64_t seed, const BuildOptions& options = {},
                                     const SolverParams& params = {});

struct ImprovementRowSpec {
  std::string case_name;
  Network network;                 // without farms at the wind buses
  std::vector<int> wind_buses;
  double penetration = 0.0;        // expected wind energy / demand energy
  std::vector<int> flexible_buses; // loads made flexible
  double flexibility = 0.0;        // +-fraction
  double reference_improvement = -1.0;  // external reference, <0 = none
};

struct ImprovementRow {
  std::string case_name;
  std::vector<int> wind_buses;
  double penetration = 0.0;
  std::vector<int> flexible_buses;
  double d0_load_share = 0.0;
  double flexibility = 0.0;
  bool ok = false;
  std::string error;
  double improvement = 0.0;
  double reference_improvement = -1.0;
};

// Cost improvement of the flexible solve vs the inflexible baseline for each
// configured row; wind farms are synthesized at the named buses with outputs
// scaled to the requested penetration.
std::vector<ImprovementRow> improvement_table(const std::vector<ImprovementRowSpec>& specs,
                                              const ScenarioSet& shapes,
                                              const BuildOptions& options = {},
                                              const SolverParams& params = {});

struct TimingPoint {
  std::string case_name;
  bool ok = false;
  std::string error;
  int rows = 0, cols = 0;
  double min_seconds = 0.0, mean_seconds = 0.0, max_seconds = 0.0;
  std::int64_t mean_iterations = 0;
};

struct TimingCase {
  std::string name;
  Network network;
  ScenarioSet scenarios;
};

// Repeated build+solve wall times per case.
std::vector<TimingPoint> timing_study(const std::vector<TimingCase>& cases, int repetitions,
                                      const BuildOptions& options = {},
                                      const SolverParams& params = {});

// --- helpers used by the sweeps and by callers preparing studies ---

// Copy of the network with every flexible load's interval set to [1-f, 1+f]
// (clamped at zero below).
Network with_uniform_flexibility(const Network& network, double flexibility);

// Copy with ramp limits set to +-fraction * p_max for every generator.
Network with_uniform_ramp(const Network& network, double fraction);

// Copy with loads at the given buses marked flexible (all others inflexible).
Network with_flexible_buses(const Network& network, const std::vector<int>& buses);

ScenarioSet scale_outputs(const ScenarioSet& scenarios, double factor);
ScenarioSet subset_scenarios(const ScenarioSet& master, const std::vector<int>& indices);

// Seeded sample of `count` distinct scenario indices from [0, master_size).
std::vector<int> sample_scenario_indices(int master_size, int count, std::uint64_t seed);

// Synthesizes a scenario set for `num_farms` farms from per-unit shape
// trajectories, scaled so the expected wind energy equals `penetration` times
// the network's total demand energy over the horizon.
ScenarioSet scenarios_for_penetration(const ScenarioSet& shapes, int num_farms,
                                      const Network& network, double penetration);

// Adds one farm per bus id (spillage cost 1 $/MWh) and returns the modified
// network; farm ids continue after the existing ones.
Network add_wind_farms(const Network& network, const std::vector<int>& buses);

// Fraction of total demand energy carried by the loads at the given buses.
double demand_share(const Network& network, const std::vector<int>& buses);

// CSV emission (fixed column order, 9 significant digits).
std::string to_csv(const SweepResult& result);
std::string to_csv(const RobustnessResult& result);
std::string to_csv(const std::vector<ImprovementRow>& rows);
std::string to_csv(const std::vector<TimingPoint>& points);

}  // namespace flexopf

#endif  // FLEXOPF_ANALYSIS_HPP_
