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

#ifndef FLEXOPF_MODEL_HPP_
#define FLEXOPF_MODEL_HPP_

#include <optional>
#include <string>
#include <vector>

namespace flexopf {

struct Bus {
  int id = 0;
  bool is_slack = false;
};

struct Line {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  // Per-unit 1/x on the system base. Positive for a normal branch.
  double susceptance_pu = 0.0;
  double tap_ratio = 1.0;
  std::optional<double> flow_limit_mw;
};

// Convex, monotonically non-decreasing generation cost in $/h vs MW.
class CostFunction {
 public:
  enum class Kind { linear, quadratic, piecewise_linear };
  struct Point {
    double p_mw = 0.0;
    double cost = 0.0;
  };

  CostFunction() = default;

  static CostFunction linear(double c1, double c0);
  static CostFunction quadratic(double c2, double c1, double c0);
  static CostFunction piecewise_linear(std::vector<Point> points);

  Kind kind() const { return kind_; }
  double c2() const { return c2_; }
  double c1() const { return c1_; }
  double c0() const { return c0_; }
  const std::vector<Point>& points() const { return points_; }

  double value(double p_mw) const;
  // Marginal cost at p; for a PWL function the slope of the segment to the
  // right of p (left slope at the last breakpoint).
  double marginal(double p_mw) const;

  // True when the function is convex and non-decreasing on [p_min, p_max].
  bool convex_nondecreasing_on(double p_min, double p_max) const;

 private:
  Kind kind_ = Kind::linear;
  double c2_ = 0.0, c1_ = 0.0, c0_ = 0.0;
  std::vector<Point> points_;
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  CostFunction cost;
  // Largest allowed change between consecutive periods; ramp_down_mw is the
  // signed lower change (non-positive), ramp_up_mw non-negative.
  double ramp_down_mw = 0.0;
  double ramp_up_mw = 0.0;
};

struct WindFarm {
  int id = 0;
  int bus = 0;
  double spillage_cost = 0.0;  // $/MWh of spilled energy
};

struct Load {
  int id = 0;
  int bus = 0;
  std::vector<double> demand_mw;  // one entry per period
  std::vector<double> flex_lo;    // lower served fraction per period
  std::vector<double> flex_hi;    // upper served fraction per period
  bool is_flexible = false;
};

// Joint wind-output trajectories: all farms share the scenario index.
struct ScenarioSet {
  int num_farms = 0;
  int num_scenarios = 0;
  int horizon = 0;
  std::vector<double> probabilities;  // size num_scenarios, sums to 1
  std::vector<double> output_mw;      // (farm, scenario, period) row-major

  double output(int w, int s, int t) const {
    return output_mw[(static_cast<std::size_t>(w) * num_scenarios + s) * horizon + t];
  }
  double& output(int w, int s, int t) {
    return output_mw[(static_cast<std::size_t>(w) * num_scenarios + s) * horizon + t];
  }

  // Single zero-output scenario with probability one.
  static ScenarioSet deterministic(int num_farms, int horizon);
};

struct Network {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<WindFarm> wind_farms;
  std::vector<Load> loads;
  double base_mva = 100.0;
  int horizon_length = 1;

  int bus_index(int id) const;  // -1 when absent
  int slack_index() const;      // index of the first slack bus, -1 when none
};

struct Violation {
  std::string code;
  std::string message;
};

struct PrescreenWarning {
  std::string code;
  std::string message;
};

// Every invariant breach in the network (and, when given, the scenario set)
// as data. Empty result means the input is valid.
std::vector<Violation> validate(const Network& network);
std::vector<Violation> validate(const Network& network, const ScenarioSet& scenarios);

// Advisory feasibility heuristics; absence of warnings does not guarantee a
// feasible dispatch.
std::vector<PrescreenWarning> feasibility_prescreen(const Network& network,
                                                    const ScenarioSet* scenarios = nullptr);

}  // namespace flexopf

#endif  // FLEXOPF_MODEL_HPP_
