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

#ifndef FLEXOPF_FORMULATION_HPP_
#define FLEXOPF_FORMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexopf/lp.hpp"
#include "flexopf/model.hpp"

namespace flexopf {

// Physical meaning of one LP column. Generator setpoints are first-stage and
// carry no scenario index; everything else is recourse.
struct VariableRef {
  enum class Kind : std::uint8_t { gen_p, wind_p, load_alpha, angle, flow, cost_epigraph };
  Kind kind{};
  int entity = -1;    // generator/farm/load/bus/line index
  int scenario = -1;  // -1 for first-stage variables
  int period = -1;
  int segment = -1;   // reserved for cost_epigraph variants
};

struct RowRef {
  enum class Kind : std::uint8_t { balance, dcflow, conservation, ramp, line_limit, pwl };
  Kind kind{};
  int entity = -1;
  int scenario = -1;
  int period = -1;  // for ramp: the earlier period of the link, -1 = initial point
  int segment = -1; // pwl cut index
};

std::string to_string(const VariableRef& ref);
std::string to_string(const RowRef& ref);

struct BuildOptions {
  int pwl_segments = 10;
  bool enforce_line_limits = false;
  // Pre-horizon operating point; when set, ramp limits also apply between it
  // and the first period.
  std::optional<std::vector<double>> initial_dispatch_mw;
  // Restrict the formulation to these scenario indices (probabilities are
  // renormalized). Empty optional = all scenarios.
  std::optional<std::vector<int>> scenario_subset;
};

struct StochasticProgram;

// Bijection between physical tuples and flat LP positions.
class VariableIndex {
 public:
  int gen_p(int g, int t) const { return g * T_ + t; }
  // -1 when the generator's cost is linear (no epigraph variable).
  int cost_epigraph(int g, int t) const {
    return epi_slot_[g] < 0 ? -1 : epi_off_ + epi_slot_[g] * T_ + t;
  }
  int wind_p(int w, int s, int t) const { return wind_off_ + (w * S_ + s) * T_ + t; }
  int load_alpha(int d, int s, int t) const { return alpha_off_ + (d * S_ + s) * T_ + t; }
  int angle(int b, int s, int t) const { return angle_off_ + (b * S_ + s) * T_ + t; }
  int flow(int l, int s, int t) const { return flow_off_ + (l * S_ + s) * T_ + t; }

  int num_variables() const { return total_; }
  VariableRef describe(int position) const;

  int buses() const { return B_; }
  int lines() const { return L_; }
  int generators() const { return G_; }
  int farms() const { return W_; }
  int loads() const { return D_; }
  int scenarios() const { return S_; }
  int horizon() const { return T_; }

 private:
  friend StochasticProgram build(const Network& network, const ScenarioSet& scenarios,
                                 const BuildOptions& options);
  int B_ = 0, L_ = 0, G_ = 0, W_ = 0, D_ = 0, S_ = 0, T_ = 0;
  int epi_off_ = 0, wind_off_ = 0, alpha_off_ = 0, angle_off_ = 0, flow_off_ = 0, total_ = 0;
  std::vector<int> epi_slot_;  // per generator, -1 for linear costs
};

// The assembled two-stage stochastic multiperiod DC-OPF as a sparse LP with
// a map back to physical quantities.
struct StochasticProgram {
  LinearProgram lp;
  VariableIndex index;
  std::vector<RowRef> row_tags;      // one per LP row
  std::vector<int> scenario_ids;     // effective scenarios (subset-aware)
  std::vector<double> scenario_prob; // renormalized probabilities
  int horizon = 0;
  std::vector<CostFunction> effective_cost;  // per generator, post-PWL
};

StochasticProgram build(const Network& network, const ScenarioSet& scenarios,
                        const BuildOptions& options = {});

// Secant (upper) piecewise-linear approximation of a convex quadratic on
// `segments` equal-width intervals of [p_min, p_max]. The approximation
// over-estimates by at most c2 * (width/2)^2 per segment.
CostFunction pwl_approximate(const CostFunction& quadratic, double p_min, double p_max,
                             int segments);

struct DispatchReport {
  int num_gens = 0, num_farms = 0, num_loads = 0, num_buses = 0, num_lines = 0;
  int num_scenarios = 0, horizon = 0;

  std::vector<double> gen_setpoints_mw;  // (g,t)
  std::vector<double> wind_used_mw;      // (w,s,t)
  std::vector<double> spillage_mw;       // (w,s,t)
  std::vector<double> load_served_mw;    // (d,s,t)
  std::vector<double> alpha;             // (d,s,t)
  std::vector<double> angles_rad;        // (b,s,t)
  std::vector<double> flows_mw;          // (l,s,t)
  std::vector<double> lmp;               // (b,s,t), $/MWh conditional on s
  std::vector<double> system_price;      // per t: expected bus-mean LMP
  std::vector<bool> lmp_uniform;         // per t: LMPs equal across buses in every scenario

  double total_cost = 0.0;               // recomputed from primal values
  double conventional_cost = 0.0;
  double expected_spillage_penalty = 0.0;
  double expected_spillage_mwh = 0.0;

  double at3(const std::vector<double>& v, int i, int s, int t) const {
    return v[(static_cast<std::size_t>(i) * num_scenarios + s) * horizon + t];
  }
  double gen_p(int g, int t) const { return gen_setpoints_mw[g * horizon + t]; }
};

// Maps an optimal solution back to physical quantities. Throws
// Error(Errc::status_not_optimal) for non-optimal solutions.
DispatchReport extract(const StochasticProgram& program, const LpSolution& solution,
                       const Network& network, const ScenarioSet& scenarios);

// Residuals of the physical constraints evaluated on a report; used to audit
// solutions independently of the solver.
struct DispatchDiagnostics {
  double max_balance_residual_mw = 0.0;
  double max_flow_angle_mismatch_mw = 0.0;
  double max_conservation_error_mw = 0.0;
  double max_gen_bound_violation_mw = 0.0;
  double max_ramp_violation_mw = 0.0;
  double max_wind_bound_violation_mw = 0.0;
  double decomposition_error = 0.0;  // |conventional + spillage - total| / (1+|total|)
};

DispatchDiagnostics diagnose(const StochasticProgram& program, const DispatchReport& report,
                             const Network& network, const ScenarioSet& scenarios);

}  // namespace flexopf

#endif  // FLEXOPF_FORMULATION_HPP_
