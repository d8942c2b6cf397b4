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
#include <unordered_map>

#include "flexopf/errors.hpp"
#include "flexopf/formulation.hpp"

namespace flexopf {

namespace {

constexpr double kLmpUniformTol = 1e-6;  // $/MWh

std::size_t idx3(int i, int s, int t, int S, int T) {
  return (static_cast<std::size_t>(i) * S + s) * T + t;
}

}  // namespace

DispatchReport extract(const StochasticProgram& prog, const LpSolution& sol,
                       const Network& net, const ScenarioSet& scenarios) {
  if (sol.status != SolveStatus::optimal) {
    throw Error(Errc::status_not_optimal,
                std::string("cannot extract a dispatch from a ") + to_string(sol.status) +
                    " solution");
  }
  const VariableIndex& ix = prog.index;
  const int B = ix.buses(), L = ix.lines(), G = ix.generators(), W = ix.farms();
  const int D = ix.loads(), S = ix.scenarios(), T = ix.horizon();
  if (static_cast<int>(sol.primal.size()) != ix.num_variables()) {
    throw Error(Errc::dim_mismatch, "solution does not match the program's variable count");
  }

  DispatchReport rep;
  rep.num_gens = G;
  rep.num_farms = W;
  rep.num_loads = D;
  rep.num_buses = B;
  rep.num_lines = L;
  rep.num_scenarios = S;
  rep.horizon = T;

  rep.gen_setpoints_mw.assign(static_cast<std::size_t>(G) * T, 0.0);
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < T; ++t) rep.gen_setpoints_mw[g * T + t] = sol.primal[ix.gen_p(g, t)];
  }

  rep.wind_used_mw.assign(static_cast<std::size_t>(W) * S * T, 0.0);
  rep.spillage_mw.assign(static_cast<std::size_t>(W) * S * T, 0.0);
  rep.expected_spillage_mwh = 0.0;
  rep.expected_spillage_penalty = 0.0;
  for (int w = 0; w < W; ++w) {
    for (int s = 0; s < S; ++s) {
      const int sid = prog.scenario_ids[s];
      const double prob = prog.scenario_prob[s];
      for (int t = 0; t < T; ++t) {
        const double avail = scenarios.output(w, sid, t);
        double used = sol.primal[ix.wind_p(w, s, t)];
        used = std::clamp(used, 0.0, avail);
        const double spill = avail - used;
        rep.wind_used_mw[idx3(w, s, t, S, T)] = used;
        rep.spillage_mw[idx3(w, s, t, S, T)] = spill;
        rep.expected_spillage_mwh += prob * spill;
        rep.expected_spillage_penalty += prob * net.wind_farms[w].spillage_cost * spill;
      }
    }
  }

  rep.alpha.assign(static_cast<std::size_t>(D) * S * T, 0.0);
  rep.load_served_mw.assign(static_cast<std::size_t>(D) * S * T, 0.0);
  for (int d = 0; d < D; ++d) {
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        const double a = sol.primal[ix.load_alpha(d, s, t)];
        rep.alpha[idx3(d, s, t, S, T)] = a;
        rep.load_served_mw[idx3(d, s, t, S, T)] = a * net.loads[d].demand_mw[t];
      }
    }
  }

  rep.angles_rad.assign(static_cast<std::size_t>(B) * S * T, 0.0);
  for (int b = 0; b < B; ++b) {
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        rep.angles_rad[idx3(b, s, t, S, T)] = sol.primal[ix.angle(b, s, t)];
      }
    }
  }
  rep.flows_mw.assign(static_cast<std::size_t>(L) * S * T, 0.0);
  for (int l = 0; l < L; ++l) {
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        rep.flows_mw[idx3(l, s, t, S, T)] = sol.primal[ix.flow(l, s, t)];
      }
    }
  }

  // LMPs: balance-row duals conditional on the scenario.
  rep.lmp.assign(static_cast<std::size_t>(B) * S * T, 0.0);
  for (int s = 0; s < S; ++s) {
    const double prob = prog.scenario_prob[s];
    for (int t = 0; t < T; ++t) {
      for (int b = 0; b < B; ++b) {
        const int row = (s * T + t) * B + b;
        rep.lmp[idx3(b, s, t, S, T)] = sol.duals[row] / prob;
      }
    }
  }
  rep.system_price.assign(T, 0.0);
  rep.lmp_uniform.assign(T, true);
  for (int t = 0; t < T; ++t) {
    double price = 0.0;
    bool uniform = true;
    for (int s = 0; s < S; ++s) {
      double lo = kInf, hi = -kInf, mean = 0.0;
      for (int b = 0; b < B; ++b) {
        const double v = rep.lmp[idx3(b, s, t, S, T)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
      }
      mean /= B;
      if (hi - lo > kLmpUniformTol) uniform = false;
      price += prog.scenario_prob[s] * mean;
    }
    rep.system_price[t] = price;
    rep.lmp_uniform[t] = uniform;
  }

  rep.conventional_cost = 0.0;
  for (int g = 0; g < G; ++g) {
    const CostFunction& eff = prog.effective_cost[g];
    for (int t = 0; t < T; ++t) rep.conventional_cost += eff.value(rep.gen_p(g, t));
  }
  rep.total_cost = rep.conventional_cost + rep.expected_spillage_penalty;
  return rep;
}

DispatchDiagnostics diagnose(const StochasticProgram& prog, const DispatchReport& rep,
                             const Network& net, const ScenarioSet& scenarios) {
  const VariableIndex& ix = prog.index;
  const int B = ix.buses(), L = ix.lines(), G = ix.generators(), W = ix.farms();
  const int D = ix.loads(), S = ix.scenarios(), T = ix.horizon();

  DispatchDiagnostics diag;

  std::unordered_map<int, int> bus_of_id;
  for (int b = 0; b < B; ++b) bus_of_id.emplace(net.buses[b].id, b);

  // Power balance residual per (b,s,t) from reported quantities.
  std::vector<double> injection(static_cast<std::size_t>(B));
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      std::fill(injection.begin(), injection.end(), 0.0);
      for (int g = 0; g < G; ++g) {
        injection[bus_of_id.at(net.generators[g].bus)] += rep.gen_p(g, t);
      }
      for (int w = 0; w < W; ++w) {
        injection[bus_of_id.at(net.wind_farms[w].bus)] += rep.at3(rep.wind_used_mw, w, s, t);
      }
      for (int d = 0; d < D; ++d) {
        injection[bus_of_id.at(net.loads[d].bus)] -= rep.at3(rep.load_served_mw, d, s, t);
      }
      for (int l = 0; l < L; ++l) {
        const double f = rep.at3(rep.flows_mw, l, s, t);
        injection[bus_of_id.at(net.lines[l].from_bus)] -= f;
        injection[bus_of_id.at(net.lines[l].to_bus)] += f;
      }
      for (int b = 0; b < B; ++b) {
        diag.max_balance_residual_mw =
            std::max(diag.max_balance_residual_mw, std::fabs(injection[b]));
      }
      for (int l = 0; l < L; ++l) {
        const Line& line = net.lines[l];
        const double k = line.susceptance_pu / line.tap_ratio * net.base_mva;
        const double from_angle = rep.at3(rep.angles_rad, bus_of_id.at(line.from_bus), s, t);
        const double to_angle = rep.at3(rep.angles_rad, bus_of_id.at(line.to_bus), s, t);
        const double mismatch = rep.at3(rep.flows_mw, l, s, t) - k * (from_angle - to_angle);
        diag.max_flow_angle_mismatch_mw =
            std::max(diag.max_flow_angle_mismatch_mw, std::fabs(mismatch));
      }
    }
  }

  for (int d = 0; d < D; ++d) {
    if (!net.loads[d].is_flexible) continue;
    double nominal = 0.0;
    for (int t = 0; t < T; ++t) nominal += net.loads[d].demand_mw[t];
    for (int s = 0; s < S; ++s) {
      double served = 0.0;
      for (int t = 0; t < T; ++t) served += rep.at3(rep.load_served_mw, d, s, t);
      diag.max_conservation_error_mw =
          std::max(diag.max_conservation_error_mw, std::fabs(served - nominal));
    }
  }

  for (int g = 0; g < G; ++g) {
    const Generator& gen = net.generators[g];
    for (int t = 0; t < T; ++t) {
      const double p = rep.gen_p(g, t);
      diag.max_gen_bound_violation_mw = std::max(
          {diag.max_gen_bound_violation_mw, gen.p_min_mw - p, p - gen.p_max_mw});
      if (t + 1 < T) {
        const double delta = rep.gen_p(g, t + 1) - p;
        diag.max_ramp_violation_mw =
            std::max({diag.max_ramp_violation_mw, gen.ramp_down_mw - delta,
                      delta - gen.ramp_up_mw});
      }
    }
  }

  for (int w = 0; w < W; ++w) {
    for (int s = 0; s < S; ++s) {
      const int sid = prog.scenario_ids[s];
      for (int t = 0; t < T; ++t) {
        const double used = rep.at3(rep.wind_used_mw, w, s, t);
        const double avail = scenarios.output(w, sid, t);
        diag.max_wind_bound_violation_mw =
            std::max({diag.max_wind_bound_violation_mw, -used, used - avail});
      }
    }
  }

  const double sum = rep.conventional_cost + rep.expected_spillage_penalty;
  diag.decomposition_error = std::fabs(sum - rep.total_cost) / (1.0 + std::fabs(rep.total_cost));
  return diag;
}

}  // namespace flexopf
