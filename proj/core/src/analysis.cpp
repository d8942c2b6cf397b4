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

#include "flexopf/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "flexopf/errors.hpp"

namespace flexopf {

namespace {

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SolveOutcome {
  bool ok = false;
  std::string error;
  double total_cost = 0.0;
  double expected_spillage_mwh = 0.0;
  std::vector<double> system_price;
  double wall = 0.0;
  std::int64_t iterations = 0;
};

SolveOutcome solve_once(const Network& net, const ScenarioSet& scen,
                        const BuildOptions& options, const SolverParams& params) {
  SolveOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const StochasticProgram prog = build(net, scen, options);
    const LpSolution sol = solve(prog.lp, params);
    out.iterations = sol.iterations;
    if (sol.status != SolveStatus::optimal) {
      out.error = to_string(sol.status);
      out.wall = wall_seconds(t0);
      return out;
    }
    const DispatchReport rep = extract(prog, sol, net, scen);
    out.ok = true;
    out.total_cost = rep.total_cost;
    out.expected_spillage_mwh = rep.expected_spillage_mwh;
    out.system_price = rep.system_price;
  } catch (const Error& e) {
    out.error = e.what();
  }
  out.wall = wall_seconds(t0);
  return out;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_int_list(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

Network with_uniform_flexibility(const Network& network, double flexibility) {
  Network out = network;
  const int T = out.horizon_length;
  for (auto& load : out.loads) {
    if (!load.is_flexible) continue;
    load.flex_lo.assign(T, std::max(0.0, 1.0 - flexibility));
    load.flex_hi.assign(T, 1.0 + flexibility);
  }
  return out;
}

Network with_uniform_ramp(const Network& network, double fraction) {
  Network out = network;
  for (auto& gen : out.generators) {
    gen.ramp_down_mw = -fraction * gen.p_max_mw;
    gen.ramp_up_mw = fraction * gen.p_max_mw;
  }
  return out;
}

Network with_flexible_buses(const Network& network, const std::vector<int>& buses) {
  Network out = network;
  for (auto& load : out.loads) {
    const bool flex = std::find(buses.begin(), buses.end(), load.bus) != buses.end();
    load.is_flexible = flex;
    if (!flex) {
      load.flex_lo.assign(out.horizon_length, 1.0);
      load.flex_hi.assign(out.horizon_length, 1.0);
    }
  }
  return out;
}

ScenarioSet scale_outputs(const ScenarioSet& scenarios, double factor) {
  ScenarioSet out = scenarios;
  for (double& v : out.output_mw) v *= factor;
  return out;
}

ScenarioSet subset_scenarios(const ScenarioSet& master, const std::vector<int>& indices) {
  if (indices.empty()) throw Error(Errc::invalid_argument, "scenario subset is empty");
  ScenarioSet out;
  out.num_farms = master.num_farms;
  out.num_scenarios = static_cast<int>(indices.size());
  out.horizon = master.horizon;
  double sum = 0.0;
  for (int id : indices) {
    if (id < 0 || id >= master.num_scenarios) {
      throw Error(Errc::invalid_argument, "scenario index out of range");
    }
    sum += master.probabilities[id];
  }
  out.probabilities.reserve(indices.size());
  for (int id : indices) out.probabilities.push_back(master.probabilities[id] / sum);
  out.output_mw.resize(static_cast<std::size_t>(out.num_farms) * out.num_scenarios *
                       out.horizon);
  for (int w = 0; w < out.num_farms; ++w) {
    for (std::size_t s = 0; s < indices.size(); ++s) {
      for (int t = 0; t < out.horizon; ++t) {
        out.output(w, static_cast<int>(s), t) = master.output(w, indices[s], t);
      }
    }
  }
  return out;
}

std::vector<int> sample_scenario_indices(int master_size, int count, std::uint64_t seed) {
  if (count < 1 || count > master_size) {
    throw Error(Errc::invalid_argument, "scenario sample count out of range");
  }
  // Seeded Fisher-Yates prefix over the index range.
  std::vector<int> ids(master_size);
  std::iota(ids.begin(), ids.end(), 0);
  std::uint64_t state = seed + 0x9e3779b97f4a7c15ull;
  auto next = [&state]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  for (int k = 0; k < count; ++k) {
    const int j = k + static_cast<int>(next() % static_cast<std::uint64_t>(master_size - k));
    std::swap(ids[k], ids[j]);
  }
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

ScenarioSet scenarios_for_penetration(const ScenarioSet& shapes, int num_farms,
                                      const Network& network, double penetration) {
  if (shapes.num_farms < 1) {
    throw Error(Errc::invalid_argument, "shape set has no farm trajectories");
  }
  if (shapes.horizon != network.horizon_length) {
    throw Error(Errc::dim_mismatch, "shape horizon does not match the network");
  }
  double demand_energy = 0.0;
  for (const auto& load : network.loads) {
    for (double d : load.demand_mw) demand_energy += d;
  }
  ScenarioSet out;
  out.num_farms = num_farms;
  out.num_scenarios = shapes.num_scenarios;
  out.horizon = shapes.horizon;
  out.probabilities = shapes.probabilities;
  out.output_mw.resize(static_cast<std::size_t>(num_farms) * out.num_scenarios * out.horizon);
  // Farms cycle through the shape trajectories; outputs are then scaled so
  // the expected wind energy hits the requested share of demand energy.
  double expected = 0.0;
  for (int w = 0; w < num_farms; ++w) {
    const int src = w % shapes.num_farms;
    for (int s = 0; s < out.num_scenarios; ++s) {
      for (int t = 0; t < out.horizon; ++t) {
        const double v = shapes.output(src, s, t);
        out.output(w, s, t) = v;
        expected += out.probabilities[s] * v;
      }
    }
  }
  const double target = penetration * demand_energy;
  const double factor = expected > 0.0 ? target / expected : 0.0;
  for (double& v : out.output_mw) v *= factor;
  return out;
}

Network add_wind_farms(const Network& network, const std::vector<int>& buses) {
  Network out = network;
  int next_id = 0;
  for (const auto& farm : out.wind_farms) next_id = std::max(next_id, farm.id);
  for (int bus : buses) {
    WindFarm farm;
    farm.id = ++next_id;
    farm.bus = bus;
    farm.spillage_cost = 1.0;
    out.wind_farms.push_back(farm);
  }
  return out;
}

double demand_share(const Network& network, const std::vector<int>& buses) {
  double total = 0.0, share = 0.0;
  for (const auto& load : network.loads) {
    double energy = 0.0;
    for (double d : load.demand_mw) energy += d;
    total += energy;
    if (std::find(buses.begin(), buses.end(), load.bus) != buses.end()) share += energy;
  }
  return total > 0.0 ? share / total : 0.0;
}

SweepResult flexibility_sweep(const Network& network, const ScenarioSet& scenarios,
                              const std::vector<double>& flex_levels,
                              const BuildOptions& options, const SolverParams& params) {
  SweepResult result;
  result.kind = "flex";
  result.options = options;
  double base_cost = 0.0;
  bool have_base = false;
  for (double f : flex_levels) {
    const Network net = with_uniform_flexibility(network, f);
    const SolveOutcome run = solve_once(net, scenarios, options, params);
    SweepPoint p;
    p.axis = f;
    p.ok = run.ok;
    p.error = run.error;
    p.total_cost = run.total_cost;
    p.expected_spillage_mwh = run.expected_spillage_mwh;
    p.mean_spillage_mw = scenarios.horizon > 0 ? run.expected_spillage_mwh / scenarios.horizon : 0.0;
    p.system_price = run.system_price;
    p.wall_seconds = run.wall;
    p.iterations = run.iterations;
    if (run.ok && !have_base) {
      base_cost = run.total_cost;
      have_base = true;
    }
    p.improvement = run.ok && have_base && base_cost != 0.0
                        ? (base_cost - run.total_cost) / base_cost
                        : 0.0;
    result.points.push_back(std::move(p));
  }
  return result;
}

SweepResult penetration_sweep(const Network& network, const ScenarioSet& scenarios,
                              const std::vector<double>& scale_factors,
                              const BuildOptions& options, const SolverParams& params) {
  SweepResult result;
  result.kind = "penetration";
  result.options = options;
  double base_cost = 0.0;
  bool have_base = false;
  for (double factor : scale_factors) {
    const ScenarioSet scaled = scale_outputs(scenarios, factor);
    const SolveOutcome run = solve_once(network, scaled, options, params);
    SweepPoint p;
    p.axis = factor;
    p.ok = run.ok;
    p.error = run.error;
    p.total_cost = run.total_cost;
    p.expected_spillage_mwh = run.expected_spillage_mwh;
    p.mean_spillage_mw = scenarios.horizon > 0 ? run.expected_spillage_mwh / scenarios.horizon : 0.0;
    p.system_price = run.system_price;
    p.wall_seconds = run.wall;
    p.iterations = run.iterations;
    if (run.ok && !have_base) {
      base_cost = run.total_cost;
      have_base = true;
    }
    p.improvement = run.ok && have_base && base_cost != 0.0
                        ? (base_cost - run.total_cost) / base_cost
                        : 0.0;
    result.points.push_back(std::move(p));
  }
  return result;
}

RobustnessResult scenario_robustness(const Network& network, const ScenarioSet& master,
                                     const std::vector<int>& scenario_counts,
                                     std::uint64_t seed, const BuildOptions& options,
                                     const SolverParams& params) {
  RobustnessResult result;
  result.seed = seed;
  double first_cost = 0.0;
  bool have_first = false;
  for (int count : scenario_counts) {
    RobustnessPoint p;
    p.scenario_count = count;
    try {
      const auto ids = sample_scenario_indices(master.num_scenarios, count, seed);
      const ScenarioSet subset = subset_scenarios(master, ids);
      const SolveOutcome run = solve_once(network, subset, options, params);
      p.ok = run.ok;
      p.error = run.error;
      p.total_cost = run.total_cost;
      p.mean_spillage_mw = master.horizon > 0 ? run.expected_spillage_mwh / master.horizon : 0.0;
      if (run.ok && !have_first) {
        first_cost = run.total_cost;
        have_first = true;
      }
      p.cost_rel_diff_vs_first =
          run.ok && have_first && first_cost != 0.0
              ? (run.total_cost - first_cost) / first_cost
              : 0.0;
    } catch (const Error& e) {
      p.error = e.what();
    }
    result.points.push_back(std::move(p));
  }
  return result;
}

std::vector<ImprovementRow> improvement_table(const std::vector<ImprovementRowSpec>& specs,
                                              const ScenarioSet& shapes,
                                              const BuildOptions& options,
                                              const SolverParams& params) {
  std::vector<ImprovementRow> rows;
  for (const auto& spec : specs) {
    ImprovementRow row;
    row.case_name = spec.case_name;
    row.wind_buses = spec.wind_buses;
    row.penetration = spec.penetration;
    row.flexible_buses = spec.flexible_buses;
    row.flexibility = spec.flexibility;
    row.reference_improvement = spec.reference_improvement;
    try {
      const Network with_farms = add_wind_farms(spec.network, spec.wind_buses);
      const ScenarioSet scen = scenarios_for_penetration(
          shapes, static_cast<int>(spec.wind_buses.size()), with_farms, spec.penetration);
      const Network flagged = with_flexible_buses(with_farms, spec.flexible_buses);
      row.d0_load_share = demand_share(flagged, spec.flexible_buses);

      const Network inflexible = with_uniform_flexibility(flagged, 0.0);
      const SolveOutcome base = solve_once(inflexible, scen, options, params);
      const Network flexible = with_uniform_flexibility(flagged, spec.flexibility);
      const SolveOutcome flex = solve_once(flexible, scen, options, params);
      if (base.ok && flex.ok && base.total_cost != 0.0) {
        row.ok = true;
        row.improvement = (base.total_cost - flex.total_cost) / base.total_cost;
      } else {
        row.error = !base.ok ? base.error : flex.error;
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TimingPoint> timing_study(const std::vector<TimingCase>& cases, int repetitions,
                                      const BuildOptions& options, const SolverParams& params) {
  std::vector<TimingPoint> points;
  for (const auto& c : cases) {
    TimingPoint p;
    p.case_name = c.name;
    double total = 0.0;
    std::int64_t iter_total = 0;
    p.min_seconds = kInf;
    p.max_seconds = 0.0;
    int successes = 0;
    for (int rep = 0; rep < std::max(repetitions, 1); ++rep) {
      const SolveOutcome run = solve_once(c.network, c.scenarios, options, params);
      if (!run.ok) {
        p.error = run.error;
        continue;
      }
      ++successes;
      total += run.wall;
      iter_total += run.iterations;
      p.min_seconds = std::min(p.min_seconds, run.wall);
      p.max_seconds = std::max(p.max_seconds, run.wall);
    }
    if (successes > 0) {
      p.ok = true;
      p.mean_seconds = total / successes;
      p.mean_iterations = iter_total / successes;
      try {
        const StochasticProgram prog = build(c.network, c.scenarios, options);
        p.rows = prog.lp.num_rows();
        p.cols = prog.lp.num_vars();
      } catch (const Error&) {
      }
    } else {
      p.min_seconds = 0.0;
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::string to_csv(const SweepResult& result) {
  std::string out = "axis,status,total_cost,improvement,expected_spillage_mwh,mean_spillage_mw,"
                    "wall_seconds,iterations\n";
  for (const auto& p : result.points) {
    out += format_double(p.axis);
    out += ',';
    out += p.ok ? "ok" : ("error:" + p.error);
    out += ',';
    out += format_double(p.total_cost);
    out += ',';
    out += format_double(p.improvement);
    out += ',';
    out += format_double(p.expected_spillage_mwh);
    out += ',';
    out += format_double(p.mean_spillage_mw);
    out += ',';
    out += format_double(p.wall_seconds);
    out += ',';
    out += std::to_string(p.iterations);
    out += '\n';
  }
  return out;
}

std::string to_csv(const RobustnessResult& result) {
  std::string out = "scenario_count,status,total_cost,mean_spillage_mw,cost_rel_diff_vs_first\n";
  for (const auto& p : result.points) {
    out += std::to_string(p.scenario_count);
    out += ',';
    out += p.ok ? "ok" : ("error:" + p.error);
    out += ',';
    out += format_double(p.total_cost);
    out += ',';
    out += format_double(p.mean_spillage_mw);
    out += ',';
    out += format_double(p.cost_rel_diff_vs_first);
    out += '\n';
  }
  return out;
}

std::string to_csv(const std::vector<ImprovementRow>& rows) {
  std::string out =
      "case,wind_buses,penetration_pct,flexible_buses,d0_load_share_pct,flexibility_pct,"
      "status,improvement_pct,reference_pct\n";
  for (const auto& r : rows) {
    out += r.case_name;
    out += ",\"" + format_int_list(r.wind_buses) + "\",";
    out += format_double(100.0 * r.penetration);
    out += ",\"" + format_int_list(r.flexible_buses) + "\",";
    out += format_double(100.0 * r.d0_load_share);
    out += ',';
    out += format_double(100.0 * r.flexibility);
    out += ',';
    out += r.ok ? "ok" : ("error:" + r.error);
    out += ',';
    out += format_double(100.0 * r.improvement);
    out += ',';
    out += r.reference_improvement >= 0.0 ? format_double(100.0 * r.reference_improvement)
                                          : std::string("n/a");
    out += '\n';
  }
  return out;
}

std::string to_csv(const std::vector<TimingPoint>& points) {
  std::string out = "case,status,rows,cols,min_seconds,mean_seconds,max_seconds,mean_iterations\n";
  for (const auto& p : points) {
    out += p.case_name;
    out += ',';
    out += p.ok ? "ok" : ("error:" + p.error);
    out += ',';
    out += std::to_string(p.rows);
    out += ',';
    out += std::to_string(p.cols);
    out += ',';
    out += format_double(p.min_seconds);
    out += ',';
    out += format_double(p.mean_seconds);
    out += ',';
    out += format_double(p.max_seconds);
    out += ',';
    out += std::to_string(p.mean_iterations);
    out += '\n';
  }
  return out;
}

}  // namespace flexopf
