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

#include "flexopf/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "flexopf/errors.hpp"

namespace flexopf {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_matrix: return "MALFORMED_MATRIX";
    case Errc::unsupported_cost_model: return "UNSUPPORTED_COST_MODEL";
    case Errc::missing_slack: return "MISSING_SLACK";
    case Errc::zero_reactance: return "ZERO_REACTANCE";
    case Errc::schema_violation: return "SCHEMA_VIOLATION";
    case Errc::dim_mismatch: return "DIM_MISMATCH";
    case Errc::prob_disagreement: return "PROB_DISAGREEMENT";
    case Errc::prob_sum: return "PROB_SUM";
    case Errc::negative_output: return "NEGATIVE_OUTPUT";
    case Errc::unknown_load_id: return "UNKNOWN_LOAD_ID";
    case Errc::horizon_mismatch: return "HORIZON_MISMATCH";
    case Errc::nonconvex_cost: return "NONCONVEX_COST";
    case Errc::status_not_optimal: return "STATUS_NOT_OPTIMAL";
    case Errc::numerical_failure: return "NUMERICAL_FAILURE";
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
    case Errc::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(Errc code, std::string message, std::string where)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message +
                         (where.empty() ? "" : " (" + where + ")")),
      code_(code),
      where_(std::move(where)) {}

CostFunction CostFunction::linear(double c1, double c0) {
  CostFunction f;
  f.kind_ = Kind::linear;
  f.c1_ = c1;
  f.c0_ = c0;
  return f;
}

CostFunction CostFunction::quadratic(double c2, double c1, double c0) {
  CostFunction f;
  f.kind_ = Kind::quadratic;
  f.c2_ = c2;
  f.c1_ = c1;
  f.c0_ = c0;
  return f;
}

CostFunction CostFunction::piecewise_linear(std::vector<Point> points) {
  CostFunction f;
  f.kind_ = Kind::piecewise_linear;
  f.points_ = std::move(points);
  return f;
}

double CostFunction::value(double p) const {
  switch (kind_) {
    case Kind::linear: return c1_ * p + c0_;
    case Kind::quadratic: return (c2_ * p + c1_) * p + c0_;
    case Kind::piecewise_linear: break;
  }
  const auto& pts = points_;
  if (pts.empty()) return 0.0;
  if (p <= pts.front().p_mw) {
    if (pts.size() == 1) return pts.front().cost;
    const double slope =
        (pts[1].cost - pts[0].cost) / (pts[1].p_mw - pts[0].p_mw);
    return pts[0].cost + slope * (p - pts[0].p_mw);
  }
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (p <= pts[k].p_mw) {
      const double slope =
          (pts[k].cost - pts[k - 1].cost) / (pts[k].p_mw - pts[k - 1].p_mw);
      return pts[k - 1].cost + slope * (p - pts[k - 1].p_mw);
    }
  }
  const auto& a = pts[pts.size() - 2];
  const auto& b = pts.back();
  const double slope = (b.cost - a.cost) / (b.p_mw - a.p_mw);
  return b.cost + slope * (p - b.p_mw);
}

double CostFunction::marginal(double p) const {
  switch (kind_) {
    case Kind::linear: return c1_;
    case Kind::quadratic: return 2.0 * c2_ * p + c1_;
    case Kind::piecewise_linear: break;
  }
  const auto& pts = points_;
  if (pts.size() < 2) return 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (p < pts[k].p_mw || k + 1 == pts.size()) {
      return (pts[k].cost - pts[k - 1].cost) / (pts[k].p_mw - pts[k - 1].p_mw);
    }
  }
  return 0.0;
}

bool CostFunction::convex_nondecreasing_on(double p_min, double p_max) const {
  switch (kind_) {
    case Kind::linear:
      return c1_ >= 0.0 && std::isfinite(c1_) && std::isfinite(c0_);
    case Kind::quadratic:
      if (!(std::isfinite(c2_) && std::isfinite(c1_) && std::isfinite(c0_))) return false;
      if (c2_ < 0.0) return false;
      return 2.0 * c2_ * p_min + c1_ >= 0.0;  // convex, so min slope is at p_min
    case Kind::piecewise_linear: {
      if (points_.size() < 2) return false;
      double prev_slope = 0.0;
      for (std::size_t k = 1; k < points_.size(); ++k) {
        const double dx = points_[k].p_mw - points_[k - 1].p_mw;
        if (!(dx > 0.0)) return false;
        const double slope = (points_[k].cost - points_[k - 1].cost) / dx;
        if (!std::isfinite(slope) || slope < 0.0) return false;
        if (k > 1 && slope < prev_slope - 1e-12 * (1.0 + std::fabs(prev_slope))) return false;
        prev_slope = slope;
      }
      (void)p_min;
      (void)p_max;
      return true;
    }
  }
  return false;
}

ScenarioSet ScenarioSet::deterministic(int num_farms, int horizon) {
  ScenarioSet s;
  s.num_farms = num_farms;
  s.num_scenarios = 1;
  s.horizon = horizon;
  s.probabilities = {1.0};
  s.output_mw.assign(static_cast<std::size_t>(num_farms) * horizon, 0.0);
  return s;
}

int Network::bus_index(int id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int Network::slack_index() const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].is_slack) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

void check_unique_ids(const auto& items, const char* what, std::vector<Violation>& out) {
  std::unordered_set<int> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      out.push_back({"DUPLICATE_ID", fmt("duplicate %s id %d", what, item.id)});
    }
  }
}

bool connected(const Network& net) {
  if (net.buses.empty()) return false;
  std::unordered_map<int, int> index;
  for (std::size_t i = 0; i < net.buses.size(); ++i) index[net.buses[i].id] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(net.buses.size());
  for (const auto& line : net.lines) {
    auto f = index.find(line.from_bus);
    auto t = index.find(line.to_bus);
    if (f == index.end() || t == index.end()) continue;
    adj[f->second].push_back(t->second);
    adj[t->second].push_back(f->second);
  }
  std::vector<char> seen(net.buses.size(), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    for (int nb : adj[b]) {
      if (!seen[nb]) {
        seen[nb] = 1;
        ++reached;
        stack.push_back(nb);
      }
    }
  }
  return reached == net.buses.size();
}

// A load counts as effectively inflexible when its interval pins alpha to 1.
bool effectively_inflexible(const Load& load) {
  if (!load.is_flexible) return true;
  for (std::size_t t = 0; t < load.flex_lo.size(); ++t) {
    if (load.flex_lo[t] != 1.0 || load.flex_hi[t] != 1.0) return false;
  }
  return true;
}

}  // namespace

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> out;

  if (net.horizon_length < 1) {
    out.push_back({"HORIZON_INVALID", fmt("horizon_length %d < 1", net.horizon_length)});
  }
  if (!(net.base_mva > 0.0) || !std::isfinite(net.base_mva)) {
    out.push_back({"BASE_MVA_INVALID", fmt("base_mva %g must be positive", net.base_mva)});
  }
  if (net.buses.empty()) {
    out.push_back({"NO_BUSES", "network has no buses"});
    return out;
  }

  check_unique_ids(net.buses, "bus", out);
  check_unique_ids(net.lines, "line", out);
  check_unique_ids(net.generators, "generator", out);
  check_unique_ids(net.wind_farms, "wind farm", out);
  check_unique_ids(net.loads, "load", out);

  int slack_count = 0;
  for (const auto& bus : net.buses) slack_count += bus.is_slack ? 1 : 0;
  if (slack_count == 0) out.push_back({"SLACK_MISSING", "no bus is marked slack"});
  if (slack_count > 1) out.push_back({"SLACK_MULTIPLE", fmt("%d buses marked slack", slack_count)});

  std::unordered_set<int> bus_ids;
  for (const auto& bus : net.buses) bus_ids.insert(bus.id);
  auto known = [&](int id) { return bus_ids.count(id) != 0; };

  for (const auto& line : net.lines) {
    if (line.from_bus == line.to_bus) {
      out.push_back({"LINE_SELF_LOOP", fmt("line %d connects bus %d to itself", line.id, line.from_bus)});
    }
    if (!known(line.from_bus) || !known(line.to_bus)) {
      out.push_back({"UNKNOWN_BUS", fmt("line %d references a missing bus", line.id)});
    }
    if (!(line.tap_ratio > 0.0)) {
      out.push_back({"TAP_NONPOSITIVE", fmt("line %d tap ratio %g", line.id, line.tap_ratio)});
    }
    if (!std::isfinite(line.susceptance_pu) || line.susceptance_pu == 0.0) {
      out.push_back({"SUSCEPTANCE_INVALID", fmt("line %d susceptance %g", line.id, line.susceptance_pu)});
    }
    if (line.flow_limit_mw && !(*line.flow_limit_mw > 0.0)) {
      out.push_back({"FLOW_LIMIT_NONPOSITIVE", fmt("line %d limit %g", line.id, *line.flow_limit_mw)});
    }
  }

  for (const auto& gen : net.generators) {
    if (!known(gen.bus)) out.push_back({"UNKNOWN_BUS", fmt("generator %d references a missing bus", gen.id)});
    if (!(0.0 <= gen.p_min_mw && gen.p_min_mw <= gen.p_max_mw)) {
      out.push_back({"GEN_BOUNDS", fmt("generator %d bounds [%g, %g]", gen.id, gen.p_min_mw, gen.p_max_mw)});
    }
    if (gen.ramp_down_mw > 0.0 || gen.ramp_up_mw < 0.0) {
      out.push_back({"RAMP_SIGN", fmt("generator %d ramp [%g, %g]", gen.id, gen.ramp_down_mw, gen.ramp_up_mw)});
    }
    if (!gen.cost.convex_nondecreasing_on(gen.p_min_mw, gen.p_max_mw)) {
      out.push_back({"COST_NOT_CONVEX_INCREASING", fmt("generator %d cost", gen.id)});
    }
  }

  for (const auto& farm : net.wind_farms) {
    if (!known(farm.bus)) out.push_back({"UNKNOWN_BUS", fmt("wind farm %d references a missing bus", farm.id)});
    if (farm.spillage_cost < 0.0) {
      out.push_back({"SPILL_COST_NEGATIVE", fmt("wind farm %d spillage cost %g", farm.id, farm.spillage_cost)});
    }
  }

  const std::size_t T = static_cast<std::size_t>(std::max(net.horizon_length, 1));
  for (const auto& load : net.loads) {
    if (!known(load.bus)) out.push_back({"UNKNOWN_BUS", fmt("load %d references a missing bus", load.id)});
    if (load.demand_mw.size() != T || load.flex_lo.size() != T || load.flex_hi.size() != T) {
      out.push_back({"LOAD_SERIES_LENGTH",
                     fmt("load %d series length %zu, horizon %zu", load.id, load.demand_mw.size(), T)});
      continue;
    }
    for (std::size_t t = 0; t < T; ++t) {
      if (load.demand_mw[t] < 0.0) {
        out.push_back({"LOAD_DEMAND_NEGATIVE", fmt("load %d demand %g at period %zu", load.id, load.demand_mw[t], t + 1)});
        break;
      }
    }
    for (std::size_t t = 0; t < T; ++t) {
      if (load.flex_lo[t] < 0.0) {
        out.push_back({"FLEX_NEGATIVE", fmt("load %d flex_lo %g at period %zu", load.id, load.flex_lo[t], t + 1)});
        break;
      }
    }
    for (std::size_t t = 0; t < T; ++t) {
      if (load.flex_lo[t] > load.flex_hi[t]) {
        out.push_back({"FLEX_INTERVAL_INVERTED",
                       fmt("load %d interval [%g, %g] at period %zu", load.id, load.flex_lo[t], load.flex_hi[t], t + 1)});
        break;
      }
    }
    if (!load.is_flexible) {
      for (std::size_t t = 0; t < T; ++t) {
        if (load.flex_lo[t] != 1.0 || load.flex_hi[t] != 1.0) {
          out.push_back({"INFLEXIBLE_FLEX_NOT_UNIT",
                         fmt("inflexible load %d has interval [%g, %g] at period %zu", load.id,
                             load.flex_lo[t], load.flex_hi[t], t + 1)});
          break;
        }
      }
    }
  }

  if (!connected(net)) out.push_back({"NETWORK_DISCONNECTED", "network graph is not connected"});

  return out;
}

std::vector<Violation> validate(const Network& net, const ScenarioSet& scen) {
  std::vector<Violation> out = validate(net);

  if (scen.num_farms != static_cast<int>(net.wind_farms.size())) {
    out.push_back({"DIM_MISMATCH", fmt("scenario set has %d farms, network has %zu",
                                       scen.num_farms, net.wind_farms.size())});
  }
  if (scen.horizon != net.horizon_length) {
    out.push_back({"DIM_MISMATCH", fmt("scenario horizon %d, network horizon %d",
                                       scen.horizon, net.horizon_length)});
  }
  if (scen.num_scenarios < 1) {
    out.push_back({"DIM_MISMATCH", "scenario set is empty"});
    return out;
  }
  if (static_cast<int>(scen.probabilities.size()) != scen.num_scenarios) {
    out.push_back({"DIM_MISMATCH", fmt("%zu probabilities for %d scenarios",
                                       scen.probabilities.size(), scen.num_scenarios)});
    return out;
  }
  const std::size_t want =
      static_cast<std::size_t>(scen.num_farms) * scen.num_scenarios * scen.horizon;
  if (scen.output_mw.size() != want) {
    out.push_back({"DIM_MISMATCH", fmt("output tensor has %zu entries, expected %zu",
                                       scen.output_mw.size(), want)});
    return out;
  }

  double sum = 0.0;
  for (double p : scen.probabilities) {
    if (!(p > 0.0)) {
      out.push_back({"PROB_NONPOSITIVE", fmt("scenario probability %g", p)});
      break;
    }
  }
  sum = std::accumulate(scen.probabilities.begin(), scen.probabilities.end(), 0.0);
  if (std::fabs(sum - 1.0) > 1e-9) {
    out.push_back({"PROB_SUM", fmt("probabilities sum to %.12g", sum)});
  }
  for (double v : scen.output_mw) {
    if (v < 0.0) {
      out.push_back({"NEGATIVE_OUTPUT", fmt("scenario output %g MW", v)});
      break;
    }
  }
  return out;
}

std::vector<PrescreenWarning> feasibility_prescreen(const Network& net,
                                                    const ScenarioSet* scen) {
  std::vector<PrescreenWarning> out;
  const int T = net.horizon_length;
  if (T < 1 || net.buses.empty()) return out;

  std::vector<double> inflexible(T, 0.0), total(T, 0.0);
  for (const auto& load : net.loads) {
    if (static_cast<int>(load.demand_mw.size()) != T) continue;
    for (int t = 0; t < T; ++t) {
      total[t] += load.demand_mw[t];
      if (effectively_inflexible(load)) inflexible[t] += load.demand_mw[t];
    }
  }

  double ramp_up = 0.0, ramp_down = 0.0, capacity = 0.0;
  for (const auto& gen : net.generators) {
    ramp_up += gen.ramp_up_mw;
    ramp_down += -gen.ramp_down_mw;
    capacity += gen.p_max_mw;
  }

  double max_step_up = 0.0, max_step_down = 0.0;
  for (int t = 0; t + 1 < T; ++t) {
    const double step = inflexible[t + 1] - inflexible[t];
    max_step_up = std::max(max_step_up, step);
    max_step_down = std::max(max_step_down, -step);
  }
  if (max_step_up > ramp_up + 1e-9 || max_step_down > ramp_down + 1e-9) {
    out.push_back({"RAMP_VS_DEMAND_STEP",
                   fmt("inflexible demand steps up to %.6g/%.6g MW exceed fleet ramp %.6g/%.6g MW",
                       max_step_up, max_step_down, ramp_up, ramp_down)});
  }

  double max_wind = 0.0;
  if (scen != nullptr && scen->num_farms > 0) {
    for (int s = 0; s < scen->num_scenarios; ++s) {
      for (int t = 0; t < scen->horizon; ++t) {
        double sum = 0.0;
        for (int w = 0; w < scen->num_farms; ++w) sum += scen->output(w, s, t);
        max_wind = std::max(max_wind, sum);
      }
    }
  }
  const double peak = total.empty() ? 0.0 : *std::max_element(total.begin(), total.end());
  if (peak > capacity + max_wind + 1e-9) {
    out.push_back({"CAPACITY_SHORTFALL",
                   fmt("peak demand %.6g MW exceeds capacity %.6g MW plus max wind %.6g MW",
                       peak, capacity, max_wind)});
  }
  return out;
}

}  // namespace flexopf
