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

#include "flexopf/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "flexopf/errors.hpp"

namespace flexopf {

namespace {

const char* kind_name(VariableRef::Kind kind) {
  switch (kind) {
    case VariableRef::Kind::gen_p: return "gen_p";
    case VariableRef::Kind::wind_p: return "wind_p";
    case VariableRef::Kind::load_alpha: return "load_alpha";
    case VariableRef::Kind::angle: return "angle";
    case VariableRef::Kind::flow: return "flow";
    case VariableRef::Kind::cost_epigraph: return "cost_epigraph";
  }
  return "?";
}

const char* kind_name(RowRef::Kind kind) {
  switch (kind) {
    case RowRef::Kind::balance: return "balance";
    case RowRef::Kind::dcflow: return "dcflow";
    case RowRef::Kind::conservation: return "conservation";
    case RowRef::Kind::ramp: return "ramp";
    case RowRef::Kind::line_limit: return "line_limit";
    case RowRef::Kind::pwl: return "pwl";
  }
  return "?";
}

// A flexible load whose interval is pinned to one everywhere needs no
// conservation row: alpha is fixed and the row would be implied.
bool interval_pinned_to_one(const Load& load) {
  for (std::size_t t = 0; t < load.flex_lo.size(); ++t) {
    if (load.flex_lo[t] != 1.0 || load.flex_hi[t] != 1.0) return false;
  }
  return true;
}

struct SegmentLine {
  double slope;
  double intercept;
};

std::vector<SegmentLine> cut_lines(const CostFunction& pwl) {
  std::vector<SegmentLine> cuts;
  const auto& pts = pwl.points();
  cuts.reserve(pts.size() - 1);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double slope = (pts[k].cost - pts[k - 1].cost) / (pts[k].p_mw - pts[k - 1].p_mw);
    cuts.push_back({slope, pts[k - 1].cost - slope * pts[k - 1].p_mw});
  }
  return cuts;
}

}  // namespace

std::string to_string(const VariableRef& ref) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(%d,s=%d,t=%d,k=%d)", kind_name(ref.kind), ref.entity,
                ref.scenario, ref.period, ref.segment);
  return buf;
}

std::string to_string(const RowRef& ref) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(%d,s=%d,t=%d,k=%d)", kind_name(ref.kind), ref.entity,
                ref.scenario, ref.period, ref.segment);
  return buf;
}

VariableRef VariableIndex::describe(int position) const {
  VariableRef ref;
  if (position < epi_off_) {
    ref.kind = VariableRef::Kind::gen_p;
    ref.entity = position / T_;
    ref.period = position % T_;
    return ref;
  }
  if (position < wind_off_) {
    const int rel = position - epi_off_;
    const int slot = rel / T_;
    ref.kind = VariableRef::Kind::cost_epigraph;
    ref.period = rel % T_;
    ref.segment = 0;
    for (std::size_t g = 0; g < epi_slot_.size(); ++g) {
      if (epi_slot_[g] == slot) {
        ref.entity = static_cast<int>(g);
        break;
      }
    }
    return ref;
  }
  auto split3 = [&](int rel, int inner) {
    ref.period = rel % T_;
    const int ws = rel / T_;
    ref.scenario = ws % S_;
    ref.entity = ws / S_;
    (void)inner;
  };
  if (position < alpha_off_) {
    ref.kind = VariableRef::Kind::wind_p;
    split3(position - wind_off_, W_);
    return ref;
  }
  if (position < angle_off_) {
    ref.kind = VariableRef::Kind::load_alpha;
    split3(position - alpha_off_, D_);
    return ref;
  }
  if (position < flow_off_) {
    ref.kind = VariableRef::Kind::angle;
    split3(position - angle_off_, B_);
    return ref;
  }
  ref.kind = VariableRef::Kind::flow;
  split3(position - flow_off_, L_);
  return ref;
}

StochasticProgram build(const Network& net, const ScenarioSet& scenarios,
                        const BuildOptions& options) {
  const int B = static_cast<int>(net.buses.size());
  const int L = static_cast<int>(net.lines.size());
  const int G = static_cast<int>(net.generators.size());
  const int W = static_cast<int>(net.wind_farms.size());
  const int D = static_cast<int>(net.loads.size());
  const int T = net.horizon_length;

  if (W != scenarios.num_farms || T != scenarios.horizon) {
    throw Error(Errc::dim_mismatch, "scenario set does not match the network dimensions");
  }
  if (options.pwl_segments < 1) {
    throw Error(Errc::invalid_argument, "pwl_segments must be >= 1");
  }
  if (options.initial_dispatch_mw && static_cast<int>(options.initial_dispatch_mw->size()) != G) {
    throw Error(Errc::invalid_argument, "initial dispatch must list every generator");
  }

  StochasticProgram prog;

  // Effective scenarios: optional subset with renormalized probabilities.
  if (options.scenario_subset) {
    if (options.scenario_subset->empty()) {
      throw Error(Errc::invalid_argument, "scenario subset is empty");
    }
    double sum = 0.0;
    for (int id : *options.scenario_subset) {
      if (id < 0 || id >= scenarios.num_scenarios) {
        throw Error(Errc::invalid_argument, "scenario subset index out of range");
      }
      prog.scenario_ids.push_back(id);
      sum += scenarios.probabilities[id];
    }
    for (int id : prog.scenario_ids) {
      prog.scenario_prob.push_back(scenarios.probabilities[id] / sum);
    }
  } else {
    prog.scenario_ids.resize(scenarios.num_scenarios);
    std::iota(prog.scenario_ids.begin(), prog.scenario_ids.end(), 0);
    prog.scenario_prob = scenarios.probabilities;
  }
  const int S = static_cast<int>(prog.scenario_ids.size());
  prog.horizon = T;

  // Per-generator effective costs and epigraph slots.
  VariableIndex& ix = prog.index;
  ix.B_ = B;
  ix.L_ = L;
  ix.G_ = G;
  ix.W_ = W;
  ix.D_ = D;
  ix.S_ = S;
  ix.T_ = T;
  ix.epi_slot_.assign(G, -1);
  prog.effective_cost.reserve(G);
  int num_epi = 0;
  for (int g = 0; g < G; ++g) {
    const Generator& gen = net.generators[g];
    switch (gen.cost.kind()) {
      case CostFunction::Kind::linear:
        prog.effective_cost.push_back(gen.cost);
        break;
      case CostFunction::Kind::quadratic:
        if (gen.cost.c2() == 0.0) {
          prog.effective_cost.push_back(CostFunction::linear(gen.cost.c1(), gen.cost.c0()));
        } else if (gen.p_max_mw > gen.p_min_mw) {
          prog.effective_cost.push_back(
              pwl_approximate(gen.cost, gen.p_min_mw, gen.p_max_mw, options.pwl_segments));
          ix.epi_slot_[g] = num_epi++;
        } else {
          // Fixed output: the cost is a constant.
          prog.effective_cost.push_back(
              CostFunction::linear(0.0, gen.cost.value(gen.p_min_mw)));
        }
        break;
      case CostFunction::Kind::piecewise_linear:
        prog.effective_cost.push_back(gen.cost);
        if (gen.cost.points().size() >= 2) ix.epi_slot_[g] = num_epi++;
        break;
    }
  }

  ix.epi_off_ = G * T;
  ix.wind_off_ = ix.epi_off_ + num_epi * T;
  ix.alpha_off_ = ix.wind_off_ + W * S * T;
  ix.angle_off_ = ix.alpha_off_ + D * S * T;
  ix.flow_off_ = ix.angle_off_ + B * S * T;
  ix.total_ = ix.flow_off_ + L * S * T;
  const int num_vars = ix.total_;

  // Topology lookups.
  std::unordered_map<int, int> bus_of_id;
  for (int b = 0; b < B; ++b) bus_of_id.emplace(net.buses[b].id, b);
  auto bus_index = [&](int id) {
    auto it = bus_of_id.find(id);
    if (it == bus_of_id.end()) {
      throw Error(Errc::invalid_argument, "entity references a bus that does not exist");
    }
    return it->second;
  };
  std::vector<std::vector<int>> gens_at(B), farms_at(B), loads_at(B), from_at(B), to_at(B);
  for (int g = 0; g < G; ++g) gens_at[bus_index(net.generators[g].bus)].push_back(g);
  for (int w = 0; w < W; ++w) farms_at[bus_index(net.wind_farms[w].bus)].push_back(w);
  for (int d = 0; d < D; ++d) loads_at[bus_index(net.loads[d].bus)].push_back(d);
  for (int l = 0; l < L; ++l) {
    from_at[bus_index(net.lines[l].from_bus)].push_back(l);
    to_at[bus_index(net.lines[l].to_bus)].push_back(l);
  }
  int slack = net.slack_index();
  if (slack < 0) slack = 0;

  // Conservation rows: flexible loads whose interval is not pinned to one.
  std::vector<int> cons_slot(D, -1);
  int num_cons_loads = 0;
  for (int d = 0; d < D; ++d) {
    const Load& load = net.loads[d];
    if (load.is_flexible && !interval_pinned_to_one(load)) cons_slot[d] = num_cons_loads++;
  }

  // Line-limit rows.
  std::vector<int> limit_slot(L, -1);
  int num_limited = 0;
  if (options.enforce_line_limits) {
    for (int l = 0; l < L; ++l) {
      if (net.lines[l].flow_limit_mw) limit_slot[l] = num_limited++;
    }
  }

  // PWL cut tables.
  std::vector<std::vector<SegmentLine>> cuts(G);
  std::vector<int> pwl_row_off(G, -1);
  int num_pwl_rows = 0;
  for (int g = 0; g < G; ++g) {
    if (ix.epi_slot_[g] < 0) continue;
    cuts[g] = cut_lines(prog.effective_cost[g]);
    pwl_row_off[g] = num_pwl_rows;
    num_pwl_rows += static_cast<int>(cuts[g].size()) * T;
  }

  const bool with_init = options.initial_dispatch_mw.has_value();
  const int balance_off = 0;
  const int dcflow_off = balance_off + B * S * T;
  const int cons_off = dcflow_off + L * S * T;
  const int ramp_off = cons_off + num_cons_loads * S;
  const int ramp_rows = G * std::max(T - 1, 0);
  const int init_off = ramp_off + ramp_rows;
  const int pwl_off = init_off + (with_init ? G : 0);
  const int ll_off = pwl_off + num_pwl_rows;
  const int num_rows = ll_off + num_limited * S * T;

  auto balance_row = [&](int b, int s, int t) { return balance_off + (s * T + t) * B + b; };
  auto dcflow_row = [&](int l, int s, int t) { return dcflow_off + (s * T + t) * L + l; };

  LinearProgram& lp = prog.lp;
  lp.A = SparseMatrix(num_rows, num_vars);
  lp.obj.assign(num_vars, 0.0);
  lp.col_lo.assign(num_vars, -kInf);
  lp.col_up.assign(num_vars, kInf);
  lp.row_lo.assign(num_rows, 0.0);
  lp.row_up.assign(num_rows, 0.0);
  prog.row_tags.assign(num_rows, RowRef{});

  const std::size_t approx_nnz =
      static_cast<std::size_t>(S) * T * (2 * G + 2 * W + 2 * D + 5 * L) +
      static_cast<std::size_t>(num_pwl_rows) * 2;
  lp.A.reserve(approx_nnz);

  // --- variables: bounds and objective ---
  for (int g = 0; g < G; ++g) {
    const Generator& gen = net.generators[g];
    const CostFunction& eff = prog.effective_cost[g];
    for (int t = 0; t < T; ++t) {
      const int v = ix.gen_p(g, t);
      lp.col_lo[v] = gen.p_min_mw;
      lp.col_up[v] = gen.p_max_mw;
      if (ix.epi_slot_[g] < 0) {
        lp.obj[v] = eff.c1();
        lp.obj_offset += eff.c0();
      } else {
        const int z = ix.cost_epigraph(g, t);
        lp.obj[z] = 1.0;
        lp.col_lo[z] = eff.value(gen.p_min_mw);
        lp.col_up[z] = kInf;
      }
    }
  }
  for (int w = 0; w < W; ++w) {
    const double spill_cost = net.wind_farms[w].spillage_cost;
    for (int s = 0; s < S; ++s) {
      const double prob = prog.scenario_prob[s];
      const int sid = prog.scenario_ids[s];
      for (int t = 0; t < T; ++t) {
        const int v = ix.wind_p(w, s, t);
        const double avail = scenarios.output(w, sid, t);
        lp.col_lo[v] = 0.0;
        lp.col_up[v] = avail;
        lp.obj[v] = -prob * spill_cost;
        lp.obj_offset += prob * spill_cost * avail;
      }
    }
  }
  for (int d = 0; d < D; ++d) {
    const Load& load = net.loads[d];
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        const int v = ix.load_alpha(d, s, t);
        if (load.is_flexible) {
          lp.col_lo[v] = load.flex_lo[t];
          lp.col_up[v] = load.flex_hi[t];
        } else {
          lp.col_lo[v] = 1.0;
          lp.col_up[v] = 1.0;
        }
      }
    }
  }
  for (int b = 0; b < B; ++b) {
    if (b != slack) continue;
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        const int v = ix.angle(b, s, t);
        lp.col_lo[v] = 0.0;
        lp.col_up[v] = 0.0;
      }
    }
  }

  // --- rows ---
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      for (int b = 0; b < B; ++b) {
        const int row = balance_row(b, s, t);
        prog.row_tags[row] = {RowRef::Kind::balance, b, s, t, -1};
        for (int g : gens_at[b]) lp.A.add(row, ix.gen_p(g, t), 1.0);
        for (int w : farms_at[b]) lp.A.add(row, ix.wind_p(w, s, t), 1.0);
        for (int d : loads_at[b]) {
          lp.A.add(row, ix.load_alpha(d, s, t), -net.loads[d].demand_mw[t]);
        }
        for (int l : from_at[b]) lp.A.add(row, ix.flow(l, s, t), -1.0);
        for (int l : to_at[b]) lp.A.add(row, ix.flow(l, s, t), 1.0);
      }
      for (int l = 0; l < L; ++l) {
        const int row = dcflow_row(l, s, t);
        prog.row_tags[row] = {RowRef::Kind::dcflow, l, s, t, -1};
        const Line& line = net.lines[l];
        const double k = line.susceptance_pu / line.tap_ratio * net.base_mva;
        lp.A.add(row, ix.flow(l, s, t), 1.0);
        lp.A.add(row, ix.angle(bus_index(line.from_bus), s, t), -k);
        lp.A.add(row, ix.angle(bus_index(line.to_bus), s, t), k);
      }
    }
  }
  for (int d = 0; d < D; ++d) {
    if (cons_slot[d] < 0) continue;
    const Load& load = net.loads[d];
    double total = 0.0;
    for (int t = 0; t < T; ++t) total += load.demand_mw[t];
    for (int s = 0; s < S; ++s) {
      const int row = cons_off + cons_slot[d] * S + s;
      prog.row_tags[row] = {RowRef::Kind::conservation, d, s, -1, -1};
      for (int t = 0; t < T; ++t) {
        lp.A.add(row, ix.load_alpha(d, s, t), load.demand_mw[t]);
      }
      lp.row_lo[row] = total;
      lp.row_up[row] = total;
    }
  }
  for (int g = 0; g < G; ++g) {
    const Generator& gen = net.generators[g];
    for (int t = 0; t + 1 < T; ++t) {
      const int row = ramp_off + g * (T - 1) + t;
      prog.row_tags[row] = {RowRef::Kind::ramp, g, -1, t, -1};
      lp.A.add(row, ix.gen_p(g, t + 1), 1.0);
      lp.A.add(row, ix.gen_p(g, t), -1.0);
      lp.row_lo[row] = gen.ramp_down_mw;
      lp.row_up[row] = gen.ramp_up_mw;
    }
    if (with_init) {
      const int row = init_off + g;
      prog.row_tags[row] = {RowRef::Kind::ramp, g, -1, -1, -1};
      const double p0 = (*options.initial_dispatch_mw)[g];
      lp.A.add(row, ix.gen_p(g, 0), 1.0);
      lp.row_lo[row] = p0 + gen.ramp_down_mw;
      lp.row_up[row] = p0 + gen.ramp_up_mw;
    }
  }
  for (int g = 0; g < G; ++g) {
    if (ix.epi_slot_[g] < 0) continue;
    const auto& lines = cuts[g];
    const int K = static_cast<int>(lines.size());
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < K; ++k) {
        const int row = pwl_off + pwl_row_off[g] + t * K + k;
        prog.row_tags[row] = {RowRef::Kind::pwl, g, -1, t, k};
        lp.A.add(row, ix.cost_epigraph(g, t), 1.0);
        lp.A.add(row, ix.gen_p(g, t), -lines[k].slope);
        lp.row_lo[row] = lines[k].intercept;
        lp.row_up[row] = kInf;
      }
    }
  }
  if (num_limited > 0) {
    for (int l = 0; l < L; ++l) {
      if (limit_slot[l] < 0) continue;
      const double limit = *net.lines[l].flow_limit_mw;
      for (int s = 0; s < S; ++s) {
        for (int t = 0; t < T; ++t) {
          const int row = ll_off + (limit_slot[l] * S + s) * T + t;
          prog.row_tags[row] = {RowRef::Kind::line_limit, l, s, t, -1};
          lp.A.add(row, ix.flow(l, s, t), 1.0);
          lp.row_lo[row] = -limit;
          lp.row_up[row] = limit;
        }
      }
    }
  }
  lp.A.finalize();

  // Crash hint: per block, tree-edge flows pivot their child-bus balance
  // rows, child angles pivot the tree edge's dc row, and off-tree flows pivot
  // their own dc rows. The slack balance row is left to a logical.
  std::vector<std::vector<std::pair<int, int>>> adjacency(B);  // bus -> (line, other bus)
  for (int l = 0; l < L; ++l) {
    const int f = bus_index(net.lines[l].from_bus);
    const int to = bus_index(net.lines[l].to_bus);
    adjacency[f].push_back({l, to});
    adjacency[to].push_back({l, f});
  }
  std::vector<int> parent_line(B, -1);
  std::vector<char> seen(B, 0);
  std::vector<char> on_tree(L, 0);
  {
    std::vector<int> queue = {slack};
    seen[slack] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int b = queue[head];
      for (const auto& [l, nb] : adjacency[b]) {
        if (seen[nb]) continue;
        seen[nb] = 1;
        parent_line[nb] = l;
        on_tree[l] = 1;
        queue.push_back(nb);
      }
    }
  }
  lp.basis_hint.reserve(static_cast<std::size_t>(S) * T * (L + B));
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      for (int b = 0; b < B; ++b) {
        if (b == slack || parent_line[b] < 0) continue;
        lp.basis_hint.push_back({balance_row(b, s, t), ix.flow(parent_line[b], s, t)});
        lp.basis_hint.push_back({dcflow_row(parent_line[b], s, t), ix.angle(b, s, t)});
      }
      for (int l = 0; l < L; ++l) {
        if (!on_tree[l]) lp.basis_hint.push_back({dcflow_row(l, s, t), ix.flow(l, s, t)});
      }
    }
  }

  return prog;
}

}  // namespace flexopf
