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

// Regenerates the data/ presets deterministically. The 4-bus and 39-bus
// cases are reconstructions that match published aggregate figures; the
// remaining IEEE-sized cases are synthetic networks with matching bus, line,
// and generator counts. Every file records its provenance.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flexopf/case_io.hpp"
#include "flexopf/model.hpp"

namespace {

using namespace flexopf;

// splitmix64, kept bit-identical with the library's seeded helpers.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int uniform(int lo, int hi) { return lo + static_cast<int>(next() % (hi - lo + 1)); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

double snap(double v, double grid = 1e-6) { return std::round(v / grid) * grid; }

// Demand multipliers with their worst step (6%) between periods 18 and 19.
const std::vector<double> kProfile20 = {0.78, 0.76,  0.75, 0.74, 0.735, 0.74, 0.76,
                                        0.79, 0.83,  0.87, 0.91, 0.945, 0.97, 0.985,
                                        0.99, 1.0,   0.995, 0.98, 0.92, 0.89};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", path.string().c_str());
    std::exit(1);
  }
  std::printf("wrote %s\n", path.string().c_str());
}

std::string profile_csv(int horizon, const std::vector<int>& load_ids) {
  std::string out = "load_id";
  char buf[64];
  for (int t = 1; t <= horizon; ++t) {
    std::snprintf(buf, sizeof(buf), ",t%d", t);
    out += buf;
  }
  out += "\n";
  for (int id : load_ids) {
    std::snprintf(buf, sizeof(buf), "%d", id);
    out += buf;
    for (int t = 0; t < horizon; ++t) {
      std::snprintf(buf, sizeof(buf), ",%g", kProfile20[t]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

// Hour-ahead style trajectories: every scenario tracks a common base
// forecast per farm, with a smooth relative deviation that grows to roughly
// +-15% plus a small independent wobble.
ScenarioSet smooth_scenarios(int farms, int scenarios, int horizon,
                             const std::vector<double>& capacity, std::uint64_t seed) {
  Rng rng(seed);
  ScenarioSet scen;
  scen.num_farms = farms;
  scen.num_scenarios = scenarios;
  scen.horizon = horizon;
  scen.probabilities.assign(scenarios, 1.0 / scenarios);
  scen.output_mw.assign(static_cast<std::size_t>(farms) * scenarios * horizon, 0.0);
  for (int w = 0; w < farms; ++w) {
    const double cap = capacity[w];
    std::vector<double> base(horizon);
    double level = cap * (0.3 + 0.3 * rng.uniform01());
    for (int t = 0; t < horizon; ++t) {
      level += cap * 0.08 * (rng.uniform01() - 0.5);
      level = std::min(std::max(level, 0.12 * cap), 0.85 * cap);
      base[t] = level;
    }
    for (int s = 0; s < scenarios; ++s) {
      double deviation = 0.06 * (rng.uniform01() - 0.5);
      for (int t = 0; t < horizon; ++t) {
        deviation += 0.055 * (rng.uniform01() - 0.5);
        deviation = std::min(std::max(deviation, -0.18), 0.18);
        const double wobble = 1.0 + 0.02 * (rng.uniform01() - 0.5);
        const double value = std::min(std::max(base[t] * (1.0 + deviation) * wobble, 0.0), cap);
        scen.output(w, s, t) = snap(value);
      }
    }
  }
  return scen;
}

// ---------------------------------------------------------------------------
// reconstructed 4-bus case
// ---------------------------------------------------------------------------

CaseDocument four_bus_case() {
  CaseDocument doc;
  doc.source_format = CaseDocument::Format::native_json;
  doc.metadata.name = "case4-flex";
  doc.metadata.provenance = "reconstructed";
  doc.metadata.comments = {
      "Four-bus example: one quadratic generator and one wind farm at bus 1,",
      "100 MW of flexible demand split over buses 2-4, twenty periods.",
      "Line parameters are reconstructed, not published data.",
  };
  Network& net = doc.network;
  net.base_mva = 100.0;
  net.horizon_length = 20;
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
  gen.ramp_down_mw = -10.0;  // 10% of the 100 MW system load per period
  gen.ramp_up_mw = 10.0;
  net.generators = {gen};
  net.wind_farms = {{1, 1, 1.0}};
  const double base[3] = {40.0, 35.0, 25.0};
  for (int d = 0; d < 3; ++d) {
    Load load;
    load.id = d + 1;
    load.bus = d + 2;
    load.is_flexible = true;
    for (int t = 0; t < 20; ++t) {
      load.demand_mw.push_back(snap(base[d] * kProfile20[t]));
      load.flex_lo.push_back(1.0);
      load.flex_hi.push_back(1.0);
    }
    net.loads.push_back(load);
  }
  doc.metadata.base_mva = net.base_mva;
  return doc;
}

// ---------------------------------------------------------------------------
// reconstructed 39-bus case (New England shape)
// ---------------------------------------------------------------------------

std::string matpower_text(const std::string& name, const std::string& provenance,
                          double base_mva, const std::vector<std::array<double, 3>>& bus_rows,
                          const std::vector<std::array<double, 6>>& branch_rows,
                          const std::vector<std::array<double, 3>>& gen_rows,
                          const std::vector<std::array<double, 3>>& cost_rows) {
  // bus_rows: id, type, Pd; branch_rows: from, to, x, rateA, ratio(0 = none);
  // gen_rows: bus, Pmax, Pmin; cost_rows: c2, c1, c0.
  std::string out;
  char buf[256];
  out += "function mpc = " + name + "\n";
  out += "% " + provenance + " data written by flexopf-mkcases\n";
  out += "mpc.version = '2';\n";
  std::snprintf(buf, sizeof(buf), "mpc.baseMVA = %g;\n", base_mva);
  out += buf;
  out += "\n%% bus_i type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin\nmpc.bus = [\n";
  for (const auto& r : bus_rows) {
    std::snprintf(buf, sizeof(buf), "\t%d\t%d\t%.6g\t0\t0\t0\t1\t1\t0\t345\t1\t1.06\t0.94;\n",
                  static_cast<int>(r[0]), static_cast<int>(r[1]), r[2]);
    out += buf;
  }
  out += "];\n\n%% bus Pg Qg Qmax Qmin Vg mBase status Pmax Pmin\nmpc.gen = [\n";
  for (const auto& r : gen_rows) {
    std::snprintf(buf, sizeof(buf), "\t%d\t0\t0\t300\t-300\t1\t%g\t1\t%.6g\t%.6g;\n",
                  static_cast<int>(r[0]), base_mva, r[1], r[2]);
    out += buf;
  }
  out += "];\n\n%% fbus tbus r x b rateA rateB rateC ratio angle status\nmpc.branch = [\n";
  for (const auto& r : branch_rows) {
    std::snprintf(buf, sizeof(buf), "\t%d\t%d\t0\t%.6g\t0\t%.6g\t0\t0\t%.6g\t0\t1;\n",
                  static_cast<int>(r[0]), static_cast<int>(r[1]), r[2], r[3], r[4]);
    out += buf;
  }
  out += "];\n\n%% model startup shutdown n c2 c1 c0\nmpc.gencost = [\n";
  for (const auto& r : cost_rows) {
    std::snprintf(buf, sizeof(buf), "\t2\t0\t0\t3\t%.8g\t%.6g\t%.6g;\n", r[0], r[1], r[2]);
    out += buf;
  }
  out += "];\n";
  return out;
}

struct Case39 {
  std::string matpower;
  Network network;  // parsed back, for conversions
};

Case39 case39() {
  // Topology with 39 buses, 46 branches, 10 units; loads scaled so the total
  // is exactly 6254.23 MW.
  const int branches[46][2] = {
      {1, 2},   {1, 39},  {2, 3},   {2, 25},  {2, 30},  {3, 4},   {3, 18},  {4, 5},
      {4, 14},  {5, 6},   {5, 8},   {6, 7},   {6, 11},  {6, 31},  {7, 8},   {8, 9},
      {9, 39},  {10, 11}, {10, 13}, {10, 32}, {12, 11}, {12, 13}, {13, 14}, {14, 15},
      {15, 16}, {16, 17}, {16, 19}, {16, 21}, {16, 24}, {17, 18}, {17, 27}, {19, 20},
      {19, 33}, {20, 34}, {21, 22}, {22, 23}, {22, 35}, {23, 24}, {23, 36}, {25, 26},
      {25, 37}, {26, 27}, {26, 28}, {26, 29}, {28, 29}, {29, 38}};
  // Transformer branches carry off-nominal taps.
  const std::set<int> transformer = {4, 13, 19, 20, 21, 31, 32, 33, 36, 38, 40, 45};

  std::map<int, double> loads = {
      {1, 97.6},   {3, 322.0},  {4, 500.0},  {7, 233.8}, {8, 522.0},  {9, 6.5},
      {12, 8.53},  {15, 320.0}, {16, 329.0}, {18, 158.0}, {20, 680.0}, {21, 274.0},
      {23, 247.5}, {24, 308.6}, {25, 224.0}, {26, 139.0}, {27, 281.0}, {28, 206.0},
      {29, 283.5}};
  double partial = 0.0;
  for (const auto& [bus, pd] : loads) partial += pd;
  loads[39] = snap(6254.23 - partial, 1e-2);  // lands the published total exactly

  const int gen_bus[10] = {30, 31, 32, 33, 34, 35, 36, 37, 38, 39};
  const double pmax[10] = {1040, 646, 725, 652, 508, 687, 580, 564, 865, 1100};
  const double c2[10] = {0.0311, 0.0532, 0.0463, 0.0406, 0.0649, 0.0419,
                         0.0501, 0.0581, 0.0347, 0.0272};
  const double c1[10] = {11.2, 27.6, 21.4, 17.1, 36.0, 18.8, 24.7, 31.9, 13.0, 9.5};

  Rng rng(39039);
  std::vector<std::array<double, 3>> bus_rows;
  for (int b = 1; b <= 39; ++b) {
    const double pd = loads.count(b) ? loads[b] : 0.0;
    bus_rows.push_back({static_cast<double>(b), b == 31 ? 3.0 : 1.0, pd});
  }
  std::vector<std::array<double, 6>> branch_rows;
  for (int l = 0; l < 46; ++l) {
    const double x = snap(0.008 + 0.03 * rng.uniform01(), 1e-4);
    const double tap = transformer.count(l) ? snap(1.0 + 0.07 * (rng.uniform01() - 0.3), 1e-3) : 0.0;
    branch_rows.push_back({static_cast<double>(branches[l][0]),
                           static_cast<double>(branches[l][1]), x, 0.0, tap});
  }
  std::vector<std::array<double, 3>> gen_rows, cost_rows;
  for (int g = 0; g < 10; ++g) {
    gen_rows.push_back({static_cast<double>(gen_bus[g]), pmax[g], 0.0});
    cost_rows.push_back({c2[g], c1[g], 120.0 + 30.0 * g});
  }

  Case39 out;
  out.matpower = matpower_text("case39", "reconstructed New England shape", 100.0, bus_rows,
                               branch_rows, gen_rows, cost_rows);
  out.network = parse_matpower(out.matpower).network;
  return out;
}

// Converts the 39-bus import into the stochastic study form: the units at
// buses 34 and 37 become wind farms, ramps are +-5% of Pmax, horizon 12.
CaseDocument case39_flex(const Network& imported, const std::vector<int>& flexible_buses,
                         const std::string& name) {
  CaseDocument doc;
  doc.source_format = CaseDocument::Format::native_json;
  doc.metadata.name = name;
  doc.metadata.provenance = "reconstructed";
  doc.metadata.comments = {
      "Conversion of case39: units at buses 34 and 37 are wind farms,",
      "conventional ramps are +-5% of Pmax, demand follows the first 12",
      "periods of the reference profile.",
  };

  Network net = attach_profile(imported, profile_csv(12, {}));
  net.wind_farms.clear();
  std::vector<Generator> keep;
  for (const auto& g : net.generators) {
    if (g.bus == 34 || g.bus == 37) {
      WindFarm farm;
      farm.id = static_cast<int>(net.wind_farms.size()) + 1;
      farm.bus = g.bus;
      farm.spillage_cost = 1.0;
      net.wind_farms.push_back(farm);
    } else {
      keep.push_back(g);
    }
  }
  net.generators = std::move(keep);
  for (auto& g : net.generators) {
    g.ramp_down_mw = -0.05 * g.p_max_mw;
    g.ramp_up_mw = 0.05 * g.p_max_mw;
  }
  // Re-profile every load onto the 12-period shape.
  for (auto& load : net.loads) {
    const double base = load.demand_mw.front();
    for (int t = 0; t < 12; ++t) load.demand_mw[t] = snap(base * kProfile20[t]);
    load.is_flexible =
        std::find(flexible_buses.begin(), flexible_buses.end(), load.bus) != flexible_buses.end();
    load.flex_lo.assign(12, 1.0);
    load.flex_hi.assign(12, 1.0);
  }
  doc.network = std::move(net);
  doc.metadata.base_mva = doc.network.base_mva;
  return doc;
}

// ---------------------------------------------------------------------------
// synthetic IEEE-sized cases
// ---------------------------------------------------------------------------

struct SyntheticSpec {
  std::string name;
  int buses, branches, gens;
  double total_load_mw;
  std::map<int, double> load_share;  // bus id -> fraction of total demand
  std::vector<int> extra_bus_ids;    // appended after 1..(buses - extra)
  std::uint64_t seed;
};

std::string synthetic_case(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  const int regular = spec.buses - static_cast<int>(spec.extra_bus_ids.size());
  std::vector<int> ids;
  for (int b = 1; b <= regular; ++b) ids.push_back(b);
  for (int id : spec.extra_bus_ids) ids.push_back(id);

  // Spanning tree with local attachment, then chords until the branch count.
  std::vector<std::array<double, 6>> branch_rows;
  std::set<std::pair<int, int>> used;
  auto add_edge = [&](int a, int b) {
    const double x = snap(0.01 + 0.12 * rng.uniform01(), 1e-4);
    const bool transformer = rng.uniform(0, 99) < 8;
    const double tap = transformer ? snap(0.95 + 0.1 * rng.uniform01(), 1e-3) : 0.0;
    const double rate = rng.uniform(0, 99) < 25 ? 100.0 * rng.uniform(2, 12) : 0.0;
    branch_rows.push_back({static_cast<double>(ids[a]), static_cast<double>(ids[b]), x, rate, tap});
    used.insert({std::min(a, b), std::max(a, b)});
  };
  for (int i = 1; i < spec.buses; ++i) add_edge(rng.uniform(std::max(0, i - 8), i - 1), i);
  int guard = 0;
  while (static_cast<int>(branch_rows.size()) < spec.branches && ++guard < 100000) {
    const int a = rng.uniform(0, spec.buses - 1);
    const int span = rng.uniform(1, 12);
    const int b = std::min(spec.buses - 1, a + span);
    if (a == b || used.count({std::min(a, b), std::max(a, b)})) continue;
    add_edge(a, b);
  }

  // Loads: pinned shares first, then a spread over roughly half the buses.
  std::map<int, double> load_of;
  double pinned = 0.0;
  for (const auto& [bus, share] : spec.load_share) {
    load_of[bus] = snap(share * spec.total_load_mw, 0.01);
    pinned += share;
  }
  std::vector<int> candidates;
  for (int id : ids) {
    if (!load_of.count(id)) candidates.push_back(id);
  }
  double weight_sum = 0.0;
  std::vector<std::pair<int, double>> weights;
  for (int id : candidates) {
    if (rng.uniform(0, 99) < 55) {
      const double w = 0.2 + rng.uniform01();
      weights.push_back({id, w});
      weight_sum += w;
    }
  }
  const double rest = spec.total_load_mw * std::max(0.0, 1.0 - pinned);
  for (const auto& [id, w] : weights) load_of[id] = snap(rest * w / weight_sum, 0.01);

  std::vector<std::array<double, 3>> bus_rows;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double pd = load_of.count(ids[i]) ? load_of[ids[i]] : 0.0;
    bus_rows.push_back({static_cast<double>(ids[i]), i == 0 ? 3.0 : 1.0, pd});
  }

  // Generators: capacity about 1.45x the base demand, a few large units.
  std::vector<std::array<double, 3>> gen_rows, cost_rows;
  const double capacity = 1.45 * spec.total_load_mw;
  std::vector<double> caps(spec.gens);
  double cap_sum = 0.0;
  for (int g = 0; g < spec.gens; ++g) {
    caps[g] = (g < spec.gens / 4 ? 2.5 : 1.0) * (0.5 + rng.uniform01());
    cap_sum += caps[g];
  }
  for (int g = 0; g < spec.gens; ++g) {
    const double pmax = snap(capacity * caps[g] / cap_sum, 0.1);
    const int bus = ids[rng.uniform(0, spec.buses - 1)];
    gen_rows.push_back({static_cast<double>(bus), pmax, 0.0});
    const double c1 = snap(8.0 + 32.0 * rng.uniform01(), 1e-2);
    const double c2 = snap((4.0 + 26.0 * rng.uniform01()) / std::max(pmax, 1.0), 1e-6);
    cost_rows.push_back({c2, c1, snap(150.0 * rng.uniform01(), 1e-2)});
  }

  return matpower_text(spec.name, "synthetic network at the named size", 100.0, bus_rows,
                       branch_rows, gen_rows, cost_rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regenerates the flexopf data presets"};
  std::string out_dir = "data";
  app.add_option("--out", out_dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  // 4-bus case plus its 20- and 100-scenario wind sets.
  const CaseDocument c4 = four_bus_case();
  write_file(dir / "case4_flex.json", serialize_native(c4));
  write_file(dir / "scen4_20.csv",
             serialize_scenarios(smooth_scenarios(1, 20, 20, {32.0}, 404)));
  write_file(dir / "scen4_100.csv",
             serialize_scenarios(smooth_scenarios(1, 100, 20, {32.0}, 405)));

  // 39-bus import and its stochastic conversions.
  const Case39 c39 = case39();
  write_file(dir / "case39.m", c39.matpower);
  write_file(dir / "case39_flex_7_8_12.json",
             serialize_native(case39_flex(c39.network, {7, 8, 12}, "case39-flex-7-8-12")));
  write_file(dir / "case39_flex_4_8_20.json",
             serialize_native(case39_flex(c39.network, {4, 8, 20}, "case39-flex-4-8-20")));
  write_file(dir / "scen39_100.csv",
             serialize_scenarios(smooth_scenarios(2, 100, 12, {508.0, 564.0}, 3939)));

  // Demand profiles (multipliers of base demand).
  write_file(dir / "profile20.csv", profile_csv(20, {}));
  write_file(dir / "profile12.csv", profile_csv(12, {}));

  // Per-unit shape trajectories for penetration-scaled studies.
  write_file(dir / "shapes50_12.csv",
             serialize_scenarios(smooth_scenarios(4, 50, 12, {1.0, 1.0, 1.0, 1.0}, 5012)));
  write_file(dir / "shapes100_12.csv",
             serialize_scenarios(smooth_scenarios(4, 100, 12, {1.0, 1.0, 1.0, 1.0}, 10012)));

  // Synthetic IEEE-sized cases.
  const std::vector<SyntheticSpec> specs = {
      {"case9", 9, 9, 3, 315.0, {}, {}, 909},
      {"case14", 14, 20, 5, 259.0, {}, {}, 1414},
      {"case24", 24, 38, 33, 2850.0, {}, {}, 2424},
      {"case30", 30, 41, 6, 283.4, {}, {}, 3030},
      {"case57",
       57,
       80,
       7,
       1250.8,
       {{12, 0.301}, {8, 0.120}, {9, 0.097}},
       {},
       5757},
      {"case118",
       118,
       186,
       54,
       4242.0,
       {{54, 0.026}, {80, 0.040}, {116, 0.034}, {42, 0.041}, {59, 0.047}, {90, 0.038}},
       {},
       118118},
      {"case300",
       300,
       411,
       69,
       23525.8,
       {{5, 0.020}, {20, 0.021}, {120, 0.039}, {138, 0.038}, {192, 0.033}, {10, 0.008},
        {44, 0.007}},
       {7003, 7049, 7130, 7139},
       300300},
  };
  for (const auto& spec : specs) {
    write_file(dir / (spec.name + ".m"), synthetic_case(spec));
  }
  return 0;
}
