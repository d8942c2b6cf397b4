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
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "builders.hpp"
#include "doctest.h"
#include "flexopf/case_io.hpp"
#include "flexopf/errors.hpp"
#include "flexopf/formulation.hpp"
#include "flexopf/lp.hpp"
#include "test_rng.hpp"

using namespace flexopf;

namespace {

const char* kFourBusCase = R"(function mpc = case4tiny
% reconstructed four bus example
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
  1 3 0    0 0 0 1 1 0 345 1 1.1 0.9;
  2 1 40   0 0 0 1 1 0 345 1 1.1 0.9;
  3 1 35   0 0 0 1 1 0 345 1 1.1 0.9;
  4 1 25   0 0 0 1 1 0 345 1 1.1 0.9;
];
mpc.gen = [
  1 0 0 30 -30 1 100 1 120 0 0 0 0 0 0 0 0 0 0 0 0;
];
mpc.branch = [
  1 2 0.01 0.1   0 0 0 0 0    0 1 -360 360;
  2 3 0.01 0.125 0 0 0 0 0    0 1 -360 360;
  2 4 0.01 0.08  0 0 0 0 1.05 0 1 -360 360;
];
mpc.gencost = [
  2 0 0 3 0.02 10 0;
];
)";

std::string simple_scenarios_csv() {
  return
      "farm_id,scenario_id,probability,t1,t2\n"
      "1,1,0.5,10,12\n"
      "1,2,0.5,5,6\n";
}

}  // namespace

TEST_CASE("matpower subset parses buses, branches, generators, costs") {
  const CaseDocument doc = parse_matpower(kFourBusCase);
  const Network& net = doc.network;
  CHECK(doc.metadata.name == "case4tiny");
  CHECK(net.base_mva == 100.0);
  REQUIRE(net.buses.size() == 4);
  REQUIRE(net.lines.size() == 3);
  REQUIRE(net.generators.size() == 1);
  CHECK(net.loads.size() == 3);  // one per bus with Pd > 0
  CHECK(net.buses[0].is_slack);

  // b = 1/x and the zero tap defaults to 1.
  CHECK(net.lines[0].susceptance_pu == doctest::Approx(10.0));
  CHECK(net.lines[0].tap_ratio == doctest::Approx(1.0));
  CHECK(net.lines[2].tap_ratio == doctest::Approx(1.05));
  CHECK_FALSE(net.lines[0].flow_limit_mw.has_value());

  CHECK(net.generators[0].p_max_mw == doctest::Approx(120.0));
  CHECK(net.generators[0].cost.kind() == CostFunction::Kind::quadratic);
  CHECK(net.generators[0].cost.c2() == doctest::Approx(0.02));

  CHECK(validate(net).empty());
}

TEST_CASE("matpower error paths are structured") {
  SUBCASE("row arity mismatch") {
    const char* text =
        "mpc.baseMVA = 100;\n"
        "mpc.bus = [ 1 3 0; 2 1 ];\n"
        "mpc.branch = [ 1 2 0.01 0.1 ];\n";
    CHECK_THROWS_WITH_AS(parse_matpower(text), doctest::Contains("MALFORMED_MATRIX"), Error);
  }
  SUBCASE("zero reactance") {
    const char* text =
        "mpc.baseMVA = 100;\n"
        "mpc.bus = [ 1 3 0 ; 2 1 10 ];\n"
        "mpc.branch = [ 1 2 0.01 0.0 ];\n";
    CHECK_THROWS_WITH_AS(parse_matpower(text), doctest::Contains("ZERO_REACTANCE"), Error);
  }
  SUBCASE("unsupported cost degree") {
    const char* text =
        "mpc.baseMVA = 100;\n"
        "mpc.bus = [ 1 3 0 ; 2 1 10 ];\n"
        "mpc.gen = [ 1 0 0 0 0 1 100 1 50 0 ];\n"
        "mpc.branch = [ 1 2 0.01 0.1 ];\n"
        "mpc.gencost = [ 2 0 0 4 1 1 1 1 ];\n";
    CHECK_THROWS_WITH_AS(parse_matpower(text), doctest::Contains("UNSUPPORTED_COST_MODEL"),
                         Error);
  }
  SUBCASE("missing slack falls back with a note") {
    const char* text =
        "mpc.baseMVA = 100;\n"
        "mpc.bus = [ 1 1 0 ; 2 1 10 ];\n"
        "mpc.gen = [ 2 0 0 0 0 1 100 1 50 0 ];\n"
        "mpc.branch = [ 1 2 0.01 0.1 ];\n";
    const CaseDocument doc = parse_matpower(text);
    CHECK(doc.network.slack_index() >= 0);
    CHECK(doc.network.buses[doc.network.bus_index(2)].is_slack);
    bool noted = false;
    for (const auto& n : doc.notes) {
      if (n.find("MISSING_SLACK") != std::string::npos) noted = true;
    }
    CHECK(noted);
  }
}

TEST_CASE("native round trip is lossless") {
  // Build a document from in-memory types, serialize, parse, re-serialize.
  CaseDocument doc;
  doc.source_format = CaseDocument::Format::native_json;
  doc.metadata.name = "roundtrip";
  doc.metadata.provenance = "synthetic";
  doc.metadata.comments = {"first comment", "second comment"};
  doc.network = flexopf::testing::four_bus_network(20);
  doc.metadata.base_mva = doc.network.base_mva;
  doc.network.lines[1].flow_limit_mw = 47.25;

  const std::string text = serialize_native(doc);
  const CaseDocument again = parse_native(text);
  CHECK(again.metadata.name == doc.metadata.name);
  CHECK(again.metadata.provenance == doc.metadata.provenance);
  CHECK(again.metadata.comments == doc.metadata.comments);
  CHECK(serialize_native(again) == text);

  const Network& a = doc.network;
  const Network& b = again.network;
  REQUIRE(a.buses.size() == b.buses.size());
  REQUIRE(a.lines.size() == b.lines.size());
  REQUIRE(a.generators.size() == b.generators.size());
  REQUIRE(a.loads.size() == b.loads.size());
  CHECK(a.horizon_length == b.horizon_length);
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    CHECK(a.lines[i].susceptance_pu == b.lines[i].susceptance_pu);
    CHECK(a.lines[i].flow_limit_mw == b.lines[i].flow_limit_mw);
  }
  for (std::size_t i = 0; i < a.loads.size(); ++i) {
    CHECK(a.loads[i].demand_mw == b.loads[i].demand_mw);
    CHECK(a.loads[i].flex_lo == b.loads[i].flex_lo);
  }
}

TEST_CASE("matpower to native conversion preserves the network") {
  const CaseDocument imported = parse_matpower(kFourBusCase);
  const std::string native = serialize_native(imported);
  const CaseDocument again = parse_native(native);
  const Network& a = imported.network;
  const Network& b = again.network;
  REQUIRE(a.buses.size() == b.buses.size());
  REQUIRE(a.lines.size() == b.lines.size());
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    CHECK(a.lines[i].from_bus == b.lines[i].from_bus);
    CHECK(a.lines[i].susceptance_pu == b.lines[i].susceptance_pu);
    CHECK(a.lines[i].tap_ratio == b.lines[i].tap_ratio);
  }
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    CHECK(a.generators[i].p_max_mw == b.generators[i].p_max_mw);
    CHECK(a.generators[i].cost.c2() == b.generators[i].cost.c2());
  }
}

TEST_CASE("native schema violations carry a JSON path") {
  const char* bad = R"({"schema": 1, "base_mva": 100.0, "horizon": 2,
    "buses": [{"id": 1, "slack": true}],
    "lines": [],
    "generators": [],
    "loads": [{"id": 1, "bus": 1, "demand_mw": [1.0]}]})";
  try {
    parse_native(bad);
    FAIL("expected a schema violation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_violation);
    CHECK(e.where().find("/loads/0/demand_mw") != std::string::npos);
  }
}

TEST_CASE("scenario CSV happy path and degenerate single scenario") {
  const ScenarioSet scen = parse_scenarios(simple_scenarios_csv(), 1, 2);
  CHECK(scen.num_scenarios == 2);
  CHECK(scen.probabilities[0] == doctest::Approx(0.5));
  CHECK(scen.output(0, 0, 1) == doctest::Approx(12.0));

  const ScenarioSet single = parse_scenarios(
      "farm_id,scenario_id,probability,t1\n1,1,1.0,7.5\n", 1, 1);
  CHECK(single.num_scenarios == 1);
  CHECK(single.probabilities[0] == doctest::Approx(1.0));
}

TEST_CASE("scenario CSV error paths") {
  SUBCASE("negative output") {
    CHECK_THROWS_WITH_AS(
        parse_scenarios("farm_id,scenario_id,probability,t1\n1,1,1.0,-3.0\n", 1, 1),
        doctest::Contains("NEGATIVE_OUTPUT"), Error);
  }
  SUBCASE("probability sum") {
    CHECK_THROWS_WITH_AS(
        parse_scenarios(
            "farm_id,scenario_id,probability,t1\n1,1,0.5,1\n1,2,0.48,1\n", 1, 1),
        doctest::Contains("PROB_SUM"), Error);
  }
  SUBCASE("probability disagreement across farms") {
    CHECK_THROWS_WITH_AS(
        parse_scenarios("farm_id,scenario_id,probability,t1\n"
                        "1,1,0.5,1\n2,1,0.4,1\n1,2,0.5,1\n2,2,0.5,1\n",
                        2, 1),
        doctest::Contains("PROB_DISAGREEMENT"), Error);
  }
  SUBCASE("horizon mismatch") {
    CHECK_THROWS_WITH_AS(parse_scenarios(simple_scenarios_csv(), 1, 5),
                         doctest::Contains("DIM_MISMATCH"), Error);
  }
  SUBCASE("missing farm rows") {
    CHECK_THROWS_WITH_AS(
        parse_scenarios("farm_id,scenario_id,probability,t1\n1,1,1.0,1\n", 2, 1),
        doctest::Contains("DIM_MISMATCH"), Error);
  }
}

TEST_CASE("scenario serialization round-trips") {
  const ScenarioSet scen = flexopf::testing::four_bus_scenarios(5, 4);
  const ScenarioSet again = parse_scenarios(serialize_scenarios(scen), 1, 4);
  REQUIRE(again.num_scenarios == scen.num_scenarios);
  for (int s = 0; s < scen.num_scenarios; ++s) {
    CHECK(again.probabilities[s] == doctest::Approx(scen.probabilities[s]).epsilon(1e-12));
    for (int t = 0; t < 4; ++t) {
      CHECK(again.output(0, s, t) == doctest::Approx(scen.output(0, s, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("profile attachment scales base demand and sets flexibility") {
  const CaseDocument doc = parse_matpower(kFourBusCase);
  const std::string csv =
      "load_id,t1,t2,t3,flex_lo,flex_hi\n"
      "2,0.5,1.0,0.75,0.9,1.1\n";
  const Network profiled = attach_profile(doc.network, csv);
  CHECK(profiled.horizon_length == 3);
  for (const auto& load : profiled.loads) {
    REQUIRE(load.demand_mw.size() == 3);
    if (load.id == 2) {
      CHECK(load.demand_mw[0] == doctest::Approx(20.0));  // 40 * 0.5
      CHECK(load.demand_mw[1] == doctest::Approx(40.0));
      CHECK(load.is_flexible);
      CHECK(load.flex_lo[2] == doctest::Approx(0.9));
    } else {
      CHECK(load.demand_mw[0] == doctest::Approx(load.demand_mw[1]));  // flat
      CHECK_FALSE(load.is_flexible);
    }
  }
  CHECK(validate(profiled).empty());
}

TEST_CASE("profile errors: unknown load and horizon mismatch") {
  const CaseDocument doc = parse_matpower(kFourBusCase);
  CHECK_THROWS_WITH_AS(attach_profile(doc.network, "load_id,t1\n99,1.0\n"),
                       doctest::Contains("UNKNOWN_LOAD_ID"), Error);
  const Network three = attach_profile(doc.network, "load_id,t1,t2,t3\n2,1,1,1\n");
  CHECK_THROWS_WITH_AS(attach_profile(three, "load_id,t1,t2\n2,1,1\n"),
                       doctest::Contains("HORIZON_MISMATCH"), Error);
}

TEST_CASE("parsers never crash on mutated input") {
  // A small in-process fuzz pass; the acceptance suite runs the full budget.
  const std::string native_seed = serialize_native(parse_matpower(kFourBusCase));
  const std::string mp_seed(kFourBusCase);
  const std::string scen_seed = simple_scenarios_csv();
  flexopf::testing::Rng rng(20260808);
  int rejected = 0, accepted = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string input = (trial % 3 == 0) ? mp_seed : (trial % 3 == 1) ? native_seed : scen_seed;
    const int edits = rng.uniform(1, 8);
    for (int e = 0; e < edits; ++e) {
      if (input.empty()) break;
      const int kind = rng.uniform(0, 3);
      const std::size_t at = rng.uniform(0, static_cast<int>(input.size()) - 1);
      if (kind == 0) {
        input[at] = static_cast<char>(rng.uniform(1, 255));
      } else if (kind == 1) {
        input.erase(at, rng.uniform(1, 32));
      } else if (kind == 2) {
        input.insert(at, std::string(rng.uniform(1, 8), static_cast<char>(rng.uniform(32, 126))));
      } else {
        input.resize(at);  // truncate
      }
    }
    try {
      if (trial % 3 == 0) {
        parse_matpower(input);
      } else if (trial % 3 == 1) {
        parse_native(input);
      } else {
        parse_scenarios(input, 1, 2);
      }
      ++accepted;  // mutation happened to stay parseable
    } catch (const Error&) {
      ++rejected;  // structured rejection is the expected outcome
    }
  }
  CHECK(rejected > 0);
  CHECK(accepted + rejected == 3000);
}

TEST_CASE("shipped 39-bus import matches the published aggregates") {
  const std::string text = [] {
    std::ifstream in(std::string(FLEXOPF_DATA_DIR) + "/case39.m", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  REQUIRE_FALSE(text.empty());
  const CaseDocument doc = parse_matpower(text);
  const Network& net = doc.network;
  CHECK(net.buses.size() == 39);
  CHECK(net.lines.size() == 46);
  CHECK(net.generators.size() == 10);
  double total = 0.0;
  for (const auto& load : net.loads) total += load.demand_mw.front();
  CHECK(total == doctest::Approx(6254.23).epsilon(1e-9));
  double capacity = 0.0;
  for (const auto& gen : net.generators) capacity += gen.p_max_mw;
  CHECK(capacity == doctest::Approx(7367.0));
}

TEST_CASE("shipped flexibility presets mark the named buses") {
  auto flexible_buses = [](const char* name) {
    std::ifstream in(std::string(FLEXOPF_DATA_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const CaseDocument doc = parse_native(ss.str());
    std::vector<int> buses;
    for (const auto& load : doc.network.loads) {
      if (load.is_flexible) buses.push_back(load.bus);
    }
    std::sort(buses.begin(), buses.end());
    return buses;
  };
  CHECK(flexible_buses("case39_flex_7_8_12.json") == std::vector<int>{7, 8, 12});
  CHECK(flexible_buses("case39_flex_4_8_20.json") == std::vector<int>{4, 8, 20});
}

TEST_CASE("an empty wind farm array is a valid deterministic case") {
  const char* text = R"({"schema": 1, "name": "nowind", "base_mva": 100.0, "horizon": 2,
    "buses": [{"id": 1, "slack": true}, {"id": 2}],
    "lines": [{"id": 1, "from": 1, "to": 2, "susceptance": 5.0}],
    "generators": [{"id": 1, "bus": 1, "p_min": 0.0, "p_max": 50.0,
                    "ramp_down": -50.0, "ramp_up": 50.0,
                    "cost": {"kind": "linear", "c1": 12.0, "c0": 0.0}}],
    "wind_farms": [],
    "loads": [{"id": 1, "bus": 2, "demand_mw": [10.0, 20.0]}]})";
  const CaseDocument doc = parse_native(text);
  CHECK(doc.network.wind_farms.empty());
  const ScenarioSet scen = ScenarioSet::deterministic(0, 2);
  CHECK(validate(doc.network, scen).empty());
  const StochasticProgram prog = build(doc.network, scen);
  const LpSolution sol = solve(prog.lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(12.0 * 30.0));
}
