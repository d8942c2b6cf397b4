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

#include "builders.hpp"
#include "doctest.h"
#include "flexopf/model.hpp"

using namespace flexopf;
using flexopf::testing::four_bus_network;
using flexopf::testing::four_bus_scenarios;

namespace {

bool has_code(const std::vector<Violation>& v, const std::string& code) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
}

bool has_warning(const std::vector<PrescreenWarning>& v, const std::string& code) {
  return std::any_of(v.begin(), v.end(),
                     [&](const PrescreenWarning& x) { return x.code == code; });
}

}  // namespace

TEST_CASE("well-formed four-bus case validates cleanly") {
  const Network net = four_bus_network();
  const ScenarioSet scen = four_bus_scenarios();
  CHECK(validate(net, scen).empty());
}

TEST_CASE("inverted flexibility interval is reported") {
  Network net = four_bus_network();
  net.loads[0].flex_lo.assign(net.horizon_length, 1.2);
  net.loads[0].flex_hi.assign(net.horizon_length, 0.8);
  const auto violations = validate(net);
  CHECK(has_code(violations, "FLEX_INTERVAL_INVERTED"));
}

TEST_CASE("probabilities that do not sum to one are reported") {
  const Network net = four_bus_network();
  ScenarioSet scen = four_bus_scenarios();
  for (double& p : scen.probabilities) p *= 0.98;
  const auto violations = validate(net, scen);
  CHECK(has_code(violations, "PROB_SUM"));
}

TEST_CASE("validation is pure") {
  Network net = four_bus_network();
  net.loads[0].flex_lo.assign(net.horizon_length, 1.5);
  const auto a = validate(net);
  const auto b = validate(net);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].code == b[i].code);
    CHECK(a[i].message == b[i].message);
  }
}

TEST_CASE("structural breaches are caught") {
  Network net = four_bus_network();
  SUBCASE("self loop") {
    net.lines[0].to_bus = net.lines[0].from_bus;
    CHECK(has_code(validate(net), "LINE_SELF_LOOP"));
  }
  SUBCASE("zero susceptance") {
    net.lines[0].susceptance_pu = 0.0;
    CHECK(has_code(validate(net), "SUSCEPTANCE_INVALID"));
  }
  SUBCASE("missing slack") {
    net.buses[0].is_slack = false;
    CHECK(has_code(validate(net), "SLACK_MISSING"));
  }
  SUBCASE("unknown bus") {
    net.generators[0].bus = 99;
    CHECK(has_code(validate(net), "UNKNOWN_BUS"));
  }
  SUBCASE("disconnected") {
    net.lines.pop_back();
    CHECK(has_code(validate(net), "NETWORK_DISCONNECTED"));
  }
  SUBCASE("generator bounds") {
    net.generators[0].p_min_mw = 50.0;
    net.generators[0].p_max_mw = 10.0;
    CHECK(has_code(validate(net), "GEN_BOUNDS"));
  }
  SUBCASE("decreasing cost") {
    net.generators[0].cost = CostFunction::linear(-5.0, 0.0);
    CHECK(has_code(validate(net), "COST_NOT_CONVEX_INCREASING"));
  }
  SUBCASE("scenario dimension mismatch") {
    ScenarioSet scen = four_bus_scenarios(20, 10);
    CHECK(has_code(validate(net, scen), "DIM_MISMATCH"));
  }
}

TEST_CASE("prescreen: adequate ramp against a 6 MW demand step stays quiet") {
  const Network net = four_bus_network();  // fleet ramp 10 MW, max step 6 MW
  const auto warnings = feasibility_prescreen(net);
  CHECK_FALSE(has_warning(warnings, "RAMP_VS_DEMAND_STEP"));
}

TEST_CASE("prescreen: ramp smaller than the demand step warns") {
  Network net = four_bus_network();
  net.generators[0].ramp_up_mw = 5.0;
  net.generators[0].ramp_down_mw = -5.0;
  const auto warnings = feasibility_prescreen(net);
  CHECK(has_warning(warnings, "RAMP_VS_DEMAND_STEP"));
}

TEST_CASE("prescreen: capacity shortfall warns") {
  Network net = four_bus_network();
  net.generators[0].p_max_mw = 50.0;  // peak demand 100 MW, no wind given
  const auto warnings = feasibility_prescreen(net);
  CHECK(has_warning(warnings, "CAPACITY_SHORTFALL"));
}

TEST_CASE("cost function values and marginals") {
  const CostFunction quad = CostFunction::quadratic(0.5, 2.0, 1.0);
  CHECK(quad.value(2.0) == doctest::Approx(0.5 * 4 + 2 * 2 + 1));
  CHECK(quad.marginal(2.0) == doctest::Approx(2 * 0.5 * 2 + 2));

  const CostFunction pwl = CostFunction::piecewise_linear({{0, 0}, {5, 25}, {10, 100}});
  CHECK(pwl.value(0.0) == doctest::Approx(0.0));
  CHECK(pwl.value(2.5) == doctest::Approx(12.5));
  CHECK(pwl.value(7.5) == doctest::Approx(62.5));
  CHECK(pwl.marginal(2.0) == doctest::Approx(5.0));
  CHECK(pwl.marginal(9.0) == doctest::Approx(15.0));
  CHECK(pwl.convex_nondecreasing_on(0.0, 10.0));

  const CostFunction bad = CostFunction::piecewise_linear({{0, 0}, {5, 50}, {10, 60}});
  CHECK_FALSE(bad.convex_nondecreasing_on(0.0, 10.0));  // slopes decrease
}
