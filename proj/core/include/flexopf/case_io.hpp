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

#ifndef FLEXOPF_CASE_IO_HPP_
#define FLEXOPF_CASE_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "flexopf/model.hpp"

namespace flexopf {

struct CaseMetadata {
  std::string name;
  double base_mva = 100.0;
  // Data origin: "imported", "reconstructed", or "synthetic".
  std::string provenance;
  std::vector<std::string> comments;
};

struct CaseDocument {
  enum class Format { matpower, native_json };
  Format source_format = Format::native_json;
  Network network;
  CaseMetadata metadata;
  // Non-fatal notes collected while parsing (ignored columns, slack fallback).
  std::vector<std::string> notes;
};

// MATPOWER-subset reader: baseMVA, bus, gen, branch, gencost matrices; only
// the columns the DC model needs are consumed. Throws Error on malformed
// input (Errc::malformed_matrix, unsupported_cost_model, zero_reactance).
CaseDocument parse_matpower(std::string_view text);

// Native JSON case, the only format carrying wind farms and flexibility.
// Throws Error(Errc::schema_violation) with the JSON path of the offender.
CaseDocument parse_native(std::string_view json_text);

// Lossless inverse of parse_native.
std::string serialize_native(const CaseDocument& doc);

// Scenario CSV: header `farm_id,scenario_id,probability,t1..tT`; one row per
// (farm, scenario). Probabilities must agree across farms of a scenario and
// sum to one within 1e-9.
ScenarioSet parse_scenarios(std::string_view csv_text, int expected_farms,
                            int expected_horizon);

std::string serialize_scenarios(const ScenarioSet& scenarios);

// Profile CSV: `load_id,t1..tT[,flex_lo,flex_hi]`. The t-columns are
// multipliers on the load's base (first-period) demand; flex columns are
// scalars replicated across the horizon. Loads absent from the CSV keep a
// flat profile replicated to the new horizon.
Network attach_profile(const Network& network, std::string_view csv_text);

}  // namespace flexopf

#endif  // FLEXOPF_CASE_IO_HPP_
