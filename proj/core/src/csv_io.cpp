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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "flexopf/case_io.hpp"
#include "flexopf/errors.hpp"

namespace flexopf {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
  }
  return fields;
}

double parse_double(std::string_view token, int line_no, const char* what) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(out)) {
    throw Error(Errc::malformed_matrix,
                std::string(what) + " '" + std::string(token) + "' is not a number",
                "line " + std::to_string(line_no));
  }
  return out;
}

int parse_int(std::string_view token, int line_no, const char* what) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(Errc::malformed_matrix,
                std::string(what) + " '" + std::string(token) + "' is not an integer",
                "line " + std::to_string(line_no));
  }
  return out;
}

}  // namespace

ScenarioSet parse_scenarios(std::string_view csv_text, int expected_farms,
                            int expected_horizon) {
  const auto lines = split_lines(csv_text);
  if (lines.empty()) {
    throw Error(Errc::dim_mismatch, "scenario CSV is empty");
  }
  const auto header = split_fields(lines[0]);
  if (header.size() < 4 || header[0] != "farm_id" || header[1] != "scenario_id" ||
      header[2] != "probability") {
    throw Error(Errc::malformed_matrix,
                "scenario CSV header must be farm_id,scenario_id,probability,t1..tT");
  }
  const int horizon = static_cast<int>(header.size()) - 3;
  if (horizon != expected_horizon) {
    throw Error(Errc::dim_mismatch, "scenario horizon is " + std::to_string(horizon) +
                                        ", expected " + std::to_string(expected_horizon));
  }

  int num_scenarios = 0;
  struct Row {
    int farm, scenario, line_no;
    double probability;
    std::vector<double> output;
  };
  std::vector<Row> rows;
  int max_farm = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw Error(Errc::dim_mismatch,
                  "row has " + std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()),
                  "line " + std::to_string(i + 1));
    }
    Row row;
    row.line_no = static_cast<int>(i) + 1;
    row.farm = parse_int(fields[0], row.line_no, "farm_id");
    row.scenario = parse_int(fields[1], row.line_no, "scenario_id");
    row.probability = parse_double(fields[2], row.line_no, "probability");
    for (int t = 0; t < horizon; ++t) {
      const double v = parse_double(fields[3 + t], row.line_no, "output");
      if (v < 0.0) {
        throw Error(Errc::negative_output,
                    "wind output " + std::to_string(v) + " MW is negative",
                    "line " + std::to_string(row.line_no));
      }
      row.output.push_back(v);
    }
    if (row.farm < 1 || row.scenario < 1) {
      throw Error(Errc::dim_mismatch, "farm_id and scenario_id are 1-based",
                  "line " + std::to_string(row.line_no));
    }
    max_farm = std::max(max_farm, row.farm);
    num_scenarios = std::max(num_scenarios, row.scenario);
    rows.push_back(std::move(row));
  }
  if (max_farm != expected_farms) {
    throw Error(Errc::dim_mismatch, "scenario CSV lists " + std::to_string(max_farm) +
                                        " farms, expected " + std::to_string(expected_farms));
  }
  if (num_scenarios < 1) {
    throw Error(Errc::dim_mismatch, "scenario CSV lists no scenarios");
  }

  ScenarioSet scen;
  scen.num_farms = expected_farms;
  scen.num_scenarios = num_scenarios;
  scen.horizon = horizon;
  scen.probabilities.assign(num_scenarios, -1.0);
  scen.output_mw.assign(
      static_cast<std::size_t>(expected_farms) * num_scenarios * horizon, -1.0);

  for (const auto& row : rows) {
    const int w = row.farm - 1;
    const int s = row.scenario - 1;
    double& prob = scen.probabilities[s];
    if (prob < 0.0) {
      prob = row.probability;
    } else if (std::fabs(prob - row.probability) > 1e-12) {
      throw Error(Errc::prob_disagreement,
                  "scenario " + std::to_string(row.scenario) +
                      " has different probabilities across farms",
                  "line " + std::to_string(row.line_no));
    }
    for (int t = 0; t < horizon; ++t) {
      double& cell = scen.output(w, s, t);
      if (cell >= 0.0) {
        throw Error(Errc::dim_mismatch,
                    "duplicate row for farm " + std::to_string(row.farm) + " scenario " +
                        std::to_string(row.scenario),
                    "line " + std::to_string(row.line_no));
      }
      cell = row.output[t];
    }
  }
  for (double p : scen.probabilities) {
    if (p < 0.0) throw Error(Errc::dim_mismatch, "scenario grid has missing rows");
    if (p == 0.0) throw Error(Errc::prob_sum, "scenario probability is zero");
  }
  for (double v : scen.output_mw) {
    if (v < 0.0) throw Error(Errc::dim_mismatch, "scenario grid has missing farm rows");
  }

  double sum = 0.0;
  for (double p : scen.probabilities) sum += p;
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw Error(Errc::prob_sum, "probabilities sum to " + std::to_string(sum));
  }
  for (double& p : scen.probabilities) p /= sum;
  return scen;
}

std::string serialize_scenarios(const ScenarioSet& scen) {
  std::string out = "farm_id,scenario_id,probability";
  char buf[64];
  for (int t = 1; t <= scen.horizon; ++t) {
    std::snprintf(buf, sizeof(buf), ",t%d", t);
    out += buf;
  }
  out += "\n";
  for (int w = 0; w < scen.num_farms; ++w) {
    for (int s = 0; s < scen.num_scenarios; ++s) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g", w + 1, s + 1, scen.probabilities[s]);
      out += buf;
      for (int t = 0; t < scen.horizon; ++t) {
        std::snprintf(buf, sizeof(buf), ",%.17g", scen.output(w, s, t));
        out += buf;
      }
      out += "\n";
    }
  }
  return out;
}

Network attach_profile(const Network& network, std::string_view csv_text) {
  const auto lines = split_lines(csv_text);
  if (lines.empty()) throw Error(Errc::horizon_mismatch, "profile CSV is empty");
  const auto header = split_fields(lines[0]);
  if (header.size() < 2 || header[0] != "load_id") {
    throw Error(Errc::malformed_matrix, "profile CSV header must be load_id,t1..tT[,flex_lo,flex_hi]");
  }
  int horizon = 0;
  bool has_flex = false;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "flex_lo") {
      if (c + 2 != header.size() || header[c + 1] != "flex_hi") {
        throw Error(Errc::malformed_matrix, "flex columns must be flex_lo,flex_hi at the end");
      }
      has_flex = true;
      break;
    }
    ++horizon;
  }
  if (horizon < 1) throw Error(Errc::horizon_mismatch, "profile CSV has no period columns");
  if (network.horizon_length != 1 && network.horizon_length != horizon) {
    throw Error(Errc::horizon_mismatch,
                "network horizon " + std::to_string(network.horizon_length) +
                    " differs from profile horizon " + std::to_string(horizon));
  }

  Network out = network;
  out.horizon_length = horizon;
  // Loads missing from the CSV keep a flat profile at their base demand.
  for (auto& load : out.loads) {
    const double base = load.demand_mw.empty() ? 0.0 : load.demand_mw.front();
    const double lo = load.flex_lo.empty() ? 1.0 : load.flex_lo.front();
    const double hi = load.flex_hi.empty() ? 1.0 : load.flex_hi.front();
    load.demand_mw.assign(horizon, base);
    load.flex_lo.assign(horizon, lo);
    load.flex_hi.assign(horizon, hi);
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw Error(Errc::horizon_mismatch,
                  "row has " + std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()),
                  "line " + std::to_string(i + 1));
    }
    const int line_no = static_cast<int>(i) + 1;
    const int id = parse_int(fields[0], line_no, "load_id");
    Load* load = nullptr;
    for (auto& l : out.loads) {
      if (l.id == id) {
        load = &l;
        break;
      }
    }
    if (load == nullptr) {
      throw Error(Errc::unknown_load_id, "no load with id " + std::to_string(id),
                  "line " + std::to_string(line_no));
    }
    const double base = load->demand_mw.empty() ? 0.0 : load->demand_mw.front();
    for (int t = 0; t < horizon; ++t) {
      load->demand_mw[t] = base * parse_double(fields[1 + t], line_no, "multiplier");
    }
    if (has_flex) {
      const double lo = parse_double(fields[1 + horizon], line_no, "flex_lo");
      const double hi = parse_double(fields[2 + horizon], line_no, "flex_hi");
      load->flex_lo.assign(horizon, lo);
      load->flex_hi.assign(horizon, hi);
      load->is_flexible = !(lo == 1.0 && hi == 1.0);
    }
  }
  return out;
}

}  // namespace flexopf
