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

#include <string>
#include <vector>

#include "flexopf/case_io.hpp"
#include "flexopf/errors.hpp"
#include "json.hpp"

namespace flexopf {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(Errc::schema_violation, message, path);
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing field");
  return *it;
}

double number_at(const Json& obj, const char* key, const std::string& path) {
  const Json& v = member(obj, key, path);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->is_number() ? it->get<double>() : fallback;
}

int int_at(const Json& obj, const char* key, const std::string& path) {
  const Json& v = member(obj, key, path);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<int>();
}

bool bool_or(const Json& obj, const char* key, bool fallback) {
  auto it = obj.find(key);
  return it != obj.end() && it->is_boolean() ? it->get<bool>() : fallback;
}

std::vector<double> series_at(const Json& obj, const char* key, const std::string& path,
                              int expected_len) {
  const Json& v = member(obj, key, path);
  if (!v.is_array()) fail(path + "/" + key, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) {
      fail(path + "/" + key + "/" + std::to_string(k), "expected a number");
    }
    out.push_back(v[k].get<double>());
  }
  if (expected_len >= 0 && static_cast<int>(out.size()) != expected_len) {
    fail(path + "/" + key, "expected " + std::to_string(expected_len) + " entries, found " +
                               std::to_string(out.size()));
  }
  return out;
}

CostFunction cost_at(const Json& obj, const std::string& path) {
  const Json& v = member(obj, "cost", path);
  if (!v.is_object()) fail(path + "/cost", "expected an object");
  const Json& kind = member(v, "kind", path + "/cost");
  if (!kind.is_string()) fail(path + "/cost/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "linear") {
    return CostFunction::linear(number_at(v, "c1", path + "/cost"),
                                number_at(v, "c0", path + "/cost"));
  }
  if (k == "quadratic") {
    return CostFunction::quadratic(number_at(v, "c2", path + "/cost"),
                                   number_at(v, "c1", path + "/cost"),
                                   number_at(v, "c0", path + "/cost"));
  }
  if (k == "piecewise") {
    const Json& pts = member(v, "points", path + "/cost");
    if (!pts.is_array() || pts.size() < 2) {
      fail(path + "/cost/points", "expected an array of at least two [p, cost] pairs");
    }
    std::vector<CostFunction::Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Json& p = pts[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        fail(path + "/cost/points/" + std::to_string(i), "expected [p_mw, cost]");
      }
      points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return CostFunction::piecewise_linear(std::move(points));
  }
  fail(path + "/cost/kind", "unknown cost kind '" + k + "'");
}

}  // namespace

CaseDocument parse_native(std::string_view json_text) {
  Json root = Json::parse(json_text, nullptr, false);
  if (root.is_discarded()) {
    throw Error(Errc::schema_violation, "input is not valid JSON", "/");
  }
  if (!root.is_object()) fail("/", "expected a top-level object");

  const Json& schema = member(root, "schema", "");
  if (!schema.is_number_integer() || schema.get<int>() != 1) {
    fail("/schema", "unsupported schema version");
  }

  CaseDocument doc;
  doc.source_format = CaseDocument::Format::native_json;
  if (auto it = root.find("name"); it != root.end() && it->is_string()) {
    doc.metadata.name = it->get<std::string>();
  }
  if (auto it = root.find("provenance"); it != root.end() && it->is_string()) {
    doc.metadata.provenance = it->get<std::string>();
  }
  if (auto it = root.find("comments"); it != root.end() && it->is_array()) {
    for (const auto& c : *it) {
      if (c.is_string()) doc.metadata.comments.push_back(c.get<std::string>());
    }
  }

  Network& net = doc.network;
  net.base_mva = number_at(root, "base_mva", "");
  doc.metadata.base_mva = net.base_mva;
  net.horizon_length = int_at(root, "horizon", "");
  if (net.horizon_length < 1) fail("/horizon", "horizon must be at least 1");
  const int T = net.horizon_length;

  const Json& buses = member(root, "buses", "");
  if (!buses.is_array() || buses.empty()) fail("/buses", "expected a non-empty array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string path = "/buses/" + std::to_string(i);
    Bus b;
    b.id = int_at(buses[i], "id", path);
    b.is_slack = bool_or(buses[i], "slack", false);
    net.buses.push_back(b);
  }

  const Json& lines = member(root, "lines", "");
  if (!lines.is_array()) fail("/lines", "expected an array");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string path = "/lines/" + std::to_string(i);
    Line l;
    l.id = int_at(lines[i], "id", path);
    l.from_bus = int_at(lines[i], "from", path);
    l.to_bus = int_at(lines[i], "to", path);
    l.susceptance_pu = number_at(lines[i], "susceptance", path);
    l.tap_ratio = number_or(lines[i], "tap", 1.0);
    if (auto it = lines[i].find("limit_mw"); it != lines[i].end() && it->is_number()) {
      l.flow_limit_mw = it->get<double>();
    }
    net.lines.push_back(l);
  }

  const Json& gens = member(root, "generators", "");
  if (!gens.is_array()) fail("/generators", "expected an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string path = "/generators/" + std::to_string(i);
    Generator g;
    g.id = int_at(gens[i], "id", path);
    g.bus = int_at(gens[i], "bus", path);
    g.p_min_mw = number_at(gens[i], "p_min", path);
    g.p_max_mw = number_at(gens[i], "p_max", path);
    g.ramp_down_mw = number_at(gens[i], "ramp_down", path);
    g.ramp_up_mw = number_at(gens[i], "ramp_up", path);
    g.cost = cost_at(gens[i], path);
    net.generators.push_back(g);
  }

  if (auto it = root.find("wind_farms"); it != root.end()) {
    if (!it->is_array()) fail("/wind_farms", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "/wind_farms/" + std::to_string(i);
      WindFarm w;
      w.id = int_at((*it)[i], "id", path);
      w.bus = int_at((*it)[i], "bus", path);
      w.spillage_cost = number_at((*it)[i], "spillage_cost", path);
      net.wind_farms.push_back(w);
    }
  }

  const Json& loads = member(root, "loads", "");
  if (!loads.is_array()) fail("/loads", "expected an array");
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const std::string path = "/loads/" + std::to_string(i);
    Load l;
    l.id = int_at(loads[i], "id", path);
    l.bus = int_at(loads[i], "bus", path);
    l.is_flexible = bool_or(loads[i], "flexible", false);
    l.demand_mw = series_at(loads[i], "demand_mw", path, T);
    if (loads[i].contains("flex_lo")) {
      l.flex_lo = series_at(loads[i], "flex_lo", path, T);
    } else {
      l.flex_lo.assign(T, 1.0);
    }
    if (loads[i].contains("flex_hi")) {
      l.flex_hi = series_at(loads[i], "flex_hi", path, T);
    } else {
      l.flex_hi.assign(T, 1.0);
    }
    net.loads.push_back(l);
  }

  return doc;
}

std::string serialize_native(const CaseDocument& doc) {
  const Network& net = doc.network;
  Json root;
  root["schema"] = 1;
  root["name"] = doc.metadata.name;
  root["provenance"] = doc.metadata.provenance;
  if (!doc.metadata.comments.empty()) root["comments"] = doc.metadata.comments;
  root["base_mva"] = net.base_mva;
  root["horizon"] = net.horizon_length;

  root["buses"] = Json::array();
  for (const auto& b : net.buses) {
    Json j;
    j["id"] = b.id;
    j["slack"] = b.is_slack;
    root["buses"].push_back(std::move(j));
  }
  root["lines"] = Json::array();
  for (const auto& l : net.lines) {
    Json j;
    j["id"] = l.id;
    j["from"] = l.from_bus;
    j["to"] = l.to_bus;
    j["susceptance"] = l.susceptance_pu;
    j["tap"] = l.tap_ratio;
    if (l.flow_limit_mw) j["limit_mw"] = *l.flow_limit_mw;
    root["lines"].push_back(std::move(j));
  }
  root["generators"] = Json::array();
  for (const auto& g : net.generators) {
    Json j;
    j["id"] = g.id;
    j["bus"] = g.bus;
    j["p_min"] = g.p_min_mw;
    j["p_max"] = g.p_max_mw;
    j["ramp_down"] = g.ramp_down_mw;
    j["ramp_up"] = g.ramp_up_mw;
    Json cost;
    switch (g.cost.kind()) {
      case CostFunction::Kind::linear:
        cost["kind"] = "linear";
        cost["c1"] = g.cost.c1();
        cost["c0"] = g.cost.c0();
        break;
      case CostFunction::Kind::quadratic:
        cost["kind"] = "quadratic";
        cost["c2"] = g.cost.c2();
        cost["c1"] = g.cost.c1();
        cost["c0"] = g.cost.c0();
        break;
      case CostFunction::Kind::piecewise_linear: {
        cost["kind"] = "piecewise";
        Json pts = Json::array();
        for (const auto& p : g.cost.points()) pts.push_back(Json::array({p.p_mw, p.cost}));
        cost["points"] = std::move(pts);
        break;
      }
    }
    j["cost"] = std::move(cost);
    root["generators"].push_back(std::move(j));
  }
  root["wind_farms"] = Json::array();
  for (const auto& w : net.wind_farms) {
    Json j;
    j["id"] = w.id;
    j["bus"] = w.bus;
    j["spillage_cost"] = w.spillage_cost;
    root["wind_farms"].push_back(std::move(j));
  }
  root["loads"] = Json::array();
  for (const auto& l : net.loads) {
    Json j;
    j["id"] = l.id;
    j["bus"] = l.bus;
    j["flexible"] = l.is_flexible;
    j["demand_mw"] = l.demand_mw;
    j["flex_lo"] = l.flex_lo;
    j["flex_hi"] = l.flex_hi;
    root["loads"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

}  // namespace flexopf
