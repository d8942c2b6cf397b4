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
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "flexopf/case_io.hpp"
#include "flexopf/errors.hpp"

namespace flexopf {

namespace {

struct Matrix {
  std::vector<std::vector<double>> rows;
  int first_line = 0;
};

struct Scanner {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') ++line;
    ++pos;
  }
  void skip_space_and_comments() {
    while (!done()) {
      const char c = peek();
      if (c == '%') {
        while (!done() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }
};

bool parse_number(std::string_view token, double* out) {
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

// Reads `[ rows ]` where rows are whitespace-separated numbers terminated by
// ';' or a newline.
Matrix read_matrix(Scanner& s, const std::string& what) {
  Matrix matrix;
  s.skip_space_and_comments();
  if (s.done() || s.peek() != '[') {
    throw Error(Errc::malformed_matrix, what + " is not a matrix",
                "line " + std::to_string(s.line));
  }
  matrix.first_line = s.line;
  s.advance();  // '['
  std::vector<double> row;
  while (true) {
    if (s.done()) {
      throw Error(Errc::malformed_matrix, what + " is unterminated",
                  "line " + std::to_string(s.line));
    }
    const char c = s.peek();
    if (c == '%') {
      while (!s.done() && s.peek() != '\n') s.advance();
      continue;
    }
    if (c == ']') {
      s.advance();
      if (!row.empty()) matrix.rows.push_back(std::move(row));
      break;
    }
    if (c == ';' || c == '\n') {
      s.advance();
      if (!row.empty()) {
        matrix.rows.push_back(std::move(row));
        row = {};
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      s.advance();
      continue;
    }
    // a numeric token
    const std::size_t start = s.pos;
    while (!s.done()) {
      const char t = s.peek();
      if (std::isspace(static_cast<unsigned char>(t)) || t == ';' || t == ',' || t == ']' ||
          t == '%') {
        break;
      }
      s.advance();
    }
    double value = 0.0;
    const std::string_view token = s.text.substr(start, s.pos - start);
    if (!parse_number(token, &value)) {
      throw Error(Errc::malformed_matrix,
                  what + " contains a malformed value '" + std::string(token) + "'",
                  "line " + std::to_string(s.line));
    }
    row.push_back(value);
  }
  if (!matrix.rows.empty()) {
    const std::size_t arity = matrix.rows.front().size();
    for (std::size_t r = 1; r < matrix.rows.size(); ++r) {
      if (matrix.rows[r].size() != arity) {
        throw Error(Errc::malformed_matrix,
                    what + " row " + std::to_string(r + 1) + " has " +
                        std::to_string(matrix.rows[r].size()) + " entries, expected " +
                        std::to_string(arity),
                    "line " + std::to_string(matrix.first_line));
      }
    }
  }
  return matrix;
}

int as_int(double v, const std::string& what) {
  if (!std::isfinite(v) || std::fabs(v) > 2e9 || v != std::floor(v)) {
    throw Error(Errc::malformed_matrix, what + " is not an integer id");
  }
  return static_cast<int>(v);
}

}  // namespace

CaseDocument parse_matpower(std::string_view text) {
  CaseDocument doc;
  doc.source_format = CaseDocument::Format::matpower;
  doc.metadata.provenance = "imported";

  Scanner scanner{text};
  Matrix bus, gen, branch, gencost;
  bool have_bus = false, have_gen = false, have_branch = false, have_gencost = false;
  bool have_base = false;

  while (true) {
    scanner.skip_space_and_comments();
    if (scanner.done()) break;
    // read an identifier-ish token
    const std::size_t start = scanner.pos;
    while (!scanner.done()) {
      const char c = scanner.peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        scanner.advance();
      } else {
        break;
      }
    }
    if (scanner.pos == start) {
      scanner.advance();
      continue;
    }
    std::string token(scanner.text.substr(start, scanner.pos - start));

    if (token == "function") {
      // function mpc = casename
      scanner.skip_space_and_comments();
      std::size_t b = scanner.pos;
      while (!scanner.done() && scanner.peek() != '\n') scanner.advance();
      std::string rest(scanner.text.substr(b, scanner.pos - b));
      const std::size_t eq = rest.find('=');
      if (eq != std::string::npos) {
        std::string name = rest.substr(eq + 1);
        name.erase(0, name.find_first_not_of(" \t\r"));
        name.erase(name.find_last_not_of(" \t\r;") + 1);
        doc.metadata.name = name;
      }
      continue;
    }

    auto expect_assign = [&]() {
      scanner.skip_space_and_comments();
      if (!scanner.done() && scanner.peek() == '=') {
        scanner.advance();
        return true;
      }
      return false;
    };

    if (token == "mpc.baseMVA" || token == "baseMVA") {
      if (!expect_assign()) continue;
      scanner.skip_space_and_comments();
      std::size_t b = scanner.pos;
      while (!scanner.done() && scanner.peek() != ';' && scanner.peek() != '\n') scanner.advance();
      std::string value(scanner.text.substr(b, scanner.pos - b));
      value.erase(std::remove_if(value.begin(), value.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                  value.end());
      double base = 0.0;
      if (!parse_number(value, &base) || base <= 0.0) {
        throw Error(Errc::malformed_matrix, "baseMVA is not a positive number");
      }
      doc.metadata.base_mva = base;
      doc.network.base_mva = base;
      have_base = true;
    } else if (token == "mpc.bus" || token == "bus") {
      if (!expect_assign()) continue;
      bus = read_matrix(scanner, "bus");
      have_bus = true;
    } else if (token == "mpc.gen" || token == "gen") {
      if (!expect_assign()) continue;
      gen = read_matrix(scanner, "gen");
      have_gen = true;
    } else if (token == "mpc.branch" || token == "branch") {
      if (!expect_assign()) continue;
      branch = read_matrix(scanner, "branch");
      have_branch = true;
    } else if (token == "mpc.gencost" || token == "gencost") {
      if (!expect_assign()) continue;
      gencost = read_matrix(scanner, "gencost");
      have_gencost = true;
    }
    // other assignments (mpc.version, bus_name, ...) are skipped token-wise
  }

  if (!have_bus) throw Error(Errc::malformed_matrix, "no bus matrix found");
  if (!have_branch) throw Error(Errc::malformed_matrix, "no branch matrix found");
  if (!have_base) {
    doc.notes.push_back("baseMVA missing, assuming 100");
    doc.network.base_mva = 100.0;
    doc.metadata.base_mva = 100.0;
  }

  Network& net = doc.network;
  net.horizon_length = 1;

  // bus: id, type, Pd (voltage/area/Q columns are discarded)
  int slack_id = -1;
  for (std::size_t r = 0; r < bus.rows.size(); ++r) {
    const auto& row = bus.rows[r];
    if (row.size() < 3) {
      throw Error(Errc::malformed_matrix, "bus matrix needs at least id, type, Pd columns");
    }
    Bus b;
    b.id = as_int(row[0], "bus id");
    const int type = as_int(row[1], "bus type");
    b.is_slack = type == 3;
    if (b.is_slack) slack_id = b.id;
    net.buses.push_back(b);
    const double pd = row[2];
    if (pd > 0.0) {
      Load load;
      load.id = b.id;
      load.bus = b.id;
      load.demand_mw = {pd};
      load.flex_lo = {1.0};
      load.flex_hi = {1.0};
      load.is_flexible = false;
      net.loads.push_back(load);
    }
  }
  if (bus.rows.empty()) throw Error(Errc::malformed_matrix, "bus matrix is empty");
  doc.notes.push_back("bus voltage, area, and Qd columns ignored");

  // branch: from, to, r, x, b, rateA, ..., ratio
  for (std::size_t r = 0; r < branch.rows.size(); ++r) {
    const auto& row = branch.rows[r];
    if (row.size() < 4) {
      throw Error(Errc::malformed_matrix, "branch matrix needs at least from, to, r, x columns");
    }
    Line line;
    line.id = static_cast<int>(r) + 1;
    line.from_bus = as_int(row[0], "branch from bus");
    line.to_bus = as_int(row[1], "branch to bus");
    const double x = row[3];
    if (x == 0.0 || !std::isfinite(x)) {
      throw Error(Errc::zero_reactance,
                  "branch " + std::to_string(r + 1) + " has zero reactance");
    }
    line.susceptance_pu = 1.0 / x;
    const double tap = row.size() > 8 ? row[8] : 0.0;
    line.tap_ratio = tap == 0.0 ? 1.0 : tap;
    const double rate_a = row.size() > 5 ? row[5] : 0.0;
    if (rate_a > 0.0) line.flow_limit_mw = rate_a;
    net.lines.push_back(line);
  }

  // gen: bus, ..., Pmax (col 9), Pmin (col 10)
  if (have_gen) {
    for (std::size_t r = 0; r < gen.rows.size(); ++r) {
      const auto& row = gen.rows[r];
      if (row.size() < 10) {
        throw Error(Errc::malformed_matrix, "gen matrix needs at least 10 columns");
      }
      Generator g;
      g.id = static_cast<int>(r) + 1;
      g.bus = as_int(row[0], "gen bus");
      g.p_max_mw = row[8];
      g.p_min_mw = std::max(0.0, row[9]);
      // No ramp data in the format: leave the full range available.
      g.ramp_down_mw = -g.p_max_mw;
      g.ramp_up_mw = g.p_max_mw;
      g.cost = CostFunction::linear(1.0, 0.0);
      net.generators.push_back(g);
    }
  }

  if (have_gencost) {
    if (gencost.rows.size() < net.generators.size()) {
      throw Error(Errc::malformed_matrix, "gencost has fewer rows than gen");
    }
    for (std::size_t r = 0; r < net.generators.size(); ++r) {
      const auto& row = gencost.rows[r];
      if (row.size() < 4) {
        throw Error(Errc::malformed_matrix, "gencost rows need at least 4 columns");
      }
      const int model = as_int(row[0], "gencost model");
      const int count = as_int(row[3], "gencost n");
      Generator& g = net.generators[r];
      if (model == 2) {
        if (count > 3) {
          throw Error(Errc::unsupported_cost_model,
                      "polynomial cost of degree " + std::to_string(count - 1) +
                          " on generator " + std::to_string(r + 1));
        }
        if (count < 1 || row.size() < 4 + static_cast<std::size_t>(count)) {
          throw Error(Errc::malformed_matrix, "gencost polynomial coefficients missing");
        }
        double c2 = 0, c1 = 0, c0 = 0;
        if (count == 3) {
          c2 = row[4];
          c1 = row[5];
          c0 = row[6];
        } else if (count == 2) {
          c1 = row[4];
          c0 = row[5];
        } else {
          c0 = row[4];
        }
        g.cost = c2 != 0.0 ? CostFunction::quadratic(c2, c1, c0) : CostFunction::linear(c1, c0);
      } else if (model == 1) {
        if (count < 2 || row.size() < 4 + 2 * static_cast<std::size_t>(count)) {
          throw Error(Errc::malformed_matrix, "gencost breakpoint list is incomplete");
        }
        std::vector<CostFunction::Point> points;
        points.reserve(count);
        for (int k = 0; k < count; ++k) {
          points.push_back({row[4 + 2 * k], row[5 + 2 * k]});
        }
        g.cost = CostFunction::piecewise_linear(std::move(points));
      } else {
        throw Error(Errc::unsupported_cost_model,
                    "gencost model " + std::to_string(model) + " is not supported");
      }
    }
  } else if (!net.generators.empty()) {
    doc.notes.push_back("gencost missing, generators priced at 1 $/MWh");
  }

  if (slack_id < 0) {
    // Fall back to the lowest-id bus holding a generator.
    int fallback = -1;
    for (const auto& g : net.generators) {
      if (fallback < 0 || g.bus < fallback) fallback = g.bus;
    }
    if (fallback < 0 && !net.buses.empty()) fallback = net.buses.front().id;
    for (auto& b : net.buses) {
      if (b.id == fallback) b.is_slack = true;
    }
    doc.notes.push_back(std::string(errc_name(Errc::missing_slack)) +
                        ": no type-3 bus; designated bus " + std::to_string(fallback));
  }

  return doc;
}

}  // namespace flexopf
