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

#include "cli_app.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "flexopf/analysis.hpp"
#include "flexopf/case_io.hpp"
#include "flexopf/errors.hpp"
#include "flexopf/formulation.hpp"
#include "flexopf/lp.hpp"
#include "flexopf/model.hpp"
#include "flexopf/version.hpp"
#include "json.hpp"

namespace flexopf::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content, std::ostream& err) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    err << "cannot write " << path.string() << "\n";
    throw Error(Errc::io_error, "cannot write file", path.string());
  }
}

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

CaseDocument load_case(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 2 && path.substr(path.size() - 2) == ".m") {
    return parse_matpower(text);
  }
  return parse_native(text);
}

struct Inputs {
  std::vector<std::pair<std::string, std::string>> files;  // path, hash
  void record(const std::string& path, const std::string& content) {
    files.push_back({path, fnv1a64_hex(content)});
  }
};

struct CommonFlags {
  int pwl_segments = 10;
  std::string line_limits = "off";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int scenario_limit = 0;  // 0 = all
  std::string out_dir = ".";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--pwl-segments", flags->pwl_segments,
                  "segments per quadratic cost (default 10)");
  cmd->add_option("--line-limits", flags->line_limits, "on|off (default off)")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--tol", flags->tol, "solver feasibility/optimality tolerance");
  cmd->add_option("--seed", flags->seed, "seed for scenario sampling");
  cmd->add_option("--scenarios", flags->scenario_limit,
                  "solve with a seeded sample of N scenarios");
  cmd->add_option("--out", flags->out_dir, "output directory (default .)");
  cmd->add_option("--format", flags->format, "csv|json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
}

BuildOptions build_options(const CommonFlags& flags, int master_scenarios) {
  BuildOptions options;
  options.pwl_segments = flags.pwl_segments;
  options.enforce_line_limits = flags.line_limits == "on";
  if (flags.scenario_limit > 0 && flags.scenario_limit < master_scenarios) {
    options.scenario_subset =
        sample_scenario_indices(master_scenarios, flags.scenario_limit, flags.seed);
  }
  return options;
}

SolverParams solver_params(const CommonFlags& flags) {
  SolverParams params;
  params.feas_tol = flags.tol;
  params.opt_tol = flags.tol;
  return params;
}

Json options_json(const CommonFlags& flags) {
  Json j;
  j["pwl_segments"] = flags.pwl_segments;
  j["line_limits"] = flags.line_limits;
  j["tol"] = flags.tol;
  j["scenarios"] = flags.scenario_limit;
  j["format"] = flags.format;
  return j;
}

void write_manifest(const fs::path& dir, const std::string& command, const Inputs& inputs,
                    const Json& options, std::uint64_t seed,
                    const std::vector<std::string>& outputs, double total_seconds,
                    std::ostream& err) {
  Json j;
  j["tool"] = "flexopf";
  j["version"] = kVersion;
  j["command"] = command;
  j["inputs"] = Json::array();
  for (const auto& [path, hash] : inputs.files) {
    Json f;
    f["path"] = path;
    f["fnv1a64"] = hash;
    j["inputs"].push_back(std::move(f));
  }
  j["options"] = options;
  j["seed"] = seed;
  j["outputs"] = outputs;
  j["timings"] = Json{{"total_s", total_seconds}};
  write_text(dir / "manifest.json", j.dump(2) + "\n", err);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<std::string> parse_paths(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Network replicate_flat(const Network& network, int horizon) {
  Network out = network;
  out.horizon_length = horizon;
  for (auto& load : out.loads) {
    const double base = load.demand_mw.empty() ? 0.0 : load.demand_mw.front();
    const double lo = load.flex_lo.empty() ? 1.0 : load.flex_lo.front();
    const double hi = load.flex_hi.empty() ? 1.0 : load.flex_hi.front();
    load.demand_mw.assign(horizon, base);
    load.flex_lo.assign(horizon, lo);
    load.flex_hi.assign(horizon, hi);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_solve(const std::string& case_path, const std::string& scenarios_path,
              const std::string& profile_path, const CommonFlags& flags, std::ostream& out,
              std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Inputs inputs;

  CaseDocument doc;
  ScenarioSet scenarios;
  try {
    const std::string case_text = read_file(case_path);
    inputs.record(case_path, case_text);
    doc = case_path.size() >= 2 && case_path.substr(case_path.size() - 2) == ".m"
              ? parse_matpower(case_text)
              : parse_native(case_text);
    for (const auto& note : doc.notes) err << "note: " << note << "\n";

    if (!profile_path.empty()) {
      const std::string profile_text = read_file(profile_path);
      inputs.record(profile_path, profile_text);
      doc.network = attach_profile(doc.network, profile_text);
    }
    if (!scenarios_path.empty()) {
      const std::string scen_text = read_file(scenarios_path);
      inputs.record(scenarios_path, scen_text);
      scenarios = parse_scenarios(scen_text, static_cast<int>(doc.network.wind_farms.size()),
                                  doc.network.horizon_length);
    } else {
      scenarios = ScenarioSet::deterministic(static_cast<int>(doc.network.wind_farms.size()),
                                             doc.network.horizon_length);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInputError;
  }

  const auto violations = validate(doc.network, scenarios);
  if (!violations.empty()) {
    for (const auto& v : violations) err << v.code << ": " << v.message << "\n";
    return kExitInputError;
  }
  for (const auto& w : feasibility_prescreen(doc.network, &scenarios)) {
    err << "warning: " << w.code << ": " << w.message << "\n";
  }

  const fs::path dir(flags.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  try {
    const BuildOptions options = build_options(flags, scenarios.num_scenarios);
    const StochasticProgram prog = build(doc.network, scenarios, options);
    const LpSolution sol = solve(prog.lp, solver_params(flags));
    if (sol.status == SolveStatus::infeasible) {
      err << "model is infeasible\n";
      return kExitInfeasible;
    }
    if (sol.status != SolveStatus::optimal) {
      err << "solver stopped with status " << to_string(sol.status) << "\n";
      return kExitSolverFailure;
    }
    const DispatchReport rep = extract(prog, sol, doc.network, scenarios);

    std::vector<std::string> outputs;
    Json summary;
    summary["status"] = to_string(sol.status);
    summary["objective"] = sol.objective;
    summary["total_cost"] = rep.total_cost;
    summary["conventional_cost"] = rep.conventional_cost;
    summary["expected_spillage_penalty"] = rep.expected_spillage_penalty;
    summary["expected_spillage_mwh"] = rep.expected_spillage_mwh;
    summary["system_price"] = rep.system_price;
    Json uniform = Json::array();
    for (int t = 0; t < rep.horizon; ++t) uniform.push_back(static_cast<bool>(rep.lmp_uniform[t]));
    summary["lmp_uniform"] = std::move(uniform);
    summary["iterations"] = sol.iterations;

    if (flags.format == "csv") {
      std::string dispatch = "generator_id,period,p_mw\n";
      for (int g = 0; g < rep.num_gens; ++g) {
        for (int t = 0; t < rep.horizon; ++t) {
          dispatch += std::to_string(doc.network.generators[g].id) + "," +
                      std::to_string(t + 1) + "," + fmt9(rep.gen_p(g, t)) + "\n";
        }
      }
      write_text(dir / "dispatch.csv", dispatch, err);
      outputs.push_back("dispatch.csv");

      std::string lmp = "bus_id,scenario,period,lmp_usd_per_mwh\n";
      for (int b = 0; b < rep.num_buses; ++b) {
        for (int s = 0; s < rep.num_scenarios; ++s) {
          for (int t = 0; t < rep.horizon; ++t) {
            lmp += std::to_string(doc.network.buses[b].id) + "," + std::to_string(s + 1) + "," +
                   std::to_string(t + 1) + "," + fmt9(rep.at3(rep.lmp, b, s, t)) + "\n";
          }
        }
      }
      write_text(dir / "lmp.csv", lmp, err);
      outputs.push_back("lmp.csv");

      std::string spill = "farm_id,scenario,period,available_mw,used_mw,spilled_mw\n";
      for (int w = 0; w < rep.num_farms; ++w) {
        for (int s = 0; s < rep.num_scenarios; ++s) {
          for (int t = 0; t < rep.horizon; ++t) {
            const double used = rep.at3(rep.wind_used_mw, w, s, t);
            const double spilled = rep.at3(rep.spillage_mw, w, s, t);
            spill += std::to_string(doc.network.wind_farms[w].id) + "," + std::to_string(s + 1) +
                     "," + std::to_string(t + 1) + "," + fmt9(used + spilled) + "," + fmt9(used) +
                     "," + fmt9(spilled) + "\n";
          }
        }
      }
      write_text(dir / "spillage.csv", spill, err);
      outputs.push_back("spillage.csv");
    } else {
      Json report = summary;
      report["gen_setpoints_mw"] = rep.gen_setpoints_mw;
      report["wind_used_mw"] = rep.wind_used_mw;
      report["spillage_mw"] = rep.spillage_mw;
      report["alpha"] = rep.alpha;
      report["load_served_mw"] = rep.load_served_mw;
      report["flows_mw"] = rep.flows_mw;
      report["angles_rad"] = rep.angles_rad;
      report["lmp"] = rep.lmp;
      write_text(dir / "report.json", report.dump(2) + "\n", err);
      outputs.push_back("report.json");
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n", err);
    outputs.push_back("summary.json");

    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, "solve", inputs, options_json(flags), flags.seed, outputs, total, err);
    out << "status optimal, total cost " << fmt9(rep.total_cost) << ", expected spillage "
        << fmt9(rep.expected_spillage_mwh) << " MWh\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitSolverFailure;
  }
}

int cmd_validate(const std::string& case_path, const std::string& scenarios_path,
                 std::ostream& out, std::ostream& err) {
  try {
    const CaseDocument doc = load_case(case_path);
    for (const auto& note : doc.notes) out << "note: " << note << "\n";
    std::vector<Violation> violations;
    ScenarioSet scenarios;
    bool have_scenarios = false;
    if (!scenarios_path.empty()) {
      scenarios = parse_scenarios(read_file(scenarios_path),
                                  static_cast<int>(doc.network.wind_farms.size()),
                                  doc.network.horizon_length);
      have_scenarios = true;
    }
    violations = have_scenarios ? validate(doc.network, scenarios) : validate(doc.network);
    for (const auto& v : violations) out << v.code << ": " << v.message << "\n";
    const auto warnings =
        feasibility_prescreen(doc.network, have_scenarios ? &scenarios : nullptr);
    for (const auto& w : warnings) out << "warning: " << w.code << ": " << w.message << "\n";
    if (violations.empty()) {
      out << "valid\n";
      return kExitOk;
    }
    return kExitInputError;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_sweep(const std::string& kind, const std::string& case_path,
              const std::string& scenarios_path, const std::string& levels_arg,
              const std::string& factors_arg, const std::string& counts_arg,
              const std::string& cases_arg, const std::string& shapes_arg, int repetitions,
              double penetration, double flexibility, const CommonFlags& flags,
              std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Inputs inputs;
  const fs::path dir(flags.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  try {
    std::string csv;
    std::string output_name;
    bool any_ok = false;

    if (kind == "flex" || kind == "penetration" || kind == "scenarios") {
      const std::string case_text = read_file(case_path);
      inputs.record(case_path, case_text);
      CaseDocument doc = case_path.size() >= 2 && case_path.substr(case_path.size() - 2) == ".m"
                             ? parse_matpower(case_text)
                             : parse_native(case_text);
      const std::string scen_text = read_file(scenarios_path);
      inputs.record(scenarios_path, scen_text);
      const ScenarioSet scenarios =
          parse_scenarios(scen_text, static_cast<int>(doc.network.wind_farms.size()),
                          doc.network.horizon_length);
      const auto violations = validate(doc.network, scenarios);
      if (!violations.empty()) {
        for (const auto& v : violations) err << v.code << ": " << v.message << "\n";
        return kExitInputError;
      }
      const BuildOptions options = build_options(flags, scenarios.num_scenarios);
      const SolverParams params = solver_params(flags);

      if (kind == "flex") {
        auto levels = parse_list(levels_arg.empty() ? "0,0.1,0.2,0.3" : levels_arg);
        const SweepResult result =
            flexibility_sweep(doc.network, scenarios, levels, options, params);
        for (const auto& p : result.points) any_ok |= p.ok;
        csv = to_csv(result);
        output_name = "sweep_flex.csv";
      } else if (kind == "penetration") {
        auto factors = parse_list(factors_arg.empty() ? "0,0.5,1,1.5,2" : factors_arg);
        const SweepResult result =
            penetration_sweep(doc.network, scenarios, factors, options, params);
        for (const auto& p : result.points) any_ok |= p.ok;
        csv = to_csv(result);
        output_name = "sweep_penetration.csv";
      } else {
        auto counts = parse_int_list(counts_arg.empty() ? "5,10,20" : counts_arg);
        const RobustnessResult result =
            scenario_robustness(doc.network, scenarios, counts, flags.seed, options, params);
        for (const auto& p : result.points) any_ok |= p.ok;
        csv = to_csv(result);
        output_name = "sweep_scenarios.csv";
      }
    } else if (kind == "timing") {
      if (cases_arg.empty() || shapes_arg.empty()) {
        err << "sweep timing needs --cases and --shapes\n";
        return kExitInputError;
      }
      const std::string shapes_text = read_file(shapes_arg);
      inputs.record(shapes_arg, shapes_text);
      ScenarioSet shapes = parse_scenarios(shapes_text, 4, 12);
      std::vector<TimingCase> cases;
      for (const auto& path : parse_paths(cases_arg)) {
        const std::string text = read_file(path);
        inputs.record(path, text);
        CaseDocument doc = path.size() >= 2 && path.substr(path.size() - 2) == ".m"
                               ? parse_matpower(text)
                               : parse_native(text);
        TimingCase tc;
        tc.name = doc.metadata.name.empty() ? path : doc.metadata.name;
        Network net = replicate_flat(doc.network, shapes.horizon);
        net = with_uniform_ramp(net, 0.10);
        if (flexibility > 0.0) {
          for (auto& load : net.loads) load.is_flexible = true;
          net = with_uniform_flexibility(net, flexibility);
        }
        // Wind at the two largest generator buses.
        std::vector<int> wind_buses;
        {
          std::vector<std::pair<double, int>> ranked;
          for (const auto& g : net.generators) ranked.push_back({g.p_max_mw, g.bus});
          std::sort(ranked.rbegin(), ranked.rend());
          for (const auto& [cap, bus] : ranked) {
            if (std::find(wind_buses.begin(), wind_buses.end(), bus) == wind_buses.end()) {
              wind_buses.push_back(bus);
            }
            if (wind_buses.size() == 2) break;
          }
        }
        net = add_wind_farms(net, wind_buses);
        tc.scenarios = scenarios_for_penetration(shapes, static_cast<int>(wind_buses.size()),
                                                 net, penetration);
        tc.network = std::move(net);
        cases.push_back(std::move(tc));
      }
      const BuildOptions options = build_options(flags, 0);
      const auto points = timing_study(cases, repetitions, options, solver_params(flags));
      for (const auto& p : points) any_ok |= p.ok;
      csv = to_csv(points);
      output_name = "sweep_timing.csv";
    } else {
      err << "unknown sweep kind '" << kind << "'; use flex|penetration|scenarios|timing\n";
      return kExitInputError;
    }

    write_text(dir / output_name, csv, err);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json options = options_json(flags);
    options["kind"] = kind;
    write_manifest(dir, "sweep " + kind, inputs, options, flags.seed, {output_name}, total, err);
    out << "wrote " << (dir / output_name).string() << "\n";
    return any_ok ? kExitOk : kExitSolverFailure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"two-stage stochastic multiperiod DC optimal power flow"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one case and write the dispatch report");
  std::string case_path, scenarios_path, profile_path;
  CommonFlags solve_flags;
  solve_cmd->add_option("case_file", case_path, "case file (.json native or .m)")->required();
  solve_cmd->add_option("scenario_file", scenarios_path, "wind scenario CSV");
  solve_cmd->add_option("profile_file", profile_path, "demand profile CSV");
  add_common(solve_cmd, &solve_flags);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check a case (and scenarios) for errors");
  std::string vcase_path, vscenarios_path;
  validate_cmd->add_option("case_file", vcase_path, "case file")->required();
  validate_cmd->add_option("scenario_file", vscenarios_path, "wind scenario CSV");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a study and write plot-ready CSV");
  std::string kind, scase_path, sscenarios_path;
  std::string levels, factors, counts, cases_list, shapes;
  int repetitions = 3;
  double penetration = 0.15, flexibility = 0.0;
  CommonFlags sweep_flags;
  sweep_cmd->add_option("kind", kind, "flex|penetration|scenarios|timing")->required();
  sweep_cmd->add_option("case_file", scase_path, "case file");
  sweep_cmd->add_option("scenario_file", sscenarios_path, "wind scenario CSV");
  sweep_cmd->add_option("--levels", levels, "flex: comma list of +-fractions");
  sweep_cmd->add_option("--factors", factors, "penetration: comma list of scale factors");
  sweep_cmd->add_option("--counts", counts, "scenarios: comma list of subset sizes");
  sweep_cmd->add_option("--cases", cases_list, "timing: comma list of case files");
  sweep_cmd->add_option("--shapes", shapes, "timing: per-unit scenario shape CSV");
  sweep_cmd->add_option("--reps", repetitions, "timing: repetitions per case (default 3)");
  sweep_cmd->add_option("--penetration", penetration, "timing: wind energy share (default 0.15)");
  sweep_cmd->add_option("--flex", flexibility, "timing: uniform +-flexibility (default 0)");
  add_common(sweep_cmd, &sweep_flags);

  std::vector<const char*> argv;
  argv.push_back("flexopf");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream ss;
    const int code = app.exit(e, ss, ss);
    (code == 0 ? out : err) << ss.str();
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (solve_cmd->parsed()) {
    return cmd_solve(case_path, scenarios_path, profile_path, solve_flags, out, err);
  }
  if (validate_cmd->parsed()) {
    return cmd_validate(vcase_path, vscenarios_path, out, err);
  }
  return cmd_sweep(kind, scase_path, sscenarios_path, levels, factors, counts, cases_list,
                   shapes, repetitions, penetration, flexibility, sweep_flags, out, err);
}

}  // namespace flexopf::cli
