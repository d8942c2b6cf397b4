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

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "flexopf/errors.hpp"
#include "flexopf/lp.hpp"

namespace flexopf {

namespace {

std::string describe(const char* what, int index, double magnitude) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s at %d, magnitude %.3e", what, index, magnitude);
  return buf;
}

}  // namespace

CertificateReport check_certificate(const LinearProgram& lp, const LpSolution& sol,
                                    const SolverParams& params) {
  CertificateReport report;
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  if (sol.status == SolveStatus::unbounded || sol.status == SolveStatus::iteration_limit) {
    report.ok = true;  // nothing verifiable for these statuses
    return report;
  }

  if (sol.status == SolveStatus::infeasible) {
    // Farkas check: with g = A^T y, every feasible point satisfies
    // g.x - y.w = 0 where w is the row activity. If the box maximum of that
    // expression is negative (or the minimum positive), no feasible point
    // exists.
    if (static_cast<int>(sol.farkas.size()) != m) {
      report.failures.push_back({"farkas_missing", 0.0});
      return report;
    }
    std::vector<double> g(n, 0.0);
    double ynorm = 0.0;
    for (int r = 0; r < m; ++r) ynorm = std::max(ynorm, std::fabs(sol.farkas[r]));
    for (int j = 0; j < n; ++j) {
      auto rows = lp.A.col_rows(j);
      auto vals = lp.A.col_values(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < rows.size(); ++k) dot += sol.farkas[rows[k]] * vals[k];
      g[j] = dot;
    }
    const double gtol = 1e-11 * (1.0 + ynorm);
    double f_max = 0.0, f_min = 0.0, scale = 1.0;
    bool max_ok = true, min_ok = true;
    auto add_term = [&](double coeff, double lo, double hi) {
      if (std::fabs(coeff) <= gtol) return;
      const double tmax = coeff > 0.0 ? coeff * hi : coeff * lo;
      const double tmin = coeff > 0.0 ? coeff * lo : coeff * hi;
      if (std::isfinite(tmax)) {
        f_max += tmax;
        scale += std::fabs(tmax);
      } else {
        max_ok = false;
      }
      if (std::isfinite(tmin)) {
        f_min += tmin;
        scale += std::fabs(tmin);
      } else {
        min_ok = false;
      }
    };
    for (int j = 0; j < n; ++j) add_term(g[j], lp.col_lo[j], lp.col_up[j]);
    for (int r = 0; r < m; ++r) add_term(-sol.farkas[r], lp.row_lo[r], lp.row_up[r]);
    const double eps = 1e-9 * scale;
    if ((max_ok && f_max < -eps) || (min_ok && f_min > eps)) {
      report.ok = true;
    } else {
      report.failures.push_back({"farkas_not_separating", max_ok ? f_max : kInf});
    }
    return report;
  }

  // --- optimal ---
  if (static_cast<int>(sol.primal.size()) != n || static_cast<int>(sol.duals.size()) != m) {
    report.failures.push_back({"solution_dimensions", 0.0});
    return report;
  }

  double cscale = 0.0;
  for (double c : lp.obj) cscale = std::max(cscale, std::fabs(c));
  const double dual_tol = 10.0 * params.opt_tol * (1.0 + cscale);

  // Primal feasibility: variable bounds and row activity ranges.
  std::vector<double> act(m, 0.0);
  for (int j = 0; j < n; ++j) {
    const double xj = sol.primal[j];
    auto rows = lp.A.col_rows(j);
    auto vals = lp.A.col_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) act[rows[k]] += vals[k] * xj;
  }
  for (int j = 0; j < n; ++j) {
    const double xj = sol.primal[j];
    const double lo = lp.col_lo[j], up = lp.col_up[j];
    const double v = std::max(lo - xj, xj - up);
    const double tol = params.feas_tol * (1.0 + std::max(std::fabs(lo), 0.0) +
                                          std::max(std::fabs(xj), 0.0));
    if (v > std::max(tol, 1e-9)) {
      report.failures.push_back({describe("primal_feasibility: variable bound", j, v), v});
    }
    report.max_primal_violation = std::max(report.max_primal_violation, std::max(v, 0.0));
  }
  for (int r = 0; r < m; ++r) {
    const double v = std::max(lp.row_lo[r] - act[r], act[r] - lp.row_up[r]);
    const double tol =
        params.feas_tol * (1.0 + std::fabs(act[r])) + 1e-9 * (1.0 + std::fabs(act[r]));
    if (v > tol) {
      report.failures.push_back({describe("primal_feasibility: row activity", r, v), v});
    }
    report.max_primal_violation = std::max(report.max_primal_violation, std::max(v, 0.0));
  }

  // Dual feasibility: reduced-cost signs consistent with the bound status,
  // recomputed from scratch rather than trusting solver state.
  std::vector<double> d(n, 0.0);
  for (int j = 0; j < n; ++j) {
    auto rows = lp.A.col_rows(j);
    auto vals = lp.A.col_values(j);
    double dot = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) dot += sol.duals[rows[k]] * vals[k];
    d[j] = lp.obj[j] - dot;
  }
  auto near = [&](double a, double b) {
    return std::fabs(a - b) <= params.feas_tol * (1.0 + std::fabs(b)) + 1e-9;
  };
  for (int j = 0; j < n; ++j) {
    const double lo = lp.col_lo[j], up = lp.col_up[j];
    if (lo == up) continue;
    const double xj = sol.primal[j];
    const bool at_lo = std::isfinite(lo) && near(xj, lo);
    const bool at_up = std::isfinite(up) && near(xj, up);
    double v = 0.0;
    if (at_lo && !at_up) {
      v = -d[j];
    } else if (at_up && !at_lo) {
      v = d[j];
    } else if (!at_lo && !at_up) {
      v = std::fabs(d[j]);
    }
    if (v > dual_tol) {
      report.failures.push_back({describe("dual_feasibility: reduced cost sign", j, v), v});
    }
    report.max_dual_violation = std::max(report.max_dual_violation, std::max(v, 0.0));
  }
  for (int r = 0; r < m; ++r) {
    const double lo = lp.row_lo[r], up = lp.row_up[r];
    if (lo == up) continue;
    const double yr = sol.duals[r];
    const bool at_lo = std::isfinite(lo) && near(act[r], lo);
    const bool at_up = std::isfinite(up) && near(act[r], up);
    double v = 0.0;
    if (at_lo && !at_up) {
      v = -yr;
    } else if (at_up && !at_lo) {
      v = yr;
    } else if (!at_lo && !at_up) {
      v = std::fabs(yr);
    }
    if (v > dual_tol) {
      report.failures.push_back({describe("dual_feasibility: row dual sign", r, v), v});
    }
    report.max_dual_violation = std::max(report.max_dual_violation, std::max(v, 0.0));
  }

  // Strong duality. The dual objective pairs each multiplier with the bound
  // it presses against; multipliers below the dual tolerance contribute via
  // the activity so spurious infinities cannot appear.
  double dual_obj = lp.obj_offset;
  bool dual_obj_ok = true;
  for (int r = 0; r < m; ++r) {
    const double yr = sol.duals[r];
    if (std::fabs(yr) <= dual_tol) {
      dual_obj += yr * act[r];
      continue;
    }
    const double side = yr > 0.0 ? lp.row_lo[r] : lp.row_up[r];
    if (!std::isfinite(side)) {
      dual_obj_ok = false;
      report.failures.push_back({describe("complementarity: dual on free side", r, yr),
                                 std::fabs(yr)});
      continue;
    }
    dual_obj += yr * side;
  }
  for (int j = 0; j < n; ++j) {
    const double dj = d[j];
    if (std::fabs(dj) <= dual_tol) {
      dual_obj += dj * sol.primal[j];
      continue;
    }
    const double side = dj > 0.0 ? lp.col_lo[j] : lp.col_up[j];
    if (!std::isfinite(side)) {
      dual_obj_ok = false;
      report.failures.push_back(
          {describe("complementarity: reduced cost on free side", j, dj), std::fabs(dj)});
      continue;
    }
    dual_obj += dj * side;
  }

  double primal_obj = lp.obj_offset;
  for (int j = 0; j < n; ++j) primal_obj += lp.obj[j] * sol.primal[j];
  if (dual_obj_ok) {
    const double gap = std::fabs(primal_obj - dual_obj);
    report.duality_gap = gap;
    const double gap_tol = std::max(params.opt_tol, 1e-9) * (1.0 + std::fabs(primal_obj));
    if (gap > gap_tol) {
      report.failures.push_back({describe("strong_duality: gap", 0, gap), gap});
    }
    report.complementarity_violation = gap;
  }

  report.ok = report.failures.empty();
  return report;
}

}  // namespace flexopf
