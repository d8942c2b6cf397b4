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

#ifndef FLEXOPF_TESTS_SUPPORT_VERTEX_ENUM_HPP_
#define FLEXOPF_TESTS_SUPPORT_VERTEX_ENUM_HPP_

#include <cmath>
#include <vector>

#include "flexopf/lp.hpp"

namespace flexopf::testing {

// Brute-force LP ground truth for small instances: every vertex of the
// (boxed) feasible region is enumerated by solving all n-subsets of tight
// constraints. Infinite bounds are replaced by a large box; unboundedness is
// detected by growing the box and watching the objective escape.
struct OracleResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double objective = 0.0;
};

namespace oracle_detail {

// Solves the dense k x k system in place; true when comfortably nonsingular.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b, int k) {
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r) {
      if (std::fabs(a[r * k + col]) > std::fabs(a[piv * k + col])) piv = r;
    }
    if (std::fabs(a[piv * k + col]) < 1e-9) return false;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(a[piv * k + c], a[col * k + c]);
      std::swap(b[piv], b[col]);
    }
    const double d = a[col * k + col];
    for (int r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
      b[r] -= f * b[col];
    }
  }
  for (int col = k - 1; col >= 0; --col) {
    double acc = b[col];
    for (int c = col + 1; c < k; ++c) acc -= a[col * k + c] * b[c];
    b[col] = acc / a[col * k + col];
  }
  return true;
}

struct BoxedLp {
  int n = 0, m = 0;
  std::vector<double> c, lo, up, row_lo, row_up;
  std::vector<std::vector<double>> rows;  // dense row coefficients
  bool boxed_any = false;
};

inline BoxedLp box(const LinearProgram& lp, double big) {
  BoxedLp out;
  out.n = lp.num_vars();
  out.m = lp.num_rows();
  out.c = lp.obj;
  out.lo = lp.col_lo;
  out.up = lp.col_up;
  out.row_lo = lp.row_lo;
  out.row_up = lp.row_up;
  for (int j = 0; j < out.n; ++j) {
    if (!std::isfinite(out.lo[j])) {
      out.lo[j] = -big;
      out.boxed_any = true;
    }
    if (!std::isfinite(out.up[j])) {
      out.up[j] = big;
      out.boxed_any = true;
    }
  }
  out.rows.assign(out.m, std::vector<double>(out.n, 0.0));
  for (int j = 0; j < out.n; ++j) {
    auto rr = lp.A.col_rows(j);
    auto vv = lp.A.col_values(j);
    for (std::size_t k = 0; k < rr.size(); ++k) out.rows[rr[k]][j] = vv[k];
  }
  return out;
}

// Minimum objective over all feasible vertices of the boxed polytope;
// NaN when no vertex is feasible.
inline double boxed_minimum(const BoxedLp& lp) {
  const int n = lp.n, m = lp.m;
  const double feas_eps = 1e-6;

  double best = std::nan("");
  std::vector<int> groups(n);  // chosen tight groups: 0..n-1 vars, n..n+m-1 rows
  std::vector<double> a(static_cast<std::size_t>(n) * n), b(n), x(n);

  // Iterate all size-n subsets of the n+m constraint groups.
  auto evaluate = [&]() {
    // Side choices: bit per group (lower/upper side). Equality groups have
    // one side only; iterating both just repeats the same system.
    const int combos = 1 << n;
    for (int sides = 0; sides < combos; ++sides) {
      for (int g = 0; g < n; ++g) {
        const int id = groups[g];
        const bool hi_side = (sides >> g) & 1;
        if (id < n) {
          const double bound = hi_side ? lp.up[id] : lp.lo[id];
          for (int cidx = 0; cidx < n; ++cidx) a[g * n + cidx] = 0.0;
          a[g * n + id] = 1.0;
          b[g] = bound;
        } else {
          const int r = id - n;
          const double bound = hi_side ? lp.row_up[r] : lp.row_lo[r];
          if (!std::isfinite(bound)) goto next_sides;  // one-sided row, no face
          for (int cidx = 0; cidx < n; ++cidx) a[g * n + cidx] = lp.rows[r][cidx];
          b[g] = bound;
        }
      }
      {
        std::vector<double> aa = a, bb = b;
        if (!solve_dense(aa, bb, n)) goto next_sides;
        for (int j = 0; j < n; ++j) x[j] = bb[j];
        for (int j = 0; j < n; ++j) {
          if (x[j] < lp.lo[j] - feas_eps || x[j] > lp.up[j] + feas_eps) goto next_sides;
        }
        for (int r = 0; r < m; ++r) {
          double act = 0.0;
          for (int j = 0; j < n; ++j) act += lp.rows[r][j] * x[j];
          if (act < lp.row_lo[r] - feas_eps || act > lp.row_up[r] + feas_eps) goto next_sides;
        }
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += lp.c[j] * x[j];
        if (std::isnan(best) || obj < best) best = obj;
      }
    next_sides:;
    }
  };

  // Recursive subset enumeration over groups.
  auto recurse = [&](auto&& self, int depth, int start) -> void {
    if (depth == n) {
      evaluate();
      return;
    }
    for (int g = start; g < n + m; ++g) {
      groups[depth] = g;
      self(self, depth + 1, g + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace oracle_detail

inline OracleResult vertex_enum_solve(const LinearProgram& lp) {
  using oracle_detail::box;
  using oracle_detail::boxed_minimum;

  OracleResult out;
  const double big1 = 1e7;
  const oracle_detail::BoxedLp lp1 = box(lp, big1);
  const double obj1 = boxed_minimum(lp1);
  if (std::isnan(obj1)) {
    out.status = OracleResult::Status::infeasible;
    return out;
  }
  if (!lp1.boxed_any) {
    out.status = OracleResult::Status::optimal;
    out.objective = obj1;
    return out;
  }
  // A strictly better optimum on a larger box certifies an unbounded ray;
  // equality means the artificial box was not active (or rides a zero-cost
  // ray, which still leaves the optimal value correct).
  const oracle_detail::BoxedLp lp2 = box(lp, 3.7 * big1);
  const double obj2 = boxed_minimum(lp2);
  if (!std::isnan(obj2) && obj2 < obj1 - 1e-6 * (1.0 + std::fabs(obj1))) {
    out.status = OracleResult::Status::unbounded;
    return out;
  }
  out.status = OracleResult::Status::optimal;
  out.objective = obj1;
  return out;
}

}  // namespace flexopf::testing

#endif  // FLEXOPF_TESTS_SUPPORT_VERTEX_ENUM_HPP_
