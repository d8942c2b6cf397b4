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

#include "doctest.h"
#include "flexopf/lp.hpp"

using namespace flexopf;

namespace {

LinearProgram simple_lp() {
  // min x  s.t.  x >= 1,  x in [0, 10]
  LinearProgram lp;
  lp.A = SparseMatrix(1, 1);
  lp.A.add(0, 0, 1.0);
  lp.A.finalize();
  lp.obj = {1.0};
  lp.col_lo = {0.0};
  lp.col_up = {10.0};
  lp.row_lo = {1.0};
  lp.row_up = {kInf};
  return lp;
}

}  // namespace

TEST_CASE("certificate validates a clean optimal solution") {
  const LinearProgram lp = simple_lp();
  const LpSolution sol = solve(lp);
  const CertificateReport rep = check_certificate(lp, sol);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
  CHECK(rep.duality_gap <= 1e-9 * (1.0 + 1.0));
}

TEST_CASE("perturbing the primal on a tight bound invalidates the certificate") {
  const LinearProgram lp = simple_lp();
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  sol.primal[0] -= 1e-3;  // below the binding row bound
  const CertificateReport rep = check_certificate(lp, sol);
  CHECK_FALSE(rep.ok);
  bool primal_flagged = false;
  for (const auto& f : rep.failures) {
    if (f.condition.find("primal_feasibility") != std::string::npos) primal_flagged = true;
  }
  CHECK(primal_flagged);
}

TEST_CASE("a wrong dual sign is flagged") {
  const LinearProgram lp = simple_lp();
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  sol.duals[0] = -2.0;  // a >= row wants a nonnegative multiplier
  const CertificateReport rep = check_certificate(lp, sol);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("tampered Farkas multipliers are rejected") {
  LinearProgram lp;
  lp.A = SparseMatrix(2, 1);
  lp.A.add(0, 0, 1.0);
  lp.A.add(1, 0, 1.0);
  lp.A.finalize();
  lp.obj = {0.0};
  lp.col_lo = {-10.0};
  lp.col_up = {10.0};
  lp.row_lo = {2.0, -kInf};
  lp.row_up = {kInf, 1.0};
  LpSolution sol = solve(lp);
  REQUIRE(sol.status == SolveStatus::infeasible);
  sol.farkas.assign(sol.farkas.size(), 0.0);
  const CertificateReport rep = check_certificate(lp, sol);
  CHECK_FALSE(rep.ok);
}
