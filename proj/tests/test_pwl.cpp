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

#include "doctest.h"
#include "flexopf/errors.hpp"
#include "flexopf/formulation.hpp"

using namespace flexopf;

TEST_CASE("single segment is the endpoint secant") {
  const CostFunction quad = CostFunction::quadratic(1.0, 0.0, 0.0);  // p^2
  const CostFunction pwl = pwl_approximate(quad, 0.0, 10.0, 1);
  REQUIRE(pwl.points().size() == 2);
  CHECK(pwl.points()[0].p_mw == doctest::Approx(0.0));
  CHECK(pwl.points()[0].cost == doctest::Approx(0.0));
  CHECK(pwl.points()[1].p_mw == doctest::Approx(10.0));
  CHECK(pwl.points()[1].cost == doctest::Approx(100.0));
  CHECK(pwl.marginal(5.0) == doctest::Approx(10.0));
}

TEST_CASE("two segments break at the midpoint with secant slopes") {
  const CostFunction quad = CostFunction::quadratic(1.0, 0.0, 0.0);
  const CostFunction pwl = pwl_approximate(quad, 0.0, 10.0, 2);
  REQUIRE(pwl.points().size() == 3);
  CHECK(pwl.points()[1].p_mw == doctest::Approx(5.0));
  CHECK(pwl.points()[1].cost == doctest::Approx(25.0));
  CHECK(pwl.marginal(2.0) == doctest::Approx(5.0));
  CHECK(pwl.marginal(7.0) == doctest::Approx(15.0));
}

TEST_CASE("max approximation error for p^2 with 10 segments is 0.25") {
  // Dense-grid oracle: evaluate both functions and take the largest gap.
  const CostFunction quad = CostFunction::quadratic(1.0, 0.0, 0.0);
  const CostFunction pwl = pwl_approximate(quad, 0.0, 10.0, 10);
  double max_err = 0.0, min_signed = kInf;
  for (int k = 0; k <= 100000; ++k) {
    const double p = 10.0 * k / 100000.0;
    const double gap = pwl.value(p) - quad.value(p);
    max_err = std::max(max_err, std::fabs(gap));
    min_signed = std::min(min_signed, gap);
  }
  CHECK(max_err == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(min_signed >= -1e-12);  // secant never under-estimates a convex function
}

TEST_CASE("documented bound c2*(width/2)^2 holds for general quadratics") {
  const CostFunction quad = CostFunction::quadratic(0.013, 7.5, 42.0);
  const double p_min = 12.0, p_max = 348.0;
  const int segments = 10;
  const CostFunction pwl = pwl_approximate(quad, p_min, p_max, segments);
  const double width = (p_max - p_min) / segments;
  const double bound = 0.013 * (width / 2.0) * (width / 2.0);
  double max_err = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double p = p_min + (p_max - p_min) * k / 20000.0;
    max_err = std::max(max_err, std::fabs(pwl.value(p) - quad.value(p)));
  }
  CHECK(max_err <= bound * (1.0 + 1e-12));
}

TEST_CASE("slopes are non-decreasing") {
  const CostFunction quad = CostFunction::quadratic(0.05, 3.0, 10.0);
  const CostFunction pwl = pwl_approximate(quad, 0.0, 200.0, 7);
  const auto& pts = pwl.points();
  double prev = -kInf;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double slope = (pts[k].cost - pts[k - 1].cost) / (pts[k].p_mw - pts[k - 1].p_mw);
    CHECK(slope >= prev);
    prev = slope;
  }
}

TEST_CASE("negative curvature is rejected") {
  const CostFunction bad = CostFunction::quadratic(-1.0, 0.0, 0.0);
  CHECK_THROWS_AS(pwl_approximate(bad, 0.0, 1.0, 2), Error);
}
