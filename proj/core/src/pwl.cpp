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

#include "flexopf/errors.hpp"
#include "flexopf/formulation.hpp"

namespace flexopf {

CostFunction pwl_approximate(const CostFunction& cost, double p_min, double p_max,
                             int segments) {
  if (cost.kind() != CostFunction::Kind::quadratic) {
    throw Error(Errc::invalid_argument, "pwl_approximate expects a quadratic cost");
  }
  if (cost.c2() < 0.0) {
    throw Error(Errc::nonconvex_cost, "quadratic coefficient is negative");
  }
  if (segments < 1) {
    throw Error(Errc::invalid_argument, "segments must be >= 1");
  }
  if (!(p_max > p_min)) {
    throw Error(Errc::invalid_argument, "empty interval for PWL approximation");
  }

  // Secant interpolation on equal-width intervals. Chords of a convex
  // function lie above it, so the PWL value upper-bounds the quadratic with
  // error at most c2 * (width/2)^2, attained at segment midpoints.
  std::vector<CostFunction::Point> points;
  points.reserve(static_cast<std::size_t>(segments) + 1);
  const double width = (p_max - p_min) / segments;
  for (int k = 0; k <= segments; ++k) {
    const double p = (k == segments) ? p_max : p_min + width * k;
    points.push_back({p, cost.value(p)});
  }
  return CostFunction::piecewise_linear(std::move(points));
}

}  // namespace flexopf
