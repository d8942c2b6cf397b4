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

#ifndef FLEXOPF_ERRORS_HPP_
#define FLEXOPF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace flexopf {

// Machine-readable failure codes. Parsers and the solver report these so
// callers (and the CLI) can react without string matching on messages.
enum class Errc {
  malformed_matrix,
  unsupported_cost_model,
  missing_slack,
  zero_reactance,
  schema_violation,
  dim_mismatch,
  prob_disagreement,
  prob_sum,
  negative_output,
  unknown_load_id,
  horizon_mismatch,
  nonconvex_cost,
  status_not_optimal,
  numerical_failure,
  invalid_argument,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::string where = {});

  Errc code() const { return code_; }
  // Context for the failure: input line, JSON path, or row/column id.
  const std::string& where() const { return where_; }

 private:
  Errc code_;
  std::string where_;
};

}  // namespace flexopf

#endif  // FLEXOPF_ERRORS_HPP_
