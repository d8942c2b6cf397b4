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

#ifndef FLEXOPF_TOOLS_CLI_APP_HPP_
#define FLEXOPF_TOOLS_CLI_APP_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace flexopf::cli {

// Exit codes: 0 solved/valid, 1 input error, 2 model infeasible,
// 3 solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitSolverFailure = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flexopf::cli

#endif  // FLEXOPF_TOOLS_CLI_APP_HPP_
