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

#ifndef FLEXOPF_LP_HPP_
#define FLEXOPF_LP_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace flexopf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Triplet-assembled sparse matrix, finalized to CSC and CSR for solving.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool finalized() const { return finalized_; }
  std::size_t nonzeros() const { return cv_.size(); }

  void reserve(std::size_t nnz);
  void add(int row, int col, double value);  // duplicates are summed
  void finalize();

  std::span<const int> col_rows(int j) const {
    return {ci_.data() + cp_[j], ci_.data() + cp_[j + 1]};
  }
  std::span<const double> col_values(int j) const {
    return {cv_.data() + cp_[j], cv_.data() + cp_[j + 1]};
  }
  std::span<const int> row_cols(int i) const {
    return {rj_.data() + rp_[i], rj_.data() + rp_[i + 1]};
  }
  std::span<const double> row_values(int i) const {
    return {rv_.data() + rp_[i], rv_.data() + rp_[i + 1]};
  }

 private:
  int rows_ = 0, cols_ = 0;
  bool finalized_ = false;
  std::vector<int> tr_, tc_;
  std::vector<double> tv_;
  std::vector<std::int64_t> cp_;  // CSC
  std::vector<int> ci_;
  std::vector<double> cv_;
  std::vector<std::int64_t> rp_;  // CSR
  std::vector<int> rj_;
  std::vector<double> rv_;
};

// min obj·x + obj_offset  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_up.
// Equality rows have row_lo == row_hi; one-sided rows use +-infinity.
struct LinearProgram {
  SparseMatrix A;
  std::vector<double> obj;
  double obj_offset = 0.0;
  std::vector<double> col_lo, col_up;
  std::vector<double> row_lo, row_up;
  // Advisory starting basis: (row, column) pivot pairs. The solver verifies
  // them and falls back to logicals wherever the proposal is unusable.
  std::vector<std::pair<int, int>> basis_hint;

  int num_vars() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(row_lo.size()); }
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(SolveStatus status);

struct SolverParams {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  std::int64_t iteration_limit = 0;  // 0: 50 * (rows + cols)
  int stall_threshold = 50;          // degenerate pivots before Bland's rule
  int refactor_interval = 100;       // pivots between refactorizations
  enum class Pricing { dantzig, bland };
  Pricing pricing = Pricing::dantzig;
  std::ostream* pivot_trace = nullptr;  // line per pivot when set
};

struct LpSolution {
  SolveStatus status = SolveStatus::iteration_limit;
  std::vector<double> primal;         // per structural variable
  std::vector<double> reduced_costs;  // per structural variable
  std::vector<double> duals;          // per row
  std::vector<double> farkas;         // row multipliers when infeasible
  double objective = 0.0;             // obj·x + obj_offset
  std::int64_t iterations = 0;
  int factorizations = 0;
  double max_primal_violation = 0.0;
};

// Two-phase revised simplex with general variable bounds. Throws
// Error(Errc::numerical_failure) when refactorization cannot recover.
LpSolution solve(const LinearProgram& lp, const SolverParams& params = {});

struct CertificateCheck {
  std::string condition;
  double magnitude = 0.0;
};

struct CertificateReport {
  bool ok = false;
  std::vector<CertificateCheck> failures;
  double duality_gap = 0.0;
  double max_primal_violation = 0.0;
  double max_dual_violation = 0.0;
  double complementarity_violation = 0.0;
};

// First-principles verification of an LpSolution against its program:
// primal feasibility, dual feasibility, complementary slackness, and strong
// duality on optimal results; Farkas validity on infeasible ones.
CertificateReport check_certificate(const LinearProgram& lp, const LpSolution& solution,
                                    const SolverParams& params = {});

}  // namespace flexopf

#endif  // FLEXOPF_LP_HPP_
