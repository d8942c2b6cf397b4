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

#include "flexopf/lp.hpp"

#include <cassert>
#include <cstdlib>

#include "flexopf/errors.hpp"

namespace flexopf {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

void SparseMatrix::reserve(std::size_t nnz) {
  tr_.reserve(nnz);
  tc_.reserve(nnz);
  tv_.reserve(nnz);
}

void SparseMatrix::add(int row, int col, double value) {
  assert(!finalized_);
  assert(row >= 0 && row < rows_ && col >= 0 && col < cols_);
  if (value == 0.0) return;
  tr_.push_back(row);
  tc_.push_back(col);
  tv_.push_back(value);
}

void SparseMatrix::finalize() {
  if (finalized_) return;
  const std::size_t nnz = tv_.size();

  // Counting sort by column, then stable row order inside a column; duplicate
  // (row, col) entries are summed.
  cp_.assign(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : tc_) ++cp_[static_cast<std::size_t>(c) + 1];
  for (int j = 0; j < cols_; ++j) cp_[j + 1] += cp_[j];

  std::vector<int> ri(nnz);
  std::vector<double> rv(nnz);
  {
    std::vector<std::int64_t> next(cp_.begin(), cp_.end() - 1);
    for (std::size_t k = 0; k < nnz; ++k) {
      const std::int64_t pos = next[tc_[k]]++;
      ri[pos] = tr_[k];
      rv[pos] = tv_[k];
    }
  }
  tr_.clear();
  tr_.shrink_to_fit();
  tc_.clear();
  tc_.shrink_to_fit();
  tv_.clear();
  tv_.shrink_to_fit();

  // Per-column sort by row via a second counting pass over rows, merging dups.
  std::vector<std::int64_t> row_count(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<std::int64_t> rpos(static_cast<std::size_t>(rows_), -1);
  ci_.clear();
  cv_.clear();
  ci_.reserve(nnz);
  cv_.reserve(nnz);
  std::vector<std::int64_t> new_cp(static_cast<std::size_t>(cols_) + 1, 0);
  for (int j = 0; j < cols_; ++j) {
    const std::int64_t begin = static_cast<std::int64_t>(ci_.size());
    for (std::int64_t k = cp_[j]; k < cp_[j + 1]; ++k) {
      const int r = ri[k];
      if (rpos[r] >= begin && rpos[r] < static_cast<std::int64_t>(ci_.size()) && ci_[rpos[r]] == r) {
        cv_[rpos[r]] += rv[k];
      } else {
        rpos[r] = static_cast<std::int64_t>(ci_.size());
        ci_.push_back(r);
        cv_.push_back(rv[k]);
      }
    }
    // Insertion sort by row; columns are short or already nearly ordered.
    const std::int64_t end = static_cast<std::int64_t>(ci_.size());
    for (std::int64_t a = begin + 1; a < end; ++a) {
      int r = ci_[a];
      double v = cv_[a];
      std::int64_t b = a;
      while (b > begin && ci_[b - 1] > r) {
        ci_[b] = ci_[b - 1];
        cv_[b] = cv_[b - 1];
        --b;
      }
      ci_[b] = r;
      cv_[b] = v;
    }
    new_cp[j + 1] = static_cast<std::int64_t>(ci_.size());
  }
  cp_ = std::move(new_cp);

  // CSR mirror.
  for (std::size_t k = 0; k < ci_.size(); ++k) ++row_count[static_cast<std::size_t>(ci_[k]) + 1];
  rp_.assign(static_cast<std::size_t>(rows_) + 1, 0);
  for (int i = 0; i < rows_; ++i) rp_[i + 1] = rp_[i] + row_count[i + 1];
  rj_.assign(ci_.size(), 0);
  rv_.assign(ci_.size(), 0.0);
  {
    std::vector<std::int64_t> next(rp_.begin(), rp_.end() - 1);
    for (int j = 0; j < cols_; ++j) {
      for (std::int64_t k = cp_[j]; k < cp_[j + 1]; ++k) {
        const std::int64_t pos = next[ci_[k]]++;
        rj_[pos] = j;
        rv_[pos] = cv_[k];
      }
    }
  }
  finalized_ = true;
}

}  // namespace flexopf
