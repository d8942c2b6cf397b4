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

#ifndef FLEXOPF_SRC_LU_HPP_
#define FLEXOPF_SRC_LU_HPP_

#include <cstdint>
#include <vector>

#include "flexopf/lp.hpp"

namespace flexopf::detail {

// Dense-backed sparse vector: values plus a duplicate-free index list of
// entries that may be nonzero (zero values can stay listed after an exact
// cancellation; `listed` keeps the list free of duplicates without sorting).
struct WorkVector {
  std::vector<double> values;
  std::vector<int> indices;
  std::vector<std::uint8_t> listed;

  void resize(int n) {
    values.assign(static_cast<std::size_t>(n), 0.0);
    listed.assign(static_cast<std::size_t>(n), 0);
    indices.clear();
  }
  void clear() {
    for (int i : indices) {
      values[i] = 0.0;
      listed[i] = 0;
    }
    indices.clear();
  }
  void touch(int i) {
    if (!listed[i]) {
      listed[i] = 1;
      indices.push_back(i);
    }
  }
  void set(int i, double v) {
    touch(i);
    values[i] = v;
  }
  void accumulate(int i, double v) {
    touch(i);
    values[i] += v;
  }
  void swap(WorkVector& other) {
    values.swap(other.values);
    indices.swap(other.indices);
    listed.swap(other.listed);
  }
};

// Provides basis columns: structural columns come from A, variable index
// n + r is the logical of row r with single coefficient -1. `eliminate_late`
// (per slot, optional) defers the flagged columns to the end of the pivot
// order; the unflagged prefix of steps can then be skipped by truncated
// solves (see ftran).
struct BasisView {
  const SparseMatrix* A = nullptr;
  int num_structural = 0;
  const std::vector<std::uint8_t>* eliminate_late = nullptr;
};

// Sparse LU of a simplex basis: Markowitz-pivoted factorization plus
// Forrest-Tomlin column replacement. The L factor and the row transforms
// accumulated by updates are static per refactorization; U is dynamic.
// Product-form etas are deliberately avoided: tableau columns of
// block-coupled LPs are dense, and updates must not inherit that density.
class LuFactorization {
 public:
  // Factorizes the basis given by `basic` (size m, variable ids). Returns the
  // row indices left unpivoted; empty means success. On defects the caller
  // replaces the columns at `defect_slots` with logicals of the returned rows
  // and refactorizes.
  std::vector<int> factorize(const BasisView& view, const std::vector<int>& basic,
                             std::vector<int>* defect_slots = nullptr);

  // x := B^{-1} x. Indexing: input in row space, output by basis slot. With
  // keep_spike the partial result ahead of the U-solve is retained for a
  // following update(). A truncated solve skips the components of the
  // early-eliminated (eliminate_late-unflagged) columns: valid whenever the
  // caller never consumes those components, e.g. ratio tests over variables
  // with bounds.
  void ftran(WorkVector& x, bool keep_spike = false, bool truncated = false) const;
  // y := B^{-T} y. Input by basis slot, output in row space.
  void btran(WorkVector& y) const;

  // Forrest-Tomlin replacement of the column at `slot` with the column whose
  // ftran() ran last. Returns false when the update is numerically unsafe;
  // the caller then refactorizes instead.
  bool update(int slot);

  int updates() const { return static_cast<int>(update_ptr_.size()) - 1; }
  std::size_t fill_entries() const { return u_fill_; }
  int dimension() const { return m_; }
  bool valid() const { return m_ > 0; }

 private:
  struct UEntry {
    int slot;
    std::uint32_t version;
    double value;
  };
  struct CEntry {
    int step;
    double value;
  };

  void lsolve(WorkVector& x) const;        // rows -> rows
  void apply_row_transforms(WorkVector& x) const;
  void usolve(WorkVector& x, bool truncated) const;  // rows -> slots
  void utsolve(WorkVector& y) const;       // slots -> rows
  void apply_row_transforms_t(WorkVector& y) const;
  void ltsolve(WorkVector& y) const;       // rows -> rows

  bool row_valid(const UEntry& e) const {
    return e.version == slot_version_[e.slot];
  }

  int m_ = 0;
  int max_step_ = 0;  // one past the newest step id

  // Per step (append-grow under updates).
  std::vector<int> prow_, pcol_;
  std::vector<double> diag_;
  std::vector<std::uint8_t> step_alive_;
  std::vector<std::uint8_t> step_truncatable_;
  std::vector<int> row_step_;       // original row -> live step
  std::vector<int> col_step_;       // basis slot -> live step
  std::vector<int> base_row_step_;  // original row -> base step (static)

  // L base factor by elimination step; static per refactorization.
  std::vector<std::int64_t> lp_;
  std::vector<int> li_;
  std::vector<double> lx_;
  std::vector<std::int64_t> ltp_;  // transpose by original row
  std::vector<int> lti_;
  std::vector<double> ltx_;

  // Dynamic U: rows per step, columns per slot, with lazy invalidation.
  std::vector<std::vector<UEntry>> urow_;
  std::vector<std::vector<CEntry>> ucol_;
  std::vector<std::uint32_t> slot_version_;
  std::size_t u_fill_ = 0;

  // Row transforms from updates: x[target] -= sum f_j * x[source_j].
  std::vector<std::int64_t> update_ptr_{0};
  std::vector<int> update_target_;
  std::vector<int> update_src_;
  std::vector<double> update_f_;

  // Spike of the most recent ftran (after L and row transforms, row space).
  mutable WorkVector spike_;

  // Traversal scratch.
  mutable std::vector<int> stack_node_, stack_pos_, reach_, seeds_;
  mutable std::vector<std::uint32_t> mark_;
  mutable std::uint32_t generation_ = 0;

  struct EliminationWorkspace;
};

}  // namespace flexopf::detail

#endif  // FLEXOPF_SRC_LU_HPP_
