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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>

#include "flexopf/errors.hpp"
#include "flexopf/lp.hpp"
#include "lu.hpp"

namespace flexopf {

namespace {

using detail::BasisView;
using detail::LuFactorization;
using detail::WorkVector;

enum class VarState : std::uint8_t { basic, at_lower, at_upper, free_zero };

constexpr double kPivotZero = 1e-11;     // entries below this never block or pivot
constexpr double kPivotAccept = 1e-9;    // minimum trusted pivot magnitude
constexpr double kAlphaMismatch = 1e-7;  // FTRAN vs BTRAN pivot agreement
constexpr double kStallTheta = 1e-10;    // steps below this count as degenerate

// Bounded-variable two-phase revised simplex. The working system is
// A x - w = 0 with w the per-row activity variables ("logicals", ids n..n+m),
// so every constraint is an equality and all inequalities live in bounds.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolverParams& params)
      : lp_(lp), params_(params), n_(lp.num_vars()), m_(lp.num_rows()), nv_(n_ + m_) {
    view_.A = &lp_.A;
    view_.num_structural = n_;
  }

  LpSolution run();

 private:
  double lower(int j) const { return j < n_ ? lp_.col_lo[j] : lp_.row_lo[j - n_]; }
  double upper(int j) const { return j < n_ ? lp_.col_up[j] : lp_.row_up[j - n_]; }
  double phase2_cost(int j) const { return j < n_ ? lp_.obj[j] : 0.0; }
  double feps(double bound) const { return params_.feas_tol * (1.0 + std::fabs(bound)); }

  bool below_lower(int j) const { return x_[j] < lower(j) - feps(lower(j)); }
  bool above_upper(int j) const { return x_[j] > upper(j) + feps(upper(j)); }

  void set_nonbasic(int j) {
    const double l = lower(j), u = upper(j);
    if (l == u) {
      state_[j] = VarState::at_lower;
      x_[j] = l;
    } else if (std::isfinite(l) && std::isfinite(u)) {
      state_[j] = std::fabs(l) <= std::fabs(u) ? VarState::at_lower : VarState::at_upper;
      x_[j] = state_[j] == VarState::at_lower ? l : u;
    } else if (std::isfinite(l)) {
      state_[j] = VarState::at_lower;
      x_[j] = l;
    } else if (std::isfinite(u)) {
      state_[j] = VarState::at_upper;
      x_[j] = u;
    } else {
      state_[j] = VarState::free_zero;
      x_[j] = 0.0;
    }
  }

  void initial_basis();
  void factorize_with_repair();
  void compute_basic_values();
  void refactorize(bool with_duals);
  void recompute_duals_dense();
  bool any_basic_infeasible() const;

  void recompute_duals_phase1();
  int price(double tol) const;

  struct Ratio {
    int slot = -1;  // basis slot of the blocker; -1: bound flip, -2: unbounded
    double theta = 0.0;
    bool leaving_to_upper = false;
  };
  Ratio ratio_test(int entering, int direction) const;

  void apply_pivot(int entering, int direction, const Ratio& ratio);
  void compute_pivot_row(int slot);  // fills acc_ / acc_touched_
  void clear_pivot_row();

  LpSolution finish(SolveStatus status);

  const LinearProgram& lp_;
  SolverParams params_;
  int n_, m_, nv_;
  BasisView view_;

  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basic_;
  std::vector<int> slot_of_;
  std::vector<double> d_;  // phase-2 reduced costs, maintained incrementally

  LuFactorization lu_;
  WorkVector work_col_;  // FTRAN result, slot space
  WorkVector work_row_;  // BTRAN result, row space
  WorkVector work_rhs_;

  std::vector<double> acc_;  // pivot-row / phase-1 pricing accumulator over variables
  std::vector<int> acc_touched_;
  bool acc_dense_ = false;
  std::vector<std::uint8_t> late_mask_;

  std::vector<double> farkas_;
  double d_entering_ = 0.0;  // reduced cost of the chosen column

  // Phase-1 state: per-slot infeasibility costs and their count, maintained
  // incrementally (the simple ratio rule changes only the leaver's status).
  std::vector<std::int8_t> c1_slot_;
  int num_infeasible_ = 0;

  double cscale2_ = 1.0;
  int phase_ = 1;
  bool bland_ = false;
  int stall_count_ = 0;
  int numeric_retries_ = 0;
  std::int64_t iterations_ = 0;
  std::int64_t iteration_limit_ = 0;
  int factorizations_ = 0;
  int pivots_since_refactor_ = 0;
};

void Simplex::initial_basis() {
  x_.assign(nv_, 0.0);
  state_.assign(nv_, VarState::at_lower);
  basic_.assign(m_, -1);
  slot_of_.assign(nv_, -1);

  for (int j = 0; j < nv_; ++j) set_nonbasic(j);

  // Advisory crash: accept only structurally sane (row, column) pairs.
  for (const auto& [row, col] : lp_.basis_hint) {
    if (row < 0 || row >= m_ || col < 0 || col >= n_) continue;
    if (basic_[row] >= 0 || slot_of_[col] >= 0) continue;
    bool hits = false;
    for (int r : lp_.A.col_rows(col)) {
      if (r == row) {
        hits = true;
        break;
      }
    }
    if (!hits) continue;
    basic_[row] = col;
    slot_of_[col] = row;
    state_[col] = VarState::basic;
  }
  for (int r = 0; r < m_; ++r) {
    if (basic_[r] < 0) {
      const int logical = n_ + r;
      basic_[r] = logical;
      slot_of_[logical] = r;
      state_[logical] = VarState::basic;
    }
  }
}

void Simplex::factorize_with_repair() {
  // Columns of variables with any finite bound are deferred to the end of
  // the pivot order so entering-column solves can skip the unbounded prefix.
  late_mask_.assign(m_, 0);
  for (int r = 0; r < m_; ++r) {
    const int v = basic_[r];
    if (std::isfinite(lower(v)) || std::isfinite(upper(v))) late_mask_[r] = 1;
  }
  view_.eliminate_late = &late_mask_;
  std::vector<int> defect_slots;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<int> defect_rows = lu_.factorize(view_, basic_, &defect_slots);
    ++factorizations_;
    if (defect_rows.empty()) {
      pivots_since_refactor_ = 0;
      return;
    }
    std::vector<char> row_used(defect_rows.size(), 0);
    auto defect_row_pos = [&](int var) -> int {
      if (var < n_) return -1;
      for (std::size_t k = 0; k < defect_rows.size(); ++k) {
        if (defect_rows[k] == var - n_) return static_cast<int>(k);
      }
      return -1;
    };
    for (int slot : defect_slots) {
      const int pos = defect_row_pos(basic_[slot]);
      if (pos >= 0) row_used[pos] = 1;
    }
    std::size_t next = 0;
    for (int slot : defect_slots) {
      if (defect_row_pos(basic_[slot]) >= 0) continue;
      while (next < defect_rows.size() && row_used[next]) ++next;
      if (next >= defect_rows.size()) break;
      const int old = basic_[slot];
      slot_of_[old] = -1;
      set_nonbasic(old);
      const int logical = n_ + defect_rows[next];
      row_used[next] = 1;
      basic_[slot] = logical;
      slot_of_[logical] = slot;
      state_[logical] = VarState::basic;
    }
  }
  throw Error(Errc::numerical_failure, "basis repair failed to produce a factorizable basis");
}

void Simplex::compute_basic_values() {
  if (static_cast<int>(work_rhs_.values.size()) != m_) work_rhs_.resize(m_);
  work_rhs_.clear();
  auto& rhs = work_rhs_.values;
  for (int j = 0; j < nv_; ++j) {
    if (state_[j] == VarState::basic || x_[j] == 0.0) continue;
    if (j < n_) {
      auto rows = lp_.A.col_rows(j);
      auto vals = lp_.A.col_values(j);
      for (std::size_t k = 0; k < rows.size(); ++k) rhs[rows[k]] -= vals[k] * x_[j];
    } else {
      rhs[j - n_] += x_[j];  // logical column is -e_r
    }
  }
  work_rhs_.indices.clear();
  for (int i = 0; i < m_; ++i) {
    if (rhs[i] != 0.0) work_rhs_.indices.push_back(i);
  }
  lu_.ftran(work_rhs_);
  for (int r = 0; r < m_; ++r) x_[basic_[r]] = 0.0;
  for (int r : work_rhs_.indices) x_[basic_[r]] = work_rhs_.values[r];
}

void Simplex::recompute_duals_dense() {
  if (static_cast<int>(work_row_.values.size()) != m_) work_row_.resize(m_);
  work_row_.clear();
  for (int r = 0; r < m_; ++r) {
    const double c = phase2_cost(basic_[r]);
    if (c != 0.0) work_row_.set(r, c);
  }
  lu_.btran(work_row_);
  const auto& y = work_row_.values;
  d_.assign(nv_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == VarState::basic) continue;
    double dot = 0.0;
    auto rows = lp_.A.col_rows(j);
    auto vals = lp_.A.col_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) dot += y[rows[k]] * vals[k];
    d_[j] = lp_.obj[j] - dot;
  }
  for (int r = 0; r < m_; ++r) {
    const int logical = n_ + r;
    if (state_[logical] != VarState::basic) d_[logical] = y[r];
  }
}

void Simplex::refactorize(bool with_duals) {
  factorize_with_repair();
  compute_basic_values();
  if (with_duals) {
    if (phase_ == 2) {
      recompute_duals_dense();
    } else {
      recompute_duals_phase1();
    }
  }
}

bool Simplex::any_basic_infeasible() const {
  for (int r = 0; r < m_; ++r) {
    const int i = basic_[r];
    if (below_lower(i) || above_upper(i)) return true;
  }
  return false;
}

// Rebuilds the phase-1 costs (+-1 per violated basic), duals, and reduced
// costs from scratch; used on phase entry and at refactorizations.
void Simplex::recompute_duals_phase1() {
  if (static_cast<int>(work_row_.values.size()) != m_) work_row_.resize(m_);
  work_row_.clear();
  c1_slot_.assign(m_, 0);
  num_infeasible_ = 0;
  for (int r = 0; r < m_; ++r) {
    const int i = basic_[r];
    if (below_lower(i)) {
      c1_slot_[r] = -1;
      work_row_.set(r, -1.0);
      ++num_infeasible_;
    } else if (above_upper(i)) {
      c1_slot_[r] = 1;
      work_row_.set(r, 1.0);
      ++num_infeasible_;
    }
  }
  lu_.btran(work_row_);
  const auto& y = work_row_.values;
  d_.assign(nv_, 0.0);
  if (num_infeasible_ == 0) return;
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == VarState::basic) continue;
    double dot = 0.0;
    auto rows = lp_.A.col_rows(j);
    auto vals = lp_.A.col_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) dot += y[rows[k]] * vals[k];
    d_[j] = -dot;
  }
  for (int r = 0; r < m_; ++r) {
    const int logical = n_ + r;
    if (state_[logical] != VarState::basic) d_[logical] = y[r];
  }
}

int Simplex::price(double tol) const {
  int best = -1;
  double best_score = tol;
  for (int j = 0; j < nv_; ++j) {
    if (state_[j] == VarState::basic || lower(j) == upper(j)) continue;
    const double dj = d_[j];
    double score;
    switch (state_[j]) {
      case VarState::at_lower: score = -dj; break;
      case VarState::at_upper: score = dj; break;
      case VarState::free_zero: score = std::fabs(dj); break;
      default: continue;
    }
    if (score <= tol) continue;
    if (bland_) return j;
    if (score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

Simplex::Ratio Simplex::ratio_test(int entering, int direction) const {
  const auto& dvec = work_col_;
  const double l_q = lower(entering), u_q = upper(entering);
  const double theta_flip =
      (std::isfinite(l_q) && std::isfinite(u_q)) ? u_q - l_q : kInf;
  const double relax_scale = 10.0 * params_.feas_tol;

  // The target bound a basic hits along the step. In phase 1, basics moving
  // toward feasibility block at the violated bound; basics moving deeper into
  // infeasibility have no breakpoint (pricing already charges for them).
  auto blocking_target = [&](int i, double rate, bool* skip) -> double {
    const double li = lower(i), ui = upper(i);
    *skip = false;
    if (rate > 0.0) {
      if (phase_ == 1 && x_[i] < li - feps(li)) return li;
      if (phase_ == 1 && x_[i] > ui + feps(ui)) {
        *skip = true;
        return 0.0;
      }
      return ui;
    }
    if (phase_ == 1 && x_[i] > ui + feps(ui)) return ui;
    if (phase_ == 1 && x_[i] < li - feps(li)) {
      *skip = true;
      return 0.0;
    }
    return li;
  };

  double theta_limit = kInf;
  for (int r : dvec.indices) {
    const double piv = dvec.values[r];
    if (std::fabs(piv) <= kPivotZero) continue;
    const int i = basic_[r];
    const double rate = -direction * piv;
    bool skip;
    const double target = blocking_target(i, rate, &skip);
    if (skip || !std::isfinite(target)) continue;
    const double room = rate > 0.0 ? target - x_[i] : x_[i] - target;
    const double relaxed = room + relax_scale * (1.0 + std::fabs(target));
    theta_limit = std::min(theta_limit, std::max(0.0, relaxed) / std::fabs(rate));
  }

  Ratio out;
  if (theta_limit == kInf) {
    if (std::isfinite(theta_flip)) {
      out.slot = -1;
      out.theta = theta_flip;
    } else {
      out.slot = -2;
    }
    return out;
  }

  int best_slot = -1;
  double best_theta = kInf;
  double best_piv = 0.0;
  bool best_to_upper = false;
  for (int r : dvec.indices) {
    const double piv = dvec.values[r];
    if (std::fabs(piv) <= kPivotZero) continue;
    const int i = basic_[r];
    const double rate = -direction * piv;
    bool skip;
    const double target = blocking_target(i, rate, &skip);
    if (skip || !std::isfinite(target)) continue;
    const double theta = std::max(0.0, (target - x_[i]) / rate);
    const bool to_upper = target == upper(i);
    if (bland_) {
      if (theta < best_theta ||
          (theta == best_theta && (best_slot < 0 || i < basic_[best_slot]))) {
        best_slot = r;
        best_theta = theta;
        best_piv = piv;
        best_to_upper = to_upper;
      }
    } else if (theta <= theta_limit) {
      if (std::fabs(piv) > std::fabs(best_piv) ||
          (std::fabs(piv) == std::fabs(best_piv) && best_slot >= 0 &&
           i < basic_[best_slot])) {
        best_slot = r;
        best_theta = theta;
        best_piv = piv;
        best_to_upper = to_upper;
      }
    }
  }

  if (best_slot < 0 || best_theta >= theta_flip) {
    if (std::isfinite(theta_flip)) {
      out.slot = -1;
      out.theta = theta_flip;
      return out;
    }
    if (best_slot < 0) {
      out.slot = -2;
      return out;
    }
  }
  out.slot = best_slot;
  out.theta = best_theta;
  out.leaving_to_upper = best_to_upper;
  return out;
}

void Simplex::apply_pivot(int entering, int direction, const Ratio& ratio) {
  const auto& dvec = work_col_;
  const double step = direction * ratio.theta;

  for (int r : dvec.indices) {
    const double piv = dvec.values[r];
    if (piv != 0.0) x_[basic_[r]] -= step * piv;
  }

  if (ratio.slot == -1) {  // bound flip
    if (direction > 0) {
      x_[entering] = upper(entering);
      state_[entering] = VarState::at_upper;
    } else {
      x_[entering] = lower(entering);
      state_[entering] = VarState::at_lower;
    }
    return;
  }

  const int slot = ratio.slot;
  const int leaving = basic_[slot];
  x_[entering] += step;

  if (ratio.leaving_to_upper) {
    x_[leaving] = upper(leaving);
    state_[leaving] = VarState::at_upper;
  } else {
    x_[leaving] = lower(leaving);
    state_[leaving] = VarState::at_lower;
  }
  slot_of_[leaving] = -1;
  basic_[slot] = entering;
  slot_of_[entering] = slot;
  state_[entering] = VarState::basic;
}

void Simplex::compute_pivot_row(int slot) {
  if (static_cast<int>(work_row_.values.size()) != m_) work_row_.resize(m_);
  work_row_.clear();
  work_row_.set(slot, 1.0);
  lu_.btran(work_row_);

  if (acc_.size() != static_cast<std::size_t>(nv_)) acc_.assign(nv_, 0.0);
  acc_touched_.clear();
  acc_dense_ = static_cast<int>(work_row_.indices.size()) * 8 > m_;
  if (acc_dense_) {
    for (int i = 0; i < m_; ++i) {
      const double yi = work_row_.values[i];
      if (yi == 0.0) continue;
      auto cols = lp_.A.row_cols(i);
      auto vals = lp_.A.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) acc_[cols[k]] += yi * vals[k];
      acc_[n_ + i] -= yi;
    }
  } else {
    for (int i : work_row_.indices) {
      const double yi = work_row_.values[i];
      auto cols = lp_.A.row_cols(i);
      auto vals = lp_.A.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const int j = cols[k];
        if (acc_[j] == 0.0) acc_touched_.push_back(j);
        acc_[j] += yi * vals[k];
      }
      const int logical = n_ + i;
      if (acc_[logical] == 0.0) acc_touched_.push_back(logical);
      acc_[logical] -= yi;
    }
  }
}

void Simplex::clear_pivot_row() {
  if (acc_dense_) {
    std::fill(acc_.begin(), acc_.end(), 0.0);
    acc_dense_ = false;
  } else {
    for (int j : acc_touched_) acc_[j] = 0.0;
  }
  acc_touched_.clear();
}

LpSolution Simplex::finish(SolveStatus status) {
  factorize_with_repair();
  compute_basic_values();

  LpSolution out;
  out.status = status;
  out.iterations = iterations_;
  out.factorizations = factorizations_;

  out.primal.assign(n_, 0.0);
  for (int j = 0; j < n_; ++j) out.primal[j] = x_[j];

  if (static_cast<int>(work_row_.values.size()) != m_) work_row_.resize(m_);
  work_row_.clear();
  for (int r = 0; r < m_; ++r) {
    const double c = phase2_cost(basic_[r]);
    if (c != 0.0) work_row_.set(r, c);
  }
  lu_.btran(work_row_);
  out.duals.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) out.duals[r] = work_row_.values[r];

  out.reduced_costs.assign(n_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == VarState::basic) continue;
    double dot = 0.0;
    auto rows = lp_.A.col_rows(j);
    auto vals = lp_.A.col_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) dot += out.duals[rows[k]] * vals[k];
    out.reduced_costs[j] = lp_.obj[j] - dot;
  }

  double obj = lp_.obj_offset;
  for (int j = 0; j < n_; ++j) obj += lp_.obj[j] * x_[j];
  out.objective = status == SolveStatus::unbounded ? -kInf : obj;

  double viol = 0.0;
  for (int j = 0; j < nv_; ++j) {
    if (std::isfinite(lower(j))) viol = std::max(viol, lower(j) - x_[j]);
    if (std::isfinite(upper(j))) viol = std::max(viol, x_[j] - upper(j));
  }
  out.max_primal_violation = std::max(viol, 0.0);
  out.farkas = farkas_;
  return out;
}

LpSolution Simplex::run() {
  iteration_limit_ = params_.iteration_limit > 0
                         ? params_.iteration_limit
                         : static_cast<std::int64_t>(50) * (m_ + n_);
  cscale2_ = 0.0;
  for (double c : lp_.obj) cscale2_ = std::max(cscale2_, std::fabs(c));
  if (cscale2_ == 0.0) cscale2_ = 1.0;

  initial_basis();
  factorize_with_repair();
  compute_basic_values();
  if (static_cast<int>(work_col_.values.size()) != m_) work_col_.resize(m_);

  phase_ = 1;
  bland_ = params_.pricing == SolverParams::Pricing::bland;
  recompute_duals_phase1();

  while (true) {
    if (iterations_ >= iteration_limit_) return finish(SolveStatus::iteration_limit);

    int entering = -1;
    int direction = 0;

    if (phase_ == 1) {
      if (num_infeasible_ == 0) {
        // Verify against a fresh count before leaving phase 1.
        recompute_duals_phase1();
        if (num_infeasible_ == 0) {
          phase_ = 2;
          recompute_duals_dense();
          continue;
        }
      }
      entering = price(params_.opt_tol);
      if (entering < 0) {
        // Confirm infeasibility on a fresh factorization; the phase-1 duals
        // are then the Farkas certificate.
        if (pivots_since_refactor_ > 0) {
          refactorize(/*with_duals=*/true);
          continue;
        }
        recompute_duals_phase1();
        if (num_infeasible_ == 0) {
          phase_ = 2;
          recompute_duals_dense();
          continue;
        }
        if (price(params_.opt_tol) >= 0) continue;  // duals refreshed, retry
        farkas_.assign(m_, 0.0);
        for (int r : work_row_.indices) farkas_[r] = work_row_.values[r];
        return finish(SolveStatus::infeasible);
      }
      d_entering_ = d_[entering];
    } else {
      entering = price(params_.opt_tol * cscale2_);
      if (entering < 0) return finish(SolveStatus::optimal);
      d_entering_ = d_[entering];
    }
    direction = state_[entering] == VarState::at_upper   ? -1
                : state_[entering] == VarState::at_lower ? +1
                                                         : (d_entering_ < 0.0 ? +1 : -1);

    work_col_.clear();
    if (entering < n_) {
      auto rows = lp_.A.col_rows(entering);
      auto vals = lp_.A.col_values(entering);
      for (std::size_t k = 0; k < rows.size(); ++k) work_col_.set(rows[k], vals[k]);
    } else {
      work_col_.set(entering - n_, -1.0);
    }
    lu_.ftran(work_col_, /*keep_spike=*/true, /*truncated=*/true);

    const Ratio ratio = ratio_test(entering, direction);
    if (ratio.slot == -2) {
      if (phase_ == 1) {
        throw Error(Errc::numerical_failure, "unbounded direction while restoring feasibility");
      }
      return finish(SolveStatus::unbounded);
    }

    if (ratio.slot >= 0) {
      const double pivot_val = work_col_.values[ratio.slot];
      if (std::fabs(pivot_val) < kPivotAccept) {
        if (pivots_since_refactor_ > 0) {
          refactorize(/*with_duals=*/true);
          if (++numeric_retries_ > 5) {
            throw Error(Errc::numerical_failure, "pivot collapsed after refactorization");
          }
          continue;
        }
        if (std::fabs(pivot_val) < kPivotZero) {
          throw Error(Errc::numerical_failure, "singular pivot on a fresh factorization");
        }
      }
    }

    double theta_d = 0.0;
    const int leaving = ratio.slot >= 0 ? basic_[ratio.slot] : -1;
    if (ratio.slot >= 0) {
      // Pivot row before the basis changes; cross-check the two pivot routes.
      compute_pivot_row(ratio.slot);
      const double alpha_q = acc_[entering];
      const double ftran_piv = work_col_.values[ratio.slot];
      if (std::fabs(alpha_q - ftran_piv) > kAlphaMismatch * (1.0 + std::fabs(ftran_piv))) {
        clear_pivot_row();
        refactorize(/*with_duals=*/true);
        if (++numeric_retries_ > 5) {
          throw Error(Errc::numerical_failure, "pivot row disagrees with pivot column");
        }
        continue;
      }
      theta_d = d_[entering] / ftran_piv;
    }
    numeric_retries_ = 0;

    if (params_.pivot_trace != nullptr) {
      *params_.pivot_trace << "iter " << iterations_ << " phase " << phase_ << " enter "
                           << entering << " slot " << ratio.slot << " theta " << ratio.theta
                           << " piv "
                           << (ratio.slot >= 0 ? work_col_.values[ratio.slot] : 0.0) << '\n';
    }

    apply_pivot(entering, direction, ratio);
    ++iterations_;

    if (ratio.slot >= 0) {
      if (acc_dense_) {
        for (int j = 0; j < nv_; ++j) {
          if (acc_[j] != 0.0 && state_[j] != VarState::basic) d_[j] -= theta_d * acc_[j];
        }
      } else {
        for (int j : acc_touched_) {
          if (state_[j] == VarState::basic) continue;
          d_[j] -= theta_d * acc_[j];
        }
      }
      d_[leaving] = -theta_d;
      d_[entering] = 0.0;
      clear_pivot_row();
      if (phase_ == 1) {
        // The leaver regained feasibility at its bound: undo its unit cost in
        // the maintained reduced cost and in the infeasibility count, and
        // hand its slot cost to the (feasible) entering variable.
        const std::int8_t c1_old = c1_slot_[ratio.slot];
        if (c1_old != 0) {
          d_[leaving] -= c1_old;
          --num_infeasible_;
          c1_slot_[ratio.slot] = 0;
        }
      }
      ++pivots_since_refactor_;
      if (!lu_.update(ratio.slot) ||
          pivots_since_refactor_ >= params_.refactor_interval) {
        refactorize(/*with_duals=*/true);
        if (phase_ == 2 && any_basic_infeasible()) {
          phase_ = 1;
          recompute_duals_phase1();
        }
      }
    }

    if (params_.pricing == SolverParams::Pricing::dantzig) {
      if (ratio.theta <= kStallTheta) {
        if (++stall_count_ >= params_.stall_threshold) bland_ = true;
      } else {
        stall_count_ = 0;
        bland_ = false;
      }
    }
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverParams& params) {
  if (!lp.A.finalized()) {
    throw Error(Errc::invalid_argument, "LinearProgram matrix must be finalized");
  }
  if (lp.A.rows() != lp.num_rows() || lp.A.cols() != lp.num_vars() ||
      lp.col_lo.size() != lp.obj.size() || lp.col_up.size() != lp.obj.size() ||
      lp.row_up.size() != lp.row_lo.size()) {
    throw Error(Errc::invalid_argument, "inconsistent LinearProgram dimensions");
  }
  if (lp.num_vars() == 0) {
    LpSolution out;
    out.status = SolveStatus::optimal;
    out.objective = lp.obj_offset;
    out.duals.assign(lp.num_rows(), 0.0);
    out.reduced_costs.clear();
    for (int r = 0; r < lp.num_rows(); ++r) {
      if (lp.row_lo[r] > 0.0 || lp.row_up[r] < 0.0) {
        out.status = SolveStatus::infeasible;
        break;
      }
    }
    return out;
  }
  Simplex simplex(lp, params);
  return simplex.run();
}

}  // namespace flexopf
