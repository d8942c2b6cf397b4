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

#include "lu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>

namespace flexopf::detail {

namespace {

constexpr double kPivotThreshold = 0.1;  // relative to column max
constexpr int kSearchColumns = 4;        // Markowitz candidates per pivot

struct Entry {
  int row;
  double value;
};

}  // namespace

struct LuFactorization::EliminationWorkspace {
  std::vector<std::vector<Entry>> cols;
  std::vector<std::vector<int>> row_list;
  std::vector<int> rcount, ccount;
  std::vector<char> row_active, col_active;
  std::vector<std::vector<int>> buckets;
  std::vector<std::uint32_t> stamp;
  std::vector<int> pos;
  std::uint32_t epoch = 0;
};

std::vector<int> LuFactorization::factorize(const BasisView& view,
                                            const std::vector<int>& basic,
                                            std::vector<int>* defect_slots) {
  static thread_local EliminationWorkspace ws;

  const int m = static_cast<int>(basic.size());
  m_ = m;
  max_step_ = 0;
  const int n = view.num_structural;

  prow_.clear();
  pcol_.clear();
  diag_.clear();
  prow_.reserve(m + 128);
  pcol_.reserve(m + 128);
  diag_.reserve(m + 128);
  step_alive_.assign(m, 1);
  lp_.assign(1, 0);
  li_.clear();
  lx_.clear();
  if (static_cast<int>(ucol_.size()) < m) ucol_.resize(m);
  for (int j = 0; j < m; ++j) ucol_[j].clear();
  if (static_cast<int>(urow_.size()) < m) urow_.resize(m);
  for (int k = 0; k < static_cast<int>(urow_.size()); ++k) urow_[k].clear();
  slot_version_.assign(m, 0);
  u_fill_ = 0;
  update_ptr_.assign(1, 0);
  update_target_.clear();
  update_src_.clear();
  update_f_.clear();

  // Load the basis into the elimination workspace.
  if (static_cast<int>(ws.cols.size()) < m) {
    ws.cols.resize(m);
    ws.row_list.resize(m);
  }
  ws.rcount.assign(m, 0);
  ws.ccount.assign(m, 0);
  ws.row_active.assign(m, 1);
  ws.col_active.assign(m, 1);
  ws.stamp.assign(m, 0);
  ws.pos.assign(m, 0);
  ws.epoch = 0;
  for (int j = 0; j < m; ++j) {
    ws.cols[j].clear();
    ws.row_list[j].clear();
  }

  double max_abs = 0.0;
  for (int slot = 0; slot < m; ++slot) {
    const int var = basic[slot];
    auto& col = ws.cols[slot];
    if (var < n) {
      auto rows = view.A->col_rows(var);
      auto vals = view.A->col_values(var);
      col.reserve(rows.size());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        col.push_back({rows[k], vals[k]});
        max_abs = std::max(max_abs, std::fabs(vals[k]));
      }
    } else {
      col.push_back({var - n, -1.0});
      max_abs = std::max(max_abs, 1.0);
    }
    ws.ccount[slot] = static_cast<int>(col.size());
    for (const auto& e : col) {
      ++ws.rcount[e.row];
      ws.row_list[e.row].push_back(slot);
    }
  }
  const double abs_eps = 1e-13 * std::max(max_abs, 1.0);

  // Deferred (flagged) columns wait until nothing unflagged is pivotable;
  // eliminating the unbounded network part first keeps the dependency
  // closure of bounded steps small, which truncated solves exploit.
  const std::vector<std::uint8_t>* late = view.eliminate_late;
  auto col_class = [&](int j) { return late != nullptr && (*late)[j] ? 1 : 0; };
  auto& buckets = ws.buckets;
  if (static_cast<int>(buckets.size()) < 2 * (m + 1)) buckets.resize(2 * (m + 1));
  for (auto& b : buckets) b.clear();
  for (int j = 0; j < m; ++j) {
    buckets[col_class(j) * (m + 1) + std::min(ws.ccount[j], m)].push_back(j);
  }
  int scan_floor[2] = {1, 1};  // lowest possibly-nonempty bucket level per class

  li_.reserve(static_cast<std::size_t>(m) * 4);
  lx_.reserve(static_cast<std::size_t>(m) * 4);

  int candidates[kSearchColumns];
  // Rows reduced to a single entry pivot with zero fill; keep them in a
  // queue ahead of the Markowitz search.
  static thread_local std::vector<int> singleton_rows;
  singleton_rows.clear();
  for (int i = 0; i < m; ++i) {
    if (ws.rcount[i] == 1) singleton_rows.push_back(i);
  }

  for (int step = 0; step < m; ++step) {
    // Row singletons first: their column entry is the only one left in the
    // row, so the pivot spreads no fill.
    int best_row = -1, best_col = -1;
    double best_val = 0.0;
    while (!singleton_rows.empty()) {
      const int i = singleton_rows.back();
      singleton_rows.pop_back();
      if (!ws.row_active[i] || ws.rcount[i] != 1) continue;
      for (const int j : ws.row_list[i]) {
        if (!ws.col_active[j]) continue;
        for (const auto& e : ws.cols[j]) {
          if (e.row == i && std::fabs(e.value) > abs_eps) {
            best_row = i;
            best_col = j;
            best_val = e.value;
            break;
          }
        }
        if (best_col >= 0) break;
      }
      if (best_col >= 0) break;
    }

    // Up to kSearchColumns candidates of minimal column count; numerically
    // empty columns are dropped without re-listing (an update touching them
    // re-lists them).
    int found = 0;
    if (best_col < 0) {
    for (int cls = 0; cls < 2 && found == 0; ++cls) {
      int c = scan_floor[cls];
      for (; c <= m && found < kSearchColumns; ++c) {
        auto& bucket = buckets[cls * (m + 1) + c];
        while (!bucket.empty() && found < kSearchColumns) {
          const int j = bucket.back();
          bucket.pop_back();
          if (!ws.col_active[j] || std::min(ws.ccount[j], m) != c) continue;  // stale
          double cmax = 0.0;
          for (const auto& e : ws.cols[j]) cmax = std::max(cmax, std::fabs(e.value));
          if (cmax <= abs_eps) continue;
          candidates[found++] = j;
        }
        if (found > 0 && c >= 2) break;
      }
      scan_floor[cls] = found > 0 ? std::min(c, m) : m + 1;
    }
    if (found == 0 && best_col < 0) break;  // nothing pivotable: defects remain

    std::int64_t best_cost = -1;
    for (int cand = 0; cand < found; ++cand) {
      const int j = candidates[cand];
      double cmax = 0.0;
      for (const auto& e : ws.cols[j]) cmax = std::max(cmax, std::fabs(e.value));
      const double accept = std::max(kPivotThreshold * cmax, abs_eps);
      for (const auto& e : ws.cols[j]) {
        if (std::fabs(e.value) < accept) continue;
        const std::int64_t cost =
            static_cast<std::int64_t>(ws.rcount[e.row] - 1) * (ws.ccount[j] - 1);
        if (best_cost < 0 || cost < best_cost ||
            (cost == best_cost && std::fabs(e.value) > std::fabs(best_val))) {
          best_cost = cost;
          best_row = e.row;
          best_col = j;
          best_val = e.value;
        }
      }
    }
    for (int cand = 0; cand < found; ++cand) {
      const int j = candidates[cand];
      if (j == best_col) continue;
      const int cls = col_class(j);
      const int level = std::min(ws.ccount[j], m);
      buckets[cls * (m + 1) + level].push_back(j);
      scan_floor[cls] = std::min(scan_floor[cls], level);
    }
    }
    if (best_col < 0) break;

    const int pr = best_row, pc = best_col;
    const double u = best_val;
    const int k_step = static_cast<int>(prow_.size());
    prow_.push_back(pr);
    pcol_.push_back(pc);
    diag_.push_back(u);

    auto& pivot_col = ws.cols[pc];
    for (const auto& e : pivot_col) {
      if (e.row == pr) continue;
      if (--ws.rcount[e.row] == 1) singleton_rows.push_back(e.row);
      if (e.value != 0.0) {
        li_.push_back(e.row);
        lx_.push_back(e.value / u);
      }
    }
    lp_.push_back(static_cast<std::int64_t>(li_.size()));
    const std::int64_t lbegin = lp_[lp_.size() - 2], lend = lp_.back();

    for (const int j : ws.row_list[pr]) {
      if (!ws.col_active[j] || j == pc) continue;
      auto& col = ws.cols[j];
      double v_prj = 0.0;
      bool had = false;
      for (std::size_t k = 0; k < col.size(); ++k) {
        if (col[k].row == pr) {
          v_prj = col[k].value;
          col[k] = col.back();
          col.pop_back();
          had = true;
          break;
        }
      }
      if (!had) continue;  // stale row-list entry
      --ws.ccount[j];
      if (v_prj != 0.0) {
        urow_[k_step].push_back({j, 0, v_prj});
        ucol_[j].push_back({k_step, v_prj});
        ++u_fill_;
        const double f = v_prj / u;
        ++ws.epoch;
        for (std::size_t k = 0; k < col.size(); ++k) {
          ws.stamp[col[k].row] = ws.epoch;
          ws.pos[col[k].row] = static_cast<int>(k);
        }
        for (std::int64_t k = lbegin; k < lend; ++k) {
          const int i = li_[k];
          const double delta = -f * lx_[k] * u;  // lx holds value/u
          if (ws.stamp[i] == ws.epoch) {
            col[ws.pos[i]].value += delta;
          } else {
            col.push_back({i, delta});
            ++ws.rcount[i];
            ++ws.ccount[j];
            ws.row_list[i].push_back(j);
          }
        }
      }
      {
        const int cls = col_class(j);
        const int level = std::min(ws.ccount[j], m);
        buckets[cls * (m + 1) + level].push_back(j);
        scan_floor[cls] = std::min(scan_floor[cls], level);
      }
    }

    ws.row_active[pr] = 0;
    ws.col_active[pc] = 0;
    pivot_col.clear();
    ws.ccount[pc] = 0;
  }

  std::vector<int> defect_rows;
  for (int i = 0; i < m; ++i) {
    if (ws.row_active[i]) defect_rows.push_back(i);
  }
  if (!defect_rows.empty()) {
    if (defect_slots != nullptr) {
      defect_slots->clear();
      for (int j = 0; j < m; ++j) {
        if (ws.col_active[j]) defect_slots->push_back(j);
      }
    }
    m_ = 0;  // factorization unusable
    return defect_rows;
  }

  max_step_ = m;
  row_step_.assign(m, -1);
  col_step_.assign(m, -1);
  for (int k = 0; k < m; ++k) {
    row_step_[prow_[k]] = k;
    col_step_[pcol_[k]] = k;
  }
  base_row_step_ = row_step_;

  // L transpose for BTRAN-side traversal.
  ltp_.assign(static_cast<std::size_t>(m) + 1, 0);
  for (int i : li_) ++ltp_[static_cast<std::size_t>(i) + 1];
  for (int i = 0; i < m; ++i) ltp_[i + 1] += ltp_[i];
  lti_.assign(li_.size(), 0);
  ltx_.assign(li_.size(), 0.0);
  {
    std::vector<std::int64_t> next(ltp_.begin(), ltp_.end() - 1);
    for (int k = 0; k < m; ++k) {
      for (std::int64_t p = lp_[k]; p < lp_[k + 1]; ++p) {
        const std::int64_t dst = next[li_[p]]++;
        lti_[dst] = k;
        ltx_[dst] = lx_[p];
      }
    }
  }

  // Truncatable steps: the complement of the dependency closure of the steps
  // whose basic variables carry a bound. A needed step consumes the columns
  // in its U row, so the closure follows U-row links; everything outside it
  // can be skipped by truncated solves.
  step_truncatable_.assign(m, 1);
  if (view.eliminate_late != nullptr) {
    const auto& needed_seed = *view.eliminate_late;
    std::vector<int> stack;
    for (int k = 0; k < m; ++k) {
      if (needed_seed[pcol_[k]]) {
        step_truncatable_[k] = 0;
        stack.push_back(k);
      }
    }
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      for (const UEntry& e : urow_[k]) {
        const int supplier = col_step_[e.slot];
        if (step_truncatable_[supplier]) {
          step_truncatable_[supplier] = 0;
          stack.push_back(supplier);
        }
      }
    }
  } else {
    std::fill(step_truncatable_.begin(), step_truncatable_.end(), 0);
  }

  // Stale marks from a previous factorization must not collide with the
  // restarted generation counter; a collision would hide reach nodes and
  // leave triangular solves partially evaluated.
  mark_.assign(m + 128, 0);
  generation_ = 0;
  if (static_cast<int>(spike_.values.size()) != m) spike_.resize(m);
  spike_.clear();
  return {};
}

// Iterative DFS from the seed steps following adjacency "a -> b when b
// consumes a's result"; the reverse postorder in `out` is a valid processing
// order, so callers walk it backwards.
namespace {

template <class Count, class Child>
bool collect_reach(const std::vector<int>& seeds, Count&& count, Child&& child,
                   std::vector<std::uint32_t>& mark, std::uint32_t gen,
                   std::vector<int>& stack_node, std::vector<int>& stack_pos,
                   std::vector<int>& out, int node_limit) {
  out.clear();
  stack_node.clear();
  stack_pos.clear();
  int visited = 0;
  for (int s : seeds) {
    if (s < 0 || mark[s] == gen) continue;
    mark[s] = gen;
    ++visited;
    stack_node.push_back(s);
    stack_pos.push_back(0);
    while (!stack_node.empty()) {
      const int k = stack_node.back();
      int& pos = stack_pos.back();
      const int deg = count(k);
      bool descended = false;
      while (pos < deg) {
        const int nk = child(k, pos++);
        if (nk >= 0 && mark[nk] != gen) {
          mark[nk] = gen;
          if (++visited > node_limit) return false;  // caller sweeps densely
          stack_node.push_back(nk);
          stack_pos.push_back(0);
          descended = true;
          break;
        }
      }
      if (!descended && pos >= deg) {
        out.push_back(k);
        stack_node.pop_back();
        stack_pos.pop_back();
      }
    }
  }
  return true;
}

}  // namespace

void LuFactorization::lsolve(WorkVector& x) const {
  const int m = m_;
  bool sparse = static_cast<int>(x.indices.size()) * 8 <= m;
  if (sparse) {
    if (++generation_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      generation_ = 1;
    }
    seeds_.clear();
    for (int i : x.indices) seeds_.push_back(base_row_step_[i]);
    sparse = collect_reach(
        seeds_, [&](int k) { return static_cast<int>(lp_[k + 1] - lp_[k]); },
        [&](int k, int idx) { return base_row_step_[li_[lp_[k] + idx]]; }, mark_, generation_,
        stack_node_, stack_pos_, reach_, m / 8);
  }
  if (!sparse) {
    for (int k = 0; k < m; ++k) {
      const double t = x.values[prow_[k]];
      if (t == 0.0) continue;
      for (std::int64_t p = lp_[k]; p < lp_[k + 1]; ++p) {
        const int i = li_[p];
        x.touch(i);
        x.values[i] -= lx_[p] * t;
      }
    }
    return;
  }
  for (std::size_t r = reach_.size(); r-- > 0;) {
    const int k = reach_[r];
    const double t = x.values[prow_[k]];
    if (t == 0.0) continue;
    for (std::int64_t p = lp_[k]; p < lp_[k + 1]; ++p) {
      const int i = li_[p];
      x.touch(i);
      x.values[i] -= lx_[p] * t;
    }
  }
}

void LuFactorization::apply_row_transforms(WorkVector& x) const {
  const int count = updates();
  for (int u = 0; u < count; ++u) {
    double delta = 0.0;
    for (std::int64_t k = update_ptr_[u]; k < update_ptr_[u + 1]; ++k) {
      delta += update_f_[k] * x.values[update_src_[k]];
    }
    if (delta != 0.0) x.accumulate(update_target_[u], -delta);
  }
}

void LuFactorization::apply_row_transforms_t(WorkVector& y) const {
  for (int u = updates() - 1; u >= 0; --u) {
    const double t = y.values[update_target_[u]];
    if (t == 0.0) continue;
    for (std::int64_t k = update_ptr_[u]; k < update_ptr_[u + 1]; ++k) {
      y.accumulate(update_src_[k], -update_f_[k] * t);
    }
  }
}

void LuFactorization::usolve(WorkVector& x, bool truncated) const {
  static thread_local WorkVector out;
  if (static_cast<int>(out.values.size()) != m_) out.resize(m_);
  out.clear();

  // Early-eliminated columns have no consumers outside their own prefix, so
  // a truncated solve drops them wholesale.
  bool sparse = static_cast<int>(x.indices.size()) * 8 <= m_;
  if (sparse) {
    if (++generation_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      generation_ = 1;
    }
    seeds_.clear();
    for (int i : x.indices) {
      const int k = row_step_[i];
      if (!truncated || !step_truncatable_[k]) seeds_.push_back(k);
    }
    sparse = collect_reach(
        seeds_, [&](int k) { return static_cast<int>(ucol_[pcol_[k]].size()); },
        [&](int k, int idx) {
          const CEntry& e = ucol_[pcol_[k]][idx];
          if (!step_alive_[e.step]) return -1;
          if (truncated && step_truncatable_[e.step]) return -1;
          return e.step;
        },
        mark_, generation_, stack_node_, stack_pos_, reach_, m_ / 8);
  }
  if (!sparse) {
    for (int k = max_step_ - 1; k >= 0; --k) {
      if (!step_alive_[k]) continue;
      if (truncated && step_truncatable_[k]) continue;
      double acc = x.values[prow_[k]];
      for (const UEntry& e : urow_[k]) {
        if (row_valid(e)) acc -= e.value * out.values[e.slot];
      }
      if (acc != 0.0) out.set(pcol_[k], acc / diag_[k]);
    }
  } else {
    for (std::size_t r = reach_.size(); r-- > 0;) {
      const int k = reach_[r];
      double acc = x.values[prow_[k]];
      for (const UEntry& e : urow_[k]) {
        if (row_valid(e)) acc -= e.value * out.values[e.slot];
      }
      if (acc != 0.0) out.set(pcol_[k], acc / diag_[k]);
    }
  }
  x.swap(out);
  out.clear();
}

void LuFactorization::utsolve(WorkVector& y) const {
  static thread_local WorkVector out;  // result keyed by original row
  if (static_cast<int>(out.values.size()) != m_) out.resize(m_);
  out.clear();

  bool sparse = static_cast<int>(y.indices.size()) * 8 <= m_;
  if (sparse) {
    if (++generation_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      generation_ = 1;
    }
    seeds_.clear();
    for (int i : y.indices) seeds_.push_back(col_step_[i]);
    sparse = collect_reach(
        seeds_, [&](int k) { return static_cast<int>(urow_[k].size()); },
        [&](int k, int idx) {
          const UEntry& e = urow_[k][idx];
          return row_valid(e) ? col_step_[e.slot] : -1;
        },
        mark_, generation_, stack_node_, stack_pos_, reach_, m_ / 8);
  }
  if (!sparse) {
    for (int k = 0; k < max_step_; ++k) {
      if (!step_alive_[k]) continue;
      double acc = y.values[pcol_[k]];
      for (const CEntry& e : ucol_[pcol_[k]]) {
        if (step_alive_[e.step]) acc -= e.value * out.values[prow_[e.step]];
      }
      if (acc != 0.0) out.set(prow_[k], acc / diag_[k]);
    }
  } else {
    for (std::size_t r = reach_.size(); r-- > 0;) {
      const int k = reach_[r];
      double acc = y.values[pcol_[k]];
      for (const CEntry& e : ucol_[pcol_[k]]) {
        if (step_alive_[e.step]) acc -= e.value * out.values[prow_[e.step]];
      }
      if (acc != 0.0) out.set(prow_[k], acc / diag_[k]);
    }
  }
  y.swap(out);
  out.clear();
}

void LuFactorization::ltsolve(WorkVector& y) const {
  const int m = m_;
  static thread_local WorkVector out;
  if (static_cast<int>(out.values.size()) != m) out.resize(m);
  out.clear();

  bool sparse = static_cast<int>(y.indices.size()) * 8 <= m;
  if (sparse) {
    if (++generation_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      generation_ = 1;
    }
    seeds_.clear();
    for (int i : y.indices) seeds_.push_back(base_row_step_[i]);
    sparse = collect_reach(
        seeds_,
        [&](int k) {
          const int row = prow_[k];
          return static_cast<int>(ltp_[row + 1] - ltp_[row]);
        },
        [&](int k, int idx) { return lti_[ltp_[prow_[k]] + idx]; }, mark_, generation_,
        stack_node_, stack_pos_, reach_, m / 8);
  }
  if (!sparse) {
    for (int k = m - 1; k >= 0; --k) {
      double acc = y.values[prow_[k]];
      for (std::int64_t p = lp_[k]; p < lp_[k + 1]; ++p) acc -= lx_[p] * out.values[li_[p]];
      if (acc != 0.0) out.set(prow_[k], acc);
    }
  } else {
    for (std::size_t r = reach_.size(); r-- > 0;) {
      const int k = reach_[r];
      double acc = y.values[prow_[k]];
      for (std::int64_t p = lp_[k]; p < lp_[k + 1]; ++p) acc -= lx_[p] * out.values[li_[p]];
      if (acc != 0.0) out.set(prow_[k], acc);
    }
  }
  y.swap(out);
  out.clear();
}

void LuFactorization::ftran(WorkVector& x, bool keep_spike, bool truncated) const {
  lsolve(x);
  apply_row_transforms(x);
  if (keep_spike) {
    // Stash the pre-U intermediate: update() turns it into the replacement
    // column's spike.
    spike_.clear();
    for (int i : x.indices) {
      if (x.values[i] != 0.0) spike_.set(i, x.values[i]);
    }
  }
  usolve(x, truncated);
}

void LuFactorization::btran(WorkVector& y) const {
  utsolve(y);
  apply_row_transforms_t(y);
  ltsolve(y);
}

bool LuFactorization::update(int slot) {
  const int q_old = col_step_[slot];

  // Invalidate the replaced column; its row-side copies go stale by version.
  ++slot_version_[slot];
  ucol_[slot].clear();

  const int s_new = max_step_++;
  prow_.push_back(prow_[q_old]);
  pcol_.push_back(slot);
  diag_.push_back(0.0);
  step_alive_.push_back(1);
  step_truncatable_.push_back(0);
  if (static_cast<int>(urow_.size()) <= s_new) urow_.resize(s_new + 1);
  urow_[s_new].clear();
  if (static_cast<int>(mark_.size()) <= s_new) mark_.resize(s_new + 128, 0);
  col_step_[slot] = s_new;

  // The spike (pre-U ftran image of the new column) becomes U's new column;
  // its value at the dying step seeds the bottom-row diagonal.
  static thread_local WorkVector bottom;  // keyed by slot
  if (static_cast<int>(bottom.values.size()) != m_) bottom.resize(m_);
  bottom.clear();
  using HeapItem = std::pair<int, int>;  // (step, slot), min-heap over steps
  static thread_local std::priority_queue<HeapItem, std::vector<HeapItem>,
                                          std::greater<HeapItem>>
      heap;
  while (!heap.empty()) heap.pop();

  double scale = 0.0;
  for (int r : spike_.indices) {
    const double v = spike_.values[r];
    if (v == 0.0) continue;
    scale = std::max(scale, std::fabs(v));
    const int k = row_step_[r];
    if (k == q_old) {
      bottom.accumulate(slot, v);
    } else {
      urow_[k].push_back({slot, slot_version_[slot], v});
      ucol_[slot].push_back({k, v});
      ++u_fill_;
    }
  }
  // Entries of the dying row move to the bottom row and get eliminated in
  // pivot order against the rows above.
  for (const UEntry& e : urow_[q_old]) {
    if (!row_valid(e)) continue;
    scale = std::max(scale, std::fabs(e.value));
    if (e.slot != slot && !bottom.listed[e.slot]) heap.push({col_step_[e.slot], e.slot});
    bottom.accumulate(e.slot, e.value);
  }
  step_alive_[q_old] = 0;

  const double drop = 1e-14 * std::max(scale, 1.0);
  const std::size_t eta_begin = update_f_.size();
  while (!heap.empty()) {
    const auto [k, s] = heap.top();
    heap.pop();
    const double val = bottom.values[s];
    bottom.values[s] = 0.0;  // consumed; the index list is cleared at the end
    if (std::fabs(val) <= drop) continue;
    const double f = val / diag_[k];
    update_src_.push_back(prow_[k]);
    update_f_.push_back(f);
    for (const UEntry& e : urow_[k]) {
      if (!row_valid(e)) continue;
      if (e.slot == slot) {
        bottom.accumulate(slot, -f * e.value);
        continue;
      }
      if (!bottom.listed[e.slot]) heap.push({col_step_[e.slot], e.slot});
      bottom.accumulate(e.slot, -f * e.value);
    }
  }

  const double d_new = bottom.values[slot];
  bottom.clear();
  if (!(std::fabs(d_new) > 1e-10 * std::max(scale, 1.0))) {
    update_src_.resize(eta_begin);
    update_f_.resize(eta_begin);
    m_ = 0;  // poisoned; the caller refactorizes
    return false;
  }
  diag_[s_new] = d_new;
  row_step_[prow_[s_new]] = s_new;
  update_target_.push_back(prow_[s_new]);
  update_ptr_.push_back(static_cast<std::int64_t>(update_f_.size()));
  return true;
}

}  // namespace flexopf::detail
