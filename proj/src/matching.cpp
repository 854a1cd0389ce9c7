// Copyright (c) 2026, the boxls authors. All rights reserved.
//
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

#include "boxls/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "boxls/chanvese.hpp"

namespace boxls {

double instance_cost(const SoftMask& pred, const BBox& gt_box) {
  return box_projection_cost(pred, gt_box);
}

double category_cost(std::span<const double> pred_probs, int gt_label) {
  if (gt_label < 0 || gt_label >= static_cast<int>(pred_probs.size()))
    throw Error("category_cost: label " + std::to_string(gt_label) + " out of range");
  double sum = 0.0;
  for (double p : pred_probs) sum += p;
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error("category_cost: probabilities sum to " + std::to_string(sum));
  return -std::log(std::max(pred_probs[gt_label], 1e-12));
}

CostMatrix total_cost(const CostMatrix& inst, const CostMatrix& cate, double beta1,
                      double beta2) {
  if (beta2 != 0.0 && (cate.rows != inst.rows || cate.cols != inst.cols))
    throw Error("total_cost: instance and category matrices have different shapes");
  CostMatrix out(inst.rows, inst.cols);
  for (size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = beta1 * inst.values[i];
    if (beta2 != 0.0) out.values[i] += beta2 * cate.values[i];
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path assignment with potentials. Assigns every
// column (cols <= rows required); returns per-column row indices.
std::vector<int> lap_solve(const CostMatrix& cost) {
  const int n = cost.cols;
  const int m = cost.rows;
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost.at(j - 1, i0 - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> col_to_row(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j]) col_to_row[p[j] - 1] = j - 1;
  return col_to_row;
}

double assignment_total(const CostMatrix& cost, const std::vector<int>& col_to_row) {
  double t = 0.0;
  for (int j = 0; j < cost.cols; ++j)
    if (col_to_row[j] >= 0) t += cost.at(col_to_row[j], j);
  return t;
}

// Minimum assignment total over the rows/cols not yet fixed.
double optimal_remainder(const CostMatrix& cost, const std::vector<char>& row_used,
                         int first_free_col) {
  const int free_cols = cost.cols - first_free_col;
  if (free_cols == 0) return 0.0;
  std::vector<int> rows;
  for (int r = 0; r < cost.rows; ++r)
    if (!row_used[r]) rows.push_back(r);
  CostMatrix sub(static_cast<int>(rows.size()), free_cols);
  for (int r = 0; r < sub.rows; ++r)
    for (int c = 0; c < sub.cols; ++c) sub.at(r, c) = cost.at(rows[r], first_free_col + c);
  return assignment_total(sub, lap_solve(sub));
}

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  for (double v : cost.values)
    if (!std::isfinite(v)) throw Error("hungarian: non-finite cost entry");

  Assignment out;
  out.candidate_to_gt.assign(cost.rows, -1);
  out.gt_to_candidate.assign(cost.cols, -1);
  if (cost.cols == 0) return out;  // no ground truths: everything stays unmatched

  // pad with zero-cost dummy candidates when ground truths outnumber them
  CostMatrix work = cost;
  if (work.rows < work.cols) {
    CostMatrix padded(work.cols, work.cols);
    for (int r = 0; r < work.rows; ++r)
      for (int c = 0; c < work.cols; ++c) padded.at(r, c) = work.at(r, c);
    work = std::move(padded);
  }

  const double best_total = assignment_total(work, lap_solve(work));
  const double tol = 1e-9 * std::max(1.0, std::abs(best_total));

  // fix columns left to right, always picking the smallest candidate row
  // that still admits an optimal completion
  std::vector<char> row_used(work.rows, 0);
  std::vector<int> chosen(work.cols, -1);
  double fixed_sum = 0.0;
  for (int j = 0; j < work.cols; ++j) {
    bool placed = false;
    for (int r = 0; r < work.rows && !placed; ++r) {
      if (row_used[r]) continue;
      row_used[r] = 1;
      const double completion = optimal_remainder(work, row_used, j + 1);
      if (fixed_sum + work.at(r, j) + completion <= best_total + tol) {
        chosen[j] = r;
        fixed_sum += work.at(r, j);
        placed = true;
      } else {
        row_used[r] = 0;
      }
    }
    if (!placed) throw Error("hungarian: internal inconsistency while fixing ties");
  }

  for (int j = 0; j < cost.cols; ++j) {
    const int r = chosen[j];
    if (r < cost.rows) {  // dummy rows mean "no candidate"
      out.gt_to_candidate[j] = r;
      out.candidate_to_gt[r] = j;
      out.total_cost += cost.at(r, j);
    }
  }
  return out;
}

CenterAssignment center_region_assign(std::span<const BBox> gt_boxes, int grid_h, int grid_w,
                                      double scale) {
  if (grid_h < 1 || grid_w < 1) throw Error("center_region_assign: empty lattice");
  if (!(scale > 0.0) || scale > 1.0) throw Error("center_region_assign: scale must be in (0,1]");
  for (const BBox& b : gt_boxes) b.validate(grid_w, grid_h, "gt box");

  CenterAssignment out;
  out.grid_h = grid_h;
  out.grid_w = grid_w;
  out.owner.assign(static_cast<size_t>(grid_h) * grid_w, -1);
  out.positives.resize(gt_boxes.size());

  auto claim = [&](int i, int j, int g) {
    const size_t cell = static_cast<size_t>(i) * grid_w + j;
    const int cur = out.owner[cell];
    if (cur < 0) {
      out.owner[cell] = g;
      return;
    }
    // smallest box wins; earlier index on equal areas
    const auto a_new = gt_boxes[g].area(), a_cur = gt_boxes[cur].area();
    if (a_new < a_cur || (a_new == a_cur && g < cur)) out.owner[cell] = g;
  };

  for (size_t g = 0; g < gt_boxes.size(); ++g) {
    const BBox& b = gt_boxes[g];
    const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
    const double sx = 0.5 * scale * b.width(), sy = 0.5 * scale * b.height();
    for (int i = b.y0; i < b.y1; ++i)
      for (int j = b.x0; j < b.x1; ++j) {
        const double px = j + 0.5, py = i + 0.5;
        if (px >= cx - sx && px < cx + sx && py >= cy - sy && py < cy + sy)
          claim(i, j, static_cast<int>(g));
      }
    // the cell holding the box center is always a positive
    const int ci = std::clamp(static_cast<int>(std::floor(cy)), b.y0, b.y1 - 1);
    const int cj = std::clamp(static_cast<int>(std::floor(cx)), b.x0, b.x1 - 1);
    claim(ci, cj, static_cast<int>(g));
  }

  for (size_t cell = 0; cell < out.owner.size(); ++cell)
    if (out.owner[cell] >= 0) out.positives[out.owner[cell]].push_back(static_cast<int>(cell));
  return out;
}

}  // namespace boxls
