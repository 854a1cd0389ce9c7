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

#pragma once

#include <span>
#include <vector>

#include "boxls/grid.hpp"

namespace boxls {

/// Shipped matching-cost weights and the center-region scale factor.
inline constexpr double kDefaultBeta1 = 2.0;
inline constexpr double kDefaultBeta2 = 6.0;
inline constexpr double kDefaultCenterScale = 0.2;

/// Dense candidate-by-ground-truth cost matrix, row-major.
struct CostMatrix {
  int rows = 0;  // candidates
  int cols = 0;  // ground truths
  std::vector<double> values;

  CostMatrix() = default;
  CostMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), values(static_cast<size_t>(r) * c, fill) {}
  double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
  double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
};

/// One-to-one matching result; -1 marks "no object".
struct Assignment {
  std::vector<int> candidate_to_gt;  // per candidate, matched gt or -1
  std::vector<int> gt_to_candidate;  // per gt, matched candidate or -1
  double total_cost = 0.0;
};

/// Spatial matching cost: projection mismatch of the predicted soft mask
/// against the box indicator on both axes (range [0,2]).
double instance_cost(const SoftMask& pred, const BBox& gt_box);

/// Cross-entropy category cost -log p[gt_label], probability clamped at
/// 1e-12. Probabilities must sum to 1 within 1e-6.
double category_cost(std::span<const double> pred_probs, int gt_label);

/// C = beta1 * C_inst + beta2 * C_cate. The category matrix may be empty
/// when beta2 == 0 (class-agnostic matching).
CostMatrix total_cost(const CostMatrix& inst, const CostMatrix& cate,
                      double beta1 = kDefaultBeta1, double beta2 = kDefaultBeta2);

/// Exact minimum-cost bipartite assignment. Every ground truth is matched
/// when candidates >= ground truths; with fewer candidates every candidate
/// is matched and the remaining ground truths stay unmatched. Among
/// minimum-cost solutions the one with the lexicographically smallest
/// gt_to_candidate vector is returned.
Assignment hungarian(const CostMatrix& cost);

/// Positive candidate locations on a grid_h x grid_w lattice (boxes given
/// in lattice coordinates). A cell is positive for a box when its center
/// falls inside the box region shrunk by `scale` about the box center;
/// the cell containing the box center is always positive. Cells claimed
/// by several boxes keep the one with the smallest area (smaller index on
/// ties).
struct CenterAssignment {
  int grid_h = 0;
  int grid_w = 0;
  std::vector<int> owner;                   // per cell: gt index or -1
  std::vector<std::vector<int>> positives;  // per gt: sorted linear cell indices
};
CenterAssignment center_region_assign(std::span<const BBox> gt_boxes, int grid_h, int grid_w,
                                      double scale = kDefaultCenterScale);

}  // namespace boxls
