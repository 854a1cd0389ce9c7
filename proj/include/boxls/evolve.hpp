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

#include <optional>
#include <string>
#include <vector>

#include "boxls/chanvese.hpp"
#include "boxls/evolution_config.hpp"
#include "boxls/grid.hpp"

namespace boxls {

/// One accepted descent step. The energy is evaluated at the step start
/// under that step's frozen region means and consistency target; end is
/// the same frozen objective after the update.
struct StepRecord {
  int step = 0;
  EnergyBreakdown energy;        // at step start, frozen parameters
  double energy_after = 0.0;     // same frozen objective at the accepted iterate
  double dt_used = 0.0;          // 0 when no decreasing step existed
  int backtracks = 0;
};

struct EvolutionTrace {
  std::vector<StepRecord> steps;
  bool converged = false;
  int converged_at = -1;  // step index where the convergence window closed
};

struct InstanceResult {
  BinaryMask mask;        // image-sized, guaranteed inside the annotated box
  SoftMask soft;          // image-sized sigmoid field (zero outside the window)
  EvolutionTrace trace;
};

struct SegmentOutcome {
  std::optional<InstanceResult> result;
  std::string error;  // set when this instance failed
};

/// Box-shaped initial field: clamped signed Chebyshev distance to the box
/// boundary, positive inside, in [-3, 3]. `window` must contain `box`;
/// both are in image coordinates and the field covers `window`.
LevelSetField init_levelset(const BBox& box, const BBox& window);

/// Runs one full per-instance evolution: window and normalization,
/// structural features, affinity setup, backtracking gradient descent
/// with a per-step consistency target, convergence test, and mask
/// extraction. `features` may be null.
InstanceResult evolve_instance(const Grid& image, const Grid* features, const BBox& box,
                               const EvolutionConfig& cfg);

/// Per-annotation evolution over one image. Failures are isolated per
/// instance; output order matches the annotation order and results are
/// independent of execution order.
std::vector<SegmentOutcome> segment_image(const Grid& image,
                                          const std::vector<InstanceAnnotation>& annotations,
                                          const Grid* features, const EvolutionConfig& cfg);

/// Desk-scale segmentation metrics: no confidence ranking, AP at a
/// threshold is the fraction of ground truths whose best overlap reaches
/// it.
struct Metrics {
  double mean_iou = 0.0;
  double abo = 0.0;
  std::vector<std::pair<double, double>> ap;  // (threshold, value)
};

inline constexpr double kApThresholds[] = {0.25, 0.50, 0.70, 0.75};

double mask_iou(const BinaryMask& a, const BinaryMask& b);

/// When `aligned` is true the lists are compared pairwise (and must have
/// equal length); otherwise every ground truth greedily takes its best
/// overlap. Throws on an empty ground-truth list.
Metrics evaluate(const std::vector<BinaryMask>& pred, const std::vector<BinaryMask>& gt,
                 bool aligned = true);

}  // namespace boxls
