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
#include <vector>

#include "boxls/evolution_config.hpp"
#include "boxls/grid.hpp"

namespace boxls {

/// Piecewise-constant fit of the data term: per-channel mean value inside
/// (c1) and outside (c2) the soft contour.
struct RegionMeans {
  std::vector<double> c1;
  std::vector<double> c2;
};

/// The three parts of the two-region energy over one data term.
struct ChanVeseTerms {
  double data_inside = 0.0;
  double data_outside = 0.0;
  double length = 0.0;  // already carries the gamma weight
  double total() const { return data_inside + data_outside + length; }
};

/// Itemized per-instance objective. data/length parts carry their
/// lambda/gamma weights; box_projection and lcm_consistency are stored
/// raw and enter the total with the alpha and mu weights:
///   total = data_inside + data_outside + length
///         + alpha * box_projection + mu_lcm * lcm_consistency.
struct EnergyBreakdown {
  double data_inside = 0.0;
  double data_outside = 0.0;
  double length = 0.0;
  double box_projection = 0.0;   // raw, in [0,2]
  double lcm_consistency = 0.0;  // raw mean L1 distance
  double total = 0.0;
};

/// Soft region means of `data` under sigmoid(phi), accumulated over `roi`
/// (field-local coordinates). Throws DegenerateRegionError when either
/// side's soft area drops below 1e-12.
RegionMeans region_means(const Grid& data, const LevelSetField& phi, const BBox& roi);

/// Two-region energy with means fitted from phi itself.
ChanVeseTerms chan_vese_energy(const Grid& data, const LevelSetField& phi, double gamma,
                               const BBox& roi);

/// Same energy with externally supplied (frozen) means. This is the
/// function the descent loop and the finite-difference oracle evaluate.
ChanVeseTerms chan_vese_energy_frozen(const Grid& data, const LevelSetField& phi,
                                      const RegionMeans& means, double gamma, const BBox& roi);

/// Mean-curvature field div(grad(phi)/|grad(phi)|) with central
/// differences, replicate padding at the window border and the gradient
/// magnitude regularized as sqrt(px^2 + py^2 + eps^2), eps = 1e-8.
std::vector<double> curvature(const LevelSetField& phi);

/// Exact gradient of chan_vese_energy_frozen with respect to phi
/// (row-major over the field window, zero outside `roi`). Means are
/// fitted from phi and frozen for the evaluation.
std::vector<double> energy_gradient(const Grid& data, const LevelSetField& phi, double gamma,
                                    const BBox& roi);

/// Same with caller-frozen means.
std::vector<double> energy_gradient_frozen(const Grid& data, const LevelSetField& phi,
                                           const RegionMeans& means, double gamma,
                                           const BBox& roi);

/// Projection mismatch between a soft mask and the box indicator on both
/// axes, each measured as 1 - dice of the max-projections. Range [0,2],
/// zero exactly when both projections match the indicator projections.
/// `box` is given in mask-local coordinates.
double box_projection_cost(const SoftMask& mask, const BBox& box);

/// Exact subgradient of box_projection_cost(sigmoid(phi), box) w.r.t.
/// phi. Each projected max routes its gradient to the first arg-max
/// pixel of the line (smallest index on ties).
std::vector<double> box_projection_gradient(const LevelSetField& phi, const BBox& box);

/// Full per-instance objective:
///   alpha * box_cost + lambda1 * F(phi, image) + lambda2 * F(phi, features)
///   + mu_lcm * mean|phi - phi_k|,
/// with the feature term omitted when `features` is null and the
/// consistency term omitted when `phi_k` is null. `box` is the annotated
/// rectangle in field-local coordinates; data sums run over it (or over
/// the whole window under CvDomain::Window) while the box projection is
/// always evaluated on the whole field window against `box`.
EnergyBreakdown combined_objective(const LevelSetField& phi, const Grid& image,
                                   const Grid* features, const EvolutionConfig& cfg,
                                   const BBox& box, const LevelSetField* phi_k);

/// combined_objective with frozen region means and frozen consistency
/// target, used inside one backtracking line search.
EnergyBreakdown combined_objective_frozen(const LevelSetField& phi, const Grid& image,
                                          const RegionMeans& image_means, const Grid* features,
                                          const RegionMeans* feature_means,
                                          const EvolutionConfig& cfg, const BBox& box,
                                          const LevelSetField* phi_k);

/// Data-term accumulation region implied by the config: the box itself or
/// the full field window.
BBox cv_roi(const EvolutionConfig& cfg, const BBox& box, const LevelSetField& phi);

}  // namespace boxls
