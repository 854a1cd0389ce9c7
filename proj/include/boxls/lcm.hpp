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

#include <array>
#include <vector>

#include "boxls/grid.hpp"

namespace boxls {

/// Neighbor order shared by every affinity field: (dy,dx) unit offsets,
/// scaled by the dilation at use sites.
inline constexpr std::array<std::array<int, 2>, 8> kNeighborOffsets = {
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

/// Raw (pre-softmax) affinity values, 8 per pixel in kNeighborOffsets
/// order. Slots whose dilated neighbor falls outside the window are
/// geometric and carry no meaningful value.
struct RawAffinity {
  int height = 0;
  int width = 0;
  int dilation = 1;
  std::vector<double> values;  // 8 per pixel

  double at(int y, int x, int n) const {
    return values[(static_cast<size_t>(y) * width + x) * 8 + n];
  }
  double& at(int y, int x, int n) {
    return values[(static_cast<size_t>(y) * width + x) * 8 + n];
  }
  bool neighbor(int y, int x, int n, int& ny, int& nx) const {
    ny = y + kNeighborOffsets[n][0] * dilation;
    nx = x + kNeighborOffsets[n][1] * dilation;
    return ny >= 0 && ny < height && nx >= 0 && nx < width;
  }
};

/// Softmax-normalized affinity weights: per pixel the weights over its
/// valid dilated neighbors are nonnegative and sum to one; out-of-window
/// slots hold zero.
struct AffinityField {
  int height = 0;
  int width = 0;
  int dilation = 1;
  std::vector<double> weights;  // 8 per pixel

  double at(int y, int x, int n) const {
    return weights[(static_cast<size_t>(y) * width + x) * 8 + n];
  }
  double& at(int y, int x, int n) {
    return weights[(static_cast<size_t>(y) * width + x) * 8 + n];
  }
  bool neighbor(int y, int x, int n, int& ny, int& nx) const {
    ny = y + kNeighborOffsets[n][0] * dilation;
    nx = x + kNeighborOffsets[n][1] * dilation;
    return ny >= 0 && ny < height && nx >= 0 && nx < width;
  }
};

/// Intensity affinity: -(|p_i - p_n| / sigma_i)^2 per dilated neighbor,
/// with sigma_i the local standard deviation over the 3x3 dilated window
/// (all channels pooled, floored at 1e-6). Distances are Euclidean over
/// channels.
RawAffinity pixel_affinity(const Grid& data, int dilation);

/// Spatial affinity template in kNeighborOffsets order. The normalizing
/// sigma equals the dilation, so axis neighbors score -1 and diagonal
/// neighbors -2 at every dilation.
std::array<double, 8> spatial_affinity(int dilation);

/// The spatial template expanded to a full field for a given window.
RawAffinity spatial_affinity_field(int height, int width, int dilation);

/// Per-pixel softmax over the valid neighbors.
AffinityField normalize_affinity(const RawAffinity& raw);

/// (pixel + eta * spatial) / (1 + eta), keeping rows stochastic.
AffinityField combined_affinity(const AffinityField& pixel, const AffinityField& spatial,
                                double eta);

/// k rounds of neighbor-weighted averaging of phi under A. Each round is
/// a convex combination, so the value range can only shrink.
LevelSetField propagate(const LevelSetField& phi, const AffinityField& A, int k);

/// Mean absolute difference between a field and its propagated version.
/// The target is treated as a constant (no gradient flows through it).
double consistency_penalty(const LevelSetField& phi, const LevelSetField& phi_k);

}  // namespace boxls
