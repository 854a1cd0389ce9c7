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

#include <vector>

#include "boxls/grid.hpp"

namespace boxls {

struct GridEdge {
  int a = 0;  // linear pixel index y*width + x
  int b = 0;
  double weight = 0.0;
};

/// 4-connected pixel graph weighted by feature distances. Edges are
/// enumerated in a fixed order (per pixel row-major: right edge, then
/// down edge) so tie-breaking is deterministic.
struct GridGraph {
  int height = 0;
  int width = 0;
  std::vector<GridEdge> edges;
};

/// Minimum spanning tree rooted at pixel (0,0), stored as parent links
/// plus a breadth-first ordering (root first) for linear-time passes.
struct SpanningTree {
  int height = 0;
  int width = 0;
  std::vector<int> parent;          // -1 at the root
  std::vector<double> parent_weight;
  std::vector<int> bfs_order;
  double total_weight = 0.0;
};

/// Builds the 4-neighbor graph with weight = Euclidean distance between
/// the guidance feature vectors of the edge endpoints.
GridGraph build_grid_graph(const Grid& guidance);

/// Kruskal with deterministic tie-break: (weight, enumeration index).
SpanningTree mst(const GridGraph& graph);

/// Exponential path-distance filtering along the tree:
///   y_i = sum_j exp(-D(i,j)/sigma) x_j / sum_j exp(-D(i,j)/sigma),
/// with D the sum of edge weights on the unique tree path. Computed
/// exactly in two passes (leaf-to-root aggregation, root-to-leaf
/// distribution), per channel.
Grid tree_filter(const Grid& values, const SpanningTree& tree, double sigma_tf);

/// Structure-preserving feature transform: the guidance is the image
/// concatenated with `raw_features` when present (the image alone
/// otherwise); the filter is applied to the features when present, else
/// to the image, and the output is min-max renormalized to [0,1].
Grid structural_features(const Grid& image, const Grid* raw_features, double sigma_tf);

}  // namespace boxls
