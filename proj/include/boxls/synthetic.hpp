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

#include "boxls/grid.hpp"

namespace boxls {

/// Synthetic scenes used by the selftest suite, the benchmark command
/// and the integration tests. Images are RGB-like (identical channels)
/// unless a channel count is given.

struct SyntheticScene {
  Grid image;
  std::vector<BBox> boxes;        // annotation box per instance
  std::vector<BinaryMask> truth;  // ground-truth mask per instance
};

/// Bright axis-aligned square (value 1) on a dark background (value 0),
/// annotated with the square grown by `box_margin` pixels per side.
SyntheticScene make_square_scene(int size = 64, int square = 24, int box_margin = 4,
                                 int channels = 3);

/// Bright disk (pixel-center rasterization) with its tight bounding box.
SyntheticScene make_disk_scene(int size = 64, double radius = 12.0, int channels = 3);

/// Two disjoint bright squares, one annotation each.
SyntheticScene make_two_square_scene(int size = 64, int channels = 3);

/// Checkerboard image whose foreground and background share the same
/// mean intensity; the object is visible only in the returned feature
/// channel. The annotation box is the disk bounding box grown by 3.
struct CamouflageScene {
  Grid image;
  Grid features;
  BBox box;
  BinaryMask truth;
};
CamouflageScene make_camouflage_scene(int size = 64, double radius = 12.0, int channels = 3);

BinaryMask rasterize_disk(int height, int width, double cx, double cy, double radius);

}  // namespace boxls
