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

#include "boxls/synthetic.hpp"

#include <algorithm>

namespace boxls {

namespace {

void paint_mask(Grid& image, const BinaryMask& mask, double value) {
  for (int c = 0; c < image.channels(); ++c)
    for (int y = 0; y < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x)
        if (mask.at(y, x)) image.at(c, y, x) = value;
}

BinaryMask rect_mask(int h, int w, const BBox& r) {
  BinaryMask m(h, w, 0);
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) m.at(y, x) = 1;
  return m;
}

}  // namespace

BinaryMask rasterize_disk(int height, int width, double cx, double cy, double radius) {
  BinaryMask m(height, width, 0);
  const double r2 = radius * radius;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= r2) m.at(y, x) = 1;
    }
  return m;
}

SyntheticScene make_square_scene(int size, int square, int box_margin, int channels) {
  SyntheticScene s;
  s.image = Grid(size, size, channels, 0.0);
  const int lo = (size - square) / 2;
  const BBox sq{lo, lo, lo + square, lo + square};
  s.truth.push_back(rect_mask(size, size, sq));
  paint_mask(s.image, s.truth.back(), 1.0);
  s.boxes.push_back(BBox{std::max(0, sq.x0 - box_margin), std::max(0, sq.y0 - box_margin),
                         std::min(size, sq.x1 + box_margin), std::min(size, sq.y1 + box_margin)});
  return s;
}

SyntheticScene make_disk_scene(int size, double radius, int channels) {
  SyntheticScene s;
  s.image = Grid(size, size, channels, 0.0);
  const double c = size / 2.0;
  BinaryMask disk = rasterize_disk(size, size, c, c, radius);
  paint_mask(s.image, disk, 1.0);

  // tight bounding box of the rasterized disk
  int x0 = size, y0 = size, x1 = 0, y1 = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if (disk.at(y, x)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x + 1);
        y1 = std::max(y1, y + 1);
      }
  s.boxes.push_back(BBox{x0, y0, x1, y1});
  s.truth.push_back(std::move(disk));
  return s;
}

SyntheticScene make_two_square_scene(int size, int channels) {
  SyntheticScene s;
  s.image = Grid(size, size, channels, 0.0);
  const int side = size * 5 / 16;  // 20 at size 64
  const BBox a{size / 16, size / 16, size / 16 + side, size / 16 + side};
  const BBox b{size - size / 16 - side, size - size / 16 - side, size - size / 16,
               size - size / 16};
  for (const BBox& sq : {a, b}) {
    s.truth.push_back(rect_mask(size, size, sq));
    paint_mask(s.image, s.truth.back(), 1.0);
    const int m = 3;
    s.boxes.push_back(BBox{std::max(0, sq.x0 - m), std::max(0, sq.y0 - m),
                           std::min(size, sq.x1 + m), std::min(size, sq.y1 + m)});
  }
  return s;
}

CamouflageScene make_camouflage_scene(int size, double radius, int channels) {
  CamouflageScene s;
  s.image = Grid(size, size, channels, 0.0);
  for (int c = 0; c < channels; ++c)
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) s.image.at(c, y, x) = ((x + y) & 1) ? 1.0 : 0.0;

  const double ctr = size / 2.0;
  s.truth = rasterize_disk(size, size, ctr, ctr, radius);
  s.features = Grid(size, size, 1, 0.1);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if (s.truth.at(y, x)) s.features.at(0, y, x) = 0.9;

  int x0 = size, y0 = size, x1 = 0, y1 = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      if (s.truth.at(y, x)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x + 1);
        y1 = std::max(y1, y + 1);
      }
  const int m = 3;
  s.box = BBox{std::max(0, x0 - m), std::max(0, y0 - m), std::min(size, x1 + m),
               std::min(size, y1 + m)};
  return s;
}

}  // namespace boxls
