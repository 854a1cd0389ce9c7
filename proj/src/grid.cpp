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

#include "boxls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace boxls {

BBox BBox::dilated(double frac, int img_w, int img_h) const {
  int mx = 0, my = 0;
  if (frac > 0.0) {
    mx = std::max(1, static_cast<int>(std::lround(frac * width())));
    my = std::max(1, static_cast<int>(std::lround(frac * height())));
  }
  BBox out{x0 - mx, y0 - my, x1 + mx, y1 + my};
  out.x0 = std::max(out.x0, 0);
  out.y0 = std::max(out.y0, 0);
  out.x1 = std::min(out.x1, img_w);
  out.y1 = std::min(out.y1, img_h);
  return out;
}

void BBox::validate(int plane_w, int plane_h, const std::string& what) const {
  if (x0 < 0 || y0 < 0 || x1 > plane_w || y1 > plane_h || x0 >= x1 || y0 >= y1) {
    throw Error(what + " " + to_string() + " invalid for a " + std::to_string(plane_w) + "x" +
                std::to_string(plane_h) + " plane");
  }
}

std::string BBox::to_string() const {
  std::ostringstream os;
  os << "[" << x0 << "," << y0 << "," << x1 << "," << y1 << ")";
  return os.str();
}

Grid::Grid(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw Error("grid dimensions must be positive, got " + std::to_string(height) + "x" +
                std::to_string(width) + "x" + std::to_string(channels));
  }
  values_.assign(static_cast<size_t>(height) * width * channels, fill);
}

Grid Grid::from_values(int height, int width, int channels, std::vector<double> values) {
  Grid g(height, width, channels);
  if (values.size() != g.values_.size()) {
    throw Error("grid value count mismatch: expected " + std::to_string(g.values_.size()) +
                ", got " + std::to_string(values.size()));
  }
  g.values_ = std::move(values);
  return g;
}

Grid Grid::crop(const BBox& box) const {
  box.validate(width_, height_, "crop box");
  Grid out(box.height(), box.width(), channels_);
  for (int c = 0; c < channels_; ++c)
    for (int y = 0; y < box.height(); ++y)
      for (int x = 0; x < box.width(); ++x) out.at(c, y, x) = at(c, box.y0 + y, box.x0 + x);
  return out;
}

void Grid::check_finite(const std::string& what) const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(what + " contains a non-finite value");
  }
}

long long BinaryMask::count() const {
  long long n = 0;
  for (auto b : bits) n += b;
  return n;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

SoftMask sigmoid_field(const LevelSetField& phi) {
  SoftMask out(phi.height(), phi.width());
  for (size_t i = 0; i < phi.phi.size(); ++i) out.values[i] = sigmoid(phi.phi[i]);
  return out;
}

std::vector<double> axis_projection(const SoftMask& mask, Axis axis) {
  if (mask.height < 1 || mask.width < 1) throw Error("axis_projection: empty mask");
  if (axis == Axis::X) {
    std::vector<double> out(mask.width, -std::numeric_limits<double>::infinity());
    for (int y = 0; y < mask.height; ++y)
      for (int x = 0; x < mask.width; ++x) out[x] = std::max(out[x], mask.at(y, x));
    return out;
  }
  std::vector<double> out(mask.height, -std::numeric_limits<double>::infinity());
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) out[y] = std::max(out[y], mask.at(y, x));
  return out;
}

double dice_1d(std::span<const double> p, std::span<const double> g, bool* both_zero) {
  if (p.size() != g.size()) throw Error("dice_1d: length mismatch");
  if (both_zero) *both_zero = false;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    num += p[i] * g[i];
    den += p[i] * p[i] + g[i] * g[i];
  }
  if (den == 0.0) {
    // identical empty projections
    if (both_zero) *both_zero = true;
    return 1.0;
  }
  return 2.0 * num / den;
}

namespace {
constexpr double kConstantChannelEps = 1e-12;
}

Grid normalize(const Grid& grid, const BBox& box) {
  box.validate(grid.width(), grid.height(), "normalize box");
  Grid out(grid.height(), grid.width(), grid.channels());
  for (int c = 0; c < grid.channels(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int y = box.y0; y < box.y1; ++y)
      for (int x = box.x0; x < box.x1; ++x) {
        const double v = grid.at(c, y, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    const double range = hi - lo;
    if (!(range > kConstantChannelEps)) {
      std::fill(out.channel(c).begin(), out.channel(c).end(), 0.5);
      continue;
    }
    const double inv = 1.0 / range;
    auto src = grid.channel(c);
    auto dst = out.channel(c);
    for (size_t i = 0; i < src.size(); ++i)
      dst[i] = std::clamp((src[i] - lo) * inv, 0.0, 1.0);
  }
  return out;
}

Grid normalize(const Grid& grid) {
  return normalize(grid, BBox{0, 0, grid.width(), grid.height()});
}

}  // namespace boxls
