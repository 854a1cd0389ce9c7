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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxls {

/// Base error type for the library. Everything user-facing throws this.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when one side of a two-region split has (near) zero soft area.
class DegenerateRegionError : public Error {
 public:
  explicit DegenerateRegionError(const std::string& side)
      : Error("degenerate region: " + side + " of the contour has near-zero soft area"),
        side_(side) {}
  const std::string& side() const { return side_; }

 private:
  std::string side_;
};

/// Half-open integer pixel rectangle [x0,x1) x [y0,y1).
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool empty() const { return x1 <= x0 || y1 <= y0; }

  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  bool contains(const BBox& inner) const {
    return inner.x0 >= x0 && inner.x1 <= x1 && inner.y0 >= y0 && inner.y1 <= y1;
  }
  bool operator==(const BBox& o) const = default;

  /// Grown by `frac` of its own extent per side (at least one pixel when
  /// frac > 0), clipped to [0,img_w) x [0,img_h).
  BBox dilated(double frac, int img_w, int img_h) const;

  /// Shifted so that `origin` becomes (0,0); used to express image-space
  /// boxes in window-local coordinates.
  BBox translated(int dx, int dy) const { return BBox{x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }

  /// Throws when the box is empty or sticks out of a w x h plane.
  void validate(int plane_w, int plane_h, const std::string& what = "bbox") const;

  std::string to_string() const;
};

/// Multi-channel real-valued pixel grid. Storage is channel-major,
/// row-major within a channel: values[(c*H + y)*W + x].
///
/// Serves both the low-level image term and high-level feature stacks;
/// they share the same shape contract and differ only in channel count.
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, int channels, double fill = 0.0);

  static Grid from_values(int height, int width, int channels, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  long long pixels() const { return static_cast<long long>(height_) * width_; }

  double at(int c, int y, int x) const { return values_[index(c, y, x)]; }
  double& at(int c, int y, int x) { return values_[index(c, y, x)]; }

  std::span<const double> channel(int c) const {
    return {values_.data() + static_cast<size_t>(c) * height_ * width_,
            static_cast<size_t>(height_) * width_};
  }
  std::span<double> channel(int c) {
    return {values_.data() + static_cast<size_t>(c) * height_ * width_,
            static_cast<size_t>(height_) * width_};
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool same_shape(const Grid& o) const {
    return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
  }
  bool same_plane(const Grid& o) const { return height_ == o.height_ && width_ == o.width_; }

  /// Sub-grid covering `box` (all channels). Box must lie inside the grid.
  Grid crop(const BBox& box) const;

  /// Throws if any stored value is not finite.
  void check_finite(const std::string& what) const;

 private:
  size_t index(int c, int y, int x) const {
    return (static_cast<size_t>(c) * height_ + y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

using ImageGrid = Grid;
using FeatureStack = Grid;

/// Box annotation with an optional class label (-1 when absent).
struct InstanceAnnotation {
  BBox box;
  int category_id = -1;
};

/// Per-pixel foreground probability plane.
struct SoftMask {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // row-major

  SoftMask() = default;
  SoftMask(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<size_t>(h) * w, fill) {}

  double at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }
  double& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
};

/// 0/1 instance mask plane.
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;  // row-major, values in {0,1}

  BinaryMask() = default;
  BinaryMask(int h, int w, std::uint8_t fill = 0)
      : height(h), width(w), bits(static_cast<size_t>(h) * w, fill) {}

  std::uint8_t at(int y, int x) const { return bits[static_cast<size_t>(y) * width + x]; }
  std::uint8_t& at(int y, int x) { return bits[static_cast<size_t>(y) * width + x]; }
  long long count() const;
};

/// Real field over a rectangular window of the image plane. The window is
/// kept in image coordinates so instance fields can be mapped back.
struct LevelSetField {
  BBox domain;               // image-space rectangle the field covers
  std::vector<double> phi;   // row-major, domain.height() * domain.width()

  LevelSetField() = default;
  LevelSetField(const BBox& d, double fill = 0.0)
      : domain(d), phi(static_cast<size_t>(d.height()) * d.width(), fill) {}

  int height() const { return domain.height(); }
  int width() const { return domain.width(); }
  double at(int y, int x) const { return phi[static_cast<size_t>(y) * width() + x]; }
  double& at(int y, int x) { return phi[static_cast<size_t>(y) * width() + x]; }
};

enum class Axis { X, Y };

/// Numerically stable logistic function.
double sigmoid(double x);

/// d sigmoid/dx expressed through the output value s = sigmoid(x).
inline double sigmoid_grad_from_value(double s) { return s * (1.0 - s); }

/// Applies the logistic function pointwise; output values lie in (0,1).
SoftMask sigmoid_field(const LevelSetField& phi);

/// Max-projection onto an axis: out[i] is the maximum mask value in
/// column i (Axis::X) or row i (Axis::Y).
std::vector<double> axis_projection(const SoftMask& mask, Axis axis);

/// Soft 1-D dice with a squared denominator:
///   dice = 2 sum(p*g) / (sum(p^2) + sum(g^2)).
/// Two all-zero inputs count as identical (dice 1); `both_zero` reports
/// that case when non-null so callers can flag it in traces.
double dice_1d(std::span<const double> p, std::span<const double> g, bool* both_zero = nullptr);

/// Per-channel min-max normalization using statistics gathered inside
/// `box`; the affine map is applied to the whole grid and clamped to
/// [0,1]. A channel that is constant inside the box maps to all 0.5.
Grid normalize(const Grid& grid, const BBox& box);

/// Convenience: normalize over the full grid extent.
Grid normalize(const Grid& grid);

}  // namespace boxls
