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

#include "boxls/lcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boxls {

namespace {
constexpr double kSigmaFloor = 1e-6;
}

RawAffinity pixel_affinity(const Grid& data, int dilation) {
  if (dilation < 1) throw Error("pixel_affinity: dilation must be >= 1");
  const int h = data.height(), w = data.width(), ch = data.channels();
  RawAffinity raw;
  raw.height = h;
  raw.width = w;
  raw.dilation = dilation;
  raw.values.assign(static_cast<size_t>(h) * w * 8, 0.0);

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      // local deviation over the dilated 3x3 window: mean squared distance
      // of the sample vectors to their mean, i.e. per-channel population
      // variances summed over channels
      int n_samples = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int ny = y + dy * dilation, nx = x + dx * dilation;
          if (ny >= 0 && ny < h && nx >= 0 && nx < w) ++n_samples;
        }
      double var = 0.0;
      const double inv = 1.0 / n_samples;  // window always includes the center
      for (int c = 0; c < ch; ++c) {
        double s = 0.0, s2 = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = y + dy * dilation, nx = x + dx * dilation;
            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
            const double v = data.at(c, ny, nx);
            s += v;
            s2 += v * v;
          }
        var += s2 * inv - (s * inv) * (s * inv);
      }
      const double sigma = std::max(std::sqrt(std::max(var, 0.0)), kSigmaFloor);

      for (int n = 0; n < 8; ++n) {
        int ny, nx;
        if (!raw.neighbor(y, x, n, ny, nx)) continue;
        double d2 = 0.0;
        for (int c = 0; c < ch; ++c) {
          const double d = data.at(c, y, x) - data.at(c, ny, nx);
          d2 += d * d;
        }
        const double r = std::sqrt(d2) / sigma;
        raw.at(y, x, n) = -(r * r);
      }
    }
  return raw;
}

std::array<double, 8> spatial_affinity(int dilation) {
  if (dilation < 1) throw Error("spatial_affinity: dilation must be >= 1");
  std::array<double, 8> t{};
  for (int n = 0; n < 8; ++n) {
    const double dy = kNeighborOffsets[n][0], dx = kNeighborOffsets[n][1];
    // squared Euclidean offset over sigma = dilation; the dilation cancels
    t[n] = -(dy * dy + dx * dx);
  }
  return t;
}

RawAffinity spatial_affinity_field(int height, int width, int dilation) {
  const auto t = spatial_affinity(dilation);
  RawAffinity raw;
  raw.height = height;
  raw.width = width;
  raw.dilation = dilation;
  raw.values.resize(static_cast<size_t>(height) * width * 8);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int n = 0; n < 8; ++n) raw.at(y, x, n) = t[n];
  return raw;
}

AffinityField normalize_affinity(const RawAffinity& raw) {
  AffinityField out;
  out.height = raw.height;
  out.width = raw.width;
  out.dilation = raw.dilation;
  out.weights.assign(raw.values.size(), 0.0);

  for (int y = 0; y < raw.height; ++y)
    for (int x = 0; x < raw.width; ++x) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int n = 0; n < 8; ++n) {
        int ny, nx;
        if (raw.neighbor(y, x, n, ny, nx)) mx = std::max(mx, raw.at(y, x, n));
      }
      if (!std::isfinite(mx)) continue;  // pixel with no valid neighbor
      double z = 0.0;
      for (int n = 0; n < 8; ++n) {
        int ny, nx;
        if (!raw.neighbor(y, x, n, ny, nx)) continue;
        z += std::exp(raw.at(y, x, n) - mx);
      }
      for (int n = 0; n < 8; ++n) {
        int ny, nx;
        if (!raw.neighbor(y, x, n, ny, nx)) continue;
        out.at(y, x, n) = std::exp(raw.at(y, x, n) - mx) / z;
      }
    }
  return out;
}

AffinityField combined_affinity(const AffinityField& pixel, const AffinityField& spatial,
                                double eta) {
  if (pixel.height != spatial.height || pixel.width != spatial.width ||
      pixel.dilation != spatial.dilation)
    throw Error("combined_affinity: mismatched fields");
  if (eta < 0.0) throw Error("combined_affinity: eta must be >= 0");
  AffinityField out;
  out.height = pixel.height;
  out.width = pixel.width;
  out.dilation = pixel.dilation;
  out.weights.resize(pixel.weights.size());
  const double inv = 1.0 / (1.0 + eta);
  for (size_t i = 0; i < out.weights.size(); ++i)
    out.weights[i] = (pixel.weights[i] + eta * spatial.weights[i]) * inv;
  return out;
}

LevelSetField propagate(const LevelSetField& phi, const AffinityField& A, int k) {
  if (A.height != phi.height() || A.width != phi.width())
    throw Error("propagate: affinity field does not cover the level-set window");
  if (k < 1) throw Error("propagate: k must be >= 1");

  LevelSetField cur = phi;
  LevelSetField next = phi;
  const int h = A.height, w = A.width;
  for (int step = 0; step < k; ++step) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        // accumulate relative to the center value so an all-equal
        // neighborhood reproduces it bit for bit
        const double center = cur.at(y, x);
        double acc = 0.0;
        double wsum = 0.0;
        for (int n = 0; n < 8; ++n) {
          int ny, nx;
          if (!A.neighbor(y, x, n, ny, nx)) continue;
          const double wn = A.at(y, x, n);
          acc += wn * (cur.at(ny, nx) - center);
          wsum += wn;
        }
        // isolated pixels (no valid neighbor) keep their value
        next.at(y, x) = (wsum > 0.0) ? center + acc / wsum : center;
      }
    std::swap(cur, next);
  }
  return cur;
}

double consistency_penalty(const LevelSetField& phi, const LevelSetField& phi_k) {
  if (phi.domain != phi_k.domain) throw Error("consistency_penalty: window mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < phi.phi.size(); ++i) sum += std::abs(phi.phi[i] - phi_k.phi[i]);
  return sum / static_cast<double>(phi.phi.size());
}

}  // namespace boxls
