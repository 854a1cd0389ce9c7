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

#include "boxls/chanvese.hpp"

#include <algorithm>
#include <cmath>

#include "boxls/lcm.hpp"

namespace boxls {

namespace {

constexpr double kEps = 1e-8;          // gradient magnitude regularizer
constexpr double kAreaFloor = 1e-12;   // degenerate region cutoff

void check_alignment(const Grid& data, const LevelSetField& phi, const BBox& roi) {
  if (data.height() != phi.height() || data.width() != phi.width())
    throw Error("data term and level-set field cover different windows");
  roi.validate(phi.width(), phi.height(), "roi");
}

// Forward-difference total variation of u restricted to the roi
// sub-rectangle, smoothed as sqrt(gx^2+gy^2+eps^2)-eps so a constant
// field scores exactly zero. Differences never cross the roi border
// (zero-flux there).
double tv_length(const std::vector<double>& u, int w, const BBox& roi) {
  double sum = 0.0;
  for (int y = roi.y0; y < roi.y1; ++y)
    for (int x = roi.x0; x < roi.x1; ++x) {
      const double c = u[static_cast<size_t>(y) * w + x];
      const double gx = (x + 1 < roi.x1) ? u[static_cast<size_t>(y) * w + x + 1] - c : 0.0;
      const double gy = (y + 1 < roi.y1) ? u[static_cast<size_t>(y + 1) * w + x] - c : 0.0;
      sum += std::sqrt(gx * gx + gy * gy + kEps * kEps) - kEps;
    }
  return sum;
}

// Accumulates d(tv_length)/du * scale into grad_u (exact adjoint of the
// discretization above).
void tv_length_grad_accum(const std::vector<double>& u, int w, const BBox& roi, double scale,
                          std::vector<double>& grad_u) {
  for (int y = roi.y0; y < roi.y1; ++y)
    for (int x = roi.x0; x < roi.x1; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      const double c = u[i];
      const double gx = (x + 1 < roi.x1) ? u[i + 1] - c : 0.0;
      const double gy = (y + 1 < roi.y1) ? u[i + w] - c : 0.0;
      const double den = std::sqrt(gx * gx + gy * gy + kEps * kEps);
      const double fx = scale * gx / den;
      const double fy = scale * gy / den;
      if (x + 1 < roi.x1) {
        grad_u[i + 1] += fx;
        grad_u[i] -= fx;
      }
      if (y + 1 < roi.y1) {
        grad_u[i + w] += fy;
        grad_u[i] -= fy;
      }
    }
}

std::vector<double> sigmoid_values(const LevelSetField& phi) {
  std::vector<double> u(phi.phi.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = sigmoid(phi.phi[i]);
  return u;
}

struct ProjectionDerivative {
  std::vector<double> d_cost;  // d(1 - dice)/d p
  std::vector<int> argmax;     // source pixel per line (first max)
};

// 1 - dice(p, b) derivative w.r.t. the soft projection p.
ProjectionDerivative projection_cost_derivative(const std::vector<double>& p,
                                                const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    num += p[i] * b[i];
    den += p[i] * p[i] + b[i] * b[i];
  }
  ProjectionDerivative out;
  out.d_cost.resize(p.size());
  const double den2 = den * den;
  for (size_t i = 0; i < p.size(); ++i)
    out.d_cost[i] = (-2.0 * b[i] * den + 4.0 * num * p[i]) / den2;
  return out;
}

std::vector<double> box_indicator_projection(const BBox& box, int len, Axis axis) {
  std::vector<double> b(len, 0.0);
  const int lo = (axis == Axis::X) ? box.x0 : box.y0;
  const int hi = (axis == Axis::X) ? box.x1 : box.y1;
  for (int i = lo; i < hi; ++i) b[i] = 1.0;
  return b;
}

}  // namespace

RegionMeans region_means(const Grid& data, const LevelSetField& phi, const BBox& roi) {
  check_alignment(data, phi, roi);
  const int w = phi.width();
  double area_in = 0.0, area_out = 0.0;
  for (int y = roi.y0; y < roi.y1; ++y)
    for (int x = roi.x0; x < roi.x1; ++x) {
      const double s = sigmoid(phi.phi[static_cast<size_t>(y) * w + x]);
      area_in += s;
      area_out += 1.0 - s;
    }
  if (area_in < kAreaFloor) throw DegenerateRegionError("inside");
  if (area_out < kAreaFloor) throw DegenerateRegionError("outside");

  RegionMeans m;
  m.c1.resize(data.channels());
  m.c2.resize(data.channels());
  for (int c = 0; c < data.channels(); ++c) {
    double in = 0.0, out = 0.0;
    for (int y = roi.y0; y < roi.y1; ++y)
      for (int x = roi.x0; x < roi.x1; ++x) {
        const double s = sigmoid(phi.phi[static_cast<size_t>(y) * w + x]);
        const double v = data.at(c, y, x);
        in += v * s;
        out += v * (1.0 - s);
      }
    m.c1[c] = in / area_in;
    m.c2[c] = out / area_out;
  }
  return m;
}

ChanVeseTerms chan_vese_energy(const Grid& data, const LevelSetField& phi, double gamma,
                               const BBox& roi) {
  return chan_vese_energy_frozen(data, phi, region_means(data, phi, roi), gamma, roi);
}

ChanVeseTerms chan_vese_energy_frozen(const Grid& data, const LevelSetField& phi,
                                      const RegionMeans& means, double gamma, const BBox& roi) {
  check_alignment(data, phi, roi);
  const int w = phi.width();
  ChanVeseTerms t;
  for (int c = 0; c < data.channels(); ++c) {
    const double c1 = means.c1[c], c2 = means.c2[c];
    for (int y = roi.y0; y < roi.y1; ++y)
      for (int x = roi.x0; x < roi.x1; ++x) {
        const double s = sigmoid(phi.phi[static_cast<size_t>(y) * w + x]);
        const double v = data.at(c, y, x);
        t.data_inside += (v - c1) * (v - c1) * s;
        t.data_outside += (v - c2) * (v - c2) * (1.0 - s);
      }
  }
  if (gamma != 0.0) t.length = gamma * tv_length(sigmoid_values(phi), w, roi);
  return t;
}

std::vector<double> curvature(const LevelSetField& phi) {
  const int h = phi.height(), w = phi.width();
  if (h < 2 || w < 2) throw Error("curvature needs a window of at least 2x2");
  auto clampx = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto clampy = [h](int y) { return std::clamp(y, 0, h - 1); };
  auto v = [&](int y, int x) { return phi.phi[static_cast<size_t>(clampy(y)) * w + clampx(x)]; };

  // unit gradient field with replicate padding
  std::vector<double> nx(static_cast<size_t>(h) * w), ny(static_cast<size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double px = 0.5 * (v(y, x + 1) - v(y, x - 1));
      const double py = 0.5 * (v(y + 1, x) - v(y - 1, x));
      const double mag = std::sqrt(px * px + py * py + kEps * kEps);
      nx[static_cast<size_t>(y) * w + x] = px / mag;
      ny[static_cast<size_t>(y) * w + x] = py / mag;
    }
  auto nval = [&](const std::vector<double>& f, int y, int x) {
    return f[static_cast<size_t>(clampy(y)) * w + clampx(x)];
  };
  std::vector<double> kappa(static_cast<size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      kappa[static_cast<size_t>(y) * w + x] =
          0.5 * (nval(nx, y, x + 1) - nval(nx, y, x - 1)) +
          0.5 * (nval(ny, y + 1, x) - nval(ny, y - 1, x));
  return kappa;
}

std::vector<double> energy_gradient(const Grid& data, const LevelSetField& phi, double gamma,
                                    const BBox& roi) {
  return energy_gradient_frozen(data, phi, region_means(data, phi, roi), gamma, roi);
}

std::vector<double> energy_gradient_frozen(const Grid& data, const LevelSetField& phi,
                                           const RegionMeans& means, double gamma,
                                           const BBox& roi) {
  check_alignment(data, phi, roi);
  const int w = phi.width();
  const auto u = sigmoid_values(phi);

  std::vector<double> grad_u(u.size(), 0.0);
  for (int c = 0; c < data.channels(); ++c) {
    const double c1 = means.c1[c], c2 = means.c2[c];
    for (int y = roi.y0; y < roi.y1; ++y)
      for (int x = roi.x0; x < roi.x1; ++x) {
        const double v = data.at(c, y, x);
        grad_u[static_cast<size_t>(y) * w + x] += (v - c1) * (v - c1) - (v - c2) * (v - c2);
      }
  }
  if (gamma != 0.0) tv_length_grad_accum(u, w, roi, gamma, grad_u);

  // chain through the sigmoid
  std::vector<double> grad(u.size());
  for (size_t i = 0; i < u.size(); ++i) grad[i] = grad_u[i] * sigmoid_grad_from_value(u[i]);
  return grad;
}

double box_projection_cost(const SoftMask& mask, const BBox& box) {
  box.validate(mask.width, mask.height, "projection box");
  const auto px = axis_projection(mask, Axis::X);
  const auto py = axis_projection(mask, Axis::Y);
  const auto bx = box_indicator_projection(box, mask.width, Axis::X);
  const auto by = box_indicator_projection(box, mask.height, Axis::Y);
  return (1.0 - dice_1d(px, bx)) + (1.0 - dice_1d(py, by));
}

std::vector<double> box_projection_gradient(const LevelSetField& phi, const BBox& box) {
  const int h = phi.height(), w = phi.width();
  box.validate(w, h, "projection box");
  const auto u = sigmoid_values(phi);

  // max-projections with the first arg-max pixel of every line
  std::vector<double> px(w, -1.0), py(h, -1.0);
  std::vector<int> ax(w, 0), ay(h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = u[static_cast<size_t>(y) * w + x];
      if (v > px[x]) {
        px[x] = v;
        ax[x] = y;
      }
      if (v > py[y]) {
        py[y] = v;
        ay[y] = x;
      }
    }

  const auto bx = box_indicator_projection(box, w, Axis::X);
  const auto by = box_indicator_projection(box, h, Axis::Y);
  const auto dx = projection_cost_derivative(px, bx);
  const auto dy = projection_cost_derivative(py, by);

  std::vector<double> grad(u.size(), 0.0);
  for (int x = 0; x < w; ++x) grad[static_cast<size_t>(ax[x]) * w + x] += dx.d_cost[x];
  for (int y = 0; y < h; ++y) grad[static_cast<size_t>(y) * w + ay[y]] += dy.d_cost[y];
  for (size_t i = 0; i < grad.size(); ++i) grad[i] *= sigmoid_grad_from_value(u[i]);
  return grad;
}

BBox cv_roi(const EvolutionConfig& cfg, const BBox& box, const LevelSetField& phi) {
  if (cfg.cv_domain == CvDomain::Window) return BBox{0, 0, phi.width(), phi.height()};
  return box;
}

EnergyBreakdown combined_objective(const LevelSetField& phi, const Grid& image,
                                   const Grid* features, const EvolutionConfig& cfg,
                                   const BBox& box, const LevelSetField* phi_k) {
  const BBox roi = cv_roi(cfg, box, phi);
  const RegionMeans im = region_means(image, phi, roi);
  RegionMeans fm;
  if (features) fm = region_means(*features, phi, roi);
  return combined_objective_frozen(phi, image, im, features, features ? &fm : nullptr, cfg, box,
                                   phi_k);
}

EnergyBreakdown combined_objective_frozen(const LevelSetField& phi, const Grid& image,
                                          const RegionMeans& image_means, const Grid* features,
                                          const RegionMeans* feature_means,
                                          const EvolutionConfig& cfg, const BBox& box,
                                          const LevelSetField* phi_k) {
  const BBox roi = cv_roi(cfg, box, phi);
  EnergyBreakdown e;
  const ChanVeseTerms ti = chan_vese_energy_frozen(image, phi, image_means, cfg.gamma, roi);
  e.data_inside = cfg.lambda1 * ti.data_inside;
  e.data_outside = cfg.lambda1 * ti.data_outside;
  e.length = cfg.lambda1 * ti.length;
  if (features) {
    const ChanVeseTerms tf =
        chan_vese_energy_frozen(*features, phi, *feature_means, cfg.gamma, roi);
    e.data_inside += cfg.lambda2 * tf.data_inside;
    e.data_outside += cfg.lambda2 * tf.data_outside;
    e.length += cfg.lambda2 * tf.length;
  }
  e.box_projection = box_projection_cost(sigmoid_field(phi), box);
  if (phi_k) e.lcm_consistency = consistency_penalty(phi, *phi_k);
  e.total = e.data_inside + e.data_outside + e.length + cfg.alpha * e.box_projection +
            cfg.mu_lcm * e.lcm_consistency;
  return e;
}

}  // namespace boxls
