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

#include "boxls/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boxls/lcm.hpp"
#include "boxls/treefilter.hpp"

namespace boxls {

namespace {

constexpr int kMaxBacktracks = 60;
constexpr int kConvergenceWindow = 5;

}  // namespace

void EvolutionConfig::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(std::string("config: ") + name + " must be a finite nonnegative number");
  };
  nonneg(gamma, "gamma");
  nonneg(lambda1, "lambda1");
  nonneg(lambda2, "lambda2");
  nonneg(alpha, "alpha");
  nonneg(mu_lcm, "mu_lcm");
  nonneg(eta, "eta");
  nonneg(window_margin, "window_margin");
  if (!(dt > 0.0)) throw Error("config: dt must be > 0");
  if (max_steps < 1) throw Error("config: max_steps must be >= 1");
  if (k < 1) throw Error("config: k must be >= 1");
  if (dilation < 1) throw Error("config: dilation must be >= 1");
  if (!(sigma_tf > 0.0)) throw Error("config: sigma_tf must be > 0");
  if (!(tol > 0.0)) throw Error("config: tol must be > 0");
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("config: threshold must be in (0,1)");
}

std::string to_string(CvDomain d) { return d == CvDomain::Box ? "box" : "window"; }

CvDomain cv_domain_from_string(const std::string& s) {
  if (s == "box") return CvDomain::Box;
  if (s == "window") return CvDomain::Window;
  throw Error("config: cv_domain must be 'box' or 'window', got '" + s + "'");
}

LevelSetField init_levelset(const BBox& box, const BBox& window) {
  if (!window.contains(box)) throw Error("init_levelset: box not contained in window");
  LevelSetField phi(window);
  for (int y = 0; y < window.height(); ++y)
    for (int x = 0; x < window.width(); ++x) {
      const int ix = window.x0 + x, iy = window.y0 + y;
      double d;
      if (box.contains(ix, iy)) {
        // rings: 1 on the innermost in-box ring, growing toward the center
        d = 1.0 + std::min(std::min(ix - box.x0, box.x1 - 1 - ix),
                           std::min(iy - box.y0, box.y1 - 1 - iy));
      } else {
        const int dx = std::max({box.x0 - ix, 0, ix - (box.x1 - 1)});
        const int dy = std::max({box.y0 - iy, 0, iy - (box.y1 - 1)});
        d = -static_cast<double>(std::max(dx, dy));
      }
      phi.at(y, x) = std::clamp(d, -3.0, 3.0);
    }
  return phi;
}

namespace {

struct InstanceSetup {
  BBox window;          // image coordinates
  BBox local_box;       // annotation box in window coordinates
  Grid image;           // normalized window crop
  std::optional<Grid> features;  // structural features over the window
  AffinityField affinity;
};

InstanceSetup prepare_instance(const Grid& image, const Grid* features, const BBox& box,
                               const EvolutionConfig& cfg) {
  box.validate(image.width(), image.height(), "instance box");
  if (features) {
    if (!features->same_plane(image))
      throw Error("feature stack is not aligned with the image plane");
    features->check_finite("feature stack");
  }
  image.check_finite("image");

  InstanceSetup s;
  s.window = box.dilated(cfg.window_margin, image.width(), image.height());
  s.local_box = box.translated(-s.window.x0, -s.window.y0);

  s.image = normalize(image.crop(s.window), s.local_box);
  if (features) {
    const Grid feat_window = normalize(features->crop(s.window), s.local_box);
    s.features = structural_features(s.image, &feat_window, cfg.sigma_tf);
  }

  const AffinityField pixel = normalize_affinity(pixel_affinity(s.image, cfg.dilation));
  const AffinityField spatial = normalize_affinity(
      spatial_affinity_field(s.window.height(), s.window.width(), cfg.dilation));
  s.affinity = combined_affinity(pixel, spatial, cfg.eta);
  return s;
}

// Exact subgradient of the frozen objective at phi.
std::vector<double> total_gradient(const InstanceSetup& s, const LevelSetField& phi,
                                   const RegionMeans& image_means,
                                   const RegionMeans* feature_means, const LevelSetField& phi_k,
                                   const EvolutionConfig& cfg) {
  const BBox roi = cv_roi(cfg, s.local_box, phi);
  std::vector<double> g =
      energy_gradient_frozen(s.image, phi, image_means, cfg.gamma, roi);
  for (double& v : g) v *= cfg.lambda1;
  if (s.features) {
    const std::vector<double> gf =
        energy_gradient_frozen(*s.features, phi, *feature_means, cfg.gamma, roi);
    for (size_t i = 0; i < g.size(); ++i) g[i] += cfg.lambda2 * gf[i];
  }
  const std::vector<double> gb = box_projection_gradient(phi, s.local_box);
  for (size_t i = 0; i < g.size(); ++i) g[i] += cfg.alpha * gb[i];

  const double lcm_scale = cfg.mu_lcm / static_cast<double>(phi.phi.size());
  for (size_t i = 0; i < g.size(); ++i) {
    const double d = phi.phi[i] - phi_k.phi[i];
    if (d > 0.0)
      g[i] += lcm_scale;
    else if (d < 0.0)
      g[i] -= lcm_scale;
  }
  return g;
}

}  // namespace

InstanceResult evolve_instance(const Grid& image, const Grid* features, const BBox& box,
                               const EvolutionConfig& cfg) {
  cfg.validate();
  const InstanceSetup s = prepare_instance(image, features, box, cfg);
  const Grid* feat = s.features ? &*s.features : nullptr;

  LevelSetField phi = init_levelset(box, s.window);
  // express the field in window-local coordinates for the inner loop
  phi.domain = BBox{0, 0, s.window.width(), s.window.height()};

  EvolutionTrace trace;
  trace.steps.reserve(cfg.max_steps);
  int flat_streak = 0;
  double prev_total = 0.0;
  // accepted step size carried across steps; each step retries from twice
  // the last accepted value so flat-gradient phases still make progress
  double dt_carry = cfg.dt;

  for (int step = 0; step < cfg.max_steps; ++step) {
    const BBox roi = cv_roi(cfg, s.local_box, phi);
    RegionMeans image_means, feature_means;
    try {
      image_means = region_means(s.image, phi, roi);
      if (feat) feature_means = region_means(*feat, phi, roi);
    } catch (const DegenerateRegionError& e) {
      std::ostringstream os;
      os << e.what() << " (aborted at step " << step << " of " << cfg.max_steps;
      if (!trace.steps.empty()) os << ", last total " << trace.steps.back().energy.total;
      os << ")";
      throw Error(os.str());
    }
    const LevelSetField phi_k = propagate(phi, s.affinity, cfg.k);

    auto frozen_energy = [&](const LevelSetField& f) {
      return combined_objective_frozen(f, s.image, image_means, feat,
                                       feat ? &feature_means : nullptr, cfg, s.local_box, &phi_k);
    };

    StepRecord rec;
    rec.step = step;
    rec.energy = frozen_energy(phi);

    const std::vector<double> grad =
        total_gradient(s, phi, image_means, feat ? &feature_means : nullptr, phi_k, cfg);

    // backtracking line search on the frozen objective
    double dt = dt_carry * 2.0;
    LevelSetField candidate = phi;
    bool accepted = false;
    for (int bt = 0; bt <= kMaxBacktracks; ++bt) {
      for (size_t i = 0; i < phi.phi.size(); ++i) candidate.phi[i] = phi.phi[i] - dt * grad[i];
      const EnergyBreakdown e = frozen_energy(candidate);
      if (e.total <= rec.energy.total) {
        rec.dt_used = dt;
        rec.backtracks = bt;
        rec.energy_after = e.total;
        phi = candidate;
        accepted = true;
        dt_carry = dt;
        break;
      }
      dt *= 0.5;
    }
    if (!accepted) {
      // no decreasing step exists along this direction; hold position
      rec.dt_used = 0.0;
      rec.backtracks = kMaxBacktracks + 1;
      rec.energy_after = rec.energy.total;
    }
    trace.steps.push_back(rec);

    // relative-change convergence over a short window of steps
    if (step > 0) {
      const double denom = std::max(std::abs(prev_total), 1e-30);
      if (std::abs(rec.energy.total - prev_total) / denom < cfg.tol)
        ++flat_streak;
      else
        flat_streak = 0;
    }
    prev_total = rec.energy.total;
    if (flat_streak >= kConvergenceWindow) {
      trace.converged = true;
      trace.converged_at = step;
      break;
    }
  }

  // mask extraction: threshold the sigmoid field, clip to the box
  InstanceResult out;
  out.trace = std::move(trace);
  out.soft = SoftMask(image.height(), image.width(), 0.0);
  out.mask = BinaryMask(image.height(), image.width(), 0);
  const SoftMask window_soft = sigmoid_field(phi);
  for (int y = 0; y < s.window.height(); ++y)
    for (int x = 0; x < s.window.width(); ++x) {
      const int iy = s.window.y0 + y, ix = s.window.x0 + x;
      const double v = window_soft.at(y, x);
      out.soft.at(iy, ix) = v;
      if (v > cfg.threshold && box.contains(ix, iy)) out.mask.at(iy, ix) = 1;
    }
  return out;
}

std::vector<SegmentOutcome> segment_image(const Grid& image,
                                          const std::vector<InstanceAnnotation>& annotations,
                                          const Grid* features, const EvolutionConfig& cfg) {
  std::vector<SegmentOutcome> out(annotations.size());
  for (size_t i = 0; i < annotations.size(); ++i) {
    try {
      out[i].result = evolve_instance(image, features, annotations[i].box, cfg);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.height != b.height || a.width != b.width) throw Error("mask_iou: shape mismatch");
  long long inter = 0, uni = 0;
  for (size_t i = 0; i < a.bits.size(); ++i) {
    inter += a.bits[i] & b.bits[i];
    uni += a.bits[i] | b.bits[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

Metrics evaluate(const std::vector<BinaryMask>& pred, const std::vector<BinaryMask>& gt,
                 bool aligned) {
  if (gt.empty()) throw Error("evaluate: empty ground-truth set");
  if (aligned && pred.size() != gt.size())
    throw Error("evaluate: aligned mode needs equal-length lists");

  // best overlap per ground truth drives ABO and AP; the aligned pairing
  // (when available) drives mean IoU
  std::vector<double> best(gt.size(), 0.0);
  double pair_sum = 0.0;
  for (size_t g = 0; g < gt.size(); ++g) {
    for (const auto& p : pred) best[g] = std::max(best[g], mask_iou(p, gt[g]));
    pair_sum += aligned ? mask_iou(pred[g], gt[g]) : best[g];
  }

  Metrics m;
  const double n = static_cast<double>(gt.size());
  m.mean_iou = pair_sum / n;
  for (double b : best) m.abo += b;
  m.abo /= n;
  for (double t : kApThresholds) {
    int hit = 0;
    for (double b : best)
      if (b >= t) ++hit;
    m.ap.emplace_back(t, hit / n);
  }
  return m;
}

}  // namespace boxls
