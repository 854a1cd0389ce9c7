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

#include <string>

namespace boxls {

/// Region over which the two-region data terms and their statistics are
/// accumulated. Box restricts them to the annotated rectangle; Window
/// extends them over the whole evolution window (box plus margin).
enum class CvDomain { Box, Window };

/// Every tunable of the per-instance evolution, with shipped defaults.
struct EvolutionConfig {
  double gamma = 1e-4;     // contour length weight
  double lambda1 = 0.05;   // image data term weight
  double lambda2 = 5.0;    // feature data term weight
  double alpha = 3.0;      // box projection weight
  double mu_lcm = 1.0;     // local consistency weight
  double dt = 1.0;         // initial step size, halved by backtracking
  int max_steps = 300;
  int k = 10;              // consistency propagation steps
  int dilation = 3;        // affinity neighborhood dilation
  double eta = 1.0;        // spatial vs intensity affinity balance
  double sigma_tf = 0.1;   // tree filter bandwidth
  double tol = 1e-6;       // relative energy change for convergence
  double threshold = 0.5;  // soft mask cut for the binary mask
  double window_margin = 0.10;  // evolution window growth per side
  CvDomain cv_domain = CvDomain::Box;

  /// Throws Error on any out-of-range field.
  void validate() const;
};

std::string to_string(CvDomain d);
CvDomain cv_domain_from_string(const std::string& s);

}  // namespace boxls
