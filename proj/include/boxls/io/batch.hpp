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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boxls/evolution_config.hpp"
#include "boxls/evolve.hpp"
#include "boxls/io/annotations.hpp"

namespace boxls {

struct BatchOptions {
  std::string images_dir;
  std::string annotations_path;
  std::string features_dir;  // empty: no feature term
  std::string gt_dir;        // empty: skip metrics
  std::string out_dir;
  EvolutionConfig config;
  int jobs = 1;
  bool write_traces = true;
};

struct InstanceRecord {
  long long image_id = 0;
  int annotation_index = 0;  // index into the annotation array
  int ordinal = 0;           // per-image instance ordinal
  std::string mask_png;
  std::string trace_csv;
  bool ok = false;
  bool converged = false;
  int steps = 0;
  std::string error;
};

struct RunManifest {
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_hashes;  // path -> fnv1a64 hex
  std::vector<InstanceRecord> instances;
  std::optional<Metrics> metrics;
  int failures = 0;
};

/// Segments every annotated instance, emitting per-instance mask PNGs,
/// a results JSON with uncompressed column-major RLE, per-instance
/// energy-trace CSVs, metrics JSON when ground-truth masks are supplied,
/// and a manifest. Instance evolution may run on `jobs` threads; outputs
/// are byte-identical regardless.
RunManifest run_batch(const BatchOptions& options);

/// FNV-1a 64-bit fingerprint of a file, as 16 hex digits (manifest
/// reproducibility aid, not a cryptographic hash).
std::string fnv1a64_file(const std::string& path);

}  // namespace boxls
