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

#include <map>
#include <string>

#include "boxls/evolution_config.hpp"

namespace boxls {

/// Flat key=value text format mirroring EvolutionConfig. '#' starts a
/// comment, blank lines are skipped, unknown keys are errors.
EvolutionConfig load_config(const std::string& path,
                            const EvolutionConfig& base = EvolutionConfig{});

/// Applies key=value overrides (same keys as the file format) on top of
/// a config; used for CLI flag overrides.
void apply_config_entry(EvolutionConfig& cfg, const std::string& key, const std::string& value);

/// Snapshot of every field as ordered key=value pairs (also the manifest
/// serialization).
std::map<std::string, std::string> config_entries(const EvolutionConfig& cfg);

void save_config(const std::string& path, const EvolutionConfig& cfg);

}  // namespace boxls
