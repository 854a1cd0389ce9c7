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

#include "boxls/grid.hpp"

namespace boxls {

/// Flat binary feature-map format:
///   bytes 0..3   magic "BLSF"
///   bytes 4..15  H, W, C as little-endian int32
///   body         H*W*C little-endian float32, channel-major
///                (channel, then row, then column)
Grid read_features(const std::string& path);
void write_features(const std::string& path, const Grid& features);

}  // namespace boxls
