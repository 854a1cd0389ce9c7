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

/// Loads a PNG as a real grid with one channel (grayscale) or three
/// (color), values scaled to [0,1]. Palette and 16-bit inputs are
/// expanded/scaled; an alpha channel is dropped.
Grid read_image_png(const std::string& path);

/// Writes a 0/1 mask as an 8-bit grayscale PNG with values {0, 255}.
void write_mask_png(const std::string& path, const BinaryMask& mask);

/// Reads an 8-bit grayscale PNG back into a 0/1 mask (threshold 128).
BinaryMask read_mask_png(const std::string& path);

/// Writes a grid as PNG: 1 channel as grayscale, 3 as RGB, values
/// clamped from [0,1] to 8 bits. Test and tooling helper.
void write_image_png(const std::string& path, const Grid& image);

}  // namespace boxls
