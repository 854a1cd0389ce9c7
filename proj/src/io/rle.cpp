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

#include "boxls/io/rle.hpp"

namespace boxls {

Rle rle_encode(const BinaryMask& mask) {
  Rle out;
  out.height = mask.height;
  out.width = mask.width;
  std::uint8_t cur = 0;  // runs start counting zeros
  std::uint32_t run = 0;
  for (int x = 0; x < mask.width; ++x)
    for (int y = 0; y < mask.height; ++y) {
      const std::uint8_t v = mask.at(y, x) ? 1 : 0;
      if (v == cur) {
        ++run;
      } else {
        out.counts.push_back(run);
        cur = v;
        run = 1;
      }
    }
  out.counts.push_back(run);
  return out;
}

BinaryMask rle_decode(const Rle& rle) {
  if (rle.height < 1 || rle.width < 1) throw Error("rle_decode: empty mask shape");
  BinaryMask mask(rle.height, rle.width, 0);
  const std::uint64_t expect =
      static_cast<std::uint64_t>(rle.height) * static_cast<std::uint64_t>(rle.width);
  std::uint64_t pos = 0;
  std::uint8_t v = 0;
  for (std::uint32_t run : rle.counts) {
    for (std::uint32_t i = 0; i < run; ++i) {
      if (pos >= expect) throw Error("rle_decode: counts overrun the mask size");
      const int x = static_cast<int>(pos / rle.height);
      const int y = static_cast<int>(pos % rle.height);
      mask.at(y, x) = v;
      ++pos;
    }
    v = 1 - v;
  }
  if (pos != expect) throw Error("rle_decode: counts do not cover the mask");
  return mask;
}

}  // namespace boxls
