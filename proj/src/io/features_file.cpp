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

#include "boxls/io/features_file.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace boxls {

namespace {

constexpr char kMagic[4] = {'B', 'L', 'S', 'F'};

std::int32_t read_i32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(b[0]) |
                                   (static_cast<std::uint32_t>(b[1]) << 8) |
                                   (static_cast<std::uint32_t>(b[2]) << 16) |
                                   (static_cast<std::uint32_t>(b[3]) << 24));
}

void write_i32_le(std::ostream& out, std::int32_t v) {
  const auto u = static_cast<std::uint32_t>(v);
  const unsigned char b[4] = {static_cast<unsigned char>(u & 0xff),
                              static_cast<unsigned char>((u >> 8) & 0xff),
                              static_cast<unsigned char>((u >> 16) & 0xff),
                              static_cast<unsigned char>((u >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

Grid read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw Error("bad feature file magic in " + path);
  const std::int32_t h = read_i32_le(in);
  const std::int32_t w = read_i32_le(in);
  const std::int32_t c = read_i32_le(in);
  if (!in || h < 1 || w < 1 || c < 1)
    throw Error("bad feature file header in " + path);

  const size_t n = static_cast<size_t>(h) * w * c;
  std::vector<float> body(n);
  in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(n * sizeof(float)));
  if (!in) throw Error("feature file truncated: " + path);

  std::vector<double> values(n);
  for (size_t i = 0; i < n; ++i) values[i] = body[i];
  Grid g = Grid::from_values(h, w, c, std::move(values));
  g.check_finite("feature file " + path);
  return g;
}

void write_features(const std::string& path, const Grid& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open feature file for writing: " + path);
  out.write(kMagic, 4);
  write_i32_le(out, features.height());
  write_i32_le(out, features.width());
  write_i32_le(out, features.channels());
  std::vector<float> body(features.values().size());
  for (size_t i = 0; i < body.size(); ++i) body[i] = static_cast<float>(features.values()[i]);
  out.write(reinterpret_cast<const char*>(body.data()),
            static_cast<std::streamsize>(body.size() * sizeof(float)));
  if (!out) throw Error("failed writing feature file: " + path);
}

}  // namespace boxls
