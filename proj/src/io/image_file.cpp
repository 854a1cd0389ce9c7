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

#include "boxls/io/image_file.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace boxls {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// Decodes to 8-bit gray or RGB rows.
void read_png_rows(const std::string& path, int& h, int& w, int& channels,
                   std::vector<std::uint8_t>& data) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open PNG for reading: " + path);

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw Error("not a PNG file: " + path);

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw Error("png_create_read_struct failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw Error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(r.png))) throw Error("libpng failed while reading " + path);

  png_init_io(r.png, fp.get());
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);

  const png_uint_32 width = png_get_image_width(r.png, r.info);
  const png_uint_32 height = png_get_image_height(r.png, r.info);
  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  if (bit_depth == 16) png_set_strip_16(r.png);
  png_set_strip_alpha(r.png);
  png_set_interlace_handling(r.png);
  png_read_update_info(r.png, r.info);

  const int out_channels = static_cast<int>(png_get_channels(r.png, r.info));
  if (out_channels != 1 && out_channels != 3)
    throw Error("unsupported PNG channel layout in " + path);

  h = static_cast<int>(height);
  w = static_cast<int>(width);
  channels = out_channels;
  data.resize(static_cast<size_t>(h) * w * channels);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = data.data() + static_cast<size_t>(y) * w * channels;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
}

void write_png_rows(const std::string& path, int h, int w, int channels,
                    const std::vector<std::uint8_t>& data) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot open PNG for writing: " + path);

  PngWriter wr;
  wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!wr.png) throw Error("png_create_write_struct failed");
  wr.info = png_create_info_struct(wr.png);
  if (!wr.info) throw Error("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(wr.png))) throw Error("libpng failed while writing " + path);

  png_init_io(wr.png, fp.get());
  png_set_IHDR(wr.png, wr.info, w, h, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(data.data() + static_cast<size_t>(y) * w * channels);
  png_write_image(wr.png, rows.data());
  png_write_end(wr.png, nullptr);
}

}  // namespace

Grid read_image_png(const std::string& path) {
  int h = 0, w = 0, channels = 0;
  std::vector<std::uint8_t> data;
  read_png_rows(path, h, w, channels, data);
  Grid g(h, w, channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        g.at(c, y, x) = data[(static_cast<size_t>(y) * w + x) * channels + c] / 255.0;
  return g;
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> data(mask.bits.size());
  for (size_t i = 0; i < data.size(); ++i) data[i] = mask.bits[i] ? 255 : 0;
  write_png_rows(path, mask.height, mask.width, 1, data);
}

BinaryMask read_mask_png(const std::string& path) {
  int h = 0, w = 0, channels = 0;
  std::vector<std::uint8_t> data;
  read_png_rows(path, h, w, channels, data);
  BinaryMask mask(h, w, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      // color masks count as foreground when any channel passes
      std::uint8_t v = 0;
      for (int c = 0; c < channels; ++c)
        v = std::max(v, data[(static_cast<size_t>(y) * w + x) * channels + c]);
      mask.at(y, x) = v >= 128 ? 1 : 0;
    }
  return mask;
}

void write_image_png(const std::string& path, const Grid& image) {
  if (image.channels() != 1 && image.channels() != 3)
    throw Error("write_image_png supports 1 or 3 channels");
  std::vector<std::uint8_t> data(static_cast<size_t>(image.height()) * image.width() *
                                 image.channels());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < image.channels(); ++c) {
        const double v = std::clamp(image.at(c, y, x), 0.0, 1.0);
        data[(static_cast<size_t>(y) * image.width() + x) * image.channels() + c] =
            static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
  write_png_rows(path, image.height(), image.width(), image.channels(), data);
}

}  // namespace boxls
