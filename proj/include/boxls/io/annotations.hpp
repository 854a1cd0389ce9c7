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
#include <vector>

#include "boxls/grid.hpp"

namespace boxls {

struct ImageInfo {
  long long id = 0;
  std::string file_name;
  int height = 0;
  int width = 0;
};

struct BoxAnnotation {
  long long image_id = 0;
  BBox box;              // converted to half-open pixel coordinates
  int category_id = -1;  // -1 when absent
};

struct AnnotationSet {
  std::vector<ImageInfo> images;
  std::vector<BoxAnnotation> annotations;

  const ImageInfo* find_image(long long id) const;
};

/// Parses the COCO-style subset {images:[{id,file_name,height,width}],
/// annotations:[{image_id,bbox:[x,y,w,h],category_id?}]}. Boxes are
/// converted to half-open pixel rectangles by flooring the origin and
/// ceiling the far corner, clipped to the image. Malformed JSON, dangling
/// image references and degenerate boxes raise itemized errors.
AnnotationSet load_annotations(const std::string& path);

/// Serializes the retained field subset back to JSON (round-trip aid).
void save_annotations(const std::string& path, const AnnotationSet& set);

}  // namespace boxls
