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

#include "boxls/io/annotations.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace boxls {

using nlohmann::json;

const ImageInfo* AnnotationSet::find_image(long long id) const {
  for (const auto& im : images)
    if (im.id == id) return &im;
  return nullptr;
}

AnnotationSet load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error("malformed annotation JSON in " + path + ": " + e.what());
  }

  AnnotationSet set;
  std::vector<std::string> problems;
  std::unordered_map<long long, const ImageInfo*> by_id;

  if (!doc.contains("images") || !doc["images"].is_array())
    throw Error("annotation JSON missing 'images' array: " + path);
  for (const auto& j : doc["images"]) {
    try {
      ImageInfo im;
      im.id = j.at("id").get<long long>();
      im.file_name = j.at("file_name").get<std::string>();
      im.height = j.at("height").get<int>();
      im.width = j.at("width").get<int>();
      if (im.height < 1 || im.width < 1)
        throw Error("image " + std::to_string(im.id) + " has empty dimensions");
      set.images.push_back(std::move(im));
    } catch (const std::exception& e) {
      problems.push_back(std::string("bad image entry: ") + e.what());
    }
  }
  for (const auto& im : set.images) by_id[im.id] = &im;

  if (!doc.contains("annotations") || !doc["annotations"].is_array())
    throw Error("annotation JSON missing 'annotations' array: " + path);
  int idx = 0;
  for (const auto& j : doc["annotations"]) {
    std::ostringstream where;
    where << "annotation #" << idx++;
    try {
      BoxAnnotation a;
      a.image_id = j.at("image_id").get<long long>();
      const auto it = by_id.find(a.image_id);
      if (it == by_id.end())
        throw Error("references missing image id " + std::to_string(a.image_id));
      const ImageInfo& im = *it->second;

      const auto& bb = j.at("bbox");
      if (!bb.is_array() || bb.size() != 4) throw Error("bbox must be [x,y,w,h]");
      const double x = bb[0].get<double>(), y = bb[1].get<double>();
      const double w = bb[2].get<double>(), h = bb[3].get<double>();
      if (!(w > 0.0) || !(h > 0.0)) throw Error("bbox has non-positive size");

      a.box.x0 = std::max(0, static_cast<int>(std::floor(x)));
      a.box.y0 = std::max(0, static_cast<int>(std::floor(y)));
      a.box.x1 = std::min(im.width, static_cast<int>(std::ceil(x + w)));
      a.box.y1 = std::min(im.height, static_cast<int>(std::ceil(y + h)));
      if (a.box.empty()) throw Error("bbox degenerates after clipping to the image");

      if (j.contains("category_id")) a.category_id = j["category_id"].get<int>();
      set.annotations.push_back(a);
    } catch (const std::exception& e) {
      problems.push_back(where.str() + ": " + e.what());
    }
  }

  if (!problems.empty()) {
    std::ostringstream os;
    os << "annotation file " << path << " has " << problems.size() << " problem(s):";
    for (const auto& p : problems) os << "\n  - " << p;
    throw Error(os.str());
  }
  return set;
}

void save_annotations(const std::string& path, const AnnotationSet& set) {
  json doc;
  doc["images"] = json::array();
  for (const auto& im : set.images)
    doc["images"].push_back({{"id", im.id},
                             {"file_name", im.file_name},
                             {"height", im.height},
                             {"width", im.width}});
  doc["annotations"] = json::array();
  for (const auto& a : set.annotations) {
    json j = {{"image_id", a.image_id},
              {"bbox", {a.box.x0, a.box.y0, a.box.width(), a.box.height()}}};
    if (a.category_id >= 0) j["category_id"] = a.category_id;
    doc["annotations"].push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open annotation file for writing: " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace boxls
