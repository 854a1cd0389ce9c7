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

#include "boxls/io/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "boxls/io/config_file.hpp"
#include "boxls/io/features_file.hpp"
#include "boxls/io/image_file.hpp"
#include "boxls/io/rle.hpp"

namespace boxls {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string stem_of(const std::string& file_name) { return fs::path(file_name).stem().string(); }

std::string instance_tag(const std::string& stem, int ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%03d", ordinal);
  return stem + buf;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const EvolutionTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open trace file for writing: " + path);
  out << "step,total,data_in,data_out,length,box,lcm,dt\n";
  for (const auto& s : trace.steps) {
    out << s.step << "," << format_g17(s.energy.total) << "," << format_g17(s.energy.data_inside)
        << "," << format_g17(s.energy.data_outside) << "," << format_g17(s.energy.length) << ","
        << format_g17(s.energy.box_projection) << "," << format_g17(s.energy.lcm_consistency)
        << "," << format_g17(s.dt_used) << "\n";
  }
}

struct ImageWork {
  const ImageInfo* info = nullptr;
  std::optional<Grid> image;
  std::optional<Grid> features;
  std::string load_error;
  std::vector<int> annotation_indices;  // into the annotation array, in order
};

json metrics_to_json(const Metrics& m) {
  json ap = json::object();
  for (const auto& [t, v] : m.ap) {
    char key[8];
    std::snprintf(key, sizeof(key), "%.2f", t);
    ap[key] = v;
  }
  return json{{"mean_iou", m.mean_iou}, {"abo", m.abo}, {"ap", ap}};
}

}  // namespace

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for hashing: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

RunManifest run_batch(const BatchOptions& options) {
  options.config.validate();
  if (options.jobs < 1) throw Error("run_batch: jobs must be >= 1");
  if (options.out_dir.empty()) throw Error("run_batch: output directory required");

  const AnnotationSet set = load_annotations(options.annotations_path);

  fs::create_directories(options.out_dir);
  fs::create_directories(fs::path(options.out_dir) / "masks");
  if (options.write_traces) fs::create_directories(fs::path(options.out_dir) / "traces");

  RunManifest manifest;
  manifest.config = config_entries(options.config);
  manifest.input_hashes[options.annotations_path] = fnv1a64_file(options.annotations_path);

  // load inputs once per image; an image that fails to load marks all of
  // its instances as failed without touching the rest of the batch
  std::vector<ImageWork> work(set.images.size());
  for (size_t i = 0; i < set.images.size(); ++i) {
    work[i].info = &set.images[i];
    const fs::path img_path = fs::path(options.images_dir) / set.images[i].file_name;
    try {
      Grid img = read_image_png(img_path.string());
      if (img.height() != set.images[i].height || img.width() != set.images[i].width)
        throw Error("image size on disk disagrees with the annotation entry");
      manifest.input_hashes[img_path.string()] = fnv1a64_file(img_path.string());
      if (!options.features_dir.empty()) {
        const fs::path feat_path =
            fs::path(options.features_dir) / (stem_of(set.images[i].file_name) + ".feat");
        Grid feat = read_features(feat_path.string());
        if (feat.height() != img.height() || feat.width() != img.width())
          throw Error("feature map shape disagrees with the image");
        manifest.input_hashes[feat_path.string()] = fnv1a64_file(feat_path.string());
        work[i].features = std::move(feat);
      }
      work[i].image = std::move(img);
    } catch (const std::exception& e) {
      work[i].load_error = e.what();
    }
  }

  std::vector<int> image_of_annotation(set.annotations.size(), -1);
  for (size_t a = 0; a < set.annotations.size(); ++a) {
    for (size_t i = 0; i < set.images.size(); ++i)
      if (set.images[i].id == set.annotations[a].image_id) {
        image_of_annotation[a] = static_cast<int>(i);
        work[i].annotation_indices.push_back(static_cast<int>(a));
        break;
      }
  }

  // flatten instances and evolve them, possibly on several threads
  struct Item {
    int image = 0;
    int annotation = 0;
    int ordinal = 0;
  };
  std::vector<Item> items;
  for (size_t i = 0; i < work.size(); ++i)
    for (size_t o = 0; o < work[i].annotation_indices.size(); ++o)
      items.push_back({static_cast<int>(i), work[i].annotation_indices[o], static_cast<int>(o)});

  std::vector<SegmentOutcome> outcomes(items.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      const Item& it = items[idx];
      const ImageWork& iw = work[it.image];
      if (!iw.load_error.empty()) {
        outcomes[idx].error = iw.load_error;
        continue;
      }
      try {
        outcomes[idx].result =
            evolve_instance(*iw.image, iw.features ? &*iw.features : nullptr,
                            set.annotations[it.annotation].box, options.config);
      } catch (const std::exception& e) {
        outcomes[idx].error = e.what();
      }
    }
  };
  {
    std::vector<std::thread> pool;
    const int n_threads = std::max(1, std::min<int>(options.jobs, static_cast<int>(items.size())));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // serialize outputs in deterministic order
  json results;
  results["images"] = json::array();
  for (const auto& im : set.images)
    results["images"].push_back({{"id", im.id},
                                 {"file_name", im.file_name},
                                 {"height", im.height},
                                 {"width", im.width}});
  results["results"] = json::array();

  for (size_t idx = 0; idx < items.size(); ++idx) {
    const Item& it = items[idx];
    const ImageInfo& info = *work[it.image].info;
    const BoxAnnotation& ann = set.annotations[it.annotation];
    const std::string tag = instance_tag(stem_of(info.file_name), it.ordinal);

    InstanceRecord rec;
    rec.image_id = info.id;
    rec.annotation_index = it.annotation;
    rec.ordinal = it.ordinal;

    if (outcomes[idx].result) {
      const InstanceResult& r = *outcomes[idx].result;
      rec.ok = true;
      rec.converged = r.trace.converged;
      rec.steps = static_cast<int>(r.trace.steps.size());
      rec.mask_png = (fs::path("masks") / (tag + ".png")).string();
      write_mask_png((fs::path(options.out_dir) / rec.mask_png).string(), r.mask);
      if (options.write_traces) {
        rec.trace_csv = (fs::path("traces") / (tag + ".csv")).string();
        write_trace_csv((fs::path(options.out_dir) / rec.trace_csv).string(), r.trace);
      }

      const Rle rle = rle_encode(r.mask);
      json entry = {{"image_id", info.id},
                    {"annotation_index", it.annotation},
                    {"ordinal", it.ordinal},
                    {"bbox", {ann.box.x0, ann.box.y0, ann.box.width(), ann.box.height()}},
                    {"segmentation", {{"size", {rle.height, rle.width}}, {"counts", rle.counts}}},
                    {"area", r.mask.count()},
                    {"converged", rec.converged},
                    {"steps", rec.steps},
                    {"mask_png", rec.mask_png}};
      if (ann.category_id >= 0) entry["category_id"] = ann.category_id;
      if (!rec.trace_csv.empty()) entry["trace_csv"] = rec.trace_csv;
      results["results"].push_back(std::move(entry));
    } else {
      rec.ok = false;
      rec.error = outcomes[idx].error;
      ++manifest.failures;
      results["results"].push_back({{"image_id", info.id},
                                    {"annotation_index", it.annotation},
                                    {"ordinal", it.ordinal},
                                    {"error", rec.error}});
    }
    manifest.instances.push_back(std::move(rec));
  }

  {
    std::ofstream out(fs::path(options.out_dir) / "results.json");
    if (!out) throw Error("cannot write results.json");
    out << results.dump(2) << "\n";
  }

  // pooled metrics against ground-truth masks named <stem>_<k>.png
  if (!options.gt_dir.empty()) {
    std::vector<double> best_per_gt;
    double pair_sum = 0.0;
    for (size_t i = 0; i < work.size(); ++i) {
      const std::string stem = stem_of(work[i].info->file_name);
      std::vector<std::string> gt_files;
      if (fs::exists(options.gt_dir)) {
        for (const auto& e : fs::directory_iterator(options.gt_dir)) {
          const std::string name = e.path().filename().string();
          if (name.rfind(stem + "_", 0) == 0 && e.path().extension() == ".png")
            gt_files.push_back(e.path().string());
        }
      }
      std::sort(gt_files.begin(), gt_files.end());
      if (gt_files.empty()) continue;

      std::vector<BinaryMask> preds;
      for (size_t idx = 0; idx < items.size(); ++idx)
        if (items[idx].image == static_cast<int>(i) && outcomes[idx].result)
          preds.push_back(outcomes[idx].result->mask);

      for (const auto& gt_path : gt_files) {
        const BinaryMask gt = read_mask_png(gt_path);
        double best = 0.0;
        for (const auto& p : preds) best = std::max(best, mask_iou(p, gt));
        best_per_gt.push_back(best);
        pair_sum += best;
      }
    }
    if (!best_per_gt.empty()) {
      Metrics m;
      m.mean_iou = pair_sum / static_cast<double>(best_per_gt.size());
      for (double b : best_per_gt) m.abo += b;
      m.abo /= static_cast<double>(best_per_gt.size());
      for (double t : kApThresholds) {
        int hit = 0;
        for (double b : best_per_gt)
          if (b >= t) ++hit;
        m.ap.emplace_back(t, static_cast<double>(hit) / static_cast<double>(best_per_gt.size()));
      }
      manifest.metrics = m;
      std::ofstream out(fs::path(options.out_dir) / "metrics.json");
      if (!out) throw Error("cannot write metrics.json");
      out << metrics_to_json(m).dump(2) << "\n";
    }
  }

  // manifest last so it can reference every artifact
  {
    json j;
    j["config"] = manifest.config;
    j["input_hashes"] = manifest.input_hashes;
    j["failures"] = manifest.failures;
    j["instances"] = json::array();
    for (const auto& r : manifest.instances) {
      json e = {{"image_id", r.image_id}, {"annotation_index", r.annotation_index},
                {"ordinal", r.ordinal},   {"ok", r.ok},
                {"converged", r.converged}, {"steps", r.steps}};
      if (!r.mask_png.empty()) e["mask_png"] = r.mask_png;
      if (!r.trace_csv.empty()) e["trace_csv"] = r.trace_csv;
      if (!r.error.empty()) e["error"] = r.error;
      j["instances"].push_back(std::move(e));
    }
    if (manifest.metrics) j["metrics"] = metrics_to_json(*manifest.metrics);
    std::ofstream out(fs::path(options.out_dir) / "manifest.json");
    if (!out) throw Error("cannot write manifest.json");
    out << j.dump(2) << "\n";
  }

  return manifest;
}

}  // namespace boxls
