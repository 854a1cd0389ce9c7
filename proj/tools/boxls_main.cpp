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

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boxls/evolve.hpp"
#include "boxls/io/batch.hpp"
#include "boxls/io/config_file.hpp"
#include "boxls/io/image_file.hpp"
#include "boxls/selftest.hpp"
#include "boxls/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

boxls::EvolutionConfig make_config(const std::string& config_path,
                                   const std::vector<std::string>& overrides) {
  boxls::EvolutionConfig cfg;
  if (!config_path.empty()) cfg = boxls::load_config(config_path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw boxls::Error("--set expects key=value, got '" + kv + "'");
    boxls::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

int cmd_segment(const std::string& images, const std::string& annotations,
                const std::string& features, const std::string& config_path,
                const std::string& out, const std::string& gt, int jobs, bool trace,
                const std::vector<std::string>& overrides) {
  boxls::BatchOptions opt;
  opt.images_dir = images;
  opt.annotations_path = annotations;
  opt.features_dir = features;
  opt.gt_dir = gt;
  opt.out_dir = out;
  opt.jobs = jobs;
  opt.write_traces = trace;
  opt.config = make_config(config_path, overrides);

  const boxls::RunManifest manifest = boxls::run_batch(opt);
  int ok = 0;
  for (const auto& r : manifest.instances)
    if (r.ok) ++ok;
  std::cout << "segmented " << ok << "/" << manifest.instances.size() << " instances into "
            << out << "\n";
  for (const auto& r : manifest.instances)
    if (!r.ok)
      std::cerr << "instance " << r.annotation_index << " (image " << r.image_id
                << ") failed: " << r.error << "\n";
  if (manifest.metrics) {
    std::cout << "mean IoU " << manifest.metrics->mean_iou << ", ABO " << manifest.metrics->abo;
    for (const auto& [t, v] : manifest.metrics->ap) std::cout << ", AP@" << t << " " << v;
    std::cout << "\n";
  }
  return manifest.failures > 0 ? 1 : 0;
}

int cmd_eval(const std::string& pred_dir, const std::string& gt_dir) {
  std::vector<fs::path> gt_files;
  for (const auto& e : fs::directory_iterator(gt_dir))
    if (e.is_regular_file() && e.path().extension() == ".png") gt_files.push_back(e.path());
  std::sort(gt_files.begin(), gt_files.end());
  if (gt_files.empty()) throw boxls::Error("no ground-truth PNG masks in " + gt_dir);

  std::vector<boxls::BinaryMask> pred, gt;
  for (const auto& g : gt_files) {
    const fs::path p = fs::path(pred_dir) / g.filename();
    if (!fs::exists(p)) throw boxls::Error("missing prediction mask " + p.string());
    gt.push_back(boxls::read_mask_png(g.string()));
    pred.push_back(boxls::read_mask_png(p.string()));
  }

  const boxls::Metrics m = boxls::evaluate(pred, gt, /*aligned=*/true);
  std::cout << "instances " << gt.size() << "\n";
  std::cout << "mean IoU " << m.mean_iou << "\n";
  std::cout << "ABO      " << m.abo << "\n";
  for (const auto& [t, v] : m.ap) std::printf("AP@%.2f   %g\n", t, v);
  return 0;
}

int cmd_selftest() {
  const fs::path scratch =
      fs::temp_directory_path() / ("boxls-selftest-" + std::to_string(::getpid()));
  const auto results = boxls::run_selftest(scratch.string());
  boxls::print_results(std::cout, results);
  std::error_code ec;
  fs::remove_all(scratch, ec);
  return boxls::all_passed(results) ? 0 : 1;
}

int cmd_bench(const std::vector<int>& sizes) {
  using Clock = std::chrono::steady_clock;
  const boxls::EvolutionConfig cfg;
  for (int size : sizes) {
    const boxls::SyntheticScene scene =
        boxls::make_square_scene(size, size * 3 / 8, std::max(2, size / 16));
    const auto t0 = Clock::now();
    const boxls::InstanceResult r =
        boxls::evolve_instance(scene.image, nullptr, scene.boxes[0], cfg);
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%4dx%-4d  %7.1f ms/instance  %3zu steps  IoU %.4f\n", size, size, dt * 1e3,
                r.trace.steps.size(), boxls::mask_iou(r.mask, scene.truth[0]));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boxls: box-supervised level-set segmentation engine"};
  app.require_subcommand(1);

  std::string images, annotations, features, config_path, out, gt, pred_dir, gt_dir;
  int jobs = 1;
  bool trace = true;
  std::vector<std::string> overrides;
  std::vector<int> sizes{64, 128, 256};

  auto* segment = app.add_subcommand("segment", "evolve a mask for every annotated box");
  segment->add_option("--images", images, "directory with the input images")->required();
  segment->add_option("--annotations", annotations, "annotation JSON file")->required();
  segment->add_option("--features", features, "directory with per-image .feat files");
  segment->add_option("--config", config_path, "key=value config file");
  segment->add_option("--out", out, "output directory")->required();
  segment->add_option("--gt", gt, "directory with ground truth masks (enables metrics)");
  segment->add_option("--jobs", jobs, "instance-level worker threads")->check(CLI::Range(1, 256));
  segment->add_option("--trace", trace, "write per-instance energy trace CSVs (default 1)");
  segment->add_option("--set", overrides, "config override key=value (repeatable)");

  auto* eval = app.add_subcommand("eval", "compare prediction masks against ground truth");
  eval->add_option("--pred", pred_dir, "directory with predicted masks")->required();
  eval->add_option("--gt", gt_dir, "directory with ground-truth masks")->required();

  app.add_subcommand("selftest", "run the synthetic acceptance suite");

  auto* bench = app.add_subcommand("bench", "time the evolution on synthetic scenes");
  bench->add_option("--sizes", sizes, "scene sizes to benchmark");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2, --help exits 0
  }

  try {
    if (app.got_subcommand("segment"))
      return cmd_segment(images, annotations, features, config_path, out, gt, jobs, trace,
                         overrides);
    if (app.got_subcommand("eval")) return cmd_eval(pred_dir, gt_dir);
    if (app.got_subcommand("selftest")) return cmd_selftest();
    if (app.got_subcommand("bench")) return cmd_bench(sizes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
