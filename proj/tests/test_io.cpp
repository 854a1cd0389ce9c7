#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "boxls/io/annotations.hpp"
#include "boxls/io/batch.hpp"
#include "boxls/io/config_file.hpp"
#include "boxls/io/features_file.hpp"
#include "boxls/io/image_file.hpp"
#include "boxls/io/rle.hpp"
#include "boxls/synthetic.hpp"

using namespace boxls;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("boxls-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("rle encoding follows the column-major zero-first convention") {
  // rows top-down: the upper row is foreground
  BinaryMask top(2, 2, 0);
  top.at(0, 0) = top.at(0, 1) = 1;
  CHECK(rle_encode(top).counts == std::vector<std::uint32_t>{0, 1, 1, 1, 1});

  BinaryMask bottom(2, 2, 0);
  bottom.at(1, 0) = bottom.at(1, 1) = 1;
  CHECK(rle_encode(bottom).counts == std::vector<std::uint32_t>{1, 1, 1, 1});

  BinaryMask empty(3, 2, 0);
  CHECK(rle_encode(empty).counts == std::vector<std::uint32_t>{6});

  BinaryMask full(3, 2, 1);
  CHECK(rle_encode(full).counts == std::vector<std::uint32_t>{0, 6});
}

TEST_CASE("rle round-trip on random masks") {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 32), w = 1 + static_cast<int>(rng() % 32);
    BinaryMask m(h, w, 0);
    for (auto& b : m.bits) b = static_cast<std::uint8_t>(rng() % 2);
    const BinaryMask back = rle_decode(rle_encode(m));
    CHECK(back.bits == m.bits);
  }

  Rle bad;
  bad.height = 2;
  bad.width = 2;
  bad.counts = {1, 1};
  CHECK_THROWS_AS(rle_decode(bad), Error);
}

TEST_CASE("png mask and image round-trips") {
  Scratch tmp;
  std::mt19937 rng(52);

  BinaryMask m(13, 9, 0);
  for (auto& b : m.bits) b = static_cast<std::uint8_t>(rng() % 2);
  write_mask_png(tmp / "m.png", m);
  const BinaryMask back = read_mask_png(tmp / "m.png");
  CHECK(back.height == 13);
  CHECK(back.width == 9);
  CHECK(back.bits == m.bits);

  // color image with 8-bit-exact values survives the trip
  Grid img(5, 7, 3);
  for (double& v : img.values()) v = static_cast<double>(rng() % 256) / 255.0;
  write_image_png(tmp / "img.png", img);
  const Grid gi = read_image_png(tmp / "img.png");
  REQUIRE(gi.channels() == 3);
  for (size_t i = 0; i < gi.values().size(); ++i)
    CHECK(gi.values()[i] == doctest::Approx(img.values()[i]).epsilon(1e-12));

  CHECK_THROWS_AS(read_image_png(tmp / "missing.png"), Error);
}

TEST_CASE("feature file round-trip and validation") {
  Scratch tmp;
  std::mt19937 rng(53);
  Grid f(6, 4, 5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double& v : f.values()) v = u(rng);
  write_features(tmp / "a.feat", f);
  const Grid back = read_features(tmp / "a.feat");
  CHECK(back.height() == 6);
  CHECK(back.width() == 4);
  CHECK(back.channels() == 5);
  for (size_t i = 0; i < back.values().size(); ++i)
    CHECK(back.values()[i] == doctest::Approx(f.values()[i]).epsilon(1e-6));

  {
    std::ofstream bad(tmp / "bad.feat", std::ios::binary);
    bad << "NOPE";
  }
  CHECK_THROWS_AS(read_features(tmp / "bad.feat"), Error);
}

TEST_CASE("annotation loading converts and validates boxes") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "ann.json");
    out << R"({
      "images": [{"id": 1, "file_name": "a.png", "height": 20, "width": 20}],
      "annotations": [
        {"image_id": 1, "bbox": [0, 0, 10, 10]},
        {"image_id": 1, "bbox": [5.4, 5.6, 3.2, 2.0], "category_id": 3}
      ]
    })";
  }
  const AnnotationSet set = load_annotations(tmp / "ann.json");
  REQUIRE(set.annotations.size() == 2);
  CHECK(set.annotations[0].box == BBox{0, 0, 10, 10});
  CHECK(set.annotations[0].category_id == -1);
  CHECK(set.annotations[1].box == BBox{5, 5, 9, 8});
  CHECK(set.annotations[1].category_id == 3);

  {
    std::ofstream out(tmp / "zero.json");
    out << R"({"images": [{"id": 1, "file_name": "a.png", "height": 20, "width": 20}],
               "annotations": [{"image_id": 1, "bbox": [0, 0, 0, 10]}]})";
  }
  CHECK_THROWS_AS(load_annotations(tmp / "zero.json"), Error);

  {
    std::ofstream out(tmp / "dangling.json");
    out << R"({"images": [{"id": 1, "file_name": "a.png", "height": 20, "width": 20}],
               "annotations": [{"image_id": 9, "bbox": [0, 0, 5, 5]}]})";
  }
  CHECK_THROWS_AS(load_annotations(tmp / "dangling.json"), Error);

  {
    std::ofstream out(tmp / "broken.json");
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_annotations(tmp / "broken.json"), Error);
}

TEST_CASE("annotation save/load keeps the retained fields") {
  Scratch tmp;
  AnnotationSet set;
  set.images.push_back({7, "x.png", 33, 44});
  BoxAnnotation a;
  a.image_id = 7;
  a.box = BBox{1, 2, 11, 22};
  a.category_id = 5;
  set.annotations.push_back(a);
  save_annotations(tmp / "round.json", set);
  const AnnotationSet back = load_annotations(tmp / "round.json");
  REQUIRE(back.images.size() == 1);
  CHECK(back.images[0].file_name == "x.png");
  CHECK(back.images[0].height == 33);
  REQUIRE(back.annotations.size() == 1);
  CHECK(back.annotations[0].box == a.box);
  CHECK(back.annotations[0].category_id == 5);
}

TEST_CASE("config file parsing") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "cfg.txt");
    out << "# comment line\n"
        << "gamma = 0.5\n"
        << "max_steps=120\n"
        << "cv_domain=window\n"
        << "\n";
  }
  const EvolutionConfig cfg = load_config(tmp / "cfg.txt");
  CHECK(cfg.gamma == 0.5);
  CHECK(cfg.max_steps == 120);
  CHECK(cfg.cv_domain == CvDomain::Window);
  CHECK(cfg.lambda1 == 0.05);  // untouched default

  {
    std::ofstream out(tmp / "unknown.txt");
    out << "gammma=1\n";
  }
  CHECK_THROWS_AS(load_config(tmp / "unknown.txt"), Error);

  {
    std::ofstream out(tmp / "badnum.txt");
    out << "gamma=fast\n";
  }
  CHECK_THROWS_AS(load_config(tmp / "badnum.txt"), Error);

  save_config(tmp / "out.txt", cfg);
  const EvolutionConfig back = load_config(tmp / "out.txt");
  CHECK(back.gamma == cfg.gamma);
  CHECK(back.max_steps == cfg.max_steps);
  CHECK(back.cv_domain == cfg.cv_domain);
}

TEST_CASE("run_batch on an empty annotation set") {
  Scratch tmp;
  fs::create_directories(fs::path(tmp / "images"));
  {
    std::ofstream out(tmp / "ann.json");
    out << R"({"images": [], "annotations": []})";
  }
  BatchOptions opt;
  opt.images_dir = tmp / "images";
  opt.annotations_path = tmp / "ann.json";
  opt.out_dir = tmp / "out";
  const RunManifest m = run_batch(opt);
  CHECK(m.instances.empty());
  CHECK(m.failures == 0);
  CHECK(fs::exists(fs::path(opt.out_dir) / "results.json"));
  CHECK(fs::exists(fs::path(opt.out_dir) / "manifest.json"));
}

TEST_CASE("run_batch isolates a missing image") {
  Scratch tmp;
  fs::create_directories(fs::path(tmp / "images"));
  const SyntheticScene scene = make_square_scene(24, 10, 2);
  write_image_png(tmp / "images/good.png", scene.image);

  AnnotationSet set;
  set.images.push_back({1, "good.png", 24, 24});
  set.images.push_back({2, "missing.png", 24, 24});
  BoxAnnotation a;
  a.image_id = 1;
  a.box = scene.boxes[0];
  set.annotations.push_back(a);
  a.image_id = 2;
  set.annotations.push_back(a);
  save_annotations(tmp / "ann.json", set);

  BatchOptions opt;
  opt.images_dir = tmp / "images";
  opt.annotations_path = tmp / "ann.json";
  opt.out_dir = tmp / "out";
  opt.config.max_steps = 30;
  const RunManifest m = run_batch(opt);
  REQUIRE(m.instances.size() == 2);
  CHECK(m.instances[0].ok);
  CHECK(!m.instances[1].ok);
  CHECK(m.failures == 1);
  CHECK(fs::exists(fs::path(opt.out_dir) / m.instances[0].mask_png));
  CHECK(fs::exists(fs::path(opt.out_dir) / m.instances[0].trace_csv));
}

TEST_CASE("run_batch consumes feature files and reports metrics") {
  Scratch tmp;
  fs::create_directories(fs::path(tmp / "images"));
  fs::create_directories(fs::path(tmp / "features"));
  fs::create_directories(fs::path(tmp / "gt"));

  const CamouflageScene cam = make_camouflage_scene(48, 9.0);
  write_image_png(tmp / "images/cam.png", cam.image);
  write_features(tmp / "features/cam.feat", cam.features);
  write_mask_png(tmp / "gt/cam_000.png", cam.truth);

  AnnotationSet set;
  set.images.push_back({1, "cam.png", 48, 48});
  BoxAnnotation a;
  a.image_id = 1;
  a.box = cam.box;
  set.annotations.push_back(a);
  save_annotations(tmp / "ann.json", set);

  BatchOptions opt;
  opt.images_dir = tmp / "images";
  opt.annotations_path = tmp / "ann.json";
  opt.features_dir = tmp / "features";
  opt.gt_dir = tmp / "gt";
  opt.out_dir = tmp / "out";
  const RunManifest m = run_batch(opt);
  REQUIRE(m.instances.size() == 1);
  CHECK(m.instances[0].ok);
  REQUIRE(m.metrics.has_value());
  CHECK(m.metrics->mean_iou >= 0.9);  // the object is only visible in the features
  CHECK(fs::exists(fs::path(opt.out_dir) / "metrics.json"));

  // a missing feature file fails the image when a feature dir was given
  fs::remove(fs::path(tmp / "features/cam.feat"));
  opt.out_dir = tmp / "out2";
  const RunManifest bad = run_batch(opt);
  CHECK(bad.failures == 1);
}

TEST_CASE("fnv1a64 fingerprint is stable") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "abc.txt", std::ios::binary);
    out << "abc";
  }
  CHECK(fnv1a64_file(tmp / "abc.txt") == "e71fa2190541574b");
}
