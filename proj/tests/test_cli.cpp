#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "boxls/io/annotations.hpp"
#include "boxls/io/image_file.hpp"
#include "boxls/synthetic.hpp"

using namespace boxls;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BOXLS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("boxls-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("segment") == 2);                      // missing required flags
  CHECK(run_cli("segment --images /tmp --out /tmp") == 2);  // still missing --annotations
  CHECK(run_cli("definitely-not-a-subcommand") == 2);
  CHECK(run_cli("") == 2);  // a subcommand is required
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("segment and eval round trip through the CLI") {
  Scratch tmp;
  fs::create_directories(tmp.dir / "images");

  const SyntheticScene scene = make_square_scene(32, 12, 3);
  write_image_png((tmp.dir / "images" / "sq.png").string(), scene.image);
  AnnotationSet set;
  set.images.push_back({1, "sq.png", 32, 32});
  BoxAnnotation a;
  a.image_id = 1;
  a.box = scene.boxes[0];
  set.annotations.push_back(a);
  save_annotations((tmp.dir / "ann.json").string(), set);

  const std::string out = (tmp.dir / "out").string();
  CHECK(run_cli("segment --images " + (tmp.dir / "images").string() + " --annotations " +
                (tmp.dir / "ann.json").string() + " --out " + out +
                " --set max_steps=40") == 0);
  CHECK(fs::exists(fs::path(out) / "results.json"));
  CHECK(fs::exists(fs::path(out) / "masks" / "sq_000.png"));

  // a prediction evaluated against itself scores a perfect overlap
  CHECK(run_cli("eval --pred " + out + "/masks --gt " + out + "/masks") == 0);

  // runtime failures exit 1
  CHECK(run_cli("eval --pred " + out + "/masks --gt " + (tmp.dir / "images").string()) == 1);
  CHECK(run_cli("segment --images " + (tmp.dir / "images").string() +
                " --annotations /nonexistent.json --out " + out) == 1);
}
