// Acceptance harness: runs every selftest criterion, prints one
// pass/fail line each and exits nonzero if any failed.

#include <unistd.h>

#include <filesystem>
#include <iostream>

#include "boxls/selftest.hpp"

int main() {
  namespace fs = std::filesystem;
  const fs::path scratch =
      fs::temp_directory_path() / ("boxls-acceptance-" + std::to_string(::getpid()));
  const auto results = boxls::run_selftest(scratch.string());
  boxls::print_results(std::cout, results);
  std::error_code ec;
  fs::remove_all(scratch, ec);
  if (!boxls::all_passed(results)) {
    std::cout << "acceptance: FAILED\n";
    return 1;
  }
  std::cout << "acceptance: all criteria passed\n";
  return 0;
}
