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

#include <iosfwd>
#include <string>
#include <vector>

namespace boxls {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the full synthetic verification suite (gradient oracles, descent
/// monotonicity, segmentation fidelity, feature-term efficacy, solver
/// oracles, affinity contracts, matching invariances, IO round-trips and
/// shipped defaults). `scratch_dir` hosts the temporary batch outputs;
/// it is created and reused if present.
std::vector<CheckResult> run_selftest(const std::string& scratch_dir);

/// One "[PASS]/[FAIL] name: detail" line per check.
void print_results(std::ostream& os, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace boxls
