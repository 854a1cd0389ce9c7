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

#include "boxls/io/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "boxls/grid.hpp"

namespace boxls {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error("config: cannot parse '" + value + "' as a number for key '" + key + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error("config: cannot parse '" + value + "' as an integer for key '" + key + "'");
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void apply_config_entry(EvolutionConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "gamma")
    cfg.gamma = parse_double(key, value);
  else if (key == "lambda1")
    cfg.lambda1 = parse_double(key, value);
  else if (key == "lambda2")
    cfg.lambda2 = parse_double(key, value);
  else if (key == "alpha")
    cfg.alpha = parse_double(key, value);
  else if (key == "mu_lcm")
    cfg.mu_lcm = parse_double(key, value);
  else if (key == "dt")
    cfg.dt = parse_double(key, value);
  else if (key == "max_steps")
    cfg.max_steps = parse_int(key, value);
  else if (key == "k")
    cfg.k = parse_int(key, value);
  else if (key == "dilation")
    cfg.dilation = parse_int(key, value);
  else if (key == "eta")
    cfg.eta = parse_double(key, value);
  else if (key == "sigma_tf")
    cfg.sigma_tf = parse_double(key, value);
  else if (key == "tol")
    cfg.tol = parse_double(key, value);
  else if (key == "threshold")
    cfg.threshold = parse_double(key, value);
  else if (key == "window_margin")
    cfg.window_margin = parse_double(key, value);
  else if (key == "cv_domain")
    cfg.cv_domain = cv_domain_from_string(value);
  else
    throw Error("config: unknown key '" + key + "'");
}

EvolutionConfig load_config(const std::string& path, const EvolutionConfig& base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  EvolutionConfig cfg = base;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config: line " + std::to_string(lineno) + " in " + path +
                  " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_config_entry(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> config_entries(const EvolutionConfig& cfg) {
  return {
      {"gamma", format_double(cfg.gamma)},
      {"lambda1", format_double(cfg.lambda1)},
      {"lambda2", format_double(cfg.lambda2)},
      {"alpha", format_double(cfg.alpha)},
      {"mu_lcm", format_double(cfg.mu_lcm)},
      {"dt", format_double(cfg.dt)},
      {"max_steps", std::to_string(cfg.max_steps)},
      {"k", std::to_string(cfg.k)},
      {"dilation", std::to_string(cfg.dilation)},
      {"eta", format_double(cfg.eta)},
      {"sigma_tf", format_double(cfg.sigma_tf)},
      {"tol", format_double(cfg.tol)},
      {"threshold", format_double(cfg.threshold)},
      {"window_margin", format_double(cfg.window_margin)},
      {"cv_domain", to_string(cfg.cv_domain)},
  };
}

void save_config(const std::string& path, const EvolutionConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open config file for writing: " + path);
  for (const auto& [k, v] : config_entries(cfg)) out << k << "=" << v << "\n";
}

}  // namespace boxls
