// Copyright 2026 The heislab Authors
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

// Command-line front end. Talks to the library only through its C API.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "heislab/heislab.h"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-group heat kernel, LSI and distance experiments"};
  app.set_version_flag("--version", std::string(hl_version()));

  std::string subcommand;
  std::string config_path;
  std::vector<std::string> overrides;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir;
  bool dump_endpoints = false;

  app.add_option("subcommand", subcommand,
                 "simulate | heat-check | lsi-scan | quotient-check | "
                 "distance | levy-cf")
      ->required();
  app.add_option("--config", config_path, "key = value experiment file");
  app.add_option("--set", overrides, "override a config key (key=value)")
      ->take_all();
  app.add_option("--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--dump-endpoints", dump_endpoints, "write endpoints.csv");
  app.footer(hl_usage());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  std::string text;
  if (!config_path.empty() && !read_file(config_path, text)) {
    std::cerr << "io error: cannot read config '" << config_path << "'\n";
    return kExitIoError;
  }
  text += "\n";
  for (const auto& kv : overrides) text += kv + "\n";
  if (!out_dir.empty()) text += "out = " + out_dir + "\n";

  hl_config* config = nullptr;
  if (hl_config_parse(text.c_str(), &config) != HL_OK) {
    std::cerr << "configuration errors:\n" << hl_last_error();
    return kExitConfigError;
  }
  const int code = hl_run(subcommand.c_str(), config, workers,
                          dump_endpoints ? 1 : 0);
  if (code != 0) std::cerr << hl_last_error() << "\n";
  hl_config_free(config);
  return code;
}
