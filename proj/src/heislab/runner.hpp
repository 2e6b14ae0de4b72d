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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heislab/config.hpp"

namespace heislab {

/// Raised when an artifact cannot be written; carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

const std::vector<std::string>& subcommands();
std::string usage();

struct RunOptions {
  unsigned workers = 1;
  bool dump_endpoints = false;
};

/// Everything a subcommand produces before it touches the filesystem.
/// `body` and the files are functions of (subcommand, config) alone.
struct Report {
  std::string subcommand;
  nlohmann::ordered_json body;
  std::string summary_csv;
  /// Additional artifacts: (file name, contents).
  std::vector<std::pair<std::string, std::string>> files;
  bool all_pass = true;
};

/// Runs a subcommand in memory. Throws std::invalid_argument for an unknown
/// subcommand or an unusable configuration.
Report build_report(const std::string& subcommand, const ExperimentConfig& cfg,
                    const RunOptions& opt = {});

/// Writes report.json, summary.csv, manifest.json and any extra files to
/// `dir`. Throws IoError.
void write_report(const Report& report, const ExperimentConfig& cfg,
                  const RunOptions& opt, const std::string& dir,
                  double wall_seconds);

/// build_report + write_report into cfg.out, mapped to an exit code.
/// Diagnostics go to `err`.
int run(const std::string& subcommand, const ExperimentConfig& cfg,
        const RunOptions& opt, std::string* err = nullptr);

/// Library version string.
const char* version_string();

}  // namespace heislab
