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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "heislab/model.hpp"
#include "heislab/registry.hpp"

namespace heislab {

/// Resolved experiment configuration. Every field has a default; the
/// `key = value` spelling of each field is given in the trailing comment.
struct ExperimentConfig {
  std::string form = "isotropic";          // form
  std::vector<double> weights;             // weights
  int n = 1;                               // n
  std::vector<int> projection{1, 2};       // projection (one-based)
  std::vector<double> t{1.0};              // t
  int steps = 1000;                        // N
  std::size_t m = 200000;                  // m
  std::uint64_t seed = 42;                 // seed
  std::vector<FunctionSpec> functions = default_registry();  // f
  double c_ref = 4.0;                      // c_ref
  std::string out = "out";                 // out
  double delta_t = 0.05;                   // delta_t
  double t_small = 1e-4;                   // t_small
  int K = 64;                              // K
  int k_window = 3;                        // k_window
  std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 4.0};  // lambdas
  std::vector<int> dims{1, 2, 3, 4, 5, 6, 7, 8};         // dims
  std::vector<std::string> scan_forms{"isotropic", "nonisotropic"};  // scan_forms
  std::vector<double> target;              // target (w_1..w_2n, c)
  std::vector<double> source;              // source (w_1..w_2n, c)

  SymplecticForm build_form() const;
  WienerModel build_model() const;
  Projection build_projection() const;
  /// `target` when set, otherwise (3, 4, 0, ..., 0; 0).
  std::vector<double> resolved_target() const;

  /// Canonical `key = value` document; parse_config(to_text()) reproduces
  /// the configuration.
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
};

struct ConfigResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;

  bool ok() const { return config.has_value(); }
};

/// Parses a line-oriented `key = value` document. `#` starts a comment,
/// lists are comma-separated, later assignments override earlier ones.
/// All problems are reported, not only the first.
ConfigResult parse_config(std::string_view text);

const std::vector<std::string>& config_keys();

}  // namespace heislab
