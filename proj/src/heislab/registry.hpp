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

#include <string>
#include <string_view>
#include <vector>

#include "heislab/calculus.hpp"

namespace heislab {

/// A registry entry as written in a config file, e.g. `exp_linear(0.5)`.
struct FunctionSpec {
  std::string name;
  std::vector<double> params;

  /// Canonical text form; round-trips through parse_function_spec.
  std::string to_string() const;
  /// True when the function does not depend on the vertical coordinate
  /// or is 2pi-periodic in it, so that it also lives on the reduced group.
  bool periodic() const;
};

/// Parses `name` or `name(p1, p2, ...)`; throws std::invalid_argument on an
/// unknown name or wrong parameter count.
FunctionSpec parse_function_spec(std::string_view text);

/// Names accepted by parse_function_spec.
const std::vector<std::string>& registry_names();

/// The whole registry with default parameters.
std::vector<FunctionSpec> default_registry();

/// Builds the analytic cylinder function. Horizontal families read the
/// projected coordinates Pw:
///   poly_radial        |Pw|^2
///   vertical_sq        c^2                   (G only)
///   exp_linear(l)      exp(l (Pw)_1)         (l defaults to 0.5)
///   cos_theta          cos(c)
///   gauss_bump(s)      exp(-|Pw|^2 / (2 s^2)) (s defaults to 1)
CylinderFunction make_registry_function(const FunctionSpec& spec,
                                        const Projection& projection,
                                        Vertical vertical);

}  // namespace heislab
