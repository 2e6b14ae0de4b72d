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
#include <map>
#include <string>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/diffusion.hpp"
#include "heislab/registry.hpp"

namespace heislab {

/// Entropy / Dirichlet-energy comparison for one function, one time and one
/// form. `ratio` is meaningful only when `ratio_defined`.
struct LsiReport {
  std::string f_name;
  std::string form_name;
  Space space = Space::G;
  int n = 1;
  double t = 1.0;
  McEstimate entropy;
  McEstimate energy;
  double ratio = 0.0;
  double ratio_error = 0.0;
  bool ratio_defined = false;
  std::size_t m = 0;
  std::uint64_t base_seed = 0;
  double c_ref = 4.0;

  /// c_ref * t.
  double bound() const { return c_ref * t; }
  /// False iff the ratio is defined and exceeds bound() + 3 ratio_error.
  bool pass() const;
  /// Entropy estimate is above -3 standard errors.
  bool entropy_nonnegative() const;
};

/// Per-sample values of a function and its carre du champ at the endpoints.
struct SampleValues {
  std::vector<double> f;
  std::vector<double> grad_sq;
};

SampleValues sample_values(const SymplecticForm& form,
                           const CylinderFunction& f,
                           const EndpointSet& endpoints, Space space,
                           unsigned workers = 1);

/// Entropy of f^2 from per-sample f values with the 0 log 0 = 0 convention;
/// delta-method standard error. Throws std::invalid_argument if f == 0.
McEstimate entropy_from_values(std::span<const double> f);

/// Ratio entropy / energy and its delta-method error, using the sample
/// covariance of the two estimators.
LsiReport lsi_from_values(const SampleValues& values, double c_ref);

McEstimate dirichlet_energy(const SymplecticForm& form, const PathConfig& cfg,
                            const CylinderFunction& f, std::size_t m,
                            Space space, unsigned workers = 1);
McEstimate entropy(const SymplecticForm& form, const PathConfig& cfg,
                   const CylinderFunction& f, std::size_t m, Space space,
                   unsigned workers = 1);
LsiReport lsi_ratio(const SymplecticForm& form, const PathConfig& cfg,
                    const CylinderFunction& f, std::size_t m, Space space,
                    double c_ref = 4.0, unsigned workers = 1);

/// A family of forms indexed by n: isotropic (all weights 1),
/// nonisotropic (weights 2, 3, ..., n + 1), trace_class (q_j = 1 / j^2).
enum class FormFamily { Isotropic, Nonisotropic, TraceClass };

const char* family_name(FormFamily f);
FormFamily parse_family(const std::string& name);
SymplecticForm make_family_form(FormFamily family, int n);

struct ScanSpec {
  std::vector<FormFamily> families{FormFamily::Isotropic,
                                   FormFamily::Nonisotropic};
  std::vector<int> dims{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> times{1.0};
  std::vector<FunctionSpec> functions = default_registry();
  /// One-based projection indices; the leading block by default.
  std::vector<int> projection{1, 2};
  int steps = 1000;
  std::size_t m = 200000;
  std::uint64_t base_seed = 42;
  double c_ref = 4.0;
  /// Also evaluate periodic functions on the reduced group.
  bool include_reduced = true;
};

struct ScanCell {
  FormFamily family;
  int n;
  double t;
  std::string f_name;
  Space space;
  bool ok = false;
  std::string error;
  LsiReport report;
};

struct ScanSummary {
  /// (f, n) -> max ratio over forms, times and spaces, with its error.
  std::map<std::pair<std::string, int>, std::pair<double, double>>
      per_dimension_max;
  /// (form family, f) -> max ratio over n, times and spaces.
  std::map<std::pair<std::string, std::string>, double> per_form_max;
};

struct ScanResult {
  std::vector<ScanCell> cells;
  ScanSummary summary;
};

/// Grid of LSI reports. Endpoints are simulated once per (family, n, t) and
/// shared by all functions. Cell failures are recorded and the scan goes on.
ScanResult lsi_scan(const ScanSpec& spec, unsigned workers = 1);

/// Dimension-independence check on a finished scan: for each function the
/// per-dimension max ratio spreads by at most 10% of its minimum plus three
/// combined standard errors.
struct SpreadCheck {
  std::string f_name;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double allowance = 0.0;
  bool pass = false;
};
std::vector<SpreadCheck> dimension_spread(const ScanSummary& summary,
                                          double relative = 0.10);

}  // namespace heislab
