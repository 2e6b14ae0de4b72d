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
#include <functional>
#include <span>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/group.hpp"

namespace heislab {

/// Which group an expectation is taken on: G, or the reduced group with the
/// pushforward heat kernel measure.
enum class Space { G, Reduced };

const char* space_name(Space s);

struct PathConfig {
  double t = 1.0;
  int steps = 1000;
  std::uint64_t base_seed = 42;

  /// Throws std::invalid_argument unless t > 0 and steps >= 1.
  void validate() const;
};

struct EndpointSample {
  GroupElement g;
  ReducedElement reduced;
};

/// Monte-Carlo average: mean, sample standard deviation / sqrt(m), and m.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t m = 0;
};

/// Seed of the random stream for one sample; a pure function of the pair so
/// that sample i is reproducible in isolation.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t sample_index);

/// Endpoint of the discretized hypoelliptic Brownian motion:
/// w = sum dB_k, c = 1/2 sum omega(B_{k-1}, dB_k), dB_k ~ N(0, t/N I).
EndpointSample simulate_endpoint(const SymplecticForm& form,
                                 const PathConfig& cfg,
                                 std::uint64_t sample_index);

/// One path of Brownian increments shared by all `forms`: writes the common
/// horizontal endpoint and one vertical endpoint per form.
void simulate_shared_path(std::span<const SymplecticForm* const> forms,
                          const PathConfig& cfg, std::uint64_t sample_index,
                          Vector& w, std::span<double> c);

/// m endpoints stored column-wise. Sample i depends only on
/// (base_seed, i), never on the worker layout.
class EndpointSet {
 public:
  EndpointSet(int dimension, std::size_t m);

  int dimension() const { return dimension_; }
  std::size_t size() const { return c_.size(); }
  GroupElement at(std::size_t i) const;
  ReducedElement reduced_at(std::size_t i) const;
  void set(std::size_t i, const GroupElement& g);

  const Matrix& w() const { return w_; }
  const std::vector<double>& c() const { return c_; }

 private:
  int dimension_;
  Matrix w_;
  std::vector<double> c_;
};

EndpointSet simulate_endpoints(const SymplecticForm& form,
                               const PathConfig& cfg, std::size_t m,
                               unsigned workers = 1);

/// Endpoints for several forms of equal dimension driven by the same
/// Brownian increments; set f is bitwise identical to
/// simulate_endpoints(*forms[f], cfg, m).
std::vector<EndpointSet> simulate_endpoints_shared(
    std::span<const SymplecticForm* const> forms, const PathConfig& cfg,
    std::size_t m, unsigned workers = 1);

/// Runs body(i) for i in [0, m) over `workers` threads in contiguous chunks.
void parallel_for(std::size_t m, unsigned workers,
                  const std::function<void(std::size_t)>& body);

/// Pairwise-summed mean and standard error; throws std::invalid_argument if
/// fewer than two values.
McEstimate summarize(std::span<const double> values);

/// f evaluated at each endpoint (wrapped endpoints for Space::Reduced).
/// Non-finite values raise IntegrabilityError naming the sample.
std::vector<double> evaluate(const CylinderFunction& f,
                             const EndpointSet& endpoints, Space space,
                             unsigned workers = 1);

McEstimate mc_expect(const SymplecticForm& form, const PathConfig& cfg,
                     const CylinderFunction& f, std::size_t m, Space space,
                     unsigned workers = 1);

struct HeatResidual {
  double residual = 0.0;        // |d/dt E f - E[L_H f] / 2|
  double std_error = 0.0;       // of the per-sample difference
  double time_derivative = 0.0; // central difference in t
  double half_generator = 0.0;  // E[L_H f] / 2 at t
  std::size_t m = 0;
};

/// Heat-equation check with common random numbers at t - dt, t, t + dt.
HeatResidual heat_equation_residual(const SymplecticForm& form,
                                    const PathConfig& cfg,
                                    const CylinderFunction& f, std::size_t m,
                                    double delta_t, Space space = Space::G,
                                    unsigned workers = 1);

struct CharFunctionPoint {
  double lambda = 0.0;
  McEstimate real;  // E cos(lambda c_t)
  McEstimate imag;  // E sin(lambda c_t), zero by symmetry
};

std::vector<CharFunctionPoint> levy_area_char_function(
    const SymplecticForm& form, const PathConfig& cfg, std::size_t m,
    std::span<const double> lambdas, unsigned workers = 1);

/// Characteristic function of the continuous-time vertical marginal for a
/// block-diagonal form with weights a_j: prod_j 1 / cosh(lambda a_j t / 2).
double levy_area_char_function_exact(const SymplecticForm& form, double t,
                                     double lambda);

}  // namespace heislab
