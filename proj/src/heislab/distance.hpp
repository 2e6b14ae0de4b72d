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

#include "heislab/group.hpp"
#include "heislab/model.hpp"

namespace heislab {

/// Discretized horizontal curve: K+1 nodes in R^{2n}, stored as columns.
/// The vertical trace is reconstructed from the horizontality constraint.
struct HorizontalPath {
  Matrix nodes;

  int segments() const { return static_cast<int>(nodes.cols()) - 1; }
};

struct Lift {
  GroupElement endpoint;  // relative to the starting element (nodes[0], 0)
  double length = 0.0;
};

/// Endpoint (sigma_K, 1/2 sum_k omega(sigma_{k-1}, sigma_k - sigma_{k-1}))
/// and length sum_k |sigma_k - sigma_{k-1}|_H.
Lift lift(const SymplecticForm& form, const HorizontalPath& path);

struct DistanceOptions {
  int max_outer = 30;
  int max_inner = 3000;
  /// Feasibility target: |c(1) - c_target| <= feasibility_tol (1 + |c_target|).
  double feasibility_tol = 1e-6;
  int bulge_starts = 4;
  /// Solve at K/2 first and start from the upsampled solution.
  bool coarse_warm_start = true;
  std::uint64_t seed = 7;
};

struct DistanceResult {
  double estimate = 0.0;
  double residual = 0.0;
  bool converged = false;
  int K = 0;
  HorizontalPath path;
};

/// Carnot-Caratheodory distance from the identity to `target`, by direct
/// transcription: K segments, augmented Lagrangian on the vertical endpoint
/// constraint, L-BFGS inner solves, multistart.
DistanceResult cc_distance(const SymplecticForm& form,
                           const GroupElement& target, int K,
                           const DistanceOptions& opt = {});

/// d(x, y) = d(e, x^{-1} y).
DistanceResult cc_distance(const SymplecticForm& form, const GroupElement& x,
                           const GroupElement& y, int K,
                           const DistanceOptions& opt = {});

struct ReducedDistanceResult {
  double estimate = 0.0;
  /// Fiber index of the winning lift, relative to the representative.
  int winning_k = 0;
  double residual = 0.0;
  bool converged = false;
  DistanceResult best;
};

/// Reduced distance from the identity: min over lifts (w, theta + 2 pi k),
/// |k| <= k_window.
ReducedDistanceResult cc_distance_reduced(const SymplecticForm& form,
                                          const ReducedElement& target, int K,
                                          int k_window,
                                          const DistanceOptions& opt = {});

/// Reduced distance between x and y, via x^{-1} y on the reduced group.
ReducedDistanceResult cc_distance_reduced(const SymplecticForm& form,
                                          const ReducedElement& x,
                                          const ReducedElement& y, int K,
                                          int k_window,
                                          const DistanceOptions& opt = {});

/// d~(phi(g), phi(h)), with the fiber enumerated around the lift g^{-1} h.
ReducedDistanceResult quotient_distance(const SymplecticForm& form,
                                        const GroupElement& g,
                                        const GroupElement& h, int K,
                                        int k_window,
                                        const DistanceOptions& opt = {});

}  // namespace heislab
