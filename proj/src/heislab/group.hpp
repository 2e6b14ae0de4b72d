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

#include <numbers>
#include <string>

#include "heislab/model.hpp"

namespace heislab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Element (w, c) of the Heisenberg-like group W x R.
struct GroupElement {
  Vector w;
  double c = 0.0;

  static GroupElement identity(int dimension) {
    return {Vector::Zero(dimension), 0.0};
  }
};

/// Element (w, theta) of the reduced group; theta is the canonical
/// representative of c mod 2pi in [0, 2pi).
struct ReducedElement {
  Vector w;
  double theta = 0.0;

  static ReducedElement identity(int dimension) {
    return {Vector::Zero(dimension), 0.0};
  }
};

/// Lie algebra element (A, a); the algebras of both groups are W x R.
struct LieVector {
  Vector A;
  double a = 0.0;
};

/// Canonical representative of x mod 2pi in [0, 2pi).
double wrap_angle(double x);

/// Distance between two angles on the circle, min(|d|, 2pi - |d|).
double angle_distance(double a, double b);

GroupElement multiply(const SymplecticForm& form, const GroupElement& g1,
                      const GroupElement& g2);
GroupElement inverse(const SymplecticForm& form, const GroupElement& g);
ReducedElement multiply_reduced(const SymplecticForm& form,
                                const ReducedElement& r1,
                                const ReducedElement& r2);
ReducedElement inverse_reduced(const SymplecticForm& form,
                               const ReducedElement& r);

/// The quotient map phi(w, c) = (w, c mod 2pi).
ReducedElement quotient(const GroupElement& g);

GroupElement exp_group(const LieVector& x);
ReducedElement exp_reduced(const LieVector& x);

/// [X, Y] = (0, omega(A_X, A_Y)).
LieVector bracket(const SymplecticForm& form, const LieVector& x,
                  const LieVector& y);

/// pi_P(w, c) = (Pw, c), with Pw embedded in the ambient coordinates.
GroupElement project_element(const Projection& p, const GroupElement& g);
ReducedElement project_element(const Projection& p, const ReducedElement& r);

/// CSV row `w_1,...,w_2n,c` (or theta), full round-trip precision.
std::string to_csv_row(const GroupElement& g);
std::string to_csv_row(const ReducedElement& r);

}  // namespace heislab
