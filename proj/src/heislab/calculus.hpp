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

#include <functional>
#include <optional>
#include <string>

#include "heislab/group.hpp"
#include "heislab/model.hpp"

namespace heislab {

/// Where the vertical argument of a cylinder function lives: the real line
/// (functions on G) or the circle (functions on the reduced group, which
/// must be 2pi-periodic in the vertical argument).
enum class Vertical { Line, Circle };

/// Value and partial derivatives of F(Pw, c) up to second order. Horizontal
/// parts are indexed by position within the projection.
struct Jet {
  double value = 0.0;
  Vector grad_w;
  double d_c = 0.0;
  Matrix hess_ww;
  Vector hess_wc;
  double d_cc = 0.0;
};

using JetFn = std::function<Jet(const Vector& pw, double c)>;
using ValueFn = std::function<double(const Vector& pw, double c)>;

/// f = F o pi_P. Evaluation is reentrant; nothing is cached between calls.
class CylinderFunction {
 public:
  /// Derivatives supplied by `jet`.
  static CylinderFunction analytic(std::string name, Projection projection,
                                   Vertical vertical, JetFn jet);
  /// Derivatives by central differences of `value`; `step_scale` multiplies
  /// the default steps eps^(1/3)(1+|x|) and eps^(1/4)(1+|x|).
  static CylinderFunction numeric(std::string name, Projection projection,
                                  Vertical vertical, ValueFn value,
                                  double step_scale = 1.0);

  const std::string& name() const { return name_; }
  const Projection& projection() const { return projection_; }
  Vertical vertical() const { return vertical_; }
  bool is_analytic() const { return static_cast<bool>(jet_fn_); }

  /// F at projected coordinates (Pw, vertical argument).
  double value(const Vector& pw, double vertical_arg) const;
  Jet jet(const Vector& pw, double vertical_arg) const;

  /// f(g) for a function on G; f(r) for a function on the reduced group.
  double operator()(const GroupElement& g) const;
  double operator()(const ReducedElement& r) const;
  Jet jet_at(const GroupElement& g) const;
  Jet jet_at(const ReducedElement& r) const;

 private:
  friend CylinderFunction compose_with_quotient(const CylinderFunction& f);

  CylinderFunction(std::string name, Projection projection, Vertical vertical,
                   JetFn jet, ValueFn value, double step_scale);
  Jet numeric_jet(const Vector& pw, double c) const;
  void check_periodic() const;

  std::string name_;
  Projection projection_;
  Vertical vertical_;
  JetFn jet_fn_;
  ValueFn value_fn_;
  double step_scale_ = 1.0;
};

/// (d/dt)|_0 f(g exp(tX)) = <grad_w F, PA> + (a + omega(w, A)/2) dF/dc.
double left_invariant_derivative(const SymplecticForm& form,
                                 const CylinderFunction& f, const LieVector& x,
                                 const GroupElement& g);
double left_invariant_derivative(const SymplecticForm& form,
                                 const CylinderFunction& f, const LieVector& x,
                                 const ReducedElement& r);

/// Components of grad_H f in the orthonormal basis given by the columns of
/// `basis` (standard basis when omitted).
Vector horizontal_gradient(const SymplecticForm& form,
                           const CylinderFunction& f, const GroupElement& g,
                           const std::optional<Matrix>& basis = std::nullopt);
Vector horizontal_gradient(const SymplecticForm& form,
                           const CylinderFunction& f, const ReducedElement& r,
                           const std::optional<Matrix>& basis = std::nullopt);

/// |grad_H f|^2, the carre du champ of f.
double gradient_norm_sq(const SymplecticForm& form, const CylinderFunction& f,
                        const GroupElement& g);
double gradient_norm_sq(const SymplecticForm& form, const CylinderFunction& f,
                        const ReducedElement& r);

/// L_H f = sum_j (e_j, 0)~^2 f, evaluated in closed form:
/// sum_j [F_jj + omega(w, e_j) F_jc + omega(w, e_j)^2 F_cc / 4].
double sub_laplacian(const SymplecticForm& form, const CylinderFunction& f,
                     const GroupElement& g,
                     const std::optional<Matrix>& basis = std::nullopt);
double sub_laplacian(const SymplecticForm& form, const CylinderFunction& f,
                     const ReducedElement& r,
                     const std::optional<Matrix>& basis = std::nullopt);

/// Cross-check of sub_laplacian: second differences of f along the
/// one-parameter curves s -> g exp(s (e_j, 0)).
double sub_laplacian_iterated(const SymplecticForm& form,
                              const CylinderFunction& f, const GroupElement& g,
                              double step = 1e-4);

/// f o phi for a function on the reduced group: the same F, read at the
/// wrapped vertical coordinate, so (f o phi)(g) == f(phi(g)) exactly.
CylinderFunction compose_with_quotient(const CylinderFunction& f);

/// Pointwise product; both factors must share projection and vertical type.
CylinderFunction product(const CylinderFunction& f, const CylinderFunction& g);

/// Outer composition u o f with a scalar C^2 map given by value and first two
/// derivatives.
struct ScalarMap {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};
CylinderFunction compose_outer(const ScalarMap& u, const CylinderFunction& f,
                               std::string name);

/// Smooth clip eps*tanh(x/eps); 0 < derivative <= 1.
ScalarMap smooth_clip(double eps);

}  // namespace heislab
