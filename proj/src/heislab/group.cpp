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

#include "heislab/group.hpp"

#include <cmath>
#include <sstream>

#include "heislab/errors.hpp"

namespace heislab {
namespace {

void require_dim(const SymplecticForm& form, const Vector& w) {
  if (w.size() != form.dimension()) {
    throw DimensionError("group element has dimension " +
                         std::to_string(w.size()) + ", form expects " +
                         std::to_string(form.dimension()));
  }
}

void append(std::ostringstream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

std::string row(const Vector& w, double last) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    append(os, w[i]);
    os << ',';
  }
  append(os, last);
  return os.str();
}

}  // namespace

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // r + 2pi may round up to exactly 2pi for tiny negative r.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_distance(double a, double b) {
  const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

GroupElement multiply(const SymplecticForm& form, const GroupElement& g1,
                      const GroupElement& g2) {
  require_dim(form, g1.w);
  require_dim(form, g2.w);
  return {g1.w + g2.w, g1.c + g2.c + 0.5 * form(g1.w, g2.w)};
}

GroupElement inverse(const SymplecticForm& form, const GroupElement& g) {
  require_dim(form, g.w);
  return {-g.w, -g.c};
}

ReducedElement multiply_reduced(const SymplecticForm& form,
                                const ReducedElement& r1,
                                const ReducedElement& r2) {
  require_dim(form, r1.w);
  require_dim(form, r2.w);
  return {r1.w + r2.w,
          wrap_angle(r1.theta + r2.theta + 0.5 * form(r1.w, r2.w))};
}

ReducedElement inverse_reduced(const SymplecticForm& form,
                               const ReducedElement& r) {
  require_dim(form, r.w);
  return {-r.w, wrap_angle(-r.theta)};
}

ReducedElement quotient(const GroupElement& g) {
  return {g.w, wrap_angle(g.c)};
}

GroupElement exp_group(const LieVector& x) { return {x.A, x.a}; }

ReducedElement exp_reduced(const LieVector& x) {
  return quotient(exp_group(x));
}

LieVector bracket(const SymplecticForm& form, const LieVector& x,
                  const LieVector& y) {
  require_dim(form, x.A);
  require_dim(form, y.A);
  return {Vector::Zero(form.dimension()), form(x.A, y.A)};
}

GroupElement project_element(const Projection& p, const GroupElement& g) {
  return {p.apply(g.w), g.c};
}

ReducedElement project_element(const Projection& p, const ReducedElement& r) {
  return {p.apply(r.w), r.theta};
}

std::string to_csv_row(const GroupElement& g) { return row(g.w, g.c); }
std::string to_csv_row(const ReducedElement& r) { return row(r.w, r.theta); }

}  // namespace heislab
