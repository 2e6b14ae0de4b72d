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

#include "heislab/calculus.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "heislab/errors.hpp"

namespace heislab {
namespace {

// Steps balancing truncation against rounding for central differences.
const double kFirstStep = std::cbrt(std::numeric_limits<double>::epsilon());
const double kSecondStep =
    std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));

double representable_step(double x, double h) {
  volatile double shifted = x + h;
  return shifted - x;
}

void require_line(const CylinderFunction& f) {
  if (f.vertical() != Vertical::Line) {
    throw std::invalid_argument(
        "function '" + f.name() +
        "' lives on the reduced group; compose it with the quotient map to "
        "evaluate on G");
  }
}

void require_circle(const CylinderFunction& f) {
  if (f.vertical() != Vertical::Circle) {
    throw std::invalid_argument("function '" + f.name() +
                                "' is not defined on the reduced group");
  }
}

void require_compatible(const SymplecticForm& form, const CylinderFunction& f,
                        const Vector& w) {
  if (w.size() != form.dimension() ||
      f.projection().dimension() != form.dimension()) {
    throw DimensionError("function '" + f.name() +
                         "' and group element have incompatible dimensions");
  }
}

// Standard-basis horizontal gradient at (w, vertical) from a jet.
Vector gradient_from_jet(const SymplecticForm& form, const Projection& p,
                         const Jet& j, const Vector& w) {
  Vector grad = form.contract(w);
  grad *= 0.5 * j.d_c;
  const auto& idx = p.indices();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    grad[idx[k]] += j.grad_w[static_cast<Eigen::Index>(k)];
  }
  return grad;
}

double laplacian_from_jet(const SymplecticForm& form, const Projection& p,
                          const Jet& j, const Vector& w,
                          const std::optional<Matrix>& basis) {
  const Vector v = form.contract(w);
  const auto& idx = p.indices();
  if (!basis) {
    double trace = 0.0;
    double mixed = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      trace += j.hess_ww(kk, kk);
      mixed += v[idx[k]] * j.hess_wc[kk];
    }
    return trace + mixed + 0.25 * v.squaredNorm() * j.d_cc;
  }
  const Matrix& b = *basis;
  if (b.rows() != form.dimension() || b.cols() != form.dimension()) {
    throw DimensionError("basis must be a square matrix of the form's size");
  }
  const int dim = form.dimension();
  Matrix hess = Matrix::Zero(dim, dim);
  Vector hwc = Vector::Zero(dim);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    hwc[idx[r]] = j.hess_wc[static_cast<Eigen::Index>(r)];
    for (std::size_t s = 0; s < idx.size(); ++s) {
      hess(idx[r], idx[s]) = j.hess_ww(static_cast<Eigen::Index>(r),
                                       static_cast<Eigen::Index>(s));
    }
  }
  double total = 0.0;
  for (int k = 0; k < dim; ++k) {
    const auto col = b.col(k);
    const double om = v.dot(col);
    total += col.dot(hess * col) + om * hwc.dot(col) + 0.25 * om * om * j.d_cc;
  }
  return total;
}

}  // namespace

CylinderFunction::CylinderFunction(std::string name, Projection projection,
                                   Vertical vertical, JetFn jet, ValueFn value,
                                   double step_scale)
    : name_(std::move(name)),
      projection_(std::move(projection)),
      vertical_(vertical),
      jet_fn_(std::move(jet)),
      value_fn_(std::move(value)),
      step_scale_(step_scale) {
  if (!(step_scale_ > 0.0)) {
    throw std::invalid_argument("numeric differentiation step must be > 0");
  }
  if (!jet_fn_ && !value_fn_) {
    throw std::invalid_argument("cylinder function needs an evaluator");
  }
  if (vertical_ == Vertical::Circle) check_periodic();
}

CylinderFunction CylinderFunction::analytic(std::string name,
                                            Projection projection,
                                            Vertical vertical, JetFn jet) {
  if (!jet) throw std::invalid_argument("analytic function needs a jet");
  return CylinderFunction(std::move(name), std::move(projection), vertical,
                          std::move(jet), nullptr, 1.0);
}

CylinderFunction CylinderFunction::numeric(std::string name,
                                           Projection projection,
                                           Vertical vertical, ValueFn value,
                                           double step_scale) {
  if (!value) throw std::invalid_argument("numeric function needs a value");
  return CylinderFunction(std::move(name), std::move(projection), vertical,
                          nullptr, std::move(value), step_scale);
}

void CylinderFunction::check_periodic() const {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int trial = 0; trial < 16; ++trial) {
    Vector pw(projection_.rank());
    for (Eigen::Index i = 0; i < pw.size(); ++i) pw[i] = normal(rng);
    const double theta = angle(rng);
    const double a = value(pw, theta);
    const double b = value(pw, theta + kTwoPi);
    if (std::fabs(a - b) > 1e-10 * std::max(1.0, std::fabs(a))) {
      throw std::invalid_argument("function '" + name_ +
                                  "' is not 2pi-periodic in the vertical "
                                  "argument");
    }
  }
}

double CylinderFunction::value(const Vector& pw, double vertical_arg) const {
  if (value_fn_) return value_fn_(pw, vertical_arg);
  return jet_fn_(pw, vertical_arg).value;
}

Jet CylinderFunction::jet(const Vector& pw, double vertical_arg) const {
  if (jet_fn_) return jet_fn_(pw, vertical_arg);
  return numeric_jet(pw, vertical_arg);
}

Jet CylinderFunction::numeric_jet(const Vector& pw, double c) const {
  const Eigen::Index r = pw.size();
  const Eigen::Index dim = r + 1;
  Vector x(dim);
  x.head(r) = pw;
  x[r] = c;
  auto eval = [&](const Vector& y) { return value_fn_(y.head(r), y[r]); };

  Vector h1(dim), h2(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double scale = step_scale_ * (1.0 + std::fabs(x[i]));
    h1[i] = representable_step(x[i], kFirstStep * scale);
    h2[i] = representable_step(x[i], kSecondStep * scale);
  }

  const double f0 = eval(x);
  Vector grad(dim);
  Matrix hess(dim, dim);
  Vector y = x;
  for (Eigen::Index i = 0; i < dim; ++i) {
    y[i] = x[i] + h1[i];
    const double fp = eval(y);
    y[i] = x[i] - h1[i];
    const double fm = eval(y);
    grad[i] = (fp - fm) / (2.0 * h1[i]);
    y[i] = x[i] + h2[i];
    const double sp = eval(y);
    y[i] = x[i] - h2[i];
    const double sm = eval(y);
    hess(i, i) = (sp - 2.0 * f0 + sm) / (h2[i] * h2[i]);
    y[i] = x[i];
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index k = i + 1; k < dim; ++k) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sk : {1, -1}) {
          y[i] = x[i] + si * h2[i];
          y[k] = x[k] + sk * h2[k];
          acc += si * sk * eval(y);
        }
      }
      y[i] = x[i];
      y[k] = x[k];
      hess(i, k) = hess(k, i) = acc / (4.0 * h2[i] * h2[k]);
    }
  }

  Jet j;
  j.value = f0;
  j.grad_w = grad.head(r);
  j.d_c = grad[r];
  j.hess_ww = hess.topLeftCorner(r, r);
  j.hess_wc = hess.col(r).head(r);
  j.d_cc = hess(r, r);
  return j;
}

double CylinderFunction::operator()(const GroupElement& g) const {
  require_line(*this);
  return value(projection_.restrict(g.w), g.c);
}

double CylinderFunction::operator()(const ReducedElement& r) const {
  require_circle(*this);
  return value(projection_.restrict(r.w), r.theta);
}

Jet CylinderFunction::jet_at(const GroupElement& g) const {
  require_line(*this);
  return jet(projection_.restrict(g.w), g.c);
}

Jet CylinderFunction::jet_at(const ReducedElement& r) const {
  require_circle(*this);
  return jet(projection_.restrict(r.w), r.theta);
}

double left_invariant_derivative(const SymplecticForm& form,
                                 const CylinderFunction& f, const LieVector& x,
                                 const GroupElement& g) {
  require_compatible(form, f, g.w);
  if (x.A.size() != form.dimension()) {
    throw DimensionError("Lie vector dimension does not match the form");
  }
  const Jet j = f.jet_at(g);
  return j.grad_w.dot(f.projection().restrict(x.A)) +
         (x.a + 0.5 * form(g.w, x.A)) * j.d_c;
}

double left_invariant_derivative(const SymplecticForm& form,
                                 const CylinderFunction& f, const LieVector& x,
                                 const ReducedElement& r) {
  require_compatible(form, f, r.w);
  if (x.A.size() != form.dimension()) {
    throw DimensionError("Lie vector dimension does not match the form");
  }
  const Jet j = f.jet_at(r);
  return j.grad_w.dot(f.projection().restrict(x.A)) +
         (x.a + 0.5 * form(r.w, x.A)) * j.d_c;
}

Vector horizontal_gradient(const SymplecticForm& form,
                           const CylinderFunction& f, const GroupElement& g,
                           const std::optional<Matrix>& basis) {
  require_compatible(form, f, g.w);
  Vector grad = gradient_from_jet(form, f.projection(), f.jet_at(g), g.w);
  if (basis) return basis->transpose() * grad;
  return grad;
}

Vector horizontal_gradient(const SymplecticForm& form,
                           const CylinderFunction& f, const ReducedElement& r,
                           const std::optional<Matrix>& basis) {
  require_compatible(form, f, r.w);
  Vector grad = gradient_from_jet(form, f.projection(), f.jet_at(r), r.w);
  if (basis) return basis->transpose() * grad;
  return grad;
}

double gradient_norm_sq(const SymplecticForm& form, const CylinderFunction& f,
                        const GroupElement& g) {
  return horizontal_gradient(form, f, g).squaredNorm();
}

double gradient_norm_sq(const SymplecticForm& form, const CylinderFunction& f,
                        const ReducedElement& r) {
  return horizontal_gradient(form, f, r).squaredNorm();
}

double sub_laplacian(const SymplecticForm& form, const CylinderFunction& f,
                     const GroupElement& g,
                     const std::optional<Matrix>& basis) {
  require_compatible(form, f, g.w);
  return laplacian_from_jet(form, f.projection(), f.jet_at(g), g.w, basis);
}

double sub_laplacian(const SymplecticForm& form, const CylinderFunction& f,
                     const ReducedElement& r,
                     const std::optional<Matrix>& basis) {
  require_compatible(form, f, r.w);
  return laplacian_from_jet(form, f.projection(), f.jet_at(r), r.w, basis);
}

double sub_laplacian_iterated(const SymplecticForm& form,
                              const CylinderFunction& f, const GroupElement& g,
                              double step) {
  require_compatible(form, f, g.w);
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  const double f0 = f(g);
  double total = 0.0;
  for (int j = 0; j < form.dimension(); ++j) {
    GroupElement shift{Vector::Zero(form.dimension()), 0.0};
    shift.w[j] = step;
    const double fp = f(multiply(form, g, shift));
    shift.w[j] = -step;
    const double fm = f(multiply(form, g, shift));
    total += (fp - 2.0 * f0 + fm) / (step * step);
  }
  return total;
}

CylinderFunction compose_with_quotient(const CylinderFunction& f) {
  require_circle(f);
  CylinderFunction inner = f;
  JetFn jet = [inner](const Vector& pw, double c) {
    return inner.jet(pw, wrap_angle(c));
  };
  CylinderFunction lifted = CylinderFunction::analytic(
      f.name() + "_lifted", f.projection(), Vertical::Line, std::move(jet));
  lifted.value_fn_ = [inner](const Vector& pw, double c) {
    return inner.value(pw, wrap_angle(c));
  };
  return lifted;
}

CylinderFunction product(const CylinderFunction& f, const CylinderFunction& g) {
  if (!(f.projection() == g.projection()) || f.vertical() != g.vertical()) {
    throw DimensionError("product needs factors over the same projection");
  }
  JetFn jet = [f, g](const Vector& pw, double c) {
    const Jet a = f.jet(pw, c);
    const Jet b = g.jet(pw, c);
    Jet out;
    out.value = a.value * b.value;
    out.grad_w = a.value * b.grad_w + b.value * a.grad_w;
    out.d_c = a.value * b.d_c + b.value * a.d_c;
    out.hess_ww = a.value * b.hess_ww + b.value * a.hess_ww +
                  a.grad_w * b.grad_w.transpose() +
                  b.grad_w * a.grad_w.transpose();
    out.hess_wc = a.value * b.hess_wc + b.value * a.hess_wc +
                  a.grad_w * b.d_c + b.grad_w * a.d_c;
    out.d_cc = a.value * b.d_cc + b.value * a.d_cc + 2.0 * a.d_c * b.d_c;
    return out;
  };
  return CylinderFunction::analytic(f.name() + "*" + g.name(), f.projection(),
                                    f.vertical(), std::move(jet));
}

CylinderFunction compose_outer(const ScalarMap& u, const CylinderFunction& f,
                               std::string name) {
  JetFn jet = [u, f](const Vector& pw, double c) {
    const Jet a = f.jet(pw, c);
    const double d1 = u.d1(a.value);
    const double d2 = u.d2(a.value);
    Jet out;
    out.value = u.value(a.value);
    out.grad_w = d1 * a.grad_w;
    out.d_c = d1 * a.d_c;
    out.hess_ww = d2 * a.grad_w * a.grad_w.transpose() + d1 * a.hess_ww;
    out.hess_wc = d2 * a.d_c * a.grad_w + d1 * a.hess_wc;
    out.d_cc = d2 * a.d_c * a.d_c + d1 * a.d_cc;
    return out;
  };
  return CylinderFunction::analytic(std::move(name), f.projection(),
                                    f.vertical(), std::move(jet));
}

ScalarMap smooth_clip(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("clip width must be > 0");
  return {
      [eps](double x) { return eps * std::tanh(x / eps); },
      [eps](double x) {
        const double s = 1.0 / std::cosh(x / eps);
        return s * s;
      },
      [eps](double x) {
        const double s = 1.0 / std::cosh(x / eps);
        return -2.0 / eps * s * s * std::tanh(x / eps);
      },
  };
}

}  // namespace heislab
