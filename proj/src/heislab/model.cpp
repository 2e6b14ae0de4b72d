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

#include "heislab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "heislab/errors.hpp"

namespace heislab {

SymplecticForm::SymplecticForm(Matrix omega) : omega_(std::move(omega)) {
  if (omega_.rows() == 0 || omega_.rows() != omega_.cols() ||
      omega_.rows() % 2 != 0) {
    throw std::invalid_argument(
        "symplectic form must be a nonempty square matrix of even size");
  }
  if (!omega_.allFinite()) {
    throw std::invalid_argument("symplectic form has non-finite entries");
  }
  if (omega_ != -omega_.transpose()) {
    throw std::invalid_argument("symplectic form is not skew-symmetric");
  }
  Eigen::JacobiSVD<Matrix> svd(omega_);
  const auto& s = svd.singularValues();
  if (!(s.minCoeff() > 1e-12 * s.maxCoeff())) {
    throw std::invalid_argument("symplectic form is degenerate");
  }
  for (int j = 0; j < omega_.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      if (omega_(i, j) != 0.0) nonzeros_.push_back({i, j, omega_(i, j)});
    }
  }
}

double SymplecticForm::operator()(const Eigen::Ref<const Vector>& x,
                                  const Eigen::Ref<const Vector>& y) const {
  if (x.size() != dimension() || y.size() != dimension()) {
    throw DimensionError("omega: operand dimension does not match the form");
  }
  double acc = 0.0;
  // Pairwise form keeps omega(x, x) == 0 and omega(x, y) == -omega(y, x)
  // exact in floating point.
  for (const auto& e : nonzeros_) {
    acc += e.value * (x[e.row] * y[e.col] - x[e.col] * y[e.row]);
  }
  return acc;
}

Vector SymplecticForm::contract(const Eigen::Ref<const Vector>& w) const {
  if (w.size() != dimension()) {
    throw DimensionError("omega: operand dimension does not match the form");
  }
  Vector v = Vector::Zero(dimension());
  for (const auto& e : nonzeros_) {
    v[e.col] += w[e.row] * e.value;
    v[e.row] -= w[e.col] * e.value;
  }
  return v;
}

SymplecticForm make_isotropic_form(int n) {
  if (n < 1) throw std::invalid_argument("isotropic form needs n >= 1");
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  return make_nonisotropic_form(ones);
}

SymplecticForm make_nonisotropic_form(std::span<const double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("non-isotropic form needs at least one weight");
  }
  const int n = static_cast<int>(weights.size());
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double a = weights[static_cast<std::size_t>(j)];
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("weight " + std::to_string(j + 1) +
                                  " must be positive and finite");
    }
    omega(2 * j, 2 * j + 1) = a;
    omega(2 * j + 1, 2 * j) = -a;
  }
  return SymplecticForm(std::move(omega));
}

std::pair<WienerModel, SymplecticForm> make_trace_class_form(
    std::span<const double> q, int n) {
  if (q.empty()) throw std::invalid_argument("trace-class operator needs q");
  if (static_cast<int>(q.size()) != n) {
    throw DimensionError("trace-class eigenvalue list must have length n");
  }
  // Im <w, z>_Q = sum_j q_j (x_j y'_j - y_j x'_j) with w_j = x_j + i y_j,
  // z_j = x'_j + i y'_j; the realified basis orders coordinates (x_j, y_j).
  SymplecticForm form = make_nonisotropic_form(q);
  WienerModel model;
  model.n = n;
  std::vector<double> weights;
  weights.reserve(2 * q.size());
  for (double qj : q) {
    weights.push_back(qj);
    weights.push_back(qj);
  }
  model.w_weights = std::move(weights);
  return {std::move(model), std::move(form)};
}

Projection::Projection(std::vector<int> indices, int dimension)
    : indices_(std::move(indices)), dimension_(dimension) {
  if (dimension_ < 2 || dimension_ % 2 != 0) {
    throw std::invalid_argument("projection needs an even ambient dimension");
  }
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw std::invalid_argument("projection indices must be distinct");
  }
  if (indices_.empty() || indices_.size() % 2 != 0) {
    throw std::invalid_argument(
        "projection must select a nonempty even number of coordinates");
  }
  if (indices_.front() < 0 || indices_.back() >= dimension_) {
    throw DimensionError("projection index out of range");
  }
}

Projection Projection::full(int dimension) {
  std::vector<int> idx(static_cast<std::size_t>(std::max(dimension, 0)));
  for (int i = 0; i < dimension; ++i) idx[static_cast<std::size_t>(i)] = i;
  return Projection(std::move(idx), dimension);
}

Projection Projection::leading_block(int dimension) {
  return Projection({0, 1}, dimension);
}

Vector Projection::restrict(const Eigen::Ref<const Vector>& w) const {
  if (w.size() != dimension_) {
    throw DimensionError("projection: vector dimension mismatch");
  }
  Vector out(rank());
  for (int k = 0; k < rank(); ++k) out[k] = w[indices_[k]];
  return out;
}

Vector Projection::apply(const Eigen::Ref<const Vector>& w) const {
  if (w.size() != dimension_) {
    throw DimensionError("projection: vector dimension mismatch");
  }
  Vector out = Vector::Zero(dimension_);
  for (int i : indices_) out[i] = w[i];
  return out;
}

bool check_hormander(const SymplecticForm& form, const Projection& p) {
  if (p.dimension() != form.dimension()) {
    throw DimensionError("projection and form live on different spaces");
  }
  for (int i : p.indices()) {
    for (int j : p.indices()) {
      if (form.matrix()(i, j) != 0.0) return true;
    }
  }
  return false;
}

}  // namespace heislab
