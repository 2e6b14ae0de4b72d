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

#include <cmath>
#include <random>

#include "heislab/group.hpp"
#include "heislab/model.hpp"

namespace testing {

using heislab::GroupElement;
using heislab::Matrix;
using heislab::ReducedElement;
using heislab::Vector;

inline Vector random_vector(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = n(rng);
  return v;
}

inline GroupElement random_element(std::mt19937_64& rng, int dim,
                                   double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {random_vector(rng, dim, scale), n(rng)};
}

inline Matrix random_orthogonal(std::mt19937_64& rng, int dim) {
  Matrix a(dim, dim);
  std::normal_distribution<double> n;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = n(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(dim, dim);
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
