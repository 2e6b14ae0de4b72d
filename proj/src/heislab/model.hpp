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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace heislab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Skew, nondegenerate bilinear form on the horizontal space R^{2n},
/// omega(x, y) = x^T * matrix() * y, expressed in an H-orthonormal basis.
class SymplecticForm {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  /// Takes ownership of the matrix. Throws std::invalid_argument unless the
  /// matrix is square of even size, exactly skew and nondegenerate (smallest
  /// singular value above 1e-12 times the largest).
  explicit SymplecticForm(Matrix omega);

  int dimension() const { return static_cast<int>(omega_.rows()); }
  int half_dimension() const { return dimension() / 2; }
  const Matrix& matrix() const { return omega_; }
  /// Nonzero entries strictly above the diagonal; the rest follows by
  /// skewness.
  const std::vector<Entry>& nonzeros() const { return nonzeros_; }

  double operator()(const Eigen::Ref<const Vector>& x,
                    const Eigen::Ref<const Vector>& y) const;

  /// v_j = omega(w, e_j), i.e. Omega^T w.
  Vector contract(const Eigen::Ref<const Vector>& w) const;

  /// Squared Frobenius norm of Omega; sets the scale of the vertical moments.
  double frobenius_sq() const { return omega_.squaredNorm(); }

 private:
  Matrix omega_;
  std::vector<Entry> nonzeros_;
};

/// Finite-dimensional stand-in for the abstract Wiener space: everything is
/// expressed in H-coordinates, the W-norm weights are metadata only.
struct WienerModel {
  int n = 1;
  std::optional<std::vector<double>> w_weights;
};

SymplecticForm make_isotropic_form(int n);
SymplecticForm make_nonisotropic_form(std::span<const double> weights);

/// Realification of omega(w, z) = Im <w, z>_Q on C^n with Q = diag(q).
std::pair<WienerModel, SymplecticForm> make_trace_class_form(
    std::span<const double> q, int n);

/// Coordinate-subset projection of the horizontal space. Indices are
/// zero-based, sorted, unique, and of even cardinality.
class Projection {
 public:
  Projection(std::vector<int> indices, int dimension);

  static Projection full(int dimension);
  /// The first symplectic block {e_1, e_2}.
  static Projection leading_block(int dimension);

  const std::vector<int>& indices() const { return indices_; }
  int rank() const { return static_cast<int>(indices_.size()); }
  int dimension() const { return dimension_; }
  bool is_full() const { return rank() == dimension_; }

  /// Pw as a rank()-vector.
  Vector restrict(const Eigen::Ref<const Vector>& w) const;
  /// Pw embedded back into R^{dimension()} (other coordinates zeroed).
  Vector apply(const Eigen::Ref<const Vector>& w) const;

  friend bool operator==(const Projection&, const Projection&) = default;

 private:
  std::vector<int> indices_;
  int dimension_;
};

/// True iff the restricted matrix Omega_P has a nonzero entry, i.e. the
/// projected horizontal directions bracket-generate the centre.
bool check_hormander(const SymplecticForm& form, const Projection& p);

}  // namespace heislab
