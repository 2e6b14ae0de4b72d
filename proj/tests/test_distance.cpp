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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heislab/distance.hpp"
#include "support.hpp"

using namespace heislab;

namespace {

HorizontalPath path_of(std::initializer_list<std::pair<double, double>> pts) {
  HorizontalPath p;
  p.nodes.resize(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index k = 0;
  for (const auto& [x, y] : pts) p.nodes.col(k++) = Eigen::Vector2d(x, y);
  return p;
}

GroupElement el(double w1, double w2, double c) {
  return {Eigen::Vector2d(w1, w2), c};
}

// Best closed K-gon enclosing area |c| (regular polygon): length
// 2 sqrt(K tan(pi / K) |c|); tends to 2 sqrt(pi |c|).
double polygon_oracle(int K, double c) {
  return 2.0 * std::sqrt(K * std::tan(std::numbers::pi / K) * std::abs(c));
}

}  // namespace

TEST_CASE("lifting horizontal paths") {
  const SymplecticForm f = make_isotropic_form(1);
  const Lift s = lift(f, path_of({{0, 0}, {3, 4}}));
  CHECK(s.endpoint.w == Eigen::Vector2d(3, 4));
  CHECK(s.endpoint.c == 0.0);
  CHECK(s.length == 5.0);

  HorizontalPath fine;
  fine.nodes.resize(2, 11);
  for (int k = 0; k <= 10; ++k) fine.nodes.col(k) = Eigen::Vector2d(3, 4) * (k / 10.0);
  const Lift r = lift(f, fine);
  CHECK(r.endpoint.c == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.length == doctest::Approx(5.0).epsilon(1e-14));

  const Lift sq = lift(f, path_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}));
  CHECK(sq.endpoint.w.isZero(0.0));
  CHECK(std::abs(sq.endpoint.c) == 1.0);
  CHECK(sq.length == 4.0);
  // Shoelace oracle with orientation: counter-clockwise gives +area.
  CHECK(sq.endpoint.c == 1.0);
  const Lift rev = lift(f, path_of({{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}}));
  CHECK(rev.endpoint.c == -1.0);
}

TEST_CASE("distance along a horizontal line") {
  const SymplecticForm f = make_isotropic_form(1);
  const DistanceResult d = cc_distance(f, el(3, 4, 0), 64);
  CHECK(d.estimate == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(d.converged);
  CHECK(d.residual <= 1e-6);
  CHECK(d.K == 64);
  const Lift l = lift(f, d.path);
  CHECK((l.endpoint.w - Eigen::Vector2d(3, 4)).norm() <= 1e-12);

  const DistanceResult zero = cc_distance(f, el(0, 0, 0), 16);
  CHECK(zero.estimate <= 1e-9);
  CHECK_THROWS_AS(cc_distance(f, el(1, 0, 0), 4), std::invalid_argument);
}

TEST_CASE("vertical targets follow the isoperimetric oracle") {
  const SymplecticForm f = make_isotropic_form(1);
  for (double c : {1.0, -0.5, 3.0}) {
    const DistanceResult d = cc_distance(f, el(0, 0, c), 64);
    CHECK(d.converged);
    CHECK(d.residual <= 1e-6 * (1 + std::abs(c)));
    CHECK(d.estimate == doctest::Approx(polygon_oracle(64, c)).epsilon(1e-4));
    CHECK(d.estimate >= 2.0 * std::sqrt(std::numbers::pi * std::abs(c)) - 1e-9);
  }
}

TEST_CASE("refinement never worsens the estimate") {
  const SymplecticForm f = make_isotropic_form(1);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 5; ++k) {
    const GroupElement g = testing::random_element(rng, 2);
    const double d16 = cc_distance(f, g, 16).estimate;
    const double d64 = cc_distance(f, g, 64).estimate;
    CHECK(d64 <= d16 + 1e-6);
    CHECK(d64 >= g.w.norm() - 1e-9);
  }
}

TEST_CASE("left invariance and symmetry") {
  const std::vector<double> w{1.0, 2.0};
  const SymplecticForm f = make_nonisotropic_form(w);
  std::mt19937_64 rng(22);
  for (int k = 0; k < 4; ++k) {
    const GroupElement x = testing::random_element(rng, 4);
    const GroupElement y = testing::random_element(rng, 4);
    const GroupElement g = testing::random_element(rng, 4);
    const double dxy = cc_distance(f, x, y, 32).estimate;
    const double dgxy =
        cc_distance(f, multiply(f, g, x), multiply(f, g, y), 32).estimate;
    CHECK(std::abs(dxy - dgxy) <= 2e-3);
    const double back = cc_distance(f, y, x, 32).estimate;
    CHECK(std::abs(dxy - back) <= 2e-3);
  }
}

TEST_CASE("reduced distance") {
  const SymplecticForm f = make_isotropic_form(1);
  const ReducedDistanceResult r =
      cc_distance_reduced(f, ReducedElement{Eigen::Vector2d(3, 4), 0.0}, 64, 3);
  CHECK(r.estimate == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(r.winning_k == 0);

  const double theta = 2.0 * std::numbers::pi - 0.05;
  const ReducedDistanceResult near =
      cc_distance_reduced(f, ReducedElement{Eigen::Vector2d(0, 0), theta}, 32, 3);
  const double k0 = cc_distance(f, el(0, 0, theta), 32).estimate;
  const double minus = cc_distance(f, el(0, 0, -0.05), 32).estimate;
  const double plus = cc_distance(f, el(0, 0, 0.05), 32).estimate;
  CHECK(near.winning_k == -1);
  CHECK(near.estimate <= minus + 1e-9);
  CHECK(minus == doctest::Approx(plus).epsilon(1e-6));
  CHECK(near.estimate < k0);
  CHECK_THROWS_AS(
      cc_distance_reduced(f, ReducedElement::identity(2), 16, 0),
      std::invalid_argument);
}

TEST_CASE("quotient distance never exceeds the distance on G") {
  const SymplecticForm f = make_isotropic_form(1);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 5; ++k) {
    const GroupElement g = testing::random_element(rng, 2, 2.0);
    const GroupElement h = testing::random_element(rng, 2, 2.0);
    const double d = cc_distance(f, g, h, 32).estimate;
    const ReducedDistanceResult r = quotient_distance(f, g, h, 32, 2);
    CHECK(r.estimate <= d + 1e-6);
  }
}
