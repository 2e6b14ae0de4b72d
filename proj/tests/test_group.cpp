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

#include <numbers>

#include "heislab/errors.hpp"
#include "heislab/group.hpp"
#include "support.hpp"

using namespace heislab;

namespace {

GroupElement el(double w1, double w2, double c) {
  return {Eigen::Vector2d(w1, w2), c};
}

}  // namespace

TEST_CASE("group law on the canonical form") {
  const SymplecticForm f = make_isotropic_form(1);
  const GroupElement g = multiply(f, el(1, 0, 0), el(0, 1, 0));
  CHECK(g.w == Eigen::Vector2d(1, 1));
  CHECK(g.c == 0.5);
  const GroupElement h = multiply(f, el(1, 0, 0), el(2, 0, 0));
  CHECK(h.w == Eigen::Vector2d(3, 0));
  CHECK(h.c == 0.0);

  const GroupElement inv = inverse(f, el(1, 2, 3));
  CHECK(inv.w == Eigen::Vector2d(-1, -2));
  CHECK(inv.c == -3.0);
  const GroupElement e = GroupElement::identity(2);
  CHECK(inverse(f, e).w == e.w);
  CHECK(inverse(f, e).c == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  const SymplecticForm f = make_isotropic_form(1);
  const GroupElement big = GroupElement::identity(4);
  CHECK_THROWS_AS(multiply(f, big, big), DimensionError);
  CHECK_THROWS_AS(inverse(f, big), DimensionError);
  CHECK_THROWS_AS(multiply_reduced(f, quotient(big), quotient(big)),
                  DimensionError);
  const LieVector x{Vector::Zero(4), 0.0};
  CHECK_THROWS_AS(bracket(f, x, x), DimensionError);
}

TEST_CASE("angle canonicalization") {
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(wrap_angle(two_pi) == 0.0);
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(-0.5) == doctest::Approx(two_pi - 0.5).epsilon(1e-15));
  CHECK(wrap_angle(-1e-300) < two_pi);
  CHECK(wrap_angle(-1e-300) >= 0.0);
  for (double x : {-100.0, -7.0, 3.0, 7.0, 1e6}) {
    const double t = wrap_angle(x);
    CHECK(t >= 0.0);
    CHECK(t < two_pi);
    CHECK(angle_distance(t, x) < 1e-9);
  }
  const ReducedElement r = quotient(el(1, 2, two_pi));
  CHECK(r.theta == 0.0);
  CHECK(r.w == Eigen::Vector2d(1, 2));
}

TEST_CASE("reduced law wraps the vertical sum") {
  const SymplecticForm f = make_isotropic_form(1);
  const double pi = std::numbers::pi;
  const ReducedElement a{Eigen::Vector2d(0, 0), 1.5 * pi};
  const ReducedElement r = multiply_reduced(f, a, a);
  CHECK(r.theta == doctest::Approx(pi).epsilon(1e-15));
  const ReducedElement e = ReducedElement::identity(2);
  const ReducedElement x{Eigen::Vector2d(0.3, -1.0), 2.0};
  CHECK(multiply_reduced(f, x, e).theta == x.theta);
  CHECK(multiply_reduced(f, x, e).w == x.w);
}

TEST_CASE("exponential maps and bracket") {
  const SymplecticForm f = make_isotropic_form(1);
  const LieVector x{Eigen::Vector2d(1, 1), 2.0};
  const GroupElement g = exp_group(x);
  CHECK(g.w == x.A);
  CHECK(g.c == 2.0);
  const GroupElement z = exp_group(LieVector{Vector::Zero(2), 0.0});
  CHECK(z.w.isZero(0.0));
  CHECK(z.c == 0.0);
  const LieVector big{Eigen::Vector2d(1, 1), 9.0};
  CHECK(exp_reduced(big).theta == quotient(exp_group(big)).theta);

  const LieVector e1{Eigen::Vector2d(1, 0), 0.0};
  const LieVector e2{Eigen::Vector2d(0, 1), 0.0};
  const LieVector b = bracket(f, e1, e2);
  CHECK(b.A.isZero(0.0));
  CHECK(b.a == 1.0);
  CHECK(bracket(f, x, x).a == 0.0);
}

TEST_CASE("random structure identities") {
  std::mt19937_64 rng(5);
  const std::vector<double> w{1.0, 2.5, 0.3};
  const SymplecticForm f = make_nonisotropic_form(w);
  const Projection p({0, 1, 4, 5}, 6);
  for (int k = 0; k < 2000; ++k) {
    const GroupElement a = testing::random_element(rng, 6, 3.0);
    const GroupElement b = testing::random_element(rng, 6, 3.0);
    const GroupElement c = testing::random_element(rng, 6, 3.0);
    const GroupElement l = multiply(f, multiply(f, a, b), c);
    const GroupElement r = multiply(f, a, multiply(f, b, c));
    const double scale = 1.0 + std::max({a.w.norm(), b.w.norm(), c.w.norm(),
                                         std::abs(a.c), std::abs(b.c),
                                         std::abs(c.c)});
    CHECK((l.w - r.w).norm() <= 1e-12 * scale);
    CHECK(std::abs(l.c - r.c) <= 1e-12 * scale * scale);

    const GroupElement e = multiply(f, a, inverse(f, a));
    CHECK(e.w.isZero(0.0));
    CHECK(e.c == 0.0);
    const GroupElement back = multiply(f, inverse(f, a), multiply(f, a, b));
    CHECK((back.w - b.w).norm() <= 1e-12 * scale);
    CHECK(std::abs(back.c - b.c) <= 1e-12 * scale * scale);

    const ReducedElement lhs = quotient(multiply(f, a, b));
    const ReducedElement rhs = multiply_reduced(f, quotient(a), quotient(b));
    CHECK(lhs.w == rhs.w);
    CHECK(angle_distance(lhs.theta, rhs.theta) <= 1e-12 * scale * scale);

    const ReducedElement d1 = quotient(project_element(p, a));
    const ReducedElement d2 = project_element(p, quotient(a));
    CHECK(d1.w == d2.w);
    CHECK(d1.theta == d2.theta);

    const LieVector x{a.w, a.c}, y{b.w, b.c}, z{c.w, c.c};
    const LieVector xy = bracket(f, x, y);
    CHECK(xy.A.isZero(0.0));
    CHECK(bracket(f, xy, z).a == 0.0);
  }
}

TEST_CASE("csv rows round-trip at full precision") {
  const GroupElement g = el(0.1, -1.0 / 3.0, 1e-17);
  const std::string row = to_csv_row(g);
  double a, b, c;
  REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf", &a, &b, &c) == 3);
  CHECK(a == g.w[0]);
  CHECK(b == g.w[1]);
  CHECK(c == g.c);
}
