// Copyright 2026 The Cassini Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cassini/metrics.hpp"
#include "cassini/moebius.hpp"
#include "oracle.hpp"

namespace cassini {
namespace {

Point axis(int n, double t) { return t * unit_axis(n, 0); }

// Re-evaluates the defining objective at a witness point.
double cassinian_objective(const Point& x, const Point& y, const Point& p) {
  return (x - y).norm() / ((x - p).norm() * (y - p).norm());
}

double visual_objective(const Point& x, const Point& y, const Point& p) {
  const Point a = x - p, b = y - p;
  return std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0));
}

TEST(Cassinian, BallFromCenter) {
  for (int n : {2, 3, 5}) {
    const auto v = cassinian(Domain::unit_ball(n), Point::Zero(n), axis(n, 0.5));
    EXPECT_NEAR(v.value, 1.0, 1e-12) << "n=" << n;
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.method, Method::optimized);
  }
}

TEST(Cassinian, BallRadialPair) {
  for (int n : {2, 3, 5}) {
    EXPECT_NEAR(cassinian(Domain::unit_ball(n), axis(n, 0.25), axis(n, 0.5)).value, 2.0 / 3.0, 1e-12);
  }
}

TEST(Cassinian, DiskSymmetricPairWitness) {
  const auto v = cassinian(Domain::unit_ball(2), make_point({0.5, 0}), make_point({-0.5, 0}));
  EXPECT_NEAR(v.value, 4.0 / 3.0, 1e-12);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_NEAR(std::abs(v.witness->point[0]), 1.0, 1e-9);
  EXPECT_NEAR(v.witness->point.norm(), 1.0, 1e-12);
}

TEST(Cassinian, PuncturedExact) {
  const Domain d = Domain::punctured({make_point({0, 0})});
  const auto v = cassinian(d, make_point({1, 0}), make_point({0, 1}));
  EXPECT_EQ(v.value, std::sqrt(2.0));
  EXPECT_EQ(v.method, Method::closed_form);
  EXPECT_EQ(v.witness->point, make_point({0, 0}));
  EXPECT_EQ(v.witness->gap_estimate, 0.0);
}

TEST(Cassinian, PuncturedPicksLargestTerm) {
  const Domain d = Domain::punctured({make_point({0, 0}), make_point({3, 0})});
  const Point x = make_point({1, 0}), y = make_point({2, 0});
  const auto v = cassinian(d, x, y);
  EXPECT_DOUBLE_EQ(v.value, 0.5);  // both punctures give 1/(1*2)
  EXPECT_EQ(v.witness->point, make_point({0, 0}));  // lexicographic tie-break
}

TEST(Cassinian, HalfPlane) {
  const Domain d = Domain::upper_half_space(2);
  EXPECT_NEAR(cassinian(d, make_point({0, 1}), make_point({0, 2})).value, 0.5, 1e-12);
  // Dense line-scan reference (1e-5 mesh over [-20, 20]).
  EXPECT_NEAR(cassinian(d, make_point({0, 1}), make_point({1, 2})).value, 0.64390420624348232, 1e-9);
}

TEST(Cassinian, TiltedHalfSpaceMatchesUpperHalfSpace) {
  Rng rng(8);
  const Eigen::MatrixXd q = random_orthogonal(3, rng);
  const Domain upper = Domain::upper_half_space(3);
  const Point normal = q * unit_axis(3, 2);
  const Point shift = make_point({0.5, -1, 2});
  const Domain tilted = Domain::half_space(normal, normal.dot(shift));
  for (int i = 0; i < 20; ++i) {
    Point x = rng.in_ball(3, 2.0), y = rng.in_ball(3, 2.0);
    x[2] = std::abs(x[2]) + 0.01;
    y[2] = std::abs(y[2]) + 0.01;
    const double ref = cassinian(upper, x, y).value;
    EXPECT_NEAR(cassinian(tilted, q * x + shift, q * y + shift).value, ref, 1e-9 * ref);
  }
}

TEST(Cassinian, IdenticalPointsGiveZeroWithoutWitness) {
  const auto v = cassinian(Domain::unit_ball(3), axis(3, 0.2), axis(3, 0.2));
  EXPECT_EQ(v.value, 0.0);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(Cassinian, Errors) {
  const Domain d = Domain::unit_ball(2);
  EXPECT_THROW(cassinian(d, make_point({1.5, 0}), make_point({0, 0})), DomainViolation);
  EXPECT_THROW(cassinian(d, make_point({1.0 - 1e-13, 0}), make_point({0, 0})), DomainViolation);
  EXPECT_THROW(cassinian(d, make_point({0, 0, 0}), make_point({0, 0})), InvalidArgument);
  EXPECT_THROW(cassinian(Domain::punctured({make_point({0, 0})}), make_point({0, 0}), make_point({1, 0})),
               DomainViolation);
}

TEST(Cassinian, CollinearWithCenterInHigherDimension) {
  const Domain d = Domain::unit_ball(4);
  Point x = Point::Zero(4), y = Point::Zero(4);
  x[3] = -0.3;
  y[3] = 0.6;
  // Radial pair through the center: sup at the pole nearest y.
  EXPECT_NEAR(cassinian(d, x, y).value, 0.9 / (1.3 * 0.4), 1e-12);
}

TEST(DistanceRatio, Examples) {
  EXPECT_NEAR(distance_ratio_j(Domain::unit_ball(2), make_point({0, 0}), make_point({0.5, 0})).value, std::log(2.0),
              1e-15);
  EXPECT_EQ(distance_ratio_j(Domain::unit_ball(3), axis(3, 0.3), axis(3, 0.3)).value, 0.0);
  EXPECT_NEAR(distance_ratio_j(Domain::punctured({make_point({0, 0})}), make_point({1, 0}), make_point({2, 0})).value,
              std::log(2.0), 1e-15);
  EXPECT_THROW(distance_ratio_j(Domain::unit_ball(2), make_point({2, 0}), make_point({0, 0})), DomainViolation);
}

TEST(HyperbolicBall, Examples) {
  EXPECT_EQ(hyperbolic_ball(make_point({0, 0}), make_point({0, 0})).value, 0.0);
  EXPECT_NEAR(hyperbolic_ball(make_point({0, 0}), make_point({0.5, 0})).value, std::log(3.0), 1e-15);
  EXPECT_THROW(hyperbolic_ball(make_point({1, 0}), make_point({0, 0})), DomainViolation);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Point x = rng.in_ball(3, 1.0), y = rng.in_ball(3, 1.0);
    EXPECT_NEAR(hyperbolic_ball(x, y).value, hyperbolic_ball(y, x).value, 1e-12 * hyperbolic_ball(x, y).value);
    // rho(0, x) = log((1+|x|)/(1-|x|)).
    const double r = x.norm();
    EXPECT_NEAR(hyperbolic_ball(Point::Zero(3), x).value, std::log((1 + r) / (1 - r)), 1e-12 * (1 + std::log((1 + r) / (1 - r))));
  }
}

TEST(HyperbolicHalfPlane, Examples) {
  EXPECT_NEAR(hyperbolic_halfplane(make_point({0, 1}), make_point({0, 2})).value, std::log(2.0), 1e-15);
  EXPECT_EQ(hyperbolic_halfplane(make_point({3, 1}), make_point({3, 1})).value, 0.0);
  EXPECT_THROW(hyperbolic_halfplane(make_point({0, 0}), make_point({0, 1})), DomainViolation);
  EXPECT_THROW(hyperbolic_halfplane(make_point({0, 1, 1}), make_point({0, 1, 2})), InvalidArgument);
}

TEST(HyperbolicHalfPlane, TanhHalfEqualsP) {
  Rng rng(9);
  const Domain h = Domain::upper_half_space(2);
  for (int i = 0; i < 1000; ++i) {
    const Point z1 = make_point({rng.uniform(-5, 5), rng.uniform(1e-3, 5)});
    const Point z2 = make_point({rng.uniform(-5, 5), rng.uniform(1e-3, 5)});
    EXPECT_NEAR(std::tanh(hyperbolic_halfplane(z1, z2).value / 2), p_quantity(h, z1, z2).value, 1e-12);
  }
}

TEST(VisualAngle, DiskSymmetricPair) {
  const auto v = visual_angle(Domain::unit_ball(2), make_point({0.5, 0}), make_point({-0.5, 0}));
  EXPECT_NEAR(v.value, std::acos(0.6), 1e-12);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_NEAR(std::abs(v.witness->point[1]), 1.0, 1e-9);
}

TEST(VisualAngle, DiskFromCenter) {
  // Zoomed brute-force scan reference.
  EXPECT_NEAR(visual_angle(Domain::unit_ball(2), make_point({0, 0}), make_point({0.5, 0})).value,
              0.52359877559829893, 1e-10);
}

TEST(VisualAngle, HalfPlane) {
  // Dense line-scan reference (1e-5 mesh over [-20, 20]).
  EXPECT_NEAR(visual_angle(Domain::upper_half_space(2), make_point({0, 1}), make_point({1, 2})).value,
              0.78539816339744839, 1e-9);
}

TEST(VisualAngle, ZeroForIdenticalPoints) {
  EXPECT_EQ(visual_angle(Domain::ball(make_point({1, 1}), 2.0), make_point({1, 2}), make_point({1, 2})).value, 0.0);
}

TEST(PQuantity, Examples) {
  EXPECT_NEAR(p_quantity(Domain::unit_ball(2), make_point({0, 0}), make_point({0.5, 0})).value, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(p_quantity(Domain::unit_ball(2), make_point({0.1, 0}), make_point({0.1, 0})).value, 0.0);
  EXPECT_NEAR(p_quantity(Domain::upper_half_space(2), make_point({0, 1}), make_point({0, 2})).value, 1.0 / 3.0,
              1e-15);
}

TEST(Inequality, ConfigValidation) {
  EXPECT_NO_THROW((InequalityConfig{0.0, 1e-10}.validate()));
  EXPECT_THROW((InequalityConfig{1.0, 1e-10}.validate()), InvalidArgument);
  EXPECT_THROW((InequalityConfig{-0.1, 1e-10}.validate()), InvalidArgument);
  EXPECT_THROW((InequalityConfig{0.5, 0.0}.validate()), InvalidArgument);
}

struct Sampler {
  Rng rng{31};
  Point inside(const Domain& d) {
    const int n = d.dimension();
    for (;;) {
      Point x;
      if (const auto* b = d.as_ball()) x = b->center + rng.in_ball(n, b->radius);
      else x = rng.in_ball(n, 3.0);
      if (contains(d, x) && boundary_distance(d, x) > 1e-6) return x;
    }
  }
};

std::vector<Domain> test_domains() {
  return {Domain::unit_ball(2), Domain::unit_ball(3), Domain::ball(make_point({1, -1, 0.5}), 2.0),
          Domain::upper_half_space(2), Domain::half_space(make_point({0.6, 0, 0.8}), -0.5),
          Domain::punctured({make_point({0, 0}), make_point({1, 1}), make_point({-1, 2})})};
}

TEST(Properties, Symmetry) {
  Sampler s;
  for (const auto& d : test_domains()) {
    const int pairs = d.kind() == DomainKind::punctured ? 1000 : 150;
    for (int i = 0; i < pairs; ++i) {
      const Point x = s.inside(d), y = s.inside(d);
      const double c1 = cassinian(d, x, y).value, c2 = cassinian(d, y, x).value;
      EXPECT_NEAR(c1, c2, 1e-12 * c1);
      const double v1 = visual_angle(d, x, y).value, v2 = visual_angle(d, y, x).value;
      EXPECT_NEAR(v1, v2, 1e-12 * v1);
      EXPECT_EQ(distance_ratio_j(d, x, y).value, distance_ratio_j(d, y, x).value);
      EXPECT_NEAR(p_quantity(d, x, y).value, p_quantity(d, y, x).value, 1e-15);
    }
  }
}

TEST(Properties, TriangleInequality) {
  Sampler s;
  for (const auto& d : {Domain::unit_ball(2), Domain::unit_ball(3),
                        Domain::punctured({make_point({0, 0}), make_point({1, 0.5})})}) {
    const int triples = d.kind() == DomainKind::punctured ? 1000 : 300;
    for (int i = 0; i < triples; ++i) {
      const Point x = s.inside(d), y = s.inside(d), z = s.inside(d);
      const double xz = cassinian(d, x, z).value;
      const double sum = cassinian(d, x, y).value + cassinian(d, y, z).value;
      EXPECT_LE(xz, sum + 1e-10 * std::max(1.0, sum));
    }
  }
}

TEST(Properties, SimilarityCovariance) {
  Sampler s;
  Rng rng(77);
  for (const auto& d : test_domains()) {
    for (int i = 0; i < 40; ++i) {
      const int n = d.dimension();
      const Point x = s.inside(d), y = s.inside(d);
      const Point shift = rng.in_ball(n, 5.0);
      const double lambda = rng.uniform(0.2, 5.0);
      const Domain moved = d.transformed(1.0, shift);
      const Domain scaled = d.transformed(lambda, Point::Zero(n));
      const double c = cassinian(d, x, y).value;
      EXPECT_NEAR(cassinian(moved, x + shift, y + shift).value, c, 1e-9 * c);
      EXPECT_NEAR(cassinian(scaled, lambda * x, lambda * y).value, c / lambda, 1e-9 * c / lambda);
      const double v = visual_angle(d, x, y).value;
      EXPECT_NEAR(visual_angle(scaled, lambda * x, lambda * y).value, v, 1e-9 * v);
      const double j = distance_ratio_j(d, x, y).value;
      EXPECT_NEAR(distance_ratio_j(scaled, lambda * x, lambda * y).value, j, 1e-12 * (1 + j));
      const double p = p_quantity(d, x, y).value;
      EXPECT_NEAR(p_quantity(moved, x + shift, y + shift).value, p, 1e-12);
    }
  }
}

TEST(Properties, OrthogonalInvarianceOnUnitBall) {
  Sampler s;
  Rng rng(41);
  for (int n : {2, 3}) {
    const Domain d = Domain::unit_ball(n);
    for (int i = 0; i < 100; ++i) {
      const Eigen::MatrixXd q = random_orthogonal(n, rng);
      const Point x = s.inside(d), y = s.inside(d);
      const Point qx = q * x, qy = q * y;
      const double c = cassinian(d, x, y).value;
      EXPECT_NEAR(cassinian(d, qx, qy).value, c, 1e-10 * std::max(1.0, c));
      EXPECT_NEAR(visual_angle(d, qx, qy).value, visual_angle(d, x, y).value, 1e-10);
      EXPECT_NEAR(distance_ratio_j(d, qx, qy).value, distance_ratio_j(d, x, y).value, 1e-10);
      EXPECT_NEAR(hyperbolic_ball(qx, qy).value, hyperbolic_ball(x, y).value, 1e-10);
      EXPECT_NEAR(p_quantity(d, qx, qy).value, p_quantity(d, x, y).value, 1e-10);
    }
  }
}

TEST(Properties, WitnessConsistency) {
  Sampler s;
  for (const auto& d : test_domains()) {
    for (int i = 0; i < 100; ++i) {
      const Point x = s.inside(d), y = s.inside(d);
      const auto c = cassinian(d, x, y);
      ASSERT_TRUE(c.witness.has_value());
      EXPECT_NEAR(cassinian_objective(x, y, c.witness->point), c.value,
                  std::max(c.witness->gap_estimate, 1e-13 * c.value));
      EXPECT_GE(c.witness->gap_estimate, 0.0);
      const auto v = visual_angle(d, x, y);
      ASSERT_TRUE(v.witness.has_value());
      EXPECT_NEAR(visual_objective(x, y, v.witness->point), v.value, std::max(v.witness->gap_estimate, 1e-13));
      if (d.kind() != DomainKind::punctured) {
        EXPECT_LE(boundary_distance(d, c.witness->point), 1e-12 * (1 + c.witness->point.norm()));
        EXPECT_LE(boundary_distance(d, v.witness->point), 1e-12 * (1 + v.witness->point.norm()));
      }
    }
  }
}

TEST(Properties, NearBoundaryPairsStayConsistent) {
  const Domain d = Domain::unit_ball(2);
  // High-precision references for these exact double inputs.
  const double refs[] = {799.35984199572087057, 999999.50002331766834, 1000000090.7249821062};
  int k = 0;
  for (double gap : {1e-3, 1e-6, 1e-9}) {
    const Point x = make_point({1 - gap, 0});
    const Point y = make_point({(1 - gap) * std::cos(1e-3), (1 - gap) * std::sin(1e-3)});
    const double c = cassinian(d, x, y).value;
    EXPECT_NEAR(c, refs[k++], 1e-13 * c);
    const double c_fast = cassinian(d, x, y, fast_slice_options()).value;
    EXPECT_NEAR(c, c_fast, 1e-12 * c);
    EXPECT_NEAR(c, cassinian(d, y, x).value, 1e-12 * c);
    // c <= 1/delta(x) + 1/delta(y) on any domain.
    EXPECT_LE(c, 2.0 / gap);
  }
}

TEST(OracleEquivalence, BallAgainstBruteForce) {
  Rng rng(2024);
  for (int n : {2, 3}) {
    const Domain d = Domain::unit_ball(n);
    for (int i = 0; i < 10; ++i) {
      const Point x = rng.in_ball(n, 1.0), y = rng.in_ball(n, 1.0);
      const double c_ref = oracle::cassinian_unit_ball(x, y);
      const double v_ref = oracle::visual_angle_unit_ball(x, y);
      EXPECT_NEAR(cassinian(d, x, y).value, c_ref, 1e-6 * c_ref);
      EXPECT_NEAR(visual_angle(d, x, y).value, v_ref, 1e-6 * v_ref);
      // The solver maximizes, so a correct oracle can never exceed it.
      EXPECT_LE(c_ref, cassinian(d, x, y).value * (1 + 1e-12));
    }
  }
}

}  // namespace
}  // namespace cassini
