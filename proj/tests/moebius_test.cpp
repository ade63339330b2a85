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

#include <gtest/gtest.h>

#include "cassini/moebius.hpp"

namespace cassini {
namespace {

TEST(Inversion, HalfOnAxis) {
  const SphereInversion s = inversion_sending_to_zero(make_point({0.5, 0}));
  EXPECT_NEAR((s.center - make_point({2, 0})).norm(), 0.0, 1e-15);
  EXPECT_NEAR(s.radius, std::sqrt(3.0), 1e-15);
  EXPECT_LE(apply(s, make_point({0.5, 0})).norm(), 1e-15);
  EXPECT_NEAR((apply(s, make_point({-0.5, 0})) - make_point({0.8, 0})).norm(), 0.0, 1e-15);
}

TEST(Inversion, SwapsZeroAndA) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    Point a = rng.in_ball(n, 1.0);
    const SphereInversion s = inversion_sending_to_zero(a);
    EXPECT_LE(apply(s, a).norm(), 1e-12);
    EXPECT_LE((apply(s, Point::Zero(n)) - a).norm(), 1e-12);
    EXPECT_NEAR(s.radius * s.radius, s.center.squaredNorm() - 1.0, 1e-12 * s.center.squaredNorm());
  }
}

TEST(Inversion, Errors) {
  EXPECT_THROW(inversion_sending_to_zero(make_point({0, 0})), InvalidArgument);
  EXPECT_THROW(inversion_sending_to_zero(make_point({1, 0})), DomainViolation);
  EXPECT_THROW(inversion_sending_to_zero(make_point({0.8, 0.8})), DomainViolation);
  const SphereInversion s = inversion_sending_to_zero(make_point({0.5, 0}));
  EXPECT_THROW(apply(s, make_point({2, 0})), DomainViolation);
  EXPECT_THROW(apply(s, make_point({2, 1e-10})), DomainViolation);
  EXPECT_NO_THROW(apply(s, make_point({2, 1e-8})));
}

TEST(Inversion, Involution) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const SphereInversion s = inversion_sending_to_zero(rng.in_ball(3, 0.95));
    const Point x = rng.in_ball(3, 1.0);
    EXPECT_LE((apply(s, apply(s, x)) - x).norm(), 1e-10);
  }
}

TEST(InversionIdentity, Examples) {
  const SphereInversion s = inversion_sending_to_zero(make_point({0.5, 0}));
  EXPECT_EQ(check_inversion_identity(s, make_point({0.1, 0.2}), make_point({0.1, 0.2})), 0.0);
  // sigma swaps 0 and a: both sides equal |a| = 0.5.
  EXPECT_LE(check_inversion_identity(s, make_point({0, 0}), make_point({0.5, 0})), 1e-15);
  EXPECT_NEAR((apply(s, make_point({0, 0})) - apply(s, make_point({0.5, 0}))).norm(), 0.5, 1e-15);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Point x = rng.in_ball(2, 1.0), y = rng.in_ball(2, 1.0);
    EXPECT_LE(check_inversion_identity(s, x, y), 1e-10 * (1 + x.norm() + y.norm()));
  }
}

TEST(Map, IdentityFactor) {
  MoebiusMap m;
  m.factors.emplace_back(Eigen::MatrixXd::Identity(3, 3));
  const Point x = make_point({0.1, -0.2, 0.3});
  EXPECT_EQ(apply(m, x), x);
  EXPECT_NO_THROW(validate(m, 3));
  EXPECT_THROW(validate(m, 2), InvalidArgument);
}

TEST(Map, ValidateRejectsBadFactors) {
  MoebiusMap skew;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(2, 2);
  q(0, 1) = 1e-6;
  skew.factors.emplace_back(q);
  EXPECT_THROW(validate(skew, 2), InvalidArgument);
  MoebiusMap bad;
  bad.factors.emplace_back(SphereInversion{make_point({2, 0}), 1.0});
  EXPECT_THROW(validate(bad, 2), InvalidArgument);
}

TEST(Map, FactorsApplyInSequenceOrder) {
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -1, 1, 0;
  const SphereInversion s = inversion_sending_to_zero(make_point({0.5, 0}));
  MoebiusMap m;
  m.factors.emplace_back(s);
  m.factors.emplace_back(rot);
  // sigma first sends 0.5 e1 to 0, then the rotation fixes 0.
  EXPECT_LE(apply(m, make_point({0.5, 0})).norm(), 1e-15);
  // sigma(0) = 0.5 e1, then rotate to 0.5 e2.
  EXPECT_LE((apply(m, make_point({0, 0})) - make_point({0, 0.5})).norm(), 1e-15);
}

TEST(Map, RandomAutomorphismsPreserveBallAndSendZeroToA) {
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + i % 2;
    Point a;
    const MoebiusMap m = random_ball_automorphism(n, 0.9, rng, &a);
    EXPECT_NO_THROW(validate(m, n));
    EXPECT_LE((apply(m, Point::Zero(n)) - a).norm(), 1e-12);
    for (int k = 0; k < 10; ++k) EXPECT_LT(apply(m, rng.in_ball(n, 1.0)).norm(), 1.0);
    const Point eta = rng.unit_vector(n);
    EXPECT_NEAR(apply(m, eta).norm(), 1.0, 1e-12);
  }
}

TEST(Map, CompositeWithSigmaIsIsometry) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const MoebiusMap m = random_ball_automorphism(3, 0.9, rng);
    const Point x = rng.in_ball(3, 1.0), y = rng.in_ball(3, 1.0);
    EXPECT_LE(composite_isometry_residual(m, x, y), 1e-10);
  }
}

TEST(Map, BoundaryFactorSandwich) {
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    Point a;
    const MoebiusMap m = random_ball_automorphism(2, 0.9, rng, &a);
    const DistortionBounds b = distortion_bounds(a);
    for (int k = 0; k < 10; ++k) {
      const double f = boundary_distortion_factor(m, rng.unit_vector(2));
      EXPECT_GE(f, b.lower - 1e-10);
      EXPECT_LE(f, b.upper + 1e-10 * b.upper);
    }
  }
}

TEST(RandomOrthogonal, IsOrthogonal) {
  Rng rng(7);
  for (int n = 2; n <= 6; ++n) EXPECT_LE(orthogonality_residual(random_orthogonal(n, rng)), 1e-13);
}

TEST(DistortionBounds, Examples) {
  const auto zero = distortion_bounds(make_point({0, 0}));
  EXPECT_EQ(zero.lower, 1.0);
  EXPECT_EQ(zero.upper, 1.0);
  const auto half = distortion_bounds(make_point({0.5, 0}));
  EXPECT_NEAR(half.lower, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(half.upper, 3.0, 1e-15);
  const auto nine = distortion_bounds(make_point({0.9, 0}));
  EXPECT_NEAR(nine.lower, 1.0 / 19.0, 1e-15);
  EXPECT_NEAR(nine.upper, 19.0, 1e-13);
  EXPECT_THROW(distortion_bounds(make_point({1, 0})), DomainViolation);
}

TEST(Sharpness, HalfAndHalf) {
  const auto w = sharpness_witness(make_point({0.5, 0}), -0.5);
  EXPECT_LE((w.image_x - make_point({0.5, 0})).norm(), 1e-15);
  EXPECT_LE((w.image_y - make_point({0.8, 0})).norm(), 1e-15);
  EXPECT_LE((w.image_y - w.expected_image_y).norm(), 1e-15);
  EXPECT_NEAR(w.c_before, 1.0, 1e-12);
  EXPECT_NEAR(w.c_after, 3.0, 1e-12);
  EXPECT_NEAR(w.ratio, 3.0, 1e-12);
}

TEST(Sharpness, RatioIndependentOfT) {
  for (int n : {2, 3}) {
    Point a = Point::Zero(n);
    a[0] = 0.9;
    for (double t : {-0.01, -0.1, -0.5, -0.99}) {
      const auto w = sharpness_witness(a, t);
      EXPECT_NEAR(w.ratio, 19.0, 1e-9) << "t=" << t;
      EXPECT_NEAR(w.c_before, -t / (1 + t), 1e-12 * (-t / (1 + t)));
    }
  }
}

TEST(Sharpness, Errors) {
  EXPECT_THROW(sharpness_witness(make_point({0.5, 0.1}), -0.5), InvalidArgument);
  EXPECT_THROW(sharpness_witness(make_point({-0.5, 0}), -0.5), InvalidArgument);
  EXPECT_THROW(sharpness_witness(make_point({0.5, 0}), 0.0), InvalidArgument);
  EXPECT_THROW(sharpness_witness(make_point({0.5, 0}), -1.0), InvalidArgument);
}

TEST(DistortionRatio, OrthogonalMapPreservesC) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    MoebiusMap m;
    m.factors.emplace_back(random_orthogonal(3, rng));
    EXPECT_NEAR(distortion_ratio(m, rng.in_ball(3, 1.0), rng.in_ball(3, 1.0)), 1.0, 1e-10);
  }
}

TEST(DistortionRatio, SigmaOnWitnessPair) {
  MoebiusMap m;
  m.factors.emplace_back(inversion_sending_to_zero(make_point({0.5, 0})));
  EXPECT_NEAR(distortion_ratio(m, make_point({0, 0}), make_point({-0.5, 0})), 3.0, 1e-12);
  EXPECT_THROW(distortion_ratio(m, make_point({0.1, 0}), make_point({0.1, 0})), InvalidArgument);
}

TEST(DistortionRatio, WithinBoundsOnRandomSamples) {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 2;
    Point a;
    const MoebiusMap m = random_ball_automorphism(n, 0.9, rng, &a);
    const DistortionBounds b = distortion_bounds(a);
    const double r = distortion_ratio(m, rng.in_ball(n, 1.0), rng.in_ball(n, 1.0));
    EXPECT_GE(r, b.lower - 1e-8);
    EXPECT_LE(r, b.upper + 1e-8);
  }
}

}  // namespace
}  // namespace cassini
