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

// Moebius self-maps of the unit ball, built from orthogonal matrices and
// inversions in spheres orthogonal to the unit sphere, and the sharp
// distortion of the Cassinian metric under them:
//
//   (1-|a|)/(1+|a|) c(x,y) <= c(phi x, phi y) <= (1+|a|)/(1-|a|) c(x,y),  a = phi(0).

#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cassini/core_geometry.hpp"
#include "cassini/metrics.hpp"
#include "cassini/random.hpp"

namespace cassini {

// Points closer than this to an inversion center are rejected.
inline constexpr double kInversionCenterGuard = 1e-9;

// Inversion x -> center + (radius / |x - center|)^2 (x - center).
struct SphereInversion {
  Point center;
  double radius = 1.0;
};

// Factors act in sequence order: factors[0] is applied first.
struct MoebiusMap {
  using Factor = std::variant<Eigen::MatrixXd, SphereInversion>;
  std::vector<Factor> factors;
};

inline Point apply(const SphereInversion& s, const Point& x) {
  if (x.size() != s.center.size()) throw InvalidArgument("dimension mismatch in inversion");
  const Point d = x - s.center;
  const double len2 = d.squaredNorm();
  if (len2 < kInversionCenterGuard * kInversionCenterGuard) {
    throw DomainViolation("point maps to infinity under the inversion");
  }
  return s.center + (s.radius * s.radius / len2) * d;
}

inline Point apply(const MoebiusMap& m, const Point& x) {
  Point y = x;
  for (const auto& f : m.factors) {
    if (const auto* q = std::get_if<Eigen::MatrixXd>(&f)) {
      if (q->cols() != y.size()) throw InvalidArgument("dimension mismatch in orthogonal factor");
      y = (*q) * y;
    } else {
      y = apply(std::get<SphereInversion>(f), y);
    }
  }
  return y;
}

inline double orthogonality_residual(const Eigen::MatrixXd& q) {
  return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

// Checks the factor invariants: square orthogonal matrices (Q^T Q = I within
// 1e-12) and inversions whose sphere is orthogonal to the unit sphere
// (radius^2 = |center|^2 - 1 within 1e-12).
inline void validate(const MoebiusMap& m, int n) {
  for (const auto& f : m.factors) {
    if (const auto* q = std::get_if<Eigen::MatrixXd>(&f)) {
      if (q->rows() != n || q->cols() != n) throw InvalidArgument("orthogonal factor has wrong shape");
      if (orthogonality_residual(*q) > 1e-12) throw InvalidArgument("factor is not orthogonal");
    } else {
      const auto& s = std::get<SphereInversion>(f);
      if (s.center.size() != n) throw InvalidArgument("inversion has wrong dimension");
      const double c2 = s.center.squaredNorm();
      if (!(c2 > 1.0) || std::abs(s.radius * s.radius - (c2 - 1.0)) > 1e-12 * c2) {
        throw InvalidArgument("inversion sphere is not orthogonal to the unit sphere");
      }
    }
  }
}

// The inversion sigma with sigma(a) = 0 and sigma(B^n) = B^n: center
// a* = a/|a|^2 and radius sqrt(|a*|^2 - 1) = sqrt(1 - |a|^2)/|a|.
inline SphereInversion inversion_sending_to_zero(const Point& a) {
  check_finite(a, "a");
  const double na = a.norm();
  if (na == 0.0) throw InvalidArgument("a = 0: use an orthogonal map instead of an inversion");
  if (!(na < 1.0)) throw DomainViolation("|a| must be < 1");
  return SphereInversion{a / (na * na), std::sqrt((1.0 - na) * (1.0 + na)) / na};
}

// |sigma(x) - sigma(y)| - r^2 |x-y| / (|x-a*| |y-a*|), in absolute value.
inline double check_inversion_identity(const SphereInversion& s, const Point& x, const Point& y) {
  const double lhs = (apply(s, x) - apply(s, y)).norm();
  const double rhs = s.radius * s.radius * (x - y).norm() / ((x - s.center).norm() * (y - s.center).norm());
  return std::abs(lhs - rhs);
}

struct DistortionBounds {
  double lower = 1.0;
  double upper = 1.0;
};

// Sharp multiplicative bounds on c(phi x, phi y) / c(x, y) for phi(0) = a.
inline DistortionBounds distortion_bounds(const Point& a) {
  check_finite(a, "a");
  const double na = a.norm();
  if (!(na < 1.0)) throw DomainViolation("|a| must be < 1");
  return {(1.0 - na) / (1.0 + na), (1.0 + na) / (1.0 - na)};
}

// c(m x, m y) / c(x, y) on the unit ball.
inline double distortion_ratio(const MoebiusMap& m, const Point& x, const Point& y, const SolverOptions& opt = {}) {
  if (x == y) throw InvalidArgument("distortion ratio needs distinct points");
  const Domain ball = Domain::unit_ball(static_cast<int>(x.size()));
  const double before = cassinian(ball, x, y, opt).value;
  const double after = cassinian(ball, apply(m, x), apply(m, y), opt).value;
  return after / before;
}

// The pair attaining the upper bound: x = 0, y = t e1 mapped by the inversion
// sending a = |a| e1 to 0.
struct SharpnessWitness {
  Point x, y, image_x, image_y;
  Point expected_image_y;  // ((|a| - t) / (1 - |a| t)) e1
  double c_before = 0.0;
  double c_after = 0.0;
  double ratio = 0.0;
};

inline SharpnessWitness sharpness_witness(const Point& a, double t, const SolverOptions& opt = {}) {
  check_finite(a, "a");
  const int n = static_cast<int>(a.size());
  const double na = a.norm();
  if (!(na > 0.0 && na < 1.0) || !(a[0] > 0.0) || std::abs(a[0] - na) > 1e-15 * na) {
    throw InvalidArgument("a must lie on the open segment (0, e1)");
  }
  if (!(t > -1.0 && t < 0.0)) throw InvalidArgument("t must lie in (-1, 0)");
  const SphereInversion sigma = inversion_sending_to_zero(a);
  SharpnessWitness w;
  w.x = Point::Zero(n);
  w.y = t * unit_axis(n, 0);
  w.image_x = apply(sigma, w.x);
  w.image_y = apply(sigma, w.y);
  w.expected_image_y = ((na - t) / (1.0 - na * t)) * unit_axis(n, 0);
  const Domain ball = Domain::unit_ball(n);
  w.c_before = cassinian(ball, w.x, w.y, opt).value;
  w.c_after = cassinian(ball, w.image_x, w.image_y, opt).value;
  w.ratio = w.c_after / w.c_before;
  return w;
}

// Orthonormalized Gaussian matrix; reflections are allowed.
inline Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = rng.gaussian_vector(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  // Fix the sign ambiguity of QR so the distribution does not depend on it.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

// outer * sigma_b * inner with b chosen so that the map sends 0 to a.
inline MoebiusMap ball_automorphism(const Eigen::MatrixXd& outer, const Point& a, const Eigen::MatrixXd& inner) {
  MoebiusMap m;
  m.factors.emplace_back(inner);
  if (a.norm() > 0.0) m.factors.emplace_back(inversion_sending_to_zero(outer.transpose() * a));
  m.factors.emplace_back(outer);
  return m;
}

// Random U1 * sigma * U2 with phi(0) = a, |a| uniform in [0, max_norm].
inline MoebiusMap random_ball_automorphism(int n, double max_norm, Rng& rng, Point* a_out = nullptr) {
  if (!(max_norm >= 0.0 && max_norm < 1.0)) throw InvalidArgument("max_norm must lie in [0, 1)");
  const Eigen::MatrixXd inner = random_orthogonal(n, rng);
  const Eigen::MatrixXd outer = random_orthogonal(n, rng);
  const Point a = rng.uniform(0.0, max_norm) * rng.unit_vector(n);
  if (a_out != nullptr) *a_out = a;
  return ball_automorphism(outer, a, inner);
}

// | |sigma_a(phi x) - sigma_a(phi y)| - |x - y| | with a = phi(0); sigma_a o phi
// is orthogonal, so this vanishes up to rounding.
inline double composite_isometry_residual(const MoebiusMap& phi, const Point& x, const Point& y) {
  const Point a = apply(phi, Point::Zero(x.size()));
  if (a.norm() == 0.0) return std::abs((apply(phi, x) - apply(phi, y)).norm() - (x - y).norm());
  const SphereInversion s = inversion_sending_to_zero(a);
  return std::abs((apply(s, apply(phi, x)) - apply(s, apply(phi, y))).norm() - (x - y).norm());
}

// (|a*|^2 - 1) / |phi(eta) - a*|^2 for a boundary point eta; the pointwise
// distortion factor of the Cassinian objective.
inline double boundary_distortion_factor(const MoebiusMap& phi, const Point& eta) {
  const Point a = apply(phi, Point::Zero(eta.size()));
  if (a.norm() == 0.0) return 1.0;
  const SphereInversion s = inversion_sending_to_zero(a);
  return s.radius * s.radius / (apply(phi, eta) - s.center).squaredNorm();
}

}  // namespace cassini
