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

// Domain descriptors for the three canonical proper subdomains of R^n
// (ball, half-space, finitely punctured space), with distance to the
// boundary, containment, and boundary sampling.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "cassini/errors.hpp"
#include "cassini/random.hpp"

namespace cassini {

using Point = Eigen::VectorXd;

// Metric operations reject points closer than this to the boundary.
inline constexpr double kInteriorTolerance = 1e-12;
// Path vertices must keep at least this clearance from the boundary.
inline constexpr double kPathClearance = 1e-9;

inline Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

// k-th standard basis vector of R^n.
inline Point unit_axis(int n, int k) {
  Point e = Point::Zero(n);
  e[k] = 1.0;
  return e;
}

inline bool lexicographically_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

inline void check_finite(const Point& x, std::string_view what) {
  if (x.size() < 2) throw InvalidArgument(std::string(what) + ": dimension must be at least 2");
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": coordinates must be finite");
}

struct Ball {
  Point center;
  double radius = 1.0;
};

// The open half-space { x : <x, normal> > offset }.
struct HalfSpace {
  Point normal;
  double offset = 0.0;
};

// R^n minus a finite, nonempty set of points.
struct PuncturedSpace {
  std::vector<Point> punctures;
};

enum class DomainKind { ball, halfspace, punctured };

inline std::string_view to_string(DomainKind k) {
  switch (k) {
    case DomainKind::ball: return "ball";
    case DomainKind::halfspace: return "halfspace";
    case DomainKind::punctured: return "punctured";
  }
  return "unknown";
}

class Domain {
 public:
  using Variant = std::variant<Ball, HalfSpace, PuncturedSpace>;

  static Domain ball(Point center, double radius) {
    check_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be positive");
    return Domain(Ball{std::move(center), radius});
  }

  static Domain unit_ball(int n) { return ball(Point::Zero(n), 1.0); }

  static Domain half_space(Point unit_normal, double offset) {
    check_finite(unit_normal, "half-space normal");
    if (std::abs(unit_normal.norm() - 1.0) > 1e-12) throw InvalidArgument("half-space normal must have unit length");
    if (!std::isfinite(offset)) throw InvalidArgument("half-space offset must be finite");
    return Domain(HalfSpace{std::move(unit_normal), offset});
  }

  // { x : x_n > 0 }; for n = 2 this is the upper half-plane.
  static Domain upper_half_space(int n) { return half_space(unit_axis(n, n - 1), 0.0); }

  static Domain punctured(std::vector<Point> punctures) {
    if (punctures.empty()) throw InvalidArgument("punctured space needs at least one puncture");
    const auto n = punctures.front().size();
    for (std::size_t i = 0; i < punctures.size(); ++i) {
      check_finite(punctures[i], "puncture");
      if (punctures[i].size() != n) throw InvalidArgument("punctures have mixed dimensions");
      for (std::size_t j = 0; j < i; ++j) {
        if (punctures[i] == punctures[j]) throw InvalidArgument("punctures must be pairwise distinct");
      }
    }
    return Domain(PuncturedSpace{std::move(punctures)});
  }

  DomainKind kind() const { return static_cast<DomainKind>(shape_.index()); }

  int dimension() const {
    return std::visit(
        [](const auto& s) -> int {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(s.center.size());
          else if constexpr (std::is_same_v<T, HalfSpace>) return static_cast<int>(s.normal.size());
          else return static_cast<int>(s.punctures.front().size());
        },
        shape_);
  }

  bool is_bounded() const { return kind() == DomainKind::ball; }

  // Euclidean diameter; infinite for unbounded domains.
  double diameter() const {
    if (const auto* b = as_ball()) return 2.0 * b->radius;
    return std::numeric_limits<double>::infinity();
  }

  const Variant& shape() const { return shape_; }
  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }
  const HalfSpace* as_half_space() const { return std::get_if<HalfSpace>(&shape_); }
  const PuncturedSpace* as_punctured() const { return std::get_if<PuncturedSpace>(&shape_); }

  // Image under x -> scale * x + shift. Used by covariance tests and nested-domain checks.
  Domain transformed(double scale, const Point& shift) const {
    return std::visit(
        [&](const auto& s) -> Domain {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return Domain::ball(scale * s.center + shift, scale * s.radius);
          } else if constexpr (std::is_same_v<T, HalfSpace>) {
            return Domain::half_space(s.normal, scale * s.offset + s.normal.dot(shift));
          } else {
            std::vector<Point> moved;
            moved.reserve(s.punctures.size());
            for (const auto& p : s.punctures) moved.push_back(scale * p + shift);
            return Domain::punctured(std::move(moved));
          }
        },
        shape_);
  }

 private:
  explicit Domain(Variant v) : shape_(std::move(v)) {}
  Variant shape_;
};

inline void require_dimension(const Domain& d, const Point& x) {
  if (x.size() != d.dimension()) {
    throw InvalidArgument("dimension mismatch: point has " + std::to_string(x.size()) + " coordinates, domain is " +
                          std::to_string(d.dimension()) + "-dimensional");
  }
  if (!x.allFinite()) throw InvalidArgument("point coordinates must be finite");
}

namespace detail {

// Error-free transformations for double-double accumulation.
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& err) {
  p = a * b;
  err = std::fma(a, b, -p);
}

}  // namespace detail

// radius - |x - center|, signed, with the squared norm accumulated in
// double-double so points near the sphere keep their full relative clearance.
inline double ball_clearance(const Ball& b, const Point& x) {
  double hi = 0.0, lo = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = x[i] - b.center[i];
    double p, pe, s, se;
    detail::two_prod(d, d, p, pe);
    detail::two_sum(hi, p, s, se);
    hi = s;
    lo += se + pe;
  }
  double r2, r2e, h, he;
  detail::two_prod(b.radius, b.radius, r2, r2e);
  detail::two_sum(r2, -hi, h, he);
  const double diff = h + (he + r2e - lo);  // radius^2 - |x - center|^2
  return diff / (b.radius + std::sqrt(hi + lo));
}

// <x, normal> - offset, signed, with a compensated dot product.
inline double halfspace_height(const HalfSpace& h, const Point& x) {
  double hi = -h.offset, lo = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double p, pe, s, se;
    detail::two_prod(x[i], h.normal[i], p, pe);
    detail::two_sum(hi, p, s, se);
    hi = s;
    lo += se + pe;
  }
  return hi + lo;
}

// Nearest puncture index and its distance.
inline std::pair<std::size_t, double> nearest_puncture(const PuncturedSpace& s, const Point& x) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.punctures.size(); ++i) {
    const double d2 = (x - s.punctures[i]).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {best, std::sqrt(best_d2)};
}

// delta_D(x): Euclidean distance from x to the boundary. Exterior points get
// their (positive) distance to the boundary as well.
inline double boundary_distance(const Domain& d, const Point& x) {
  require_dimension(d, x);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return std::abs(ball_clearance(s, x));
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return std::abs(halfspace_height(s, x));
        } else {
          return nearest_puncture(s, x).second;
        }
      },
      d.shape());
}

// Strict interior membership.
inline bool contains(const Domain& d, const Point& x) {
  require_dimension(d, x);
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return ball_clearance(s, x) > 0.0;
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return halfspace_height(s, x) > 0.0;
        } else {
          return std::none_of(s.punctures.begin(), s.punctures.end(), [&](const Point& p) { return p == x; });
        }
      },
      d.shape());
}

// Throws DomainViolation unless x is inside d with delta_D(x) >= clearance.
inline double require_interior(const Domain& d, const Point& x, double clearance = kInteriorTolerance) {
  if (!contains(d, x)) throw DomainViolation("point is outside the domain");
  const double delta = boundary_distance(d, x);
  if (delta < clearance) throw DomainViolation("point is too close to the boundary");
  return delta;
}

// A bounded disk of the boundary hyperplane, used wherever a half-space
// boundary has to be sampled.
struct HyperplanePatch {
  Point center;  // lies on the hyperplane
  double radius = 1.0;
};

inline Point project_to_hyperplane(const HalfSpace& h, const Point& x) {
  return x - (x.dot(h.normal) - h.offset) * h.normal;
}

// Default patch for a query pair: radius 10 (1 + |x| + |y|) around the
// projection of the midpoint.
inline HyperplanePatch default_patch(const HalfSpace& h, const Point& x, const Point& y) {
  return {project_to_hyperplane(h, 0.5 * (x + y)), 10.0 * (1.0 + x.norm() + y.norm())};
}

// Orthonormal basis (as columns) of the hyperplane orthogonal to `normal`.
inline Eigen::MatrixXd hyperplane_basis(const Point& normal) {
  const int n = static_cast<int>(normal.size());
  Eigen::MatrixXd basis(n, n - 1);
  int filled = 0;
  for (int k = 0; k < n && filled < n - 1; ++k) {
    Point v = unit_axis(n, k) - normal[k] * normal;
    for (int j = 0; j < filled; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    const double len = v.norm();
    if (len > 1e-8) basis.col(filled++) = v / len;
  }
  return basis;
}

// m deterministic points on the boundary of d. Half-spaces sample the given
// patch uniformly; punctured spaces return their punctures.
inline std::vector<Point> boundary_sample(const Domain& d, int m, std::uint64_t seed,
                                          const HyperplanePatch* patch = nullptr) {
  if (m < 1) throw InvalidArgument("boundary_sample needs m >= 1");
  const int n = d.dimension();
  Rng rng(seed);
  std::vector<Point> out;
  if (const auto* b = d.as_ball()) {
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.push_back(b->center + b->radius * rng.unit_vector(n));
  } else if (const auto* h = d.as_half_space()) {
    if (patch == nullptr) throw InvalidArgument("half-space boundary sampling needs a patch");
    const Eigen::MatrixXd basis = hyperplane_basis(h->normal);
    const Point origin = project_to_hyperplane(*h, patch->center);
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd dir = rng.unit_vector(n - 1);
      const double r = patch->radius * std::pow(rng.uniform(), 1.0 / (n - 1));
      out.push_back(origin + basis * (r * dir));
    }
  } else {
    out = d.as_punctured()->punctures;
  }
  return out;
}

// A boundary point at which a supremum (or infimum) is approximately attained.
struct BoundaryWitness {
  Point point;
  double value = 0.0;
  double gap_estimate = 0.0;
  long evaluations = 0;
};

}  // namespace cassini
