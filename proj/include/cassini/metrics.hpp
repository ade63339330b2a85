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

// Point-pair quantities of a proper subdomain D of R^n:
//
//   c_D(x,y) = sup_{p in dD} |x-y| / (|x-p| |p-y|)         Cassinian metric
//   j_D(x,y) = log(1 + |x-y| / min(d(x), d(y)))             distance ratio metric
//   rho      = hyperbolic metric of the unit ball / upper half-plane
//   v_D(x,y) = sup_{z in dD} angle(x, z, y)                 visual angle metric
//   p_D(x,y) = |x-y| / sqrt(|x-y|^2 + 4 d(x) d(y))
//
// where d = delta_D is the distance to the boundary.
//
// Boundary suprema over a sphere or hyperplane are solved in two stages. The
// first restricts the search to the 2-plane through x, y and the ball center
// (for half-spaces: the line through the projections of x and y), densely
// samples it and golden-refines the best brackets. The second runs a 64-start
// coordinate descent over the whole boundary. The better of the two is
// reported. For c_D the first stage is already exact: on the disk |q| <= 1 of
// that plane, log(|x-q|^2 |y-q|^2) is a sum of logs of positive affine
// functions of q, hence concave, so its minimum sits on the circle; any
// off-plane boundary point has the same objective as its projection.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "cassini/boundary_search.hpp"
#include "cassini/core_geometry.hpp"

namespace cassini {

enum class Method { closed_form, optimized, sampled };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::optimized: return "optimized";
    case Method::sampled: return "sampled";
  }
  return "unknown";
}

struct MetricValue {
  double value = 0.0;
  std::optional<BoundaryWitness> witness;
  Method method = Method::closed_form;
};

// The lambda of the small-norm inequalities (|x| v |y| <= lambda < 1).
struct InequalityConfig {
  double lambda_bound = 0.5;
  double tolerance = 1e-10;

  void validate() const {
    if (!(lambda_bound >= 0.0 && lambda_bound < 1.0)) throw InvalidArgument("lambda must lie in [0, 1)");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  }
};

struct SolverOptions {
  // Dense samples along the 2-plane (or line) slice, for c_D and v_D.
  int cassinian_samples = 1024;
  int visual_samples = 4096;
  // Golden-section stop, relative to the endpoints' clearance.
  double slice_tolerance = 1e-12;
  // Full-boundary multistart; starts = 0 disables the cross-check.
  search::DescentSchedule descent{};
  // Half-space boundary patch for the multistart; default_patch() if unset.
  std::optional<HyperplanePatch> patch;
};

// Slice-only evaluation, used where c_D is summed over many short chords.
inline SolverOptions fast_slice_options() {
  SolverOptions o;
  o.cassinian_samples = 64;
  o.descent.starts = 0;
  return o;
}

namespace detail {

// Angle at the origin between vectors a and b, accurate near 0 and pi.
inline double vector_angle(const Point& a, const Point& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return 2.0 * std::atan2((a / na - b / nb).norm(), (a / na + b / nb).norm());
}

inline double distance_to(const Point& a, const double* p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = a[i] - p[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Angle at p subtended by a and b (raw ambient coordinates of p).
inline double angle_at(const Point& a, const Point& b, const double* p) {
  const double na = distance_to(a, p), nb = distance_to(b, p);
  double diff = 0.0, sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double ua = (a[i] - p[i]) / na, ub = (b[i] - p[i]) / nb;
    diff += (ua - ub) * (ua - ub);
    sum += (ua + ub) * (ua + ub);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

inline double angle2(double ax, double ay, double bx, double by) {
  const double na = std::sqrt(ax * ax + ay * ay), nb = std::sqrt(bx * bx + by * by);
  ax /= na;
  ay /= na;
  bx /= nb;
  by /= nb;
  const double dx = ax - bx, dy = ay - by, sx = ax + bx, sy = ay + by;
  return 2.0 * std::atan2(std::sqrt(dx * dx + dy * dy), std::sqrt(sx * sx + sy * sy));
}

// Orthonormal frame (u, w) of a 2-plane through the origin containing a and b.
// When a, b and the origin are collinear the plane is spanned by their line
// and the first standard basis vector not parallel to it.
struct PlaneFrame {
  Point u, w;
};

inline PlaneFrame plane_through_origin(const Point& a, const Point& b) {
  const int n = static_cast<int>(a.size());
  const Point& lead = a.norm() >= b.norm() ? a : b;
  const Point& other = a.norm() >= b.norm() ? b : a;
  PlaneFrame f;
  f.u = lead / lead.norm();
  Point w = other - other.dot(f.u) * f.u;
  if (w.norm() > 1e-12 * std::max(1.0, other.norm())) {
    f.w = w / w.norm();
    return f;
  }
  for (int k = 0; k < n; ++k) {
    if (std::abs(f.u[k]) < 1.0 - 1e-12) {
      w = unit_axis(n, k) - f.u[k] * f.u;
      f.w = w / w.norm();
      return f;
    }
  }
  f.w = unit_axis(n, 1);
  return f;
}

// Polar data of a point inside the unit disk of a plane frame.
struct PolarPoint {
  double r = 0.0;      // |a|
  double theta = 0.0;  // angle in the frame
  double gap = 1.0;    // 1 - |a|, carried separately to avoid cancellation
  double pu = 0.0, pw = 0.0;
};

inline PolarPoint polar(const Point& a, const PlaneFrame& f, double gap) {
  PolarPoint p;
  p.pu = a.dot(f.u);
  p.pw = a.dot(f.w);
  p.r = std::hypot(p.pu, p.pw);
  p.theta = p.r > 0.0 ? std::atan2(p.pw, p.pu) : 0.0;
  p.gap = gap;
  return p;
}

// |a - e^{i theta}|^2 for a inside the unit circle.
inline double chord2(const PolarPoint& a, double theta) {
  const double s = std::sin(0.5 * (theta - a.theta));
  return a.gap * a.gap + 4.0 * a.r * s * s;
}

inline std::vector<double> circle_samples(int m, const PolarPoint& a, const PolarPoint& b) {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(m));
  const int focus = m / 4;
  const int uniform = m - (a.r > 0.0 ? focus : 0) - (b.r > 0.0 ? focus : 0);
  for (int i = 0; i < uniform; ++i) t.push_back(2.0 * std::numbers::pi * (i + 0.5) / uniform);
  // append_clustered_angles keeps t sorted.
  if (a.r > 0.0) search::append_clustered_angles(t, a.theta, a.gap, focus);
  if (b.r > 0.0) search::append_clustered_angles(t, b.theta, b.gap, focus);
  return t;
}

// Line slice of a half-space boundary through the projections of x and y.
struct LineSlice {
  Point origin;     // projection of x
  Point direction;  // unit, within the hyperplane
  double length = 0.0;  // |proj(x) - proj(y)|
  double hx = 0.0, hy = 0.0;  // heights of x and y
  double scale = 1.0;

  Point at(double s) const { return origin + s * direction; }
};

inline LineSlice line_slice(const HalfSpace& h, const Point& x, const Point& y) {
  LineSlice sl;
  sl.hx = halfspace_height(h, x);
  sl.hy = halfspace_height(h, y);
  sl.origin = project_to_hyperplane(h, x);
  const Point d = project_to_hyperplane(h, y) - sl.origin;
  sl.length = d.norm();
  sl.scale = std::max({sl.length, sl.hx, sl.hy});
  if (sl.length > 1e-14 * sl.scale) {
    sl.direction = d / sl.length;
  } else {
    sl.length = 0.0;
    sl.direction = hyperplane_basis(h.normal).col(0);
  }
  return sl;
}

inline std::vector<double> line_samples(int m, const LineSlice& sl) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(m));
  const int k = m / 3;
  search::append_clustered(s, 0.0, sl.hx, k);
  search::append_clustered(s, sl.length, sl.hy, k);
  search::append_clustered(s, 0.5 * sl.length, sl.scale, m - 2 * k);
  return s;
}

inline bool better_witness(double value, const Point& p, double best_value, const Point& best_point) {
  return value > best_value || (value == best_value && lexicographically_less(p, best_point));
}

// Supremum of a per-puncture objective over a finite boundary.
template <class G>
MetricValue finite_supremum(const PuncturedSpace& s, G&& objective) {
  BoundaryWitness w;
  w.value = -std::numeric_limits<double>::infinity();
  for (const auto& p : s.punctures) {
    const double v = objective(p);
    ++w.evaluations;
    if (w.point.size() == 0 || better_witness(v, p, w.value, w.point)) {
      w.value = v;
      w.point = p;
    }
  }
  return MetricValue{w.value, w, Method::closed_form};
}

enum class Objective { cassinian, visual_angle };

// Relative rounding error of the direct ambient-coordinate objective, which
// loses digits to cancellation when a query point is near the boundary
// (relative clearances gx, gy).
inline double noise_margin(double gx, double gy) {
  return 16.0 * std::numeric_limits<double>::epsilon() * (1.0 / gx + 1.0 / gy);
}

// The multistart candidate replaces the slice optimum only if it is better by
// more than the rounding noise of the direct objective; exact ties go to the
// lexicographically smaller point.
inline bool beats_slice(const search::MultistartResult& ms, const Point& slice_point, double slice_value,
                        double margin) {
  const double threshold = slice_value - margin * std::abs(slice_value);
  if (ms.value < threshold) return true;
  return ms.value == slice_value && margin == 0.0 && lexicographically_less(ms.point, slice_point);
}

// Shared two-stage solver for the ball.
inline MetricValue ball_supremum(const Ball& b, const Point& x, const Point& y, Objective kind,
                                 const SolverOptions& opt) {
  const double R = b.radius;
  const Point xs = (x - b.center) / R;
  const Point ys = (y - b.center) / R;
  const int samples = kind == Objective::cassinian ? opt.cassinian_samples : opt.visual_samples;
  const PlaneFrame frame = plane_through_origin(xs, ys);
  const PolarPoint px = polar(xs, frame, ball_clearance(b, x) / R);
  const PolarPoint py = polar(ys, frame, ball_clearance(b, y) / R);
  const double dxy = (xs - ys).norm();

  // Minimized slice objective: the product |x-p||p-y| or minus the angle.
  auto slice = [&](double t) {
    if (kind == Objective::cassinian) return std::sqrt(chord2(px, t) * chord2(py, t));
    const double cu = std::cos(t), cw = std::sin(t);
    return -angle2(px.pu - cu, px.pw - cw, py.pu - cu, py.pw - cw);
  };
  auto full = [&](const double* p) {
    if (kind == Objective::cassinian) return distance_to(xs, p) * distance_to(ys, p);
    return -angle_at(xs, ys, p);
  };
  auto to_metric = [&](double objective) { return kind == Objective::cassinian ? dxy / objective : -objective; };

  const search::SampledSearch sl = search::refine_sampled(slice, circle_samples(samples, px, py),
                                                          2.0 * std::numbers::pi,
                                                          opt.slice_tolerance * std::min({1.0, px.gap, py.gap}));
  Point best = std::cos(sl.arg) * frame.u + std::sin(sl.arg) * frame.w;
  double best_metric = to_metric(sl.value);
  long evals = sl.evaluations;

  if (opt.descent.starts > 0) {
    const Point origin = Point::Zero(xs.size());
    const search::MultistartResult ms = search::sphere_multistart(full, origin, 1.0, opt.descent);
    evals += ms.evaluations;
    if (beats_slice(ms, best, full(best.data()), noise_margin(px.gap, py.gap))) {
      best = ms.point;
      best_metric = to_metric(ms.value);
    }
  }

  const double lx = (xs - best).norm(), ly = (ys - best).norm();
  const double lipschitz =
      kind == Objective::cassinian ? best_metric * (1.0 / lx + 1.0 / ly) : (1.0 / lx + 1.0 / ly);
  double gap = std::abs(to_metric(sl.best_sampled) - best_metric) + lipschitz * sl.local_mesh;

  // c_D scales as 1/R; the visual angle is scale invariant.
  const double unit = kind == Objective::cassinian ? 1.0 / R : 1.0;
  BoundaryWitness w{b.center + R * best, best_metric * unit, gap * unit, evals};
  return MetricValue{w.value, w, Method::optimized};
}

inline MetricValue halfspace_supremum(const HalfSpace& h, const Point& x, const Point& y, Objective kind,
                                      const SolverOptions& opt) {
  const int samples = kind == Objective::cassinian ? opt.cassinian_samples : opt.visual_samples;
  const LineSlice ls = line_slice(h, x, y);
  const double dxy = (x - y).norm();

  auto slice = [&](double s) {
    const double ax = -s, ay = ls.hx;  // x - p in (line, normal) coordinates
    const double bx = ls.length - s, by = ls.hy;
    if (kind == Objective::cassinian) return std::sqrt((ax * ax + ay * ay) * (bx * bx + by * by));
    return -angle2(ax, ay, bx, by);
  };
  auto full = [&](const double* p) {
    if (kind == Objective::cassinian) return distance_to(x, p) * distance_to(y, p);
    return -angle_at(x, y, p);
  };
  auto to_metric = [&](double objective) { return kind == Objective::cassinian ? dxy / objective : -objective; };

  const search::SampledSearch sl = search::refine_sampled(slice, line_samples(samples, ls), 0.0,
                                                          opt.slice_tolerance * std::min(ls.hx, ls.hy));
  Point best = ls.at(sl.arg);
  double best_metric = to_metric(sl.value);
  long evals = sl.evaluations;

  if (opt.descent.starts > 0) {
    const HyperplanePatch patch = opt.patch ? *opt.patch : default_patch(h, x, y);
    const Point origin = project_to_hyperplane(h, patch.center);
    const Eigen::MatrixXd basis = hyperplane_basis(h.normal);
    search::DescentSchedule schedule = opt.descent;
    const search::MultistartResult ms =
        search::hyperplane_multistart(full, origin, basis, patch.radius, ls.scale, schedule);
    evals += ms.evaluations;
    if (beats_slice(ms, best, full(best.data()), noise_margin(ls.hx / ls.scale, ls.hy / ls.scale))) {
      best = ms.point;
      best_metric = to_metric(ms.value);
    }
  }

  const double lx = (x - best).norm(), ly = (y - best).norm();
  const double lipschitz =
      kind == Objective::cassinian ? best_metric * (1.0 / lx + 1.0 / ly) : (1.0 / lx + 1.0 / ly);
  const double gap = std::abs(to_metric(sl.best_sampled) - best_metric) + lipschitz * sl.local_mesh;
  BoundaryWitness w{best, best_metric, gap, evals};
  return MetricValue{w.value, w, Method::optimized};
}

inline void require_pair(const Domain& d, const Point& x, const Point& y) {
  require_interior(d, x);
  require_interior(d, y);
}

}  // namespace detail

// c_D(x, y). Punctured spaces are evaluated exactly; balls and half-spaces
// via the two-stage boundary search, with the extremal point as witness.
inline MetricValue cassinian(const Domain& d, const Point& x, const Point& y, const SolverOptions& opt = {}) {
  detail::require_pair(d, x, y);
  if (x == y) return MetricValue{0.0, std::nullopt, Method::closed_form};
  if (const auto* b = d.as_ball()) return detail::ball_supremum(*b, x, y, detail::Objective::cassinian, opt);
  if (const auto* h = d.as_half_space()) {
    return detail::halfspace_supremum(*h, x, y, detail::Objective::cassinian, opt);
  }
  const double dxy = (x - y).norm();
  return detail::finite_supremum(*d.as_punctured(),
                                 [&](const Point& p) { return dxy / ((x - p).norm() * (p - y).norm()); });
}

// v_D(x, y), the largest angle subtended by x and y at a boundary point.
inline MetricValue visual_angle(const Domain& d, const Point& x, const Point& y, const SolverOptions& opt = {}) {
  detail::require_pair(d, x, y);
  if (x == y) return MetricValue{0.0, std::nullopt, Method::closed_form};
  if (const auto* b = d.as_ball()) return detail::ball_supremum(*b, x, y, detail::Objective::visual_angle, opt);
  if (const auto* h = d.as_half_space()) {
    return detail::halfspace_supremum(*h, x, y, detail::Objective::visual_angle, opt);
  }
  return detail::finite_supremum(*d.as_punctured(),
                                 [&](const Point& p) { return detail::vector_angle(x - p, y - p); });
}

inline MetricValue distance_ratio_j(const Domain& d, const Point& x, const Point& y) {
  const double dx = require_interior(d, x);
  const double dy = require_interior(d, y);
  return MetricValue{std::log1p((x - y).norm() / std::min(dx, dy)), std::nullopt, Method::closed_form};
}

// The hyperbolic metric of the unit ball via
// sinh(rho/2) = |x-y| / sqrt((1-|x|^2)(1-|y|^2)).
inline MetricValue hyperbolic_ball(const Point& x, const Point& y) {
  check_finite(x, "x");
  if (x.size() != y.size()) throw InvalidArgument("dimension mismatch between x and y");
  check_finite(y, "y");
  const double nx = x.norm(), ny = y.norm();
  if (!(nx < 1.0) || !(ny < 1.0)) throw DomainViolation("point outside the unit ball");
  const double s = (x - y).norm() / std::sqrt((1.0 - nx) * (1.0 + nx) * (1.0 - ny) * (1.0 + ny));
  return MetricValue{2.0 * std::asinh(s), std::nullopt, Method::closed_form};
}

// The hyperbolic metric of the upper half-plane via
// tanh(rho/2) = |z1 - z2| / |z1 - conj(z2)|.
inline MetricValue hyperbolic_halfplane(const Point& z1, const Point& z2) {
  if (z1.size() != 2 || z2.size() != 2) throw InvalidArgument("the half-plane metric needs 2-dimensional points");
  if (!z1.allFinite() || !z2.allFinite()) throw InvalidArgument("point coordinates must be finite");
  if (!(z1[1] > 0.0) || !(z2[1] > 0.0)) throw DomainViolation("point not in the upper half-plane");
  const double num = std::hypot(z1[0] - z2[0], z1[1] - z2[1]);
  const double den = std::hypot(z1[0] - z2[0], z1[1] + z2[1]);
  return MetricValue{2.0 * std::atanh(num / den), std::nullopt, Method::closed_form};
}

inline MetricValue p_quantity(const Domain& d, const Point& x, const Point& y) {
  const double dx = require_interior(d, x);
  const double dy = require_interior(d, y);
  const double dxy = (x - y).norm();
  return MetricValue{dxy / std::sqrt(dxy * dxy + 4.0 * dx * dy), std::nullopt, Method::closed_form};
}

}  // namespace cassini
