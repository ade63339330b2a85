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

// Seeded property suites for the inequalities between c, j, rho, v and p,
// the Moebius distortion bounds and the inner metric. Every suite draws its
// pairs sequentially from one seed, evaluates them in parallel into
// per-sample slots and aggregates in sample order, so a report depends only
// on its spec.
//
// Each sample produces observations "lhs <= rhs". An allowance absorbs the
// known error of approximated quantities (the gap estimate of c and v, the
// refinement gap of the geodesic solver, stated slacks); the observation is
// a violation when lhs > (rhs + allowance) (1 + tolerance), and a warning
// when only the raw comparison lhs <= rhs fails.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "cassini/core_geometry.hpp"
#include "cassini/inner_metric.hpp"
#include "cassini/io.hpp"
#include "cassini/metrics.hpp"
#include "cassini/moebius.hpp"
#include "cassini/parallel.hpp"
#include "cassini/random.hpp"

namespace cassini {

enum class CheckId {
  sinh_rho_le_c,
  rho_le_2c,
  j_le_factor_c,
  c_le_j_lambda,
  visual_angle,
  p_le_sqrt2_delta_c,
  moebius_distortion,
  inner_metric,
};

inline constexpr CheckId kAllChecks[] = {CheckId::sinh_rho_le_c,      CheckId::rho_le_2c,
                                         CheckId::j_le_factor_c,      CheckId::c_le_j_lambda,
                                         CheckId::visual_angle,       CheckId::p_le_sqrt2_delta_c,
                                         CheckId::moebius_distortion, CheckId::inner_metric};

inline std::string_view to_string(CheckId c) {
  switch (c) {
    case CheckId::sinh_rho_le_c: return "sinh_rho_le_c";
    case CheckId::rho_le_2c: return "rho_le_2c";
    case CheckId::j_le_factor_c: return "j_le_factor_c";
    case CheckId::c_le_j_lambda: return "c_le_j_lambda";
    case CheckId::visual_angle: return "visual_angle";
    case CheckId::p_le_sqrt2_delta_c: return "p_le_sqrt2_delta_c";
    case CheckId::moebius_distortion: return "moebius_distortion";
    case CheckId::inner_metric: return "inner_metric";
  }
  return "unknown";
}

inline CheckId parse_check_id(std::string_view s) {
  for (CheckId c : kAllChecks) {
    if (to_string(c) == s) return c;
  }
  throw InvalidArgument("unknown check \"" + std::string(s) + "\"");
}

struct SuiteSpec {
  CheckId check_id = CheckId::sinh_rho_le_c;
  Domain domain = Domain::unit_ball(2);
  int dimension = 2;
  long sample_count = 1000;
  std::uint64_t seed = 42;
  std::optional<double> lambda_bound;
  double tolerance = 1e-10;
  // Also check p <= (diam / sqrt 2) c; bounded domains only.
  bool diameter_form = false;
  // Append the deterministic near-boundary pairs.
  bool stress_pairs = true;
  SolverOptions solver;
  GeodesicOptions geodesic;

  void validate() const {
    if (sample_count < 1) throw InvalidArgument("sample_count must be >= 1");
    if (dimension != domain.dimension()) throw InvalidArgument("dimension does not match the domain");
    if (lambda_bound && !(*lambda_bound >= 0.0 && *lambda_bound < 1.0)) {
      throw InvalidArgument("lambda_bound must lie in [0, 1)");
    }
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (diameter_form && !domain.is_bounded()) throw InvalidArgument("the diameter form needs a bounded domain");
    geodesic.validate();
  }
};

struct Violation {
  Point x, y;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - (rhs + allowance), positive
  std::string relation;
};

struct RelationStats {
  std::string name;
  long observations = 0;
  long violations = 0;
  long warnings = 0;
  double worst_ratio = 0.0;
};

struct RadialRatio {
  double norm = 0.0;
  double ratio = 0.0;    // sinh(rho(0, x) / 2) / c(0, x) as computed
  double formula = 0.0;  // (1 - |x|) / sqrt(1 - |x|^2)
};

struct SuiteReport {
  CheckId check_id = CheckId::sinh_rho_le_c;
  Domain domain = Domain::unit_ball(2);
  int n = 2;
  long samples_run = 0;
  std::uint64_t seed = 0;
  std::vector<Violation> violations;
  double worst_slack_ratio = 0.0;
  double sharpest_ratio = 0.0;
  double runtime_ms = 0.0;
  long warnings = 0;
  std::vector<RelationStats> relations;
  std::vector<RadialRatio> radial_ratios;
  std::vector<std::pair<std::string, double>> diagnostics;
};

namespace harness_detail {

struct Observation {
  int relation = 0;
  Point x, y;
  double lhs = 0.0;
  double rhs = 0.0;
  double allowance = 0.0;
};

using Observations = std::vector<Observation>;

inline bool is_unit_ball(const Domain& d) {
  const auto* b = d.as_ball();
  return b != nullptr && b->radius == 1.0 && b->center.isZero(0.0);
}

inline void require_unit_ball(const SuiteSpec& s) {
  if (!is_unit_ball(s.domain)) {
    throw InvalidArgument(std::string(to_string(s.check_id)) + " runs on the unit ball only");
  }
}

inline double gap_of(const MetricValue& m) { return m.witness ? m.witness->gap_estimate : 0.0; }

// A point of the domain: uniform in a ball, in a ball touching a half-space
// boundary, or around the punctures.
inline Point sample_point(const Domain& d, Rng& rng) {
  const int n = d.dimension();
  for (;;) {
    Point z;
    if (const auto* b = d.as_ball()) {
      z = b->center + b->radius * rng.in_ball(n, 1.0);
    } else if (const auto* h = d.as_half_space()) {
      z = (h->offset + 2.0) * h->normal + rng.in_ball(n, 2.0);
    } else {
      const auto& pts = d.as_punctured()->punctures;
      Point mid = Point::Zero(n);
      for (const auto& q : pts) mid += q;
      mid /= static_cast<double>(pts.size());
      double spread = 1.0;
      for (const auto& q : pts) spread = std::max(spread, (q - mid).norm());
      z = mid + 2.0 * spread * rng.in_ball(n, 1.0);
    }
    if (boundary_distance(d, z) >= kPathClearance && contains(d, z)) return z;
  }
}

// Deterministic near-boundary pairs with clearance 10^-k, k = 1..6. With a
// lambda cap the pairs hug the sphere |x| = lambda instead.
inline std::vector<std::pair<Point, Point>> stress_pairs(const Domain& d, std::optional<double> lambda) {
  const int n = d.dimension();
  const Point e1 = unit_axis(n, 0), e2 = unit_axis(n, 1);
  std::vector<std::pair<Point, Point>> out;
  auto push = [&](const Point& x, const Point& y) {
    if (contains(d, x) && contains(d, y) && boundary_distance(d, x) >= kPathClearance &&
        boundary_distance(d, y) >= kPathClearance) {
      out.emplace_back(x, y);
    }
  };
  for (int k = 1; k <= 6; ++k) {
    const double h = std::pow(10.0, -k);
    if (const auto* b = d.as_ball()) {
      const double r = b->radius, s = lambda ? *lambda : 1.0;
      const double t = s * (1.0 - h), t2 = s * (1.0 - 2.0 * h);
      const Point& c = b->center;
      push(c + r * t * e1, c - r * t * e1);
      push(c + r * t * e1, c + r * t2 * e1);
      push(c + r * t * e1, c + r * t * e2);
      push(c, c + r * t * e1);
      push(c + r * t * e1, c + r * t * (std::cos(h) * e1 + std::sin(h) * e2));
    } else if (const auto* hs = d.as_half_space()) {
      const Point base = hs->offset * hs->normal;
      const Point u = hyperplane_basis(hs->normal).col(0);
      push(base + h * hs->normal, base + h * hs->normal + h * u);
      push(base + h * hs->normal, base + 2.0 * h * hs->normal);
      push(base + h * hs->normal, base + hs->normal + u);
      push(base + h * hs->normal, base + h * hs->normal + u);
    } else {
      const auto& pts = d.as_punctured()->punctures;
      const Point& q = pts.front();
      double s = 1.0;
      for (std::size_t i = 1; i < pts.size(); ++i) s = std::min(s, 0.5 * (pts[i] - q).norm());
      push(q + s * h * e1, q - s * h * e1);
      push(q + s * h * e1, q + 2.0 * s * h * e1);
      push(q + s * h * e1, q + s * h * e2);
      push(q + s * h * e1, q + s * e2);
    }
  }
  return out;
}

// Random pairs followed (optionally) by the stress pairs.
inline std::vector<std::pair<Point, Point>> suite_pairs(const SuiteSpec& s, Rng& rng, bool capped = false) {
  std::vector<std::pair<Point, Point>> pairs;
  pairs.reserve(static_cast<std::size_t>(s.sample_count));
  const int n = s.dimension;
  for (long i = 0; i < s.sample_count; ++i) {
    if (capped) {
      const double lam = *s.lambda_bound;
      pairs.emplace_back(lam * rng.in_ball(n, 1.0), lam * rng.in_ball(n, 1.0));
    } else {
      Point x = sample_point(s.domain, rng);
      Point y = sample_point(s.domain, rng);
      pairs.emplace_back(std::move(x), std::move(y));
    }
  }
  if (s.stress_pairs) {
    for (auto& p : stress_pairs(s.domain, capped ? s.lambda_bound : std::nullopt)) pairs.push_back(std::move(p));
  }
  return pairs;
}

template <class Task, class Eval>
std::vector<Observations> evaluate(const std::vector<Task>& tasks, Eval&& eval) {
  std::vector<Observations> out(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) { out[i] = eval(tasks[i]); });
  return out;
}

inline double ratio_of(double lhs, double bound) {
  if (bound > 0.0) return lhs / bound;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline void aggregate(SuiteReport& r, const std::vector<std::string>& names, const std::vector<Observations>& all,
                      double tolerance) {
  r.relations.clear();
  for (const auto& name : names) r.relations.push_back(RelationStats{name});
  r.samples_run = static_cast<long>(all.size());
  for (const auto& obs : all) {
    for (const auto& o : obs) {
      RelationStats& st = r.relations[static_cast<std::size_t>(o.relation)];
      const double bound = o.rhs + o.allowance;
      const double ratio = ratio_of(o.lhs, bound);
      ++st.observations;
      st.worst_ratio = std::max(st.worst_ratio, ratio);
      r.worst_slack_ratio = std::max(r.worst_slack_ratio, ratio);
      if (!(o.lhs <= bound * (1.0 + tolerance))) {
        ++st.violations;
        r.violations.push_back(Violation{o.x, o.y, o.lhs, o.rhs, o.lhs - bound, st.name});
      } else if (o.lhs > o.rhs) {
        ++st.warnings;
        ++r.warnings;
      }
    }
  }
}

}  // namespace harness_detail

// sinh(rho/2) <= c on the unit ball, plus the radial ratio at (0, x).
inline SuiteReport check_sinh_rho_le_c(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  require_unit_ball(s);
  SuiteReport r;
  Rng rng(s.seed);
  const auto pairs = suite_pairs(s, rng);
  const auto obs = evaluate(pairs, [&](const std::pair<Point, Point>& p) {
    const auto& [x, y] = p;
    const MetricValue c = cassinian(s.domain, x, y, s.solver);
    const double lhs = std::sinh(0.5 * hyperbolic_ball(x, y).value);
    return Observations{{0, x, y, lhs, c.value, gap_of(c)}};
  });
  aggregate(r, {"sinh(rho/2) <= c"}, obs, s.tolerance);
  r.sharpest_ratio = 0.0;
  for (double t : {0.5, 1e-1, 1e-2, 1e-3}) {
    const Point x = t * unit_axis(s.dimension, 0), zero = Point::Zero(s.dimension);
    const double ratio =
        std::sinh(0.5 * hyperbolic_ball(zero, x).value) / cassinian(s.domain, zero, x, s.solver).value;
    r.radial_ratios.push_back({t, ratio, (1.0 - t) / std::sqrt((1.0 - t) * (1.0 + t))});
    r.sharpest_ratio = std::max(r.sharpest_ratio, ratio);
  }
  return r;
}

// rho <= 2c on the unit ball.
inline SuiteReport check_rho_le_2c(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  require_unit_ball(s);
  SuiteReport r;
  Rng rng(s.seed);
  const auto obs = evaluate(suite_pairs(s, rng), [&](const std::pair<Point, Point>& p) {
    const auto& [x, y] = p;
    const MetricValue c = cassinian(s.domain, x, y, s.solver);
    return Observations{{0, x, y, hyperbolic_ball(x, y).value, 2.0 * c.value, 2.0 * gap_of(c)}};
  });
  aggregate(r, {"rho <= 2c"}, obs, s.tolerance);
  r.sharpest_ratio = r.worst_slack_ratio;
  return r;
}

// j <= (|x-y| + min delta) c on any domain; on the unit ball also
// j <= (1 + min(|x|, |y|)) c <= 2c and j(0, y) <= c(0, y).
inline SuiteReport check_j_le_factor_c(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  const bool ball = is_unit_ball(s.domain);
  SuiteReport r;
  Rng rng(s.seed);
  const auto obs = evaluate(suite_pairs(s, rng), [&](const std::pair<Point, Point>& p) {
    const auto& [x, y] = p;
    const MetricValue c = cassinian(s.domain, x, y, s.solver);
    const double j = distance_ratio_j(s.domain, x, y).value;
    const double dmin = std::min(boundary_distance(s.domain, x), boundary_distance(s.domain, y));
    const double k = (x - y).norm() + dmin;
    Observations o{{0, x, y, j, k * c.value, k * gap_of(c)}};
    if (ball) {
      const double f = 1.0 + std::min(x.norm(), y.norm());
      o.push_back({1, x, y, j, f * c.value, f * gap_of(c)});
      o.push_back({2, x, y, f * c.value, 2.0 * c.value, 0.0});
      const Point zero = Point::Zero(s.dimension);
      const MetricValue c0 = cassinian(s.domain, zero, y, s.solver);
      o.push_back({3, zero, y, distance_ratio_j(s.domain, zero, y).value, c0.value, gap_of(c0)});
    }
    return o;
  });
  std::vector<std::string> names{"j <= (|x-y| + min delta) c"};
  if (ball) {
    names.insert(names.end(), {"j <= (1 + min(|x|,|y|)) c", "(1 + min(|x|,|y|)) c <= 2c", "j(0,y) <= c(0,y)"});
  }
  aggregate(r, names, obs, s.tolerance);
  r.sharpest_ratio = r.worst_slack_ratio;
  return r;
}

// c <= j / (1 - lambda)^2 for |x|, |y| <= lambda on the unit ball.
inline SuiteReport check_c_le_j_lambda(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  require_unit_ball(s);
  if (!s.lambda_bound) throw InvalidArgument("c_le_j_lambda needs lambda_bound");
  const double lam = *s.lambda_bound;
  const double factor = 1.0 / ((1.0 - lam) * (1.0 - lam));
  SuiteReport r;
  Rng rng(s.seed);
  const auto obs = evaluate(suite_pairs(s, rng, true), [&](const std::pair<Point, Point>& p) {
    const auto& [x, y] = p;
    const double c = cassinian(s.domain, x, y, s.solver).value;
    return Observations{{0, x, y, c, factor * distance_ratio_j(s.domain, x, y).value, 0.0}};
  });
  aggregate(r, {"c <= j / (1 - lambda)^2"}, obs, s.tolerance);
  r.sharpest_ratio = r.worst_slack_ratio;
  return r;
}

// The constant of c <= K v on the planar lambda-disk.
inline double visual_angle_constant(double lambda) {
  const double l2 = lambda * lambda;
  return 2.0 * (3.0 + l2) / (3.0 * (1.0 - l2) * (1.0 - lambda) * (1.0 - lambda));
}

// v/2 <= tan(v/2) <= c on the unit ball; with lambda (planar only) also
// c <= K(lambda) v on lambda-capped pairs.
inline SuiteReport check_visual_angle(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  require_unit_ball(s);
  if (s.lambda_bound && s.dimension != 2) throw InvalidArgument("the lambda part of visual_angle is planar only");
  SuiteReport r;
  Rng rng(s.seed);
  const auto pairs = suite_pairs(s, rng);
  std::vector<std::pair<Point, Point>> capped;
  if (s.lambda_bound) capped = suite_pairs(s, rng, true);
  struct Task {
    Point x, y;
    bool capped;
  };
  std::vector<Task> tasks;
  for (const auto& [x, y] : pairs) tasks.push_back({x, y, false});
  for (const auto& [x, y] : capped) tasks.push_back({x, y, true});
  const double k = s.lambda_bound ? visual_angle_constant(*s.lambda_bound) : 0.0;
  const auto obs = evaluate(tasks, [&](const Task& t) {
    const MetricValue c = cassinian(s.domain, t.x, t.y, s.solver);
    const MetricValue v = visual_angle(s.domain, t.x, t.y, s.solver);
    if (t.capped) return Observations{{2, t.x, t.y, c.value, k * v.value, k * gap_of(v)}};
    // tan is increasing, so the v gap moves tan(v/2) by at most
    // gap / (2 cos^2(v/2)).
    const double half = 0.5 * v.value;
    const double tan_gap = 0.5 * gap_of(v) / std::max(1e-300, std::cos(half) * std::cos(half));
    return Observations{{0, t.x, t.y, half, std::tan(half), 0.0},
                        {1, t.x, t.y, std::tan(half), c.value, gap_of(c) + tan_gap}};
  });
  std::vector<std::string> names{"v/2 <= tan(v/2)", "tan(v/2) <= c"};
  if (s.lambda_bound) names.push_back("c <= K(lambda) v");
  aggregate(r, names, obs, s.tolerance);
  r.sharpest_ratio = r.worst_slack_ratio;
  return r;
}

// p <= sqrt2 min(delta) c on any domain; optionally p <= (diam / sqrt2) c.
inline SuiteReport check_p_le_sqrt2_delta_c(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  SuiteReport r;
  Rng rng(s.seed);
  const double diam = s.diameter_form ? s.domain.diameter() : 0.0;
  const auto obs = evaluate(suite_pairs(s, rng), [&](const std::pair<Point, Point>& p) {
    const auto& [x, y] = p;
    const MetricValue c = cassinian(s.domain, x, y, s.solver);
    const double pv = p_quantity(s.domain, x, y).value;
    const double k = std::numbers::sqrt2 * std::min(boundary_distance(s.domain, x), boundary_distance(s.domain, y));
    Observations o{{0, x, y, pv, k * c.value, k * gap_of(c)}};
    if (s.diameter_form) {
      const double kd = diam / std::numbers::sqrt2;
      o.push_back({1, x, y, pv, kd * c.value, kd * gap_of(c)});
    }
    return o;
  });
  std::vector<std::string> names{"p <= sqrt2 min delta c"};
  if (s.diameter_form) names.push_back("p <= diam/sqrt2 c");
  aggregate(r, names, obs, s.tolerance);
  r.sharpest_ratio = r.worst_slack_ratio;
  return r;
}

// Distortion of c under random ball automorphisms with |phi(0)| <= 0.9,
// the two identities behind it, and the sharpness witness family.
inline SuiteReport check_moebius_distortion(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  require_unit_ball(s);
  constexpr double kIdentityTolerance = 1e-10;
  SuiteReport r;
  Rng rng(s.seed);
  const int n = s.dimension;
  struct Task {
    MoebiusMap map;
    Point a, x, y;
  };
  std::vector<Task> tasks;
  for (long i = 0; i < s.sample_count; ++i) {
    Task t;
    t.map = random_ball_automorphism(n, 0.9, rng, &t.a);
    t.x = rng.in_ball(n, 1.0);
    t.y = rng.in_ball(n, 1.0);
    tasks.push_back(std::move(t));
  }
  if (s.stress_pairs) {
    const auto stress = stress_pairs(s.domain, std::nullopt);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < stress.size(); ++i) {
      // |a| = 0.9 along e1, e2, -e1 in turn.
      const Point a = 0.9 * (i % 3 == 2 ? Point(-unit_axis(n, 0)) : unit_axis(n, static_cast<int>(i % 3) % 2));
      tasks.push_back({ball_automorphism(id, a, id), a, stress[i].first, stress[i].second});
    }
  }
  const auto obs = evaluate(tasks, [&](const Task& t) {
    const DistortionBounds b = distortion_bounds(t.a);
    Observations o;
    if (t.x != t.y) {
      const MetricValue before = cassinian(s.domain, t.x, t.y, s.solver);
      const MetricValue after = cassinian(s.domain, apply(t.map, t.x), apply(t.map, t.y), s.solver);
      o.push_back({0, t.x, t.y, b.lower * before.value, after.value, gap_of(after)});
      o.push_back({1, t.x, t.y, after.value, b.upper * before.value, b.upper * gap_of(before)});
    }
    o.push_back({2, t.x, t.y, composite_isometry_residual(t.map, t.x, t.y), kIdentityTolerance, 0.0});
    if (t.a.norm() > 0.0) {
      const SphereInversion sigma = inversion_sending_to_zero(t.a);
      o.push_back({3, t.x, t.y, check_inversion_identity(sigma, t.x, t.y), kIdentityTolerance, 0.0});
    }
    return o;
  });
  aggregate(r, {"lower distortion bound", "upper distortion bound", "composite isometry residual",
                "inversion distance identity"},
            obs, s.tolerance);
  double max_iso = 0.0, max_inv = 0.0;
  for (const auto& v : obs) {
    for (const auto& o : v) {
      if (o.relation == 2) max_iso = std::max(max_iso, o.lhs);
      if (o.relation == 3) max_inv = std::max(max_inv, o.lhs);
    }
  }
  double witness = 0.0;
  r.sharpest_ratio = 0.0;
  for (double an : {0.1, 0.5, 0.9}) {
    for (double t : {-0.1, -0.5, -0.9}) {
      const Point a = an * unit_axis(n, 0);
      const SharpnessWitness w = sharpness_witness(a, t, s.solver);
      r.sharpest_ratio = std::max(r.sharpest_ratio, w.ratio / distortion_bounds(a).upper);
      if (an == 0.5 && t == -0.5) witness = w.ratio;
    }
  }
  r.diagnostics = {{"witness_ratio", witness},
                   {"witness_upper_bound", distortion_bounds(0.5 * unit_axis(n, 0)).upper},
                   {"max_composite_isometry_residual", max_iso},
                   {"max_inversion_identity_residual", max_inv}};
  return r;
}

namespace harness_detail {

inline constexpr double kClosedFormTolerance = 5e-3;
inline constexpr double kMonotoneSlack = 1e-4;

// Single-puncture pairs: |x|, |y| in [0.5, 2] with angle at most 120 degrees,
// so the geodesic (an inverted segment) stays at bounded distance.
inline std::pair<Point, Point> puncture_pair(int n, Rng& rng) {
  for (;;) {
    const Point u = rng.unit_vector(n), v = rng.unit_vector(n);
    if (u.dot(v) < -0.5) continue;
    return {rng.uniform(0.5, 2.0) * u, rng.uniform(0.5, 2.0) * v};
  }
}

}  // namespace harness_detail

// Inner metric: closed forms (ball center, single puncture), monotonicity
// under Ball(0,1) in Ball(0,2) and under adding a puncture, the upper bound
// on eligible pairs, c <= inner, and agreement of the two path lengths on
// every solver path.
inline SuiteReport check_inner_metric(const SuiteSpec& s) {
  using namespace harness_detail;
  s.validate();
  require_unit_ball(s);
  SuiteReport r;
  Rng rng(s.seed);
  const int n = s.dimension;
  const Point zero = Point::Zero(n);
  const Domain big = Domain::ball(zero, 2.0);
  const Domain single = Domain::punctured({zero});
  struct Task {
    Point bx, by;       // nested balls
    Point center_to;    // (0, t u)
    Point px, py, q;    // puncture pair and the added puncture
    Point cx, cy;       // upper-bound pair
  };
  std::vector<Task> tasks;
  constexpr double kRadii[] = {0.1, 0.5, 0.9};
  for (long i = 0; i < s.sample_count; ++i) {
    Task t;
    t.bx = rng.in_ball(n, 0.95);
    t.by = rng.in_ball(n, 0.95);
    t.center_to = kRadii[i % 3] * rng.unit_vector(n);
    std::tie(t.px, t.py) = puncture_pair(n, rng);
    for (;;) {
      t.q = rng.uniform(0.5, 2.0) * rng.unit_vector(n);
      if ((t.px - t.q).norm() >= 0.1 && (t.py - t.q).norm() >= 0.1) break;
    }
    t.cx = rng.in_ball(n, 0.9);
    t.cy = t.cx + rng.uniform(0.05, 0.95) * (1.0 - t.cx.norm()) * rng.unit_vector(n);
    tasks.push_back(std::move(t));
  }
  const auto obs = evaluate(tasks, [&](const Task& t) {
    Observations o;
    auto solve = [&](const Domain& d, const Point& x, const Point& y) {
      const GeodesicResult g = inner_cassinian(d, x, y, s.geodesic);
      const double c = cassinian(d, x, y, s.solver).value;
      o.push_back({5, x, y, c, g.value, 1e-6});
      if (g.path.vertices.size() >= 2) {
        const double part = path_length_partition(d, g.path.vertices);
        o.push_back({6, x, y, std::abs(part - g.value), 1e-4 * g.value, 0.0});
      }
      return g;
    };
    // Ball center.
    {
      const double rn = t.center_to.norm(), exact = rn / (1.0 - rn);
      const GeodesicResult g = solve(s.domain, zero, t.center_to);
      o.push_back({0, zero, t.center_to, std::abs(g.value - exact), kClosedFormTolerance * exact, g.refinement_gap});
    }
    // Single puncture, then the same pair with one more puncture.
    {
      const double exact = *closed_form_inner(single, t.px, t.py);
      const GeodesicResult g = solve(single, t.px, t.py);
      o.push_back({1, t.px, t.py, std::abs(g.value - exact), kClosedFormTolerance * exact, g.refinement_gap});
      const Domain more = Domain::punctured({zero, t.q});
      const GeodesicResult gm = solve(more, t.px, t.py);
      o.push_back({3, t.px, t.py, g.value, gm.value,
                   kMonotoneSlack * std::max(1.0, gm.value) + g.refinement_gap + gm.refinement_gap});
    }
    // Nested balls.
    {
      const GeodesicResult small = solve(s.domain, t.bx, t.by);
      const GeodesicResult large = solve(big, t.bx, t.by);
      o.push_back({2, t.bx, t.by, large.value, small.value,
                   kMonotoneSlack * std::max(1.0, small.value) + small.refinement_gap + large.refinement_gap});
    }
    // Upper bound.
    {
      const double bound = inner_upper_bound(s.domain, t.cx, t.cy);
      const GeodesicResult g = solve(s.domain, t.cx, t.cy);
      o.push_back({4, t.cx, t.cy, g.value, bound, kMonotoneSlack * bound});
    }
    return o;
  });
  aggregate(r,
            {"ball center closed form", "single puncture closed form", "nested balls monotone",
             "nested punctures monotone", "upper bound", "c <= inner", "partition vs integral"},
            obs, s.tolerance);
  r.sharpest_ratio = r.worst_slack_ratio;
  return r;
}

inline SuiteReport run_suite(const SuiteSpec& s) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport r;
  switch (s.check_id) {
    case CheckId::sinh_rho_le_c: r = check_sinh_rho_le_c(s); break;
    case CheckId::rho_le_2c: r = check_rho_le_2c(s); break;
    case CheckId::j_le_factor_c: r = check_j_le_factor_c(s); break;
    case CheckId::c_le_j_lambda: r = check_c_le_j_lambda(s); break;
    case CheckId::visual_angle: r = check_visual_angle(s); break;
    case CheckId::p_le_sqrt2_delta_c: r = check_p_le_sqrt2_delta_c(s); break;
    case CheckId::moebius_distortion: r = check_moebius_distortion(s); break;
    case CheckId::inner_metric: r = check_inner_metric(s); break;
  }
  r.check_id = s.check_id;
  r.domain = s.domain;
  r.n = s.dimension;
  r.seed = s.seed;
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

struct AggregateReport {
  std::vector<SuiteReport> suites;

  long total_violations() const {
    long v = 0;
    for (const auto& s : suites) v += static_cast<long>(s.violations.size());
    return v;
  }
  // 5 keeps "found violations" apart from internal errors (1).
  int exit_code() const { return total_violations() == 0 ? 0 : 5; }
};

using SuiteRunner = std::function<SuiteReport(const SuiteSpec&)>;

inline AggregateReport run_all(const std::vector<SuiteSpec>& specs, const SuiteRunner& runner = run_suite) {
  AggregateReport a;
  for (const auto& s : specs) a.suites.push_back(runner(s));
  return a;
}

// Every check in dimensions 2 and 3. The geodesic suite is capped at
// `inner_samples` since each sample runs six solves.
inline std::vector<SuiteSpec> default_manifest(long samples = 10000, std::uint64_t seed = 42,
                                               long inner_samples = 100) {
  std::vector<SuiteSpec> specs;
  for (int n : {2, 3}) {
    const Domain ball = Domain::unit_ball(n);
    auto add = [&](CheckId id, Domain d, std::optional<double> lambda = std::nullopt, long count = -1) {
      SuiteSpec s;
      s.check_id = id;
      s.domain = std::move(d);
      s.dimension = n;
      s.sample_count = count > 0 ? count : samples;
      s.seed = seed;
      s.lambda_bound = lambda;
      s.diameter_form = id == CheckId::p_le_sqrt2_delta_c && s.domain.is_bounded();
      specs.push_back(std::move(s));
    };
    add(CheckId::sinh_rho_le_c, ball);
    add(CheckId::rho_le_2c, ball);
    add(CheckId::j_le_factor_c, ball);
    add(CheckId::j_le_factor_c, Domain::punctured({Point::Zero(n)}));
    add(CheckId::c_le_j_lambda, ball, 0.5);
    add(CheckId::c_le_j_lambda, ball, 0.9);
    add(CheckId::visual_angle, ball, n == 2 ? std::optional<double>(0.5) : std::nullopt);
    add(CheckId::p_le_sqrt2_delta_c, ball);
    add(CheckId::moebius_distortion, ball, std::nullopt, std::min(samples, 1000L));
    add(CheckId::inner_metric, ball, std::nullopt, std::min(samples, inner_samples));
  }
  return specs;
}

// Report JSON. runtime_ms is the only field that varies between runs.
inline Json report_json(const SuiteReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(Json{{"x", point_json(v.x)},
                              {"y", point_json(v.y)},
                              {"lhs", number_json(v.lhs)},
                              {"rhs", number_json(v.rhs)},
                              {"slack", number_json(v.slack)},
                              {"relation", v.relation}});
  }
  Json relations = Json::array();
  for (const auto& s : r.relations) {
    relations.push_back(Json{{"name", s.name},
                             {"observations", s.observations},
                             {"violations", s.violations},
                             {"warnings", s.warnings},
                             {"worst_ratio", number_json(s.worst_ratio)}});
  }
  Json j{{"check_id", std::string(to_string(r.check_id))},
         {"domain", domain_json(r.domain)},
         {"n", r.n},
         {"samples", r.samples_run},
         {"seed", r.seed},
         {"violations", violations},
         {"worst_slack_ratio", number_json(r.worst_slack_ratio)},
         {"sharpest_ratio", number_json(r.sharpest_ratio)},
         {"runtime_ms", r.runtime_ms},
         {"warnings", r.warnings},
         {"relations", relations}};
  if (!r.radial_ratios.empty()) {
    Json rr = Json::array();
    for (const auto& x : r.radial_ratios) {
      rr.push_back(Json{{"norm", x.norm}, {"ratio", x.ratio}, {"formula", x.formula}});
    }
    j["radial_ratios"] = rr;
  }
  if (!r.diagnostics.empty()) {
    Json d = Json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = number_json(v);
    j["diagnostics"] = d;
  }
  return j;
}

inline Json aggregate_json(const AggregateReport& a) {
  Json suites = Json::array();
  for (const auto& s : a.suites) {
    suites.push_back(Json{{"check_id", std::string(to_string(s.check_id))},
                          {"domain", domain_json(s.domain)},
                          {"n", s.n},
                          {"samples", s.samples_run},
                          {"violations", static_cast<long>(s.violations.size())},
                          {"worst_slack_ratio", number_json(s.worst_slack_ratio)}});
  }
  return Json{{"suites", suites}, {"total_violations", a.total_violations()}, {"exit_code", a.exit_code()}};
}

// Manifest JSON: {"suites": [{"check_id", "domain", "n", "samples", "seed",
// "lambda"?, "tolerance"?, "diameter_form"?, "stress_pairs"?}, ...]}.
inline std::vector<SuiteSpec> parse_manifest(const Json& j) try {
  if (!j.is_object() || !j.contains("suites") || !j["suites"].is_array()) {
    throw InvalidArgument("a manifest needs a \"suites\" array");
  }
  std::vector<SuiteSpec> specs;
  for (const auto& e : j["suites"]) {
    if (!e.is_object()) throw InvalidArgument("manifest entries must be objects");
    SuiteSpec s;
    s.check_id = parse_check_id(e.at("check_id").get<std::string>());
    s.dimension = e.value("n", 2);
    s.domain = e.contains("domain") ? parse_domain_json(e["domain"]) : Domain::unit_ball(s.dimension);
    s.sample_count = e.value("samples", 1000L);
    s.seed = e.value("seed", std::uint64_t{42});
    if (e.contains("lambda")) s.lambda_bound = e["lambda"].get<double>();
    s.tolerance = e.value("tolerance", 1e-10);
    s.diameter_form = e.value("diameter_form", false);
    s.stress_pairs = e.value("stress_pairs", true);
    s.validate();
    specs.push_back(std::move(s));
  }
  return specs;
} catch (const Json::exception& e) {
  throw InvalidArgument(std::string("manifest: ") + e.what());
}

}  // namespace cassini
