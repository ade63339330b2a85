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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Each criterion is evaluated independently; an exception fails only
// its own line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cassini/harness.hpp"
#include "cassini/inner_metric.hpp"
#include "cassini/metrics.hpp"
#include "cassini/moebius.hpp"
#include "oracle.hpp"

namespace {

using namespace cassini;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Boundary-supremum solver against the closed forms.
Outcome closed_forms() {
  double worst = 0.0;
  bool solver_used = true;
  for (int n : {2, 3, 5}) {
    const Domain ball = Domain::unit_ball(n);
    const Point e1 = unit_axis(n, 0);
    const MetricValue a = cassinian(ball, Point::Zero(n), 0.5 * e1);
    const MetricValue b = cassinian(ball, 0.25 * e1, 0.5 * e1);
    solver_used = solver_used && a.method == Method::optimized && b.method == Method::optimized;
    worst = std::max({worst, std::abs(a.value - 1.0), std::abs(b.value - 2.0 / 3.0)});
  }
  const double p = cassinian(Domain::punctured({make_point({0, 0})}), make_point({1, 0}), make_point({0, 1})).value;
  const bool exact = p == std::sqrt(2.0);
  return {solver_used && worst <= 1e-9 && exact,
          fmt("max |c - closed form| = %.3g over n = 2, 3, 5; punctured value %.17g (sqrt 2 %s)", worst, p,
              exact ? "exact" : "NOT exact")};
}

// 2. The inequality suites at 10^4 samples each, n = 2, 3.
Outcome inequality_suites() {
  std::vector<SuiteSpec> specs;
  for (const SuiteSpec& s : default_manifest(10000, 42)) {
    if (s.check_id != CheckId::moebius_distortion && s.check_id != CheckId::inner_metric) specs.push_back(s);
  }
  const auto t0 = Clock::now();
  const AggregateReport agg = run_all(specs);
  const double secs = seconds_since(t0);
  long relations = 0, samples = 0;
  double worst = 0.0;
  for (const auto& r : agg.suites) {
    relations += static_cast<long>(r.relations.size());
    samples += r.samples_run;
    worst = std::max(worst, r.worst_slack_ratio);
    if (!r.violations.empty()) {
      std::printf("  violation in %s n=%d: %s\n", std::string(to_string(r.check_id)).c_str(), r.n,
                  report_json(r).dump().c_str());
    }
  }
  return {agg.total_violations() == 0 && secs <= 120.0,
          fmt("%zu suites, %ld relations, %ld samples, %ld violations, worst lhs/rhs %.6f, %.1f s (limit 120 s)",
              agg.suites.size(), relations, samples, agg.total_violations(), worst, secs)};
}

// 3. Radial ratio sinh(rho(0, x)/2) / c(0, x) toward the origin.
Outcome radial_sharpness() {
  SuiteSpec s;
  s.check_id = CheckId::sinh_rho_le_c;
  s.sample_count = 10;
  const SuiteReport r = run_suite(s);
  bool ok = r.radial_ratios.size() == 4;
  std::string list;
  for (std::size_t i = 0; i < r.radial_ratios.size(); ++i) {
    const RadialRatio& q = r.radial_ratios[i];
    ok = ok && std::abs(q.ratio - q.formula) <= 1e-9;
    if (i > 0) ok = ok && q.ratio > r.radial_ratios[i - 1].ratio && q.norm < r.radial_ratios[i - 1].norm;
    list += fmt("%s|x|=%g: %.9f", i ? ", " : "", q.norm, q.ratio);
  }
  const double last = r.radial_ratios.empty() ? 0.0 : r.radial_ratios.back().ratio;
  ok = ok && r.radial_ratios.back().norm == 1e-3 && std::abs(last - 1.0) <= 1e-3;
  return {ok, list + fmt("; 1 - ratio at 1e-3 = %.4g", 1.0 - last)};
}

// 4. Moebius distortion bounds, the witness and the identity residuals.
Outcome moebius() {
  double worst_slack = -1.0, witness_err = 0.0, iso = 0.0, inv = 0.0;
  long violations = 0, samples = 0;
  for (int n : {2, 3}) {
    SuiteSpec s;
    s.check_id = CheckId::moebius_distortion;
    s.dimension = n;
    s.domain = Domain::unit_ball(n);
    s.sample_count = 1000;
    s.stress_pairs = false;
    const SuiteReport r = run_suite(s);
    violations += static_cast<long>(r.violations.size());
    samples += r.samples_run;
    std::map<std::string, double> d(r.diagnostics.begin(), r.diagnostics.end());
    witness_err = std::max(witness_err, std::abs(d.at("witness_ratio") - 3.0));
    iso = std::max(iso, d.at("max_composite_isometry_residual"));
    inv = std::max(inv, d.at("max_inversion_identity_residual"));
    // Slack of a bound relation = (ratio - 1) * bound, so ratio - 1 bounds it
    // relative to the bound.
    for (const auto& rel : r.relations) {
      if (rel.name.find("distortion") != std::string::npos) worst_slack = std::max(worst_slack, rel.worst_ratio - 1.0);
    }
  }
  const bool ok = violations == 0 && worst_slack <= 1e-8 && witness_err <= 1e-9 && iso <= 1e-10 && inv <= 1e-10;
  return {ok, fmt("%ld samples, worst relative excess over bound %.3g, |witness - 3| = %.3g, residuals %.3g / %.3g",
                  samples, std::max(0.0, worst_slack), witness_err, iso, inv)};
}

// 5. Geodesic solver closed forms with per-query timing.
Outcome geodesic_closed_forms() {
  double worst_ball = 0.0, worst_punct = 0.0, slowest = 0.0;
  for (int n : {2, 3}) {
    for (double t : {0.1, 0.5, 0.9}) {
      const auto t0 = Clock::now();
      const GeodesicResult g = inner_cassinian(Domain::unit_ball(n), Point::Zero(n), t * unit_axis(n, 0));
      slowest = std::max(slowest, seconds_since(t0));
      const double exact = t / (1.0 - t);
      worst_ball = std::max(worst_ball, std::abs(g.value - exact) / exact);
    }
  }
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 2;
    const auto [x, y] = harness_detail::puncture_pair(n, rng);
    const auto t0 = Clock::now();
    const GeodesicResult g = inner_cassinian(Domain::punctured({Point::Zero(n)}), x, y);
    slowest = std::max(slowest, seconds_since(t0));
    const double exact = (x - y).norm() / (x.norm() * y.norm());
    worst_punct = std::max(worst_punct, std::abs(g.value - exact) / exact);
  }
  return {worst_ball <= 5e-3 && worst_punct <= 5e-3 && slowest <= 5.0,
          fmt("ball center max rel err %.3g, single puncture (100 pairs) max rel err %.3g, slowest query %.3f s",
              worst_ball, worst_punct, slowest)};
}

// 6. Monotonicity, the upper bound, path-length agreement and c <= inner.
Outcome inner_structure() {
  constexpr int kPairs = 100;
  const int n = 2;
  const Point zero = Point::Zero(n);
  const Domain unit = Domain::unit_ball(n), big = Domain::ball(zero, 2.0), single = Domain::punctured({zero});
  Rng rng(6);
  double ball_slack = 0.0, punct_slack = 0.0, bound_excess = 0.0, length_gap = 0.0, c_excess = 0.0;
  int paths = 0;
  auto solve = [&](const Domain& d, const Point& x, const Point& y) {
    const GeodesicResult g = inner_cassinian(d, x, y);
    c_excess = std::max(c_excess, cassinian(d, x, y).value - g.value);
    if (g.path.vertices.size() >= 2) {
      length_gap = std::max(length_gap, std::abs(path_length_partition(d, g.path.vertices) - g.value) / g.value);
      ++paths;
    }
    return g.value;
  };
  for (int i = 0; i < kPairs; ++i) {
    // Ball(0,1) in Ball(0,2): the larger domain gives the smaller value.
    const Point bx = rng.in_ball(n, 0.95), by = rng.in_ball(n, 0.95);
    const double small = solve(unit, bx, by), large = solve(big, bx, by);
    ball_slack = std::max(ball_slack, (large - small) / std::max(1.0, small));
    // Adding a puncture can only increase the value.
    const auto [px, py] = harness_detail::puncture_pair(n, rng);
    Point q;
    do {
      q = rng.uniform(0.5, 2.0) * rng.unit_vector(n);
    } while ((px - q).norm() < 0.1 || (py - q).norm() < 0.1);
    const double one = solve(single, px, py), two = solve(Domain::punctured({zero, q}), px, py);
    punct_slack = std::max(punct_slack, (one - two) / std::max(1.0, two));
    // Eligible pair: |x - y| < delta(x).
    const Point cx = rng.in_ball(n, 0.9);
    const Point cy = cx + rng.uniform(0.05, 0.95) * (1.0 - cx.norm()) * rng.unit_vector(n);
    const double bound = inner_upper_bound(unit, cx, cy);
    bound_excess = std::max(bound_excess, (solve(unit, cx, cy) - bound) / bound);
  }
  const bool ok = ball_slack <= 1e-4 && punct_slack <= 1e-4 && bound_excess <= 1e-4 && length_gap <= 1e-4 &&
                  c_excess <= 1e-6;
  return {ok, fmt("%d pairs: monotone slack balls %.3g, punctures %.3g; bound excess %.3g; "
                  "partition vs integral %.3g over %d paths; max c - inner %.3g",
                  kPairs, std::max(0.0, ball_slack), std::max(0.0, punct_slack), std::max(0.0, bound_excess),
                  length_gap, paths, c_excess)};
}

// 7. Optimized c and v against brute-force boundary scans.
Outcome oracle_equivalence() {
  double worst_c = 0.0, worst_v = 0.0;
  Rng rng(7);
  for (int n : {2, 3}) {
    const Domain ball = Domain::unit_ball(n);
    for (int i = 0; i < 100; ++i) {
      const Point x = rng.in_ball(n, 1.0), y = rng.in_ball(n, 1.0);
      const double c_ref = oracle::cassinian_unit_ball(x, y), v_ref = oracle::visual_angle_unit_ball(x, y);
      worst_c = std::max(worst_c, std::abs(cassinian(ball, x, y).value - c_ref) / c_ref);
      worst_v = std::max(worst_v, std::abs(visual_angle(ball, x, y).value - v_ref) / v_ref);
    }
  }
  return {worst_c <= 1e-6 && worst_v <= 1e-6,
          fmt("200 pairs (100 each for n = 2, 3): max rel diff c %.3g, v %.3g", worst_c, worst_v)};
}

// 8. p = tanh(rho / 2) on the upper half-plane.
Outcome halfplane_identity() {
  const Domain h = Domain::upper_half_space(2);
  Rng rng(8);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Point x = make_point({rng.uniform(-5.0, 5.0), std::exp(rng.uniform(-4.0, 4.0))});
    const Point y = make_point({rng.uniform(-5.0, 5.0), std::exp(rng.uniform(-4.0, 4.0))});
    worst = std::max(worst, std::abs(p_quantity(h, x, y).value - std::tanh(0.5 * hyperbolic_halfplane(x, y).value)));
  }
  return {worst <= 1e-12, fmt("1000 pairs: max |p - tanh(rho/2)| = %.3g", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"closed forms of c", closed_forms},
      {"inequality suites", inequality_suites},
      {"radial sharpness", radial_sharpness},
      {"Moebius distortion", moebius},
      {"geodesic closed forms", geodesic_closed_forms},
      {"inner-metric structure", inner_structure},
      {"oracle equivalence", oracle_equivalence},
      {"half-plane identity", halfplane_identity},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    passed += o.pass ? 1 : 0;
    std::printf("%s  %zu. %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
