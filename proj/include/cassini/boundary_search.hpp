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

// Low-level minimizers used by the boundary supremum solvers: golden-section
// search, refinement of a dense 1-D sample, and multistart coordinate descent
// on a sphere or a hyperplane.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "cassini/random.hpp"

namespace cassini::search {

struct Minimum1d {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

// Golden-section search for a minimum of f on [lo, hi], assuming unimodality.
// Stops once the bracket is shorter than `tol`.
template <class F>
Minimum1d golden_section(F&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  Minimum1d out;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  out.evaluations = 2;
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
    // Bracket stalled at floating-point resolution.
    if (!(c < d)) break;
  }
  if (fc < fd) {
    out.arg = c;
    out.value = fc;
  } else {
    out.arg = d;
    out.value = fd;
  }
  return out;
}

// Result of refining a dense sample of a 1-D objective.
struct SampledSearch {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double best_sampled = std::numeric_limits<double>::infinity();
  double local_mesh = 0.0;  // widest sample gap adjacent to the best sample
  long evaluations = 0;
};

// Evaluates f on the sorted parameters `params`, then golden-refines the
// brackets around the `max_brackets` lowest discrete local minima. With
// `period > 0` the parameter is treated as an angle modulo `period`.
template <class F>
SampledSearch refine_sampled(F&& f, std::vector<double> params, double period, double tol, int max_brackets = 4) {
  if (!std::is_sorted(params.begin(), params.end())) std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  const std::size_t m = params.size();
  SampledSearch out;
  std::vector<double> values(m);
  for (std::size_t i = 0; i < m; ++i) values[i] = f(params[i]);
  out.evaluations = static_cast<long>(m);

  auto neighbor = [&](std::size_t i, int dir) -> double {
    if (dir < 0) {
      if (i > 0) return params[i - 1];
      return period > 0 ? params[m - 1] - period : params[0];
    }
    if (i + 1 < m) return params[i + 1];
    return period > 0 ? params[0] + period : params[m - 1];
  };
  auto neighbor_value = [&](std::size_t i, int dir) -> double {
    if (dir < 0) {
      if (i > 0) return values[i - 1];
      return period > 0 ? values[m - 1] : std::numeric_limits<double>::infinity();
    }
    if (i + 1 < m) return values[i + 1];
    return period > 0 ? values[0] : std::numeric_limits<double>::infinity();
  };

  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < m; ++i) {
    if (values[i] <= neighbor_value(i, -1) && values[i] <= neighbor_value(i, +1)) minima.push_back(i);
  }
  if (minima.empty()) {
    minima.push_back(static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin()));
  }
  std::stable_sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (minima.size() > static_cast<std::size_t>(max_brackets)) minima.resize(static_cast<std::size_t>(max_brackets));

  const std::size_t best_index = minima.front();
  out.best_sampled = values[best_index];
  out.arg = params[best_index];
  out.value = values[best_index];
  out.local_mesh = std::max(params[best_index] - neighbor(best_index, -1), neighbor(best_index, +1) - params[best_index]);

  for (std::size_t i : minima) {
    const double lo = neighbor(i, -1);
    const double hi = neighbor(i, +1);
    Minimum1d r = golden_section(f, lo, hi, tol);
    out.evaluations += r.evaluations;
    if (r.value < out.value) {
      out.value = r.value;
      out.arg = r.arg;
    }
  }
  if (period > 0) out.arg = out.arg - period * std::floor(out.arg / period);
  return out;
}

namespace detail {

// tan(phi_i) for phi_i = -pi/2 + pi (i + 1/2) / m, cached per thread.
inline const std::vector<double>& tan_table(int m) {
  thread_local std::vector<std::pair<int, std::vector<double>>> cache;
  for (const auto& [size, table] : cache) {
    if (size == m) return table;
  }
  std::vector<double> table(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) table[static_cast<std::size_t>(i)] = std::tan(-std::numbers::pi / 2 + std::numbers::pi * (i + 0.5) / m);
  cache.emplace_back(m, std::move(table));
  return cache.back().second;
}

}  // namespace detail

// Appends m points focus + scale * tan(phi), phi uniform in (-pi/2, pi/2):
// dense within `scale` of `focus` and reaching out to infinity. `out` stays
// sorted if it was sorted on entry.
inline void append_clustered(std::vector<double>& out, double focus, double scale, int m) {
  const auto mid = static_cast<std::ptrdiff_t>(out.size());
  for (double t : detail::tan_table(m)) out.push_back(focus + scale * t);
  std::inplace_merge(out.begin(), out.begin() + mid, out.end());
}

// Angular analogue on [0, 2 pi): focus + 2 atan(scale * tan(phi)) covers the
// circle once. Keeps `out` sorted.
inline void append_clustered_angles(std::vector<double>& out, double focus, double scale, int m) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const auto mid = static_cast<std::ptrdiff_t>(out.size());
  for (double tp : detail::tan_table(m)) {
    double t = focus + 2.0 * std::atan(scale * tp);
    t -= kTwoPi * std::floor(t / kTwoPi);
    out.push_back(t);
  }
  // The wrapped sequence is increasing apart from one wrap-around point.
  auto wrap = std::is_sorted_until(out.begin() + mid, out.end());
  std::rotate(out.begin() + mid, wrap, out.end());
  std::inplace_merge(out.begin(), out.begin() + mid, out.end());
}

struct MultistartResult {
  Eigen::VectorXd point;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

struct DescentSchedule {
  int starts = 64;
  double initial_step = 0.25;
  double coarse_step = 1e-4;  // every start descends to this step
  double final_step = 1e-12;  // the best start continues down to this step
  std::uint64_t seed = 0x5eed;
};

namespace detail {

// A boundary chart: `dim` free coordinates mapped to an ambient point.
// Sphere charts keep a unit vector (renormalized after each move); hyperplane
// charts keep in-plane coordinates.
struct SphereChart {
  const double* center;
  double radius;
  int n;

  int dim() const { return n; }
  double scale() const { return 1.0; }
  void normalize(double* u) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u[i] * u[i];
    s = 1.0 / std::sqrt(s);
    for (int i = 0; i < n; ++i) u[i] *= s;
  }
  void to_point(const double* u, double* p) const {
    for (int i = 0; i < n; ++i) p[i] = center[i] + radius * u[i];
  }
};

struct HyperplaneChart {
  const double* origin;
  const double* basis;  // column-major n x (n-1)
  int n;
  double length_scale;

  int dim() const { return n - 1; }
  double scale() const { return length_scale; }
  void normalize(double*) const {}
  void to_point(const double* c, double* p) const {
    for (int i = 0; i < n; ++i) p[i] = origin[i];
    for (int k = 0; k < n - 1; ++k) {
      const double* col = basis + static_cast<std::ptrdiff_t>(k) * n;
      for (int i = 0; i < n; ++i) p[i] += c[k] * col[i];
    }
  }
};

inline double chart_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Gradient-free compass search: try +-step along each chart coordinate,
// accept decreases larger than the rounding noise of f, double the step after
// a successful pass (up to its starting size) and halve it after a failed one.
// Returns false if the iterate enters the basin of one of `known` (within a
// few steps of an already converged start), in which case it stops early.
template <class Chart, class F>
bool coordinate_descent(const Chart& chart, F& f, std::vector<double>& coords, double& value, double step,
                        double stop, long& evals, std::vector<double>& trial, std::vector<double>& point,
                        const std::vector<std::vector<double>>* known = nullptr) {
  constexpr double kNoise = 4.0 * std::numeric_limits<double>::epsilon();
  constexpr long kMaxEvaluations = 200000;
  const int k = chart.dim();
  const double max_step = step;
  const double clustering_step = step / 8.0;
  const long budget = evals + kMaxEvaluations;
  while (step >= stop && evals < budget) {
    if (known != nullptr && step <= clustering_step) {
      for (const auto& m : *known) {
        if (chart_distance(coords, m) < 2.0 * step) return false;
      }
    }
    bool improved = false;
    for (int c = 0; c < k; ++c) {
      for (double sign : {1.0, -1.0}) {
        std::copy(coords.begin(), coords.end(), trial.begin());
        trial[static_cast<std::size_t>(c)] += sign * step;
        chart.normalize(trial.data());
        chart.to_point(trial.data(), point.data());
        const double v = f(point.data());
        ++evals;
        if (v < value - kNoise * std::abs(value)) {
          value = v;
          coords.swap(trial);
          improved = true;
          break;
        }
      }
    }
    step = improved ? std::min(2.0 * step, max_step) : 0.5 * step;
  }
  return true;
}

template <class Chart, class F>
MultistartResult multistart(const Chart& chart, F& f, std::vector<std::vector<double>> starts,
                            const DescentSchedule& schedule, int n) {
  MultistartResult out;
  if (starts.empty()) return out;
  std::vector<double> trial(static_cast<std::size_t>(chart.dim())), point(static_cast<std::size_t>(n));
  std::vector<double> values(starts.size());
  // Converged local minima; later starts that wander into one of their
  // basins are abandoned (single-linkage clustering).
  std::vector<std::vector<double>> minima;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    chart.normalize(starts[i].data());
    chart.to_point(starts[i].data(), point.data());
    values[i] = f(point.data());
    ++out.evaluations;
    if (coordinate_descent(chart, f, starts[i], values[i], schedule.initial_step * chart.scale(),
                           schedule.coarse_step * chart.scale(), out.evaluations, trial, point, &minima)) {
      minima.push_back(starts[i]);
    }
  }
  // Exact value comparison; ties go to the lexicographically smaller point.
  std::size_t best = 0;
  std::vector<double> best_point(static_cast<std::size_t>(n));
  chart.to_point(starts[0].data(), best_point.data());
  for (std::size_t i = 1; i < starts.size(); ++i) {
    if (values[i] > values[best]) continue;
    chart.to_point(starts[i].data(), point.data());
    if (values[i] < values[best] ||
        std::lexicographical_compare(point.begin(), point.end(), best_point.begin(), best_point.end())) {
      best = i;
      best_point = point;
    }
  }
  coordinate_descent(chart, f, starts[best], values[best], schedule.coarse_step * chart.scale(),
                     schedule.final_step * chart.scale(), out.evaluations, trial, point);
  out.point.resize(n);
  chart.to_point(starts[best].data(), out.point.data());
  out.value = values[best];
  return out;
}

}  // namespace detail

// Minimizes f (called with a pointer to n ambient coordinates) over the
// sphere S(center, radius) from `schedule.starts` uniformly random starts.
template <class F>
MultistartResult sphere_multistart(F&& f, const Eigen::VectorXd& center, double radius,
                                   const DescentSchedule& schedule) {
  const int n = static_cast<int>(center.size());
  Rng rng(schedule.seed);
  std::vector<std::vector<double>> starts;
  starts.reserve(static_cast<std::size_t>(schedule.starts));
  for (int i = 0; i < schedule.starts; ++i) {
    const Eigen::VectorXd u = rng.unit_vector(n);
    starts.emplace_back(u.data(), u.data() + n);
  }
  detail::SphereChart chart{center.data(), radius, n};
  return detail::multistart(chart, f, std::move(starts), schedule, n);
}

// Minimizes f over the hyperplane through `origin` spanned by the columns of
// `basis`; starts are uniform in the disk of radius `patch_radius`.
template <class F>
MultistartResult hyperplane_multistart(F&& f, const Eigen::VectorXd& origin, const Eigen::MatrixXd& basis,
                                       double patch_radius, double length_scale, const DescentSchedule& schedule) {
  const int n = static_cast<int>(origin.size());
  const int k = static_cast<int>(basis.cols());
  Rng rng(schedule.seed);
  std::vector<std::vector<double>> starts;
  starts.reserve(static_cast<std::size_t>(schedule.starts));
  for (int i = 0; i < schedule.starts; ++i) {
    const double r = patch_radius * std::pow(rng.uniform(), 1.0 / k);
    const Eigen::VectorXd c = r * rng.unit_vector(k);
    starts.emplace_back(c.data(), c.data() + k);
  }
  const Eigen::MatrixXd basis_colmajor = basis;
  detail::HyperplaneChart chart{origin.data(), basis_colmajor.data(), n, length_scale};
  return detail::multistart(chart, f, std::move(starts), schedule, n);
}

}  // namespace cassini::search
