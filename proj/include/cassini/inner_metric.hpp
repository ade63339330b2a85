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

// Cassinian path length and the inner Cassinian metric
//
//   c~_D(x, y) = inf over curves g from x to y of  int_g |dz| / delta_D(z)^2,
//
// which is also the supremum over partitions of sums of c_D. The infimum is
// approximated by polylines: a straight, detour, or grid-Dijkstra start is
// refined coarse-to-fine (3, 5, 9, ... vertices, then N -> 2N - 1) by
// per-vertex compass descent on the exact polyline energy.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Core>

#include "cassini/core_geometry.hpp"
#include "cassini/metrics.hpp"

namespace cassini {

enum class LengthScheme { partition_sum, quadrature };

inline std::string_view to_string(LengthScheme s) {
  return s == LengthScheme::partition_sum ? "partition_sum" : "quadrature";
}

// A polyline in a domain with its Cassinian length.
struct Path {
  std::vector<Point> vertices;
  double length_value = 0.0;
  LengthScheme scheme = LengthScheme::quadrature;
};

enum class GeodesicBackend { polyline_descent, grid_dijkstra, closed_form };

inline std::string_view to_string(GeodesicBackend b) {
  switch (b) {
    case GeodesicBackend::polyline_descent: return "polyline_descent";
    case GeodesicBackend::grid_dijkstra: return "grid_dijkstra";
    case GeodesicBackend::closed_form: return "closed_form";
  }
  return "unknown";
}

struct GeodesicResult {
  Path path;
  double value = 0.0;
  GeodesicBackend backend = GeodesicBackend::polyline_descent;
  long iterations = 0;          // descent sweeps over all levels
  double refinement_gap = 0.0;  // |value(N) - value((N + 1) / 2)| at the last level
};

struct GeodesicOptions {
  // polyline_descent starts from a straight or detour polyline;
  // grid_dijkstra starts from a grid shortest path; closed_form only
  // evaluates a known formula and fails otherwise.
  GeodesicBackend backend = GeodesicBackend::polyline_descent;
  int vertices = 129;            // first level at which convergence is tested
  int max_vertices = 4097;
  double relative_change = 1e-5;
  int grid_resolution_2d = 257;
  int grid_resolution_3d = 65;
  // Return the exact segment geodesic (ball pair through the center, radial
  // single-puncture pair) instead of running the solver.
  bool prefer_closed_form = false;

  void validate() const {
    if (vertices < 3 || max_vertices < vertices) throw InvalidArgument("need 3 <= vertices <= max_vertices");
    if (!(relative_change > 0.0)) throw InvalidArgument("relative_change must be positive");
    if (grid_resolution_2d < 3 || grid_resolution_3d < 3) throw InvalidArgument("grid resolution must be >= 3");
  }
};

namespace detail {

inline double dist2(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// int_0^1 |d| dt / |u + t d|^2 for u = a - q, d = b - a: the exact Cassinian
// length of a segment seen from a single puncture q.
inline double puncture_segment(const double* a, const double* b, const double* q, int n, double t0 = 0.0,
                               double t1 = 1.0) {
  double D = 0.0, B = 0.0, C = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = b[i] - a[i];
    const double u = a[i] - q[i] + t0 * d;
    D += d * d;
    B += u * d;
    C += u * u;
  }
  const double len = std::sqrt(D);
  const double s = t1 - t0;
  // Over [0, s] with |u + t d|^2 = D t^2 + 2 B t + C.
  const double K2 = std::max(D * C - B * B, 0.0);
  const double K = std::sqrt(K2);
  const double X = K2 + B * (D * s + B);  // atan difference denominator
  const double Y = D * s * K;
  if (Y < 1e-4 * X) {
    // atan2(Y, X) / K by its series; also the exact collinear limit.
    const double r = Y / X;
    return len * D * s / X * (1.0 - r * r / 3.0 + r * r * r * r / 5.0);
  }
  if (K == 0.0) return std::numeric_limits<double>::infinity();
  return len * std::atan2(Y, X) / K;
}

// Integrates the domain density along segments.
class DensityIntegrator {
 public:
  explicit DensityIntegrator(const Domain& d) : domain_(d), n_(d.dimension()) {
    if (const auto* b = d.as_ball()) {
      center_ = b->center;
      radius_ = b->radius;
    } else if (const auto* h = d.as_half_space()) {
      normal_ = h->normal;
      offset_ = h->offset;
    } else {
      for (const auto& p : d.as_punctured()->punctures) flat_.insert(flat_.end(), p.data(), p.data() + n_);
    }
  }

  int dimension() const { return n_; }
  const Domain& domain() const { return domain_; }

  // Signed clearance: delta_D(z) inside, <= 0 outside (0 at punctures).
  double clearance(const double* z) const {
    switch (domain_.kind()) {
      case DomainKind::ball: return radius_ - std::sqrt(dist2(z, center_.data(), n_));
      case DomainKind::halfspace: {
        double s = -offset_;
        for (int i = 0; i < n_; ++i) s += z[i] * normal_[i];
        return s;
      }
      case DomainKind::punctured: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k * n_ < flat_.size(); ++k) best = std::min(best, dist2(z, &flat_[k * n_], n_));
        return std::sqrt(best);
      }
    }
    return 0.0;
  }

  // int over [a, b] of delta^-2 ds; +inf if the segment leaves the domain.
  double segment(const double* a, const double* b) const {
    switch (domain_.kind()) {
      case DomainKind::ball: return ball_segment(a, b);
      case DomainKind::halfspace: {
        const double ha = clearance(a), hb = clearance(b);
        if (!(ha > 0.0 && hb > 0.0)) return std::numeric_limits<double>::infinity();
        return std::sqrt(dist2(a, b, n_)) / (ha * hb);
      }
      case DomainKind::punctured: return punctured_segment(a, b);
    }
    return 0.0;
  }

 private:
  // Marches from a to b in pieces no longer than half the clearance at the
  // piece start; delta is 1-Lipschitz, so each piece sees at most a factor 2
  // variation and 10-point Gauss-Legendre is accurate to rounding.
  double ball_segment(const double* a, const double* b) const {
    const double len = std::sqrt(dist2(a, b, n_));
    if (len == 0.0) return 0.0;
    if (!(clearance(a) > 0.0 && clearance(b) > 0.0)) return std::numeric_limits<double>::infinity();
    std::array<double, 8> zbuf{};
    std::vector<double> zheap;
    double* z = n_ <= 8 ? zbuf.data() : (zheap.resize(static_cast<std::size_t>(n_)), zheap.data());
    auto density = [&](double t) {
      for (int i = 0; i < n_; ++i) z[i] = a[i] + t * (b[i] - a[i]);
      const double c = clearance(z);
      return 1.0 / (c * c);
    };
    double total = 0.0;
    double t = 0.0;
    while (t < 1.0) {
      for (int i = 0; i < n_; ++i) z[i] = a[i] + t * (b[i] - a[i]);
      const double step = std::min(1.0 - t, 0.5 * clearance(z) / len);
      const double t_next = step >= 1.0 - t ? 1.0 : t + step;
      total += boost::math::quadrature::gauss<double, 10>::integrate(density, t, t_next);
      t = t_next;
    }
    return total * len;
  }

  // Exact: the nearest puncture is constant between bisector crossings.
  double punctured_segment(const double* a, const double* b) const {
    const std::size_t m = flat_.size() / static_cast<std::size_t>(n_);
    if (m == 1) return puncture_segment(a, b, flat_.data(), n_);
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double* pi = &flat_[i * n_];
        const double* pj = &flat_[j * n_];
        double num = 0.0, den = 0.0;
        for (int k = 0; k < n_; ++k) {
          const double ui = a[k] - pi[k], uj = a[k] - pj[k], d = b[k] - a[k];
          num += uj * uj - ui * ui;
          den += 2.0 * d * (ui - uj);
        }
        if (den != 0.0) {
          const double t = num / den;
          if (t > 0.0 && t < 1.0) cuts.push_back(t);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    std::array<double, 8> zbuf{};
    std::vector<double> zheap;
    double* z = n_ <= 8 ? zbuf.data() : (zheap.resize(static_cast<std::size_t>(n_)), zheap.data());
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double t0 = cuts[c], t1 = cuts[c + 1];
      if (t1 <= t0) continue;
      const double tm = 0.5 * (t0 + t1);
      for (int k = 0; k < n_; ++k) z[k] = a[k] + tm * (b[k] - a[k]);
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m; ++k) {
        const double d2 = dist2(z, &flat_[k * n_], n_);
        if (d2 < best) {
          best = d2;
          nearest = k;
        }
      }
      // Scaled to the sub-interval: the integral over [t0, t1] of the unit-speed density.
      total += puncture_segment(a, b, &flat_[nearest * n_], n_, t0, t1);
    }
    return total;
  }

  const Domain& domain_;
  int n_;
  Point center_, normal_;
  double radius_ = 1.0, offset_ = 0.0;
  std::vector<double> flat_;
};

inline double polyline_energy(const DensityIntegrator& dens, const std::vector<Point>& v) {
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) e += dens.segment(v[i].data(), v[i + 1].data());
  return e;
}

// Resamples a polyline to m vertices at equal Cassinian length.
inline std::vector<Point> resample(const DensityIntegrator& dens, const std::vector<Point>& v, int m) {
  const int n = dens.dimension();
  std::vector<double> cumulative(v.size(), 0.0);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    cumulative[i + 1] = cumulative[i] + dens.segment(v[i].data(), v[i + 1].data());
  }
  const double total = cumulative.back();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(m));
  out.push_back(v.front());
  Point z(n);
  std::size_t seg = 0;
  for (int k = 1; k < m - 1; ++k) {
    const double target = total * k / (m - 1);
    while (seg + 2 < v.size() && cumulative[seg + 1] < target) ++seg;
    const Point& a = v[seg];
    const Point& b = v[seg + 1];
    const double want = target - cumulative[seg];
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      z = a + mid * (b - a);
      if (dens.segment(a.data(), z.data()) < want) lo = mid;
      else hi = mid;
    }
    out.push_back(a + 0.5 * (lo + hi) * (b - a));
  }
  out.push_back(v.back());
  return out;
}

// Orthonormal basis of the complement of the unit vector t.
inline Eigen::MatrixXd normal_frame(const Point& t) { return hyperplane_basis(t); }

// Per-vertex compass descent on the polyline energy, moving each interior
// vertex only across the local tangent (tangential motion merely
// reparametrizes). Returns the number of sweeps.
inline long descend(const DensityIntegrator& dens, std::vector<Point>& v, int max_sweeps = 400) {
  const std::size_t m = v.size();
  if (m < 3) return 0;
  const int n = dens.dimension();
  constexpr double kNoise = 4.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> step(m, 0.0), tol(m, 0.0), cap(m, 0.0);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h = std::min((v[i] - v[i - 1]).norm(), (v[i + 1] - v[i]).norm());
    step[i] = 0.25 * h;
    cap[i] = h;
    tol[i] = 1e-5 * h;
  }
  Point trial(n);
  long sweeps = 0;
  bool active = true;
  while (active && sweeps < max_sweeps) {
    active = false;
    ++sweeps;
    // Alternate the sweep direction (symmetric Gauss-Seidel).
    const bool forward = sweeps % 2 == 1;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const std::size_t i = forward ? k : m - 1 - k;
      if (step[i] < tol[i]) continue;
      active = true;
      const Point tangent = (v[i + 1] - v[i - 1]).normalized();
      const Eigen::MatrixXd frame = normal_frame(tangent);
      double local = dens.segment(v[i - 1].data(), v[i].data()) + dens.segment(v[i].data(), v[i + 1].data());
      bool improved = false;
      for (int c = 0; c < frame.cols(); ++c) {
        for (double sign : {1.0, -1.0}) {
          trial = v[i] + (sign * step[i]) * frame.col(c);
          if (!(dens.clearance(trial.data()) >= kPathClearance)) continue;
          const double e = dens.segment(v[i - 1].data(), trial.data()) + dens.segment(trial.data(), v[i + 1].data());
          if (e < local - kNoise * local) {
            local = e;
            v[i] = trial;
            improved = true;
            break;
          }
        }
      }
      step[i] = improved ? std::min(2.0 * step[i], cap[i]) : 0.5 * step[i];
    }
  }
  return sweeps;
}

// Minimum clearance along the segment [a, b] (sampled for balls, exact
// otherwise since balls and half-spaces are convex and min is at an end).
inline double segment_clearance(const DensityIntegrator& dens, const Point& a, const Point& b) {
  if (dens.domain().kind() != DomainKind::punctured) {
    return std::min(dens.clearance(a.data()), dens.clearance(b.data()));
  }
  double best = std::numeric_limits<double>::infinity();
  const Point d = b - a;
  const double dd = d.squaredNorm();
  for (const auto& q : dens.domain().as_punctured()->punctures) {
    const double t = dd > 0.0 ? std::clamp((q - a).dot(d) / dd, 0.0, 1.0) : 0.0;
    best = std::min(best, (a + t * d - q).norm());
  }
  return best;
}

// The straight segment if admissible, else a detour bending around the
// puncture nearest to the segment at offset 0.5 * min(|x-y|, |x-q|, |y-q|).
inline std::vector<Point> initial_polyline(const DensityIntegrator& dens, const Point& x, const Point& y) {
  if (segment_clearance(dens, x, y) >= kPathClearance) return {x, y};
  const auto& punctures = dens.domain().as_punctured()->punctures;
  const Point d = y - x;
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < punctures.size(); ++k) {
    const double t = std::clamp((punctures[k] - x).dot(d) / d.squaredNorm(), 0.0, 1.0);
    const double dist = (x + t * d - punctures[k]).norm();
    if (dist < best) {
      best = dist;
      nearest = k;
    }
  }
  const Point& q = punctures[nearest];
  const double scale = std::min({d.norm(), (x - q).norm(), (y - q).norm()});
  // Perpendicular direction: first standard axis not parallel to the segment.
  const Point u = d.normalized();
  Point perp;
  for (int k = 0; k < u.size(); ++k) {
    perp = unit_axis(static_cast<int>(u.size()), k) - u[k] * u;
    if (perp.norm() > 1e-8) break;
  }
  perp.normalize();
  std::vector<std::vector<Point>> candidates;
  for (double factor : {0.5, 0.25, 1.0, 2.0}) {
    for (double sign : {1.0, -1.0}) {
      const Point bend = q + (sign * factor * scale) * perp;
      if (segment_clearance(dens, x, bend) >= kPathClearance && segment_clearance(dens, bend, y) >= kPathClearance) {
        candidates.push_back({x, bend, y});
      }
    }
    if (!candidates.empty()) break;
  }
  if (candidates.empty()) throw std::runtime_error("no admissible initial path found");
  // Both sides of a single puncture are equally good; keep the lexicographically smaller.
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return lexicographically_less(a[1], b[1]); });
  return candidates.front();
}

// Shortest path on a regular grid (8-connected in 2-D, 26-connected in 3-D)
// with edge weight = length * mean of delta^-2 at the two ends. The box is the
// bounding box of {x, y} grown by half its extent plus the larger clearance.
inline std::vector<Point> grid_polyline(const DensityIntegrator& dens, const Point& x, const Point& y, int res) {
  const int n = dens.dimension();
  if (n != 2 && n != 3) throw Unsupported("the grid backend supports dimensions 2 and 3 only");
  const double pad_delta = std::max(dens.clearance(x.data()), dens.clearance(y.data()));
  Point lo = x.cwiseMin(y), hi = x.cwiseMax(y);
  const Point extent = hi - lo;
  lo -= 0.5 * extent + Point::Constant(n, pad_delta);
  hi += 0.5 * extent + Point::Constant(n, pad_delta);
  const Point h = (hi - lo) / (res - 1);
  const long count = n == 2 ? static_cast<long>(res) * res : static_cast<long>(res) * res * res;
  auto coords = [&](long id, Point& p) {
    long rest = id;
    for (int k = 0; k < n; ++k) {
      p[k] = lo[k] + h[k] * static_cast<double>(rest % res);
      rest /= res;
    }
  };
  std::vector<double> weight(static_cast<std::size_t>(count));
  Point p(n);
  for (long id = 0; id < count; ++id) {
    coords(id, p);
    const double c = dens.clearance(p.data());
    weight[static_cast<std::size_t>(id)] = c >= kPathClearance ? 1.0 / (c * c) : -1.0;  // -1: blocked
  }
  // Neighbor offsets.
  std::vector<std::array<int, 3>> offsets;
  for (int dz = (n == 3 ? -1 : 0); dz <= (n == 3 ? 1 : 0); ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx != 0 || dy != 0 || dz != 0) offsets.push_back({dx, dy, dz});
  auto index_of = [&](const std::array<long, 3>& ijk) {
    long id = 0;
    for (int k = n - 1; k >= 0; --k) id = id * res + ijk[static_cast<std::size_t>(k)];
    return id;
  };
  auto ijk_of = [&](long id) {
    std::array<long, 3> ijk{0, 0, 0};
    for (int k = 0; k < n; ++k) {
      ijk[static_cast<std::size_t>(k)] = id % res;
      id /= res;
    }
    return ijk;
  };
  // Terminals connect to the unblocked corners of their cell.
  auto cell_nodes = [&](const Point& z) {
    std::vector<long> nodes;
    std::array<long, 3> base{0, 0, 0};
    for (int k = 0; k < n; ++k) {
      base[static_cast<std::size_t>(k)] =
          std::clamp(static_cast<long>(std::floor((z[k] - lo[k]) / h[k])), 0L, static_cast<long>(res - 2));
    }
    for (int corner = 0; corner < (1 << n); ++corner) {
      std::array<long, 3> ijk = base;
      for (int k = 0; k < n; ++k) ijk[static_cast<std::size_t>(k)] += (corner >> k) & 1;
      const long id = index_of(ijk);
      if (weight[static_cast<std::size_t>(id)] > 0.0) nodes.push_back(id);
    }
    return nodes;
  };
  const double wx = 1.0 / std::pow(dens.clearance(x.data()), 2);
  const double wy = 1.0 / std::pow(dens.clearance(y.data()), 2);
  const auto sources = cell_nodes(x);
  const auto targets = cell_nodes(y);
  if (sources.empty() || targets.empty()) throw std::runtime_error("grid has no admissible node near an endpoint");

  std::vector<double> dist(static_cast<std::size_t>(count), std::numeric_limits<double>::infinity());
  std::vector<long> parent(static_cast<std::size_t>(count), -1);
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  Point q(n);
  for (long s : sources) {
    coords(s, q);
    const double w = (q - x).norm() * 0.5 * (wx + weight[static_cast<std::size_t>(s)]);
    if (w < dist[static_cast<std::size_t>(s)]) {
      dist[static_cast<std::size_t>(s)] = w;
      heap.emplace(w, s);
    }
  }
  std::vector<double> step_len(offsets.size());
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::pow(offsets[o][static_cast<std::size_t>(k)] * h[k], 2);
    step_len[o] = std::sqrt(s);
  }
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    const auto ijk = ijk_of(u);
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      std::array<long, 3> nb = ijk;
      bool inside = true;
      for (int k = 0; k < n; ++k) {
        nb[static_cast<std::size_t>(k)] += offsets[o][static_cast<std::size_t>(k)];
        if (nb[static_cast<std::size_t>(k)] < 0 || nb[static_cast<std::size_t>(k)] >= res) inside = false;
      }
      if (!inside) continue;
      const long v = index_of(nb);
      const double wv = weight[static_cast<std::size_t>(v)];
      if (wv < 0.0) continue;
      const double nd = du + step_len[o] * 0.5 * (weight[static_cast<std::size_t>(u)] + wv);
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        parent[static_cast<std::size_t>(v)] = u;
        heap.emplace(nd, v);
      }
    }
  }
  long best = -1;
  double best_total = std::numeric_limits<double>::infinity();
  for (long t : targets) {
    coords(t, q);
    const double total = dist[static_cast<std::size_t>(t)] + (q - y).norm() * 0.5 * (wy + weight[static_cast<std::size_t>(t)]);
    if (total < best_total) {
      best_total = total;
      best = t;
    }
  }
  if (best < 0 || !std::isfinite(best_total)) throw std::runtime_error("grid search found no path");
  std::vector<Point> path{y};
  for (long id = best; id >= 0; id = parent[static_cast<std::size_t>(id)]) {
    coords(id, q);
    if ((q - path.back()).norm() > 0.0) path.push_back(q);
  }
  if ((x - path.back()).norm() > 0.0) path.push_back(x);
  else path.back() = x;
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

// Checks the Path invariants: vertices inside with clearance >= 1e-9,
// consecutive vertices distinct, and no segment through a puncture.
inline void validate_path(const Domain& d, const std::vector<Point>& vertices) {
  if (vertices.empty()) throw InvalidArgument("a path needs at least one vertex");
  for (const auto& v : vertices) require_interior(d, v, kPathClearance);
  const detail::DensityIntegrator dens(d);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    if (vertices[i] == vertices[i + 1]) throw InvalidArgument("consecutive path vertices must be distinct");
    if (detail::segment_clearance(dens, vertices[i], vertices[i + 1]) < kPathClearance) {
      throw DomainViolation("path segment passes too close to a puncture");
    }
  }
}

// Integral form: sum over segments of int delta^-2 ds, each by adaptive
// Gauss-Kronrod quadrature with relative tolerance 1e-9.
inline double path_length_integral(const Domain& d, const std::vector<Point>& vertices) {
  validate_path(d, vertices);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const Point& a = vertices[i];
    const Point dir = vertices[i + 1] - a;
    const double len = dir.norm();
    Point z(a.size());
    auto density = [&](double t) {
      z = a + t * dir;
      const double delta = boundary_distance(d, z);
      return len / (delta * delta);
    };
    // Split at interior clearance minima of punctured segments so each
    // panel sees a smooth integrand.
    std::vector<double> cuts{0.0, 1.0};
    if (const auto* s = d.as_punctured()) {
      for (const auto& q : s->punctures) {
        const double t = (q - a).dot(dir) / (len * len);
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
      std::sort(cuts.begin(), cuts.end());
      // Sliver panels cannot meet a relative tolerance; merge them away.
      std::vector<double> kept{0.0};
      for (std::size_t c = 1; c + 1 < cuts.size(); ++c) {
        if (cuts[c] - kept.back() > 1e-6 && 1.0 - cuts[c] > 1e-6) kept.push_back(cuts[c]);
      }
      kept.push_back(1.0);
      cuts = std::move(kept);
    }
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(density, cuts[c], cuts[c + 1], 15, 1e-9);
    }
  }
  return total;
}

// Partition form: sum of c_D over consecutive vertices, with every segment
// bisected until two successive sums differ by less than 1e-8 relative. The
// sums increase toward the integral form under refinement.
inline double path_length_partition(const Domain& d, const std::vector<Point>& vertices) {
  validate_path(d, vertices);
  if (vertices.size() < 2) return 0.0;
  // Once chords are short next to delta the boundary objective has a single
  // peak, and the value error is quadratic in the angle error.
  SolverOptions opt = fast_slice_options();
  opt.cassinian_samples = 16;
  opt.slice_tolerance = 1e-7;
  std::vector<Point> pts = vertices;
  auto sum = [&](const std::vector<Point>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s += cassinian(d, v[i], v[i + 1], opt).value;
    return s;
  };
  double value = sum(pts);
  constexpr std::size_t kMaxVertices = std::size_t{1} << 21;
  while (pts.size() < kMaxVertices) {
    std::vector<Point> finer;
    finer.reserve(2 * pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      finer.push_back(pts[i]);
      finer.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    finer.push_back(pts.back());
    pts.swap(finer);
    const double next = sum(pts);
    const bool done = std::abs(next - value) < 1e-8 * next;
    value = next;
    if (done) break;
  }
  return value;
}

// Exact inner-metric values: a single puncture q (|x-y| / (|x-q||y-q|)) or a
// ball pair with one endpoint at the center (|x-c| / (R (R - |x-c|))).
inline std::optional<double> closed_form_inner(const Domain& d, const Point& x, const Point& y) {
  require_dimension(d, x);
  require_dimension(d, y);
  if (!contains(d, x) || !contains(d, y)) return std::nullopt;
  if (x == y) return 0.0;
  if (const auto* s = d.as_punctured()) {
    if (s->punctures.size() != 1) return std::nullopt;
    const Point& q = s->punctures.front();
    return (x - y).norm() / ((x - q).norm() * (y - q).norm());
  }
  if (const auto* b = d.as_ball()) {
    const Point* other = nullptr;
    if (x == b->center) other = &y;
    else if (y == b->center) other = &x;
    if (other == nullptr) return std::nullopt;
    const double r = (*other - b->center).norm();
    return r / (b->radius * (b->radius - r));
  }
  return std::nullopt;
}

// |x-y| / (delta(x) (delta(x) - |x-y|)), valid when |x-y| < delta(x).
inline double inner_upper_bound(const Domain& d, const Point& x, const Point& y) {
  const double dx = require_interior(d, x);
  require_interior(d, y);
  const double dxy = (x - y).norm();
  if (!(dxy < dx)) throw InvalidArgument("the upper bound needs |x - y| < delta(x)");
  return dxy / (dx * (dx - dxy));
}

namespace detail {

// Pairs whose exact geodesic is the straight segment.
inline bool straight_geodesic(const Domain& d, const Point& x, const Point& y) {
  if (const auto* b = d.as_ball()) return x == b->center || y == b->center;
  if (const auto* s = d.as_punctured()) {
    if (s->punctures.size() != 1) return false;
    const Point u = x - s->punctures.front(), v = y - s->punctures.front();
    // Same ray from the puncture.
    return std::abs(u.dot(v) - u.norm() * v.norm()) <= 1e-15 * u.norm() * v.norm();
  }
  return false;
}

inline GeodesicResult finish(const Domain& d, std::vector<Point> vertices, GeodesicBackend backend, long iterations,
                             double gap) {
  GeodesicResult r;
  r.path.vertices = std::move(vertices);
  r.path.scheme = LengthScheme::quadrature;
  r.path.length_value = path_length_integral(d, r.path.vertices);
  r.value = r.path.length_value;
  r.backend = backend;
  r.iterations = iterations;
  r.refinement_gap = gap;
  return r;
}

}  // namespace detail

// Approximates c~_D(x, y) from above by an optimized polyline.
inline GeodesicResult inner_cassinian(const Domain& d, const Point& x, const Point& y,
                                      const GeodesicOptions& options = {}) {
  options.validate();
  require_interior(d, x, kPathClearance);
  require_interior(d, y, kPathClearance);
  if (x == y) {
    GeodesicResult r;
    r.path.vertices = {x};
    r.backend = options.backend;
    return r;
  }
  if (options.backend == GeodesicBackend::closed_form || options.prefer_closed_form) {
    if (const auto exact = closed_form_inner(d, x, y); exact && detail::straight_geodesic(d, x, y)) {
      GeodesicResult r = detail::finish(d, {x, y}, GeodesicBackend::closed_form, 0, 0.0);
      r.value = *exact;
      return r;
    }
    if (options.backend == GeodesicBackend::closed_form) {
      throw Unsupported("no straight-segment closed form applies to this pair");
    }
  }
  const detail::DensityIntegrator dens(d);
  std::vector<Point> poly;
  int level_vertices = 3;
  if (options.backend == GeodesicBackend::grid_dijkstra) {
    const int res = d.dimension() == 2 ? options.grid_resolution_2d : options.grid_resolution_3d;
    poly = detail::resample(dens, detail::grid_polyline(dens, x, y, res), 9);
    level_vertices = 9;
  } else {
    poly = detail::resample(dens, detail::initial_polyline(dens, x, y), 3);
  }
  long sweeps = detail::descend(dens, poly);
  double previous = detail::polyline_energy(dens, poly);
  double gap = std::numeric_limits<double>::infinity();
  while (level_vertices < options.max_vertices) {
    level_vertices = 2 * level_vertices - 1;
    poly = detail::resample(dens, poly, level_vertices);
    sweeps += detail::descend(dens, poly);
    const double energy = detail::polyline_energy(dens, poly);
    gap = std::abs(energy - previous);
    previous = energy;
    if (level_vertices >= options.vertices && gap < options.relative_change * energy) break;
  }
  return detail::finish(d, std::move(poly), options.backend, sweeps, gap);
}

}  // namespace cassini
