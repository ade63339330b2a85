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

// The `cassini` command line: compute, geodesic, distort, verify and plot.
// run_cli is the whole program; main only forwards argv.
//
// Exit codes: 0 success, 1 internal error, 2 usage or parse error, 3 domain
// violation, 4 unsupported combination, 5 verification found violations.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cassini/harness.hpp"
#include "cassini/inner_metric.hpp"
#include "cassini/io.hpp"
#include "cassini/metrics.hpp"
#include "cassini/moebius.hpp"
#include "cassini/random.hpp"

namespace cassini {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitUnsupported = 4;
inline constexpr int kExitViolations = 5;

namespace cli_detail {

// Fixed 17 significant digits for CSV cells.
inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_point(const Point& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? ";" : "") + csv_number(p[i]);
  return s;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidArgument(what + ": " + e.what());
  }
}

struct PairArgs {
  std::string domain = "unit-ball";
  std::string x, y;
  std::string format = "json";
};

inline void add_pair_options(CLI::App* cmd, PairArgs& a) {
  cmd->add_option("--domain", a.domain,
                  "unit-ball | ball:C:R | halfplane | upper-half-space | halfspace:N:OFFSET | punctured:P1;P2 | JSON")
      ->capture_default_str();
  cmd->add_option("--x", a.x, "first point, comma separated")->required();
  cmd->add_option("--y", a.y, "second point, comma separated")->required();
  cmd->add_option("--format", a.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

struct ParsedPair {
  Domain domain = Domain::unit_ball(2);
  Point x, y;
};

inline ParsedPair parse_pair(const PairArgs& a) {
  ParsedPair p;
  p.x = parse_point_list(a.x);
  p.y = parse_point_list(a.y);
  if (p.x.size() != p.y.size()) throw InvalidArgument("x and y have different dimensions");
  p.domain = parse_domain_spec(a.domain, static_cast<int>(p.x.size()));
  require_dimension(p.domain, p.x);
  return p;
}

inline Json witness_json(const std::optional<BoundaryWitness>& w) {
  if (!w) return nullptr;
  return Json{{"point", point_json(w->point)},
              {"value", number_json(w->value)},
              {"gap_estimate", number_json(w->gap_estimate)},
              {"evaluations", w->evaluations}};
}

inline int cmd_compute(const PairArgs& a, const std::string& metric, std::ostream& out) {
  const ParsedPair p = parse_pair(a);
  MetricValue m;
  if (metric == "cassinian") {
    m = cassinian(p.domain, p.x, p.y);
  } else if (metric == "visual_angle") {
    m = visual_angle(p.domain, p.x, p.y);
  } else if (metric == "j") {
    m = distance_ratio_j(p.domain, p.x, p.y);
  } else if (metric == "p") {
    m = p_quantity(p.domain, p.x, p.y);
  } else if (metric == "rho_ball") {
    if (!harness_detail::is_unit_ball(p.domain)) throw Unsupported("rho_ball needs --domain unit-ball");
    m = hyperbolic_ball(p.x, p.y);
  } else {
    const auto* h = p.domain.as_half_space();
    if (h == nullptr || p.domain.dimension() != 2 || h->offset != 0.0 || h->normal != unit_axis(2, 1)) {
      throw Unsupported("rho_halfplane needs --domain halfplane");
    }
    m = hyperbolic_halfplane(p.x, p.y);
  }
  const double gap = m.witness ? m.witness->gap_estimate : 0.0;
  if (a.format == "csv") {
    out << "metric,value,method,gap_estimate,witness\n";
    out << metric << ',' << csv_number(m.value) << ',' << to_string(m.method) << ',' << csv_number(gap) << ','
        << (m.witness ? csv_point(m.witness->point) : "") << '\n';
  } else {
    out << Json{{"metric", metric},
                {"value", number_json(m.value)},
                {"method", std::string(to_string(m.method))},
                {"witness", witness_json(m.witness)},
                {"gap_estimate", number_json(gap)}}
               .dump(2)
        << '\n';
  }
  return kExitOk;
}

struct GeodesicArgs {
  std::string backend = "polyline_descent";
  int vertices = 129;
  int max_vertices = 4097;
  bool prefer_closed_form = false;
  std::string svg, path_out;
};

inline int cmd_geodesic(const PairArgs& a, const GeodesicArgs& g, std::ostream& out) {
  const ParsedPair p = parse_pair(a);
  if (!g.svg.empty() && p.domain.dimension() != 2) throw Unsupported("SVG output needs a planar domain");
  GeodesicOptions opt;
  if (g.backend == "grid_dijkstra") opt.backend = GeodesicBackend::grid_dijkstra;
  else if (g.backend == "closed_form") opt.backend = GeodesicBackend::closed_form;
  opt.vertices = g.vertices;
  opt.max_vertices = g.max_vertices;
  opt.prefer_closed_form = g.prefer_closed_form;
  const GeodesicResult r = inner_cassinian(p.domain, p.x, p.y, opt);
  const Json path = path_json(r.path);
  if (!g.path_out.empty()) write_file(g.path_out, path.dump(2) + "\n");
  if (!g.svg.empty()) write_file(g.svg, render_svg(p.domain, r.path.vertices));
  if (a.format == "csv") {
    out << "value,backend,refinement_gap,iterations,vertices\n";
    out << csv_number(r.value) << ',' << to_string(r.backend) << ',' << csv_number(r.refinement_gap) << ','
        << r.iterations << ',' << r.path.vertices.size() << '\n';
  } else {
    out << Json{{"value", number_json(r.value)},
                {"backend", std::string(to_string(r.backend))},
                {"refinement_gap", number_json(r.refinement_gap)},
                {"iterations", r.iterations},
                {"path", path}}
               .dump(2)
        << '\n';
  }
  return kExitOk;
}

struct DistortArgs {
  std::string a;
  std::optional<double> t;
  long samples = 1000;
  std::uint64_t seed = 42;
  std::string format = "json";
};

inline int cmd_distort(const DistortArgs& d, std::ostream& out) {
  const Point a = parse_point_list(d.a);
  const int n = static_cast<int>(a.size());
  if (n < 2) throw InvalidArgument("a needs at least two coordinates");
  if (d.samples < 1) throw InvalidArgument("samples must be >= 1");
  const DistortionBounds b = distortion_bounds(a);
  const Domain ball = Domain::unit_ball(n);

  // Witness: x = 0, y = t a/|a| under the inversion sending a to 0.
  Json witness = nullptr;
  double witness_ratio = std::numeric_limits<double>::quiet_NaN();
  if (d.t) {
    if (!(*d.t > -1.0 && *d.t < 0.0)) throw InvalidArgument("t must lie in (-1, 0)");
    const double na = a.norm();
    const Point dir = na > 0.0 ? Point(a / na) : unit_axis(n, 0);
    const Point x = Point::Zero(n), y = *d.t * dir;
    Point fx = x, fy = y;
    if (na > 0.0) {
      const SphereInversion s = inversion_sending_to_zero(a);
      fx = apply(s, x);
      fy = apply(s, y);
    }
    const double before = cassinian(ball, x, y).value, after = cassinian(ball, fx, fy).value;
    witness_ratio = after / before;
    witness = Json{{"x", point_json(x)},         {"y", point_json(y)},
                   {"image_x", point_json(fx)},  {"image_y", point_json(fy)},
                   {"c_before", before},         {"c_after", after},
                   {"ratio", number_json(witness_ratio)}};
  }

  // Identity residuals over random maps with phi(0) = a and random pairs.
  Rng rng(d.seed);
  double iso = 0.0, inv = 0.0;
  const bool has_inversion = a.norm() > 0.0;
  for (long i = 0; i < d.samples; ++i) {
    const Eigen::MatrixXd outer = random_orthogonal(n, rng), inner = random_orthogonal(n, rng);
    const MoebiusMap phi = ball_automorphism(outer, a, inner);
    const Point x = rng.in_ball(n, 1.0), y = rng.in_ball(n, 1.0);
    iso = std::max(iso, composite_isometry_residual(phi, x, y));
    if (has_inversion) inv = std::max(inv, check_inversion_identity(inversion_sending_to_zero(a), x, y));
  }

  if (d.format == "csv") {
    out << "lower,upper,witness_ratio,composite_isometry_residual,inversion_identity_residual\n";
    out << csv_number(b.lower) << ',' << csv_number(b.upper) << ',' << (d.t ? csv_number(witness_ratio) : "") << ','
        << csv_number(iso) << ',' << (has_inversion ? csv_number(inv) : "") << '\n';
  } else {
    out << Json{{"a", point_json(a)},
                {"lower", b.lower},
                {"upper", b.upper},
                {"witness", witness},
                {"samples", d.samples},
                {"composite_isometry_residual", iso},
                {"inversion_identity_residual", has_inversion ? Json(inv) : Json(nullptr)}}
               .dump(2)
        << '\n';
  }
  return kExitOk;
}

struct VerifyArgs {
  bool all = false;
  std::vector<std::string> checks;
  std::string manifest;
  std::string domain = "unit-ball";
  long samples = 10000;
  long inner_samples = 100;
  std::uint64_t seed = 42;
  std::vector<int> dims;
  std::optional<double> lambda;
  std::string out_dir = "cassini-reports";
};

inline int cmd_verify(const VerifyArgs& v, std::ostream& out) {
  if (v.samples < 1) throw InvalidArgument("samples must be >= 1");
  const int modes = (v.all ? 1 : 0) + (v.checks.empty() ? 0 : 1) + (v.manifest.empty() ? 0 : 1);
  if (modes != 1) throw InvalidArgument("give exactly one of --all, --check or --manifest");
  std::vector<SuiteSpec> specs;
  if (v.all) {
    specs = default_manifest(v.samples, v.seed, std::min(v.samples, v.inner_samples));
    if (!v.dims.empty()) {
      std::erase_if(specs, [&](const SuiteSpec& s) { return std::find(v.dims.begin(), v.dims.end(), s.dimension) == v.dims.end(); });
    }
  } else if (!v.manifest.empty()) {
    specs = parse_manifest(parse_json_text(read_file(v.manifest), "manifest"));
  } else {
    const std::vector<int> dims = v.dims.empty() ? std::vector<int>{2} : v.dims;
    for (const auto& name : v.checks) {
      for (int n : dims) {
        SuiteSpec s;
        s.check_id = parse_check_id(name);
        s.dimension = n;
        s.domain = parse_domain_spec(v.domain, n);
        s.sample_count = s.check_id == CheckId::inner_metric ? std::min(v.samples, v.inner_samples) : v.samples;
        s.seed = v.seed;
        s.lambda_bound = v.lambda;
        s.diameter_form = s.check_id == CheckId::p_le_sqrt2_delta_c && s.domain.is_bounded();
        s.validate();
        specs.push_back(std::move(s));
      }
    }
  }
  std::filesystem::create_directories(v.out_dir);
  const AggregateReport agg = run_all(specs);
  for (std::size_t i = 0; i < agg.suites.size(); ++i) {
    const SuiteReport& r = agg.suites[i];
    char name[160];
    std::snprintf(name, sizeof name, "%02zu_%s_%s_n%d.json", i, std::string(to_string(r.check_id)).c_str(),
                  std::string(to_string(r.domain.kind())).c_str(), r.n);
    write_file((std::filesystem::path(v.out_dir) / name).string(), report_json(r).dump(2) + "\n");
    out << (r.violations.empty() ? "ok  " : "FAIL") << "  " << to_string(r.check_id) << "  n=" << r.n << "  "
        << to_string(r.domain.kind()) << "  samples=" << r.samples_run << "  violations=" << r.violations.size()
        << "  worst_ratio=" << format_number(r.worst_slack_ratio) << '\n';
  }
  write_file((std::filesystem::path(v.out_dir) / "summary.json").string(), aggregate_json(agg).dump(2) + "\n");
  out << "total violations: " << agg.total_violations() << '\n';
  return agg.exit_code();
}

struct PlotArgs {
  std::string domain = "unit-ball";
  std::string path;
  std::string svg;
};

inline int cmd_plot(const PlotArgs& p, std::ostream& out) {
  const Path path = parse_path_json(parse_json_text(read_file(p.path), "path"));
  if (path.vertices.empty()) throw InvalidArgument("the path has no vertices");
  const Domain d = parse_domain_spec(p.domain, static_cast<int>(path.vertices.front().size()));
  validate_path(d, path.vertices);
  write_file(p.svg, render_svg(d, path.vertices));
  out << "wrote " << p.svg << '\n';
  return kExitOk;
}

}  // namespace cli_detail

// Runs the command line; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Cassinian metric toolkit"};
  app.require_subcommand(1);

  PairArgs compute_pair;
  std::string metric = "cassinian";
  auto* compute = app.add_subcommand("compute", "evaluate one metric at a pair of points");
  add_pair_options(compute, compute_pair);
  compute->add_option("--metric", metric)
      ->check(CLI::IsMember({"cassinian", "j", "rho_ball", "rho_halfplane", "visual_angle", "p"}))
      ->capture_default_str();

  PairArgs geo_pair;
  GeodesicArgs geo;
  auto* geodesic = app.add_subcommand("geodesic", "approximate the inner metric and its geodesic");
  add_pair_options(geodesic, geo_pair);
  geodesic->add_option("--backend", geo.backend)
      ->check(CLI::IsMember({"polyline_descent", "grid_dijkstra", "closed_form"}))
      ->capture_default_str();
  geodesic->add_option("--vertices", geo.vertices)->capture_default_str();
  geodesic->add_option("--max-vertices", geo.max_vertices)->capture_default_str();
  geodesic->add_flag("--prefer-closed-form", geo.prefer_closed_form);
  geodesic->add_option("--svg", geo.svg, "write a plot (planar domains)");
  geodesic->add_option("--path-out", geo.path_out, "write the path JSON");

  DistortArgs dist;
  auto* distort = app.add_subcommand("distort", "distortion bounds, witness and identity residuals");
  distort->add_option("--a", dist.a, "phi(0), comma separated")->required();
  distort->add_option("--t", dist.t, "witness parameter in (-1, 0)");
  distort->add_option("--samples", dist.samples)->capture_default_str();
  distort->add_option("--seed", dist.seed)->capture_default_str();
  distort->add_option("--format", dist.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "run property suites and write reports");
  verify->add_flag("--all", ver.all, "default manifest");
  verify->add_option("--check", ver.checks, "check id (repeatable)");
  verify->add_option("--manifest", ver.manifest, "manifest JSON file");
  verify->add_option("--domain", ver.domain, "domain for --check")->capture_default_str();
  verify->add_option("--samples", ver.samples)->capture_default_str();
  verify->add_option("--inner-samples", ver.inner_samples, "cap for the inner_metric suite")->capture_default_str();
  verify->add_option("--seed", ver.seed)->capture_default_str();
  verify->add_option("--n", ver.dims, "dimensions (repeatable)");
  verify->add_option("--lambda", ver.lambda);
  verify->add_option("--out-dir", ver.out_dir)->capture_default_str();

  PlotArgs plt;
  auto* plot = app.add_subcommand("plot", "render a path JSON over its domain as SVG");
  plot->add_option("--domain", plt.domain)->capture_default_str();
  plot->add_option("--path", plt.path)->required();
  plot->add_option("--svg", plt.svg)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(compute_pair, metric, out);
    if (*geodesic) return cmd_geodesic(geo_pair, geo, out);
    if (*distort) return cmd_distort(dist, out);
    if (*verify) return cmd_verify(ver, out);
    if (*plot) return cmd_plot(plt, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainViolation& e) {
    err << "domain violation: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Unsupported& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace cassini
