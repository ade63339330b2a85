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

// JSON and text formats for domains, maps, paths and points, plus a static
// SVG plot of a planar domain with a path.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cassini/core_geometry.hpp"
#include "cassini/inner_metric.hpp"
#include "cassini/moebius.hpp"

namespace cassini {

using Json = nlohmann::ordered_json;

// Shortest text that round-trips, at most 17 significant digits.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// JSON has no infinities; they are written as strings.
inline Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

inline Json point_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

inline Point parse_point_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("a point must be a non-empty array of numbers");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument("point coordinates must be numbers");
    p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  check_finite(p, "point");
  return p;
}

// {"kind": "ball", "center": [...], "radius": r}
// {"kind": "halfspace", "normal": [...], "offset": o}   (x . normal > offset)
// {"kind": "punctured", "points": [[...], ...]}
inline Json domain_json(const Domain& d) {
  Json j;
  j["kind"] = std::string(to_string(d.kind()));
  if (const auto* b = d.as_ball()) {
    j["center"] = point_json(b->center);
    j["radius"] = b->radius;
  } else if (const auto* h = d.as_half_space()) {
    j["normal"] = point_json(h->normal);
    j["offset"] = h->offset;
  } else {
    Json pts = Json::array();
    for (const auto& q : d.as_punctured()->punctures) pts.push_back(point_json(q));
    j["points"] = pts;
  }
  return j;
}

inline Domain parse_domain_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InvalidArgument("a domain needs a string \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw InvalidArgument(std::string("domain field \"") + key + "\" must be a number");
    return j[key].get<double>();
  };
  auto point = [&](const char* key) {
    if (!j.contains(key)) throw InvalidArgument(std::string("domain field \"") + key + "\" is missing");
    return parse_point_json(j[key]);
  };
  if (kind == "ball") return Domain::ball(point("center"), number("radius"));
  if (kind == "halfspace") return Domain::half_space(point("normal"), number("offset"));
  if (kind == "punctured") {
    if (!j.contains("points") || !j["points"].is_array()) throw InvalidArgument("punctured domain needs \"points\"");
    std::vector<Point> pts;
    for (const auto& q : j["points"]) pts.push_back(parse_point_json(q));
    return Domain::punctured(std::move(pts));
  }
  throw InvalidArgument("unknown domain kind \"" + kind + "\"");
}

// "1.5,-2,0" -> (1.5, -2, 0).
inline Point parse_point_list(std::string_view text) {
  std::vector<double> v;
  std::string token;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, token, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(token, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse coordinate \"" + token + "\"");
    }
    if (token.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidArgument("cannot parse coordinate \"" + token + "\"");
    }
    v.push_back(x);
  }
  if (v.empty() || (!text.empty() && text.back() == ',')) throw InvalidArgument("empty or malformed point list");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = v[i];
  check_finite(p, "point");
  return p;
}

// Command-line domain shorthand; `dimension` fills in shapes that do not fix
// it themselves.
//   unit-ball | ball:C:R | halfplane | upper-half-space | halfspace:N:OFFSET
//   punctured:P1;P2;...   (points as comma lists)
// Anything starting with '{' is parsed as a JSON descriptor.
inline Domain parse_domain_spec(std::string_view text, int dimension) {
  const std::string s(text);
  if (!s.empty() && s.front() == '{') {
    Json j;
    try {
      j = Json::parse(s);
    } catch (const Json::parse_error& e) {
      throw InvalidArgument(std::string("domain JSON: ") + e.what());
    }
    return parse_domain_json(j);
  }
  auto split = [](const std::string& str, char sep) {
    std::vector<std::string> parts;
    std::string token;
    std::stringstream ss(str);
    while (std::getline(ss, token, sep)) parts.push_back(token);
    return parts;
  };
  const auto parts = split(s, ':');
  if (parts.empty()) throw InvalidArgument("empty domain");
  const std::string& head = parts[0];
  if (head == "unit-ball" && parts.size() == 1) return Domain::unit_ball(dimension);
  if ((head == "halfplane" || head == "upper-half-space") && parts.size() == 1) {
    return Domain::upper_half_space(head == "halfplane" ? 2 : dimension);
  }
  if (head == "ball" && parts.size() == 3) {
    double r = 0.0;
    try {
      r = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse ball radius");
    }
    return Domain::ball(parse_point_list(parts[1]), r);
  }
  if (head == "halfspace" && parts.size() == 3) {
    double o = 0.0;
    try {
      o = std::stod(parts[2]);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse half-space offset");
    }
    return Domain::half_space(parse_point_list(parts[1]), o);
  }
  if (head == "punctured" && parts.size() == 2) {
    std::vector<Point> pts;
    for (const auto& p : split(parts[1], ';')) pts.push_back(parse_point_list(p));
    return Domain::punctured(std::move(pts));
  }
  throw InvalidArgument("unrecognized domain \"" + s + "\"");
}

// {"factors": [{"type": "orthogonal", "matrix": [[row], ...]},
//              {"type": "inversion", "center": [...], "radius": r}, ...]}
// Factors apply in list order.
inline Json map_json(const MoebiusMap& m) {
  Json factors = Json::array();
  for (const auto& f : m.factors) {
    Json j;
    if (const auto* q = std::get_if<Eigen::MatrixXd>(&f)) {
      j["type"] = "orthogonal";
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < q->rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < q->cols(); ++c) row.push_back((*q)(r, c));
        rows.push_back(row);
      }
      j["matrix"] = rows;
    } else {
      const auto& s = std::get<SphereInversion>(f);
      j["type"] = "inversion";
      j["center"] = point_json(s.center);
      j["radius"] = s.radius;
    }
    factors.push_back(j);
  }
  return Json{{"factors", factors}};
}

inline MoebiusMap parse_map_json(const Json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array()) {
    throw InvalidArgument("a map needs a \"factors\" array");
  }
  MoebiusMap m;
  for (const auto& f : j["factors"]) {
    const std::string type = f.value("type", "");
    if (type == "orthogonal") {
      if (!f.contains("matrix") || !f["matrix"].is_array() || f["matrix"].empty()) {
        throw InvalidArgument("orthogonal factor needs a \"matrix\"");
      }
      const auto& rows = f["matrix"];
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd q(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const Point row = parse_point_json(rows[static_cast<std::size_t>(r)]);
        if (row.size() != n) throw InvalidArgument("orthogonal factor must be square");
        q.row(r) = row.transpose();
      }
      m.factors.emplace_back(q);
    } else if (type == "inversion") {
      if (!f.contains("radius") || !f["radius"].is_number()) throw InvalidArgument("inversion needs a \"radius\"");
      m.factors.emplace_back(SphereInversion{parse_point_json(f.at("center")), f["radius"].get<double>()});
    } else {
      throw InvalidArgument("unknown map factor type \"" + type + "\"");
    }
  }
  return m;
}

inline Json path_json(const Path& p) {
  Json v = Json::array();
  for (const auto& x : p.vertices) v.push_back(point_json(x));
  return Json{{"vertices", v}, {"length_value", p.length_value}, {"scheme", std::string(to_string(p.scheme))}};
}

inline Path parse_path_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw InvalidArgument("a path needs a \"vertices\" array");
  }
  Path p;
  for (const auto& v : j["vertices"]) p.vertices.push_back(parse_point_json(v));
  p.length_value = j.value("length_value", 0.0);
  const std::string scheme = j.value("scheme", "quadrature");
  if (scheme == "partition_sum") p.scheme = LengthScheme::partition_sum;
  else if (scheme == "quadrature") p.scheme = LengthScheme::quadrature;
  else throw InvalidArgument("unknown path scheme \"" + scheme + "\"");
  return p;
}

// Static 800x800 plot of a planar domain: the boundary (circle, line or
// crosses), the endpoints and the path polyline.
inline std::string render_svg(const Domain& d, const std::vector<Point>& path) {
  if (d.dimension() != 2) throw Unsupported("SVG output needs a planar domain");
  constexpr double kSize = 800.0, kMargin = 0.05 * kSize;
  // World window: the path, plus the ball or punctures, plus some context.
  Eigen::Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
  auto include = [&](const Point& p, double pad = 0.0) {
    lo = lo.cwiseMin(Eigen::Vector2d(p[0] - pad, p[1] - pad));
    hi = hi.cwiseMax(Eigen::Vector2d(p[0] + pad, p[1] + pad));
  };
  for (const auto& p : path) include(p);
  if (const auto* b = d.as_ball()) include(b->center, b->radius);
  if (const auto* s = d.as_punctured()) {
    for (const auto& q : s->punctures) include(q);
  }
  if (const auto* h = d.as_half_space()) include(h->offset * h->normal);
  if (!(lo[0] <= hi[0])) {
    lo.setConstant(-1.0);
    hi.setConstant(1.0);
  }
  const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12}) * 1.1;
  const Eigen::Vector2d mid = 0.5 * (lo + hi);
  const double scale = (kSize - 2.0 * kMargin) / span;
  auto sx = [&](double x) { return kMargin + (x - mid[0] + 0.5 * span) * scale; };
  auto sy = [&](double y) { return kSize - kMargin - (y - mid[1] + 0.5 * span) * scale; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  o << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  if (const auto* b = d.as_ball()) {
    o << "<circle cx=\"" << format_number(sx(b->center[0])) << "\" cy=\"" << format_number(sy(b->center[1]))
      << "\" r=\"" << format_number(b->radius * scale) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  } else if (const auto* h = d.as_half_space()) {
    // The boundary line, clipped generously to the window.
    const Eigen::Vector2d nrm(h->normal[0], h->normal[1]);
    const Eigen::Vector2d base = h->offset * nrm, dir(-nrm[1], nrm[0]);
    const Eigen::Vector2d a = base - 4.0 * span * dir, b = base + 4.0 * span * dir;
    o << "<line x1=\"" << format_number(sx(a[0])) << "\" y1=\"" << format_number(sy(a[1])) << "\" x2=\""
      << format_number(sx(b[0])) << "\" y2=\"" << format_number(sy(b[1]))
      << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  } else {
    for (const auto& q : d.as_punctured()->punctures) {
      const double cx = sx(q[0]), cy = sy(q[1]), r = 6.0;
      o << "<path d=\"M" << format_number(cx - r) << ' ' << format_number(cy - r) << " L" << format_number(cx + r)
        << ' ' << format_number(cy + r) << " M" << format_number(cx - r) << ' ' << format_number(cy + r) << " L"
        << format_number(cx + r) << ' ' << format_number(cy - r) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
  }
  if (path.size() >= 2) {
    o << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < path.size(); ++i) {
      o << (i ? " " : "") << format_number(sx(path[i][0])) << ',' << format_number(sy(path[i][1]));
    }
    o << "\"/>\n";
  }
  if (!path.empty()) {
    for (const Point* p : {&path.front(), &path.back()}) {
      o << "<circle cx=\"" << format_number(sx((*p)[0])) << "\" cy=\"" << format_number(sy((*p)[1]))
        << "\" r=\"5\" fill=\"#d62728\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace cassini
