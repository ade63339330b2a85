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

// Inner-metric geodesics in a few planar domains, written as SVG files.
// Usage: geodesic_gallery [output-dir]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cassini/inner_metric.hpp"
#include "cassini/io.hpp"
#include "cassini/metrics.hpp"

int main(int argc, char** argv) {
  using namespace cassini;
  const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
  std::filesystem::create_directories(dir);

  struct Scene {
    const char* name;
    Domain domain;
    Point x, y;
  };
  const std::vector<Scene> scenes = {
      {"disk_chord", Domain::unit_ball(2), make_point({-0.7, 0.3}), make_point({0.6, 0.5})},
      {"disk_near_boundary", Domain::unit_ball(2), make_point({0.9, -0.2}), make_point({0.2, 0.9})},
      {"one_puncture", Domain::punctured({make_point({0, 0})}), make_point({1, 0}), make_point({-0.5, 0.8})},
      {"two_punctures", Domain::punctured({make_point({0, 0}), make_point({1, 0})}), make_point({-0.5, 0.1}),
       make_point({1.5, 0.1})},
      {"half_plane", Domain::upper_half_space(2), make_point({-1, 0.2}), make_point({1, 0.2})},
  };

  std::printf("%-20s %12s %12s %10s %8s\n", "scene", "c", "inner", "gap", "vertices");
  for (const Scene& s : scenes) {
    const GeodesicResult g = inner_cassinian(s.domain, s.x, s.y);
    const double c = cassinian(s.domain, s.x, s.y).value;
    std::ofstream(dir / (std::string(s.name) + ".svg")) << render_svg(s.domain, g.path.vertices);
    std::printf("%-20s %12.6f %12.6f %10.2e %8zu\n", s.name, c, g.value, g.refinement_gap, g.path.vertices.size());
  }
  std::printf("SVG files written to %s\n", dir.string().c_str());
  return 0;
}
