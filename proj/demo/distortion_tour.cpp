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

// How far ball automorphisms stretch the Cassinian metric: random maps and
// pairs against the two-sided bound, then the pair that attains it.

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cassini/metrics.hpp"
#include "cassini/moebius.hpp"
#include "cassini/random.hpp"

int main() {
  using namespace cassini;
  Rng rng(2026);

  std::printf("|a|    lower     min ratio  max ratio  upper\n");
  for (double an : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const Point a = an * rng.unit_vector(2);
    const DistortionBounds b = distortion_bounds(a);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 400; ++i) {
      const MoebiusMap m = ball_automorphism(random_orthogonal(2, rng), a, random_orthogonal(2, rng));
      const Point x = rng.in_ball(2, 1.0), y = rng.in_ball(2, 1.0);
      const double r = distortion_ratio(m, x, y);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    std::printf("%.1f  %9.5f  %9.5f  %9.5f  %9.5f\n", an, b.lower, lo, hi, b.upper);
  }

  // x = 0 and y = t e1 with t < 0 under the inversion sending a = |a| e1 to 0.
  std::printf("\nwitness pairs, a = 0.5 e1 (upper bound 3)\n  t       ratio\n");
  for (double t : {-0.01, -0.25, -0.5, -0.9, -0.999}) {
    const SharpnessWitness w = sharpness_witness(0.5 * unit_axis(2, 0), t);
    std::printf("%7.3f  %.12f\n", t, w.ratio);
  }
  return 0;
}
