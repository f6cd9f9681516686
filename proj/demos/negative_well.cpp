// Copyright 2026 The qetsim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Optimizes a Lorentzian field scenario for the deepest negative energy
// well, then shows how the well rescales under the width/amplitude scaling.

#include <cstdio>

#include "qet/qft1d.hpp"

int main() {
  using namespace qet::qft;

  OptimizeOptions opt;
  opt.restarts = 3;
  opt.max_iters = 150;
  const FieldScenario scn = optimize_scenario(SmearingFamily::Lorentzian, {}, 42, opt);
  const double t = 2.0 * scn.t_signal;

  std::printf("optimized scenario: x_B = %.3f, delta_A = %.3f, delta_B = %.3f, T = %.3f\n",
              scn.bob.center, scn.alice.delta, scn.bob.delta, scn.t_signal);
  std::printf("  amplitudes %.3f / %.3f, <sigma_y> = %+.0f, ||alpha|| = %.5f\n",
              scn.alice.amplitude, scn.bob.amplitude, scn.sigma_y_expect,
              scn.norm_alpha_value);

  const WellGrid grid = focused_grid(scn, t);
  const auto rows = scaling_study(scn, t, grid, {1, 2, 4, 8});
  std::printf("\n%8s %12s %12s %14s %12s\n", "Y", "depth", "width", "delta_E", "dE*dx");
  for (const auto& r : rows)
    std::printf("%8.0f %12.5g %12.5g %14.5g %12.5g\n", r.upsilon, r.metrics.depth,
                r.metrics.width, r.metrics.delta_e, r.metrics.delta_e * r.metrics.delta_x);

  std::vector<double> ys, depths, widths;
  for (const auto& r : rows) {
    ys.push_back(r.upsilon);
    depths.push_back(r.metrics.depth);
    widths.push_back(r.metrics.width);
  }
  std::printf("\nfitted exponents: depth %.3f (expect +2), width %.3f (expect -1)\n",
              loglog_slope(ys, depths), loglog_slope(ys, widths));
  return 0;
}
