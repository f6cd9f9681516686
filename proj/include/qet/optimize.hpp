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

#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "qet/rng.hpp"

namespace qet {

struct NelderMeadOptions {
  int max_iters = 2000;
  double x_tol = 1e-9;
  double f_tol = 1e-12;
  double initial_step = 0.25;  // fraction of the box extent per coordinate
};

struct OptimResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

/**
 * Nelder-Mead minimization inside a box. Out-of-box vertices are clamped and
 * penalized quadratically so the simplex is pushed away from the walls.
 */
inline OptimResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x0, const std::vector<double>& lo,
                               const std::vector<double>& hi, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  auto boxed = [&](const std::vector<double>& x) {
    double pen = 0;
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = std::clamp(x[i], lo[i], hi[i]);
      const double d = x[i] - c[i];
      const double scale = std::max(hi[i] - lo[i], 1e-12);
      pen += (d / scale) * (d / scale);
    }
    return f(c) + 1e3 * pen;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    double step = opt.initial_step * (hi[i] - lo[i]);
    if (x0[i] + step > hi[i]) step = -step;
    simplex[i + 1][i] += step;
  }
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fx[i] = boxed(simplex[i]);

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    std::vector<std::size_t> ord(n + 1);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) { s2[i] = simplex[ord[i]]; f2[i] = fx[ord[i]]; }
    simplex.swap(s2);
    fx.swap(f2);

    double spread = 0;
    for (std::size_t i = 0; i < n; ++i)
      spread = std::max(spread, std::abs(simplex[n][i] - simplex[0][i]));
    if (std::abs(fx[n] - fx[0]) < opt.f_tol && spread < opt.x_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (double& v : centroid) v /= static_cast<double>(n);

    auto along = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (centroid[j] - simplex[n][j]);
      return p;
    };

    const std::vector<double> xr = along(1.0);
    const double fr = boxed(xr);
    if (fr < fx[0]) {
      const std::vector<double> xe = along(2.0);
      const double fe = boxed(xe);
      if (fe < fr) { simplex[n] = xe; fx[n] = fe; }
      else { simplex[n] = xr; fx[n] = fr; }
    } else if (fr < fx[n - 1]) {
      simplex[n] = xr; fx[n] = fr;
    } else {
      const std::vector<double> xc = along(fr < fx[n] ? 0.5 : -0.5);
      const double fc = boxed(xc);
      if (fc < std::min(fr, fx[n])) {
        simplex[n] = xc; fx[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          fx[i] = boxed(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fx[i] < fx[best]) best = i;
  OptimResult res;
  res.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.x[i] = std::clamp(simplex[best][i], lo[i], hi[i]);
  res.f = fx[best];
  res.iterations = it;
  return res;
}

/**
 * Restarted bounded Nelder-Mead. Restart 0 starts from `x0`; further restarts
 * draw uniform starting points from the box using Rng::stream(seed, r).
 * Ties resolve to the lowest restart index, so results are seed-deterministic.
 */
inline OptimResult nelder_mead_restarts(const std::function<double(const std::vector<double>&)>& f,
                                        const std::vector<double>& x0, const std::vector<double>& lo,
                                        const std::vector<double>& hi, int restarts, std::uint64_t seed,
                                        const NelderMeadOptions& opt = {}) {
  OptimResult best;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    std::vector<double> start = x0;
    if (r > 0) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
      for (std::size_t i = 0; i < start.size(); ++i) start[i] = rng.uniform(lo[i], hi[i]);
    }
    const OptimResult res = nelder_mead(f, start, lo, hi, opt);
    if (res.f < best.f) best = res;
  }
  return best;
}

}  // namespace qet
