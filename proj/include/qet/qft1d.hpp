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
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qet/optimize.hpp"
#include "qet/rng.hpp"

namespace qet::qft {

enum class SmearingFamily { CompactBump, Gaussian, Lorentzian };

namespace detail {

// S(u) = (1 - tanh(cot u))/2 on (0, pi); sech^2 underflows to zero at the
// edges before csc^2 overflows, so the products below stay finite.
inline double bump_s(double u) { return 0.5 * (1.0 - std::tanh(1.0 / std::tan(u))); }
inline double bump_s1(double u) {
  const double cotu = 1.0 / std::tan(u);
  const double sech = 1.0 / std::cosh(cotu);
  const double csc2 = 1.0 + cotu * cotu;
  return 0.5 * sech * sech * csc2;
}
inline double bump_s2(double u) {
  const double cotu = 1.0 / std::tan(u);
  const double sech = 1.0 / std::cosh(cotu);
  const double csc2 = 1.0 + cotu * cotu;
  return sech * sech * csc2 * (std::tanh(cotu) * csc2 - cotu);
}

/** Recursive adaptive Simpson quadrature with absolute tolerance. */
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
  struct Rec {
    const std::function<double(double)>& f;
    double operator()(double a, double b, double fa, double fm, double fb, double whole,
                      double tol, int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return (*this)(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             (*this)(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f}(a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace detail

/**
 * Spatial coupling profile of a detector. Families follow the forms used by
 * the protocol: a smooth compactly supported plateau f(z, sigma, delta), the
 * peak-normalized Gaussian exp(-z^2/2 delta^2)/sqrt(2 pi), and the Lorentzian
 * (1/pi)/(1 + z^2/delta^2); all scaled by `amplitude` and shifted to `center`.
 */
struct Smearing {
  SmearingFamily family = SmearingFamily::Gaussian;
  double amplitude = 1.0;
  double center = 0.0;
  double delta = 1.0;
  double sigma = 0.0;  // plateau half-support is sigma/2 (CompactBump only)

  static Smearing bump(double amplitude, double center, double sigma, double delta) {
    if (!(delta > 0) || sigma < 0) throw std::invalid_argument("Smearing: need delta > 0, sigma >= 0");
    if (!std::isfinite(amplitude)) throw std::invalid_argument("Smearing: amplitude must be finite");
    return {SmearingFamily::CompactBump, amplitude, center, delta, sigma};
  }
  static Smearing gaussian(double amplitude, double center, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("Smearing: need delta > 0");
    if (!std::isfinite(amplitude)) throw std::invalid_argument("Smearing: amplitude must be finite");
    return {SmearingFamily::Gaussian, amplitude, center, delta, 0.0};
  }
  static Smearing lorentzian(double amplitude, double center, double delta) {
    if (!(delta > 0)) throw std::invalid_argument("Smearing: need delta > 0");
    if (!std::isfinite(amplitude)) throw std::invalid_argument("Smearing: amplitude must be finite");
    return {SmearingFamily::Lorentzian, amplitude, center, delta, 0.0};
  }

  bool compact() const { return family == SmearingFamily::CompactBump; }

  /** Value (order 0) or first/second derivative at x. */
  double eval(double x, int order = 0) const {
    if (order < 0 || order > 2) throw std::invalid_argument("Smearing: derivative_order must be 0..2");
    const double z = x - center;
    switch (family) {
      case SmearingFamily::Gaussian: {
        const double d2 = delta * delta;
        const double e = std::exp(-z * z / (2.0 * d2)) / std::sqrt(2.0 * M_PI);
        if (order == 0) return amplitude * e;
        if (order == 1) return amplitude * (-z / d2) * e;
        return amplitude * ((z * z / d2 - 1.0) / d2) * e;
      }
      case SmearingFamily::Lorentzian: {
        const double u = z / delta;
        const double den = 1.0 + u * u;
        if (order == 0) return amplitude / (M_PI * den);
        if (order == 1) return amplitude * (-2.0 * u) / (M_PI * delta * den * den);
        return amplitude * (6.0 * u * u - 2.0) / (M_PI * delta * delta * den * den * den);
      }
      case SmearingFamily::CompactBump: {
        if (z >= -sigma / 2 && z <= sigma / 2) return order == 0 ? amplitude : 0.0;
        if (z > -sigma / 2 - M_PI * delta && z < -sigma / 2) {
          const double u = (sigma / 2 + M_PI * delta + z) / delta;
          if (order == 0) return amplitude * detail::bump_s(u);
          if (order == 1) return amplitude * detail::bump_s1(u) / delta;
          return amplitude * detail::bump_s2(u) / (delta * delta);
        }
        if (z > sigma / 2 && z < sigma / 2 + M_PI * delta) {
          const double u = (sigma / 2 + M_PI * delta - z) / delta;
          if (order == 0) return amplitude * detail::bump_s(u);
          if (order == 1) return amplitude * (-detail::bump_s1(u)) / delta;
          return amplitude * detail::bump_s2(u) / (delta * delta);
        }
        return 0.0;
      }
    }
    return 0.0;
  }

  /** Half-width of the quadrature window (exact support for the bump). */
  double support_radius() const {
    switch (family) {
      case SmearingFamily::CompactBump: return sigma / 2 + M_PI * delta;
      case SmearingFamily::Gaussian: return 9.0 * delta;
      case SmearingFamily::Lorentzian: return 250.0 * delta;
    }
    return 0.0;
  }
};

inline double smearing_eval(const Smearing& s, double x, int derivative_order) {
  return s.eval(x, derivative_order);
}

/**
 * ||alpha|| = (1/2pi) int_0^inf k |lambda_hat(k)|^2 dk with
 * lambda_hat(k) = int lambda(x) e^{ikx} dx. Closed-form transforms for the
 * Gaussian and Lorentzian; direct oscillatory quadrature for the bump, with
 * the k cutoff verified by doubling.
 */
inline double norm_alpha(const Smearing& lam) {
  const double a0 = lam.amplitude, d = lam.delta;
  auto integrate_k = [&](const std::function<double(double)>& hat_sq, double kmax, double tol) {
    return detail::adaptive_simpson([&](double k) { return k * hat_sq(k); }, 0.0, kmax, tol) /
           (2.0 * M_PI);
  };
  switch (lam.family) {
    case SmearingFamily::Gaussian: {
      auto hat_sq = [&](double k) {
        const double h = a0 * d * std::exp(-d * d * k * k / 2.0);
        return h * h;
      };
      const double scale = a0 * a0 / (4.0 * M_PI);
      return integrate_k(hat_sq, 7.0 / d, 1e-11 * std::max(scale, 1e-12));
    }
    case SmearingFamily::Lorentzian: {
      auto hat_sq = [&](double k) {
        const double h = a0 * d * std::exp(-d * std::abs(k));
        return h * h;
      };
      const double scale = a0 * a0 / (8.0 * M_PI);
      return integrate_k(hat_sq, 18.0 / d, 1e-11 * std::max(scale, 1e-12));
    }
    case SmearingFamily::CompactBump: {
      const double r = lam.support_radius();
      // fixed composite Simpson grid for the transform; node count tracks the
      // highest k so each oscillation is resolved
      auto hat_sq_at = [&](double k) {
        const int waves = static_cast<int>(std::abs(k) * r / M_PI) + 1;
        const int n = std::max(256, 16 * waves);
        const double h = 2.0 * r / n;
        double re = 0, im = 0;
        for (int i = 0; i <= n; ++i) {
          const double x = lam.center - r + i * h;
          const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
          const double v = lam.eval(x, 0);
          re += w * v * std::cos(k * x);
          im += w * v * std::sin(k * x);
        }
        re *= h / 3.0;
        im *= h / 3.0;
        return re * re + im * im;
      };
      double kmax = 12.0 / d;
      double prev = integrate_k(hat_sq_at, kmax, 1e-10);
      for (int iter = 0; iter < 6; ++iter) {
        kmax *= 2.0;
        const double next = integrate_k(hat_sq_at, kmax, 1e-10);
        if (std::abs(next - prev) <= 1e-8 * std::max(std::abs(next), 1e-14)) return next;
        prev = next;
      }
      throw std::runtime_error("norm_alpha: k-space tail did not converge under cutoff doubling");
    }
  }
  return 0.0;
}

/** Energy density injected by Alice alone: (lambda'(x-t)^2 + lambda'(x+t)^2)/4. */
inline double alice_energy_density(const Smearing& lam, double x, double t) {
  const double dr = lam.eval(x - t, 1), dl = lam.eval(x + t, 1);
  return 0.25 * (dr * dr + dl * dl);
}

/**
 * Principal value of int lambda'(y)/(y - c) dy: the singular window [c-a, c+a]
 * contributes 2a lambda''(c) + O(a^3); the rest is regular quadrature. Near
 * the window the constant lambda'(c) is subtracted and integrated in closed
 * form (a log), leaving a smooth difference quotient that the adaptive rule
 * handles without edge refinement.
 */
inline double pv_integral(const Smearing& lam, double c, double a) {
  if (!(a > 0)) throw std::invalid_argument("pv_integral: window must be positive");
  if (a > lam.delta / 10.0) throw std::invalid_argument("pv_integral: window too large for smearing width");
  const double r = lam.support_radius();
  const double lo = lam.center - r, hi = lam.center + r;
  auto f = [&](double y) { return lam.eval(y, 1) / (y - c); };
  const double scale = std::abs(lam.amplitude) / lam.delta;
  const double tol = 1e-10 * std::max(scale, 1e-12);

  if (c - a <= lo || c + a >= hi) {
    // singular window clipped by the quadrature domain edge
    if (c < lo || c > hi) return detail::adaptive_simpson(f, lo, hi, tol);
    double v = 0.0;
    if (c - a > lo) v += detail::adaptive_simpson(f, lo, c - a, tol);
    if (c + a < hi) v += detail::adaptive_simpson(f, c + a, hi, tol);
    return v + 2.0 * a * lam.eval(c, 2);
  }

  const double near = std::max(3.0 * lam.delta, 16.0 * a);
  const double nlo = std::max(lo, c - near), nhi = std::min(hi, c + near);
  const double dc = lam.eval(c, 1);
  auto g = [&](double y) { return (lam.eval(y, 1) - dc) / (y - c); };

  double v = 0.0;
  if (nlo > lo) v += detail::adaptive_simpson(f, lo, nlo, tol);
  if (nhi < hi) v += detail::adaptive_simpson(f, nhi, hi, tol);
  v += detail::adaptive_simpson(g, nlo, c - a, tol);
  v += detail::adaptive_simpson(g, c + a, nhi, tol);
  v += dc * std::log(((nhi - c) / a) * (a / (c - nlo)));
  return v + 2.0 * a * lam.eval(c, 2);
}

/**
 * pv_integral with the window halved until stable to 1e-6 relative, with an
 * absolute floor of 1e-9 |amplitude|/delta so that far-tail values limited by
 * quadrature noise still converge.
 */
inline double pv_integral_auto(const Smearing& lam, double c, double a0 = 0.0) {
  double a = a0 > 0 ? a0 : lam.delta / 20.0;
  double v = pv_integral(lam, c, a);
  const double floor = 1e-9 * std::abs(lam.amplitude) / lam.delta + 1e-300;
  for (int i = 0; i < 16; ++i) {
    const double a2 = 0.5 * a;
    const double v2 = pv_integral(lam, c, a2);
    if (std::abs(v2 - v) <= std::max(1e-6 * std::abs(v2), floor)) return v2;
    a = a2;
    v = v2;
  }
  throw std::runtime_error("pv_integral_auto: window halving did not converge");
}

/** Scenario: Alice couples lambda to the momentum at t=0, Bob couples mu at t=T. */
struct FieldScenario {
  Smearing alice;
  Smearing bob;
  double t_signal = 10.0;       // T
  double sigma_y_expect = -1.0; // <A0| sigma_y |A0>, in [-1, 1]
  double norm_alpha_value = 0;  // cached ||alpha|| for the QET prefactor

  static FieldScenario make(Smearing alice, Smearing bob, double t_signal, double sigma_y) {
    if (!(t_signal > 0)) throw std::invalid_argument("FieldScenario: T must be positive");
    if (std::abs(sigma_y) > 1.0) throw std::invalid_argument("FieldScenario: |<sigma_y>| must be <= 1");
    FieldScenario s{alice, bob, t_signal, sigma_y, 0.0};
    s.norm_alpha_value = norm_alpha(alice);
    return s;
  }
};

struct DensityOptions {
  bool fast = false;        // fixed PV window instead of convergence halving
  double fast_window_frac = 1.0 / 64.0;
};

/**
 * Post-protocol energy density at (x, t > T): Alice and Bob's positive
 * packets plus the two QET terms
 * e^{-2||alpha||} <sigma_y>/(2 pi) mu(x -+ (t-T)) PV int lambda'(y)/(y - x +- t) dy.
 */
inline double energy_density(const FieldScenario& scn, double x, double t,
                             const DensityOptions& opt = {}) {
  if (!(t > scn.t_signal)) throw std::invalid_argument("energy_density: requires t > T");
  const double dt = t - scn.t_signal;
  const double la = scn.alice.eval(x - t, 1), lb = scn.alice.eval(x + t, 1);
  const double mr = scn.bob.eval(x - dt, 0), ml = scn.bob.eval(x + dt, 0);
  double v = 0.25 * (la * la + lb * lb + mr * mr + ml * ml);
  if (scn.sigma_y_expect != 0.0) {
    const double coef = std::exp(-2.0 * scn.norm_alpha_value) * scn.sigma_y_expect / (2.0 * M_PI);
    auto pv = [&](double c) {
      return opt.fast ? pv_integral(scn.alice, c, scn.alice.delta * opt.fast_window_frac)
                      : pv_integral_auto(scn.alice, c);
    };
    if (mr != 0.0) v += coef * mr * pv(x - t);
    if (ml != 0.0) v += coef * ml * pv(x + t);
  }
  return v;
}

struct WellGrid {
  double lo = 0, hi = 0;
  std::size_t points = 0;
};

/** Default grid: covers all supports plus 5(t+T), at least 4096 points,
    raised as needed to resolve the narrowest smearing width. */
inline WellGrid default_grid(const FieldScenario& scn, double t) {
  const double ra = scn.alice.support_radius() + std::abs(scn.alice.center);
  const double rb = scn.bob.support_radius() + std::abs(scn.bob.center);
  const double l = std::max(ra, rb) + 5.0 * (t + scn.t_signal);
  const double dmin = std::min(scn.alice.delta, scn.bob.delta);
  const std::size_t n = std::max<std::size_t>(
      4096, static_cast<std::size_t>(std::ceil(2.0 * l / (dmin / 50.0))) + 1);
  return {-l, l, n};
}

struct WellMetrics {
  double depth = 0;    // |min density| over the well
  double width = 0;    // length of the contiguous negative region
  double delta_x = 0;  // well midpoint to the nearest positive-region edge
  double delta_e = 0;  // integrated (negative) energy of the well
  bool has_well = false;
};

/**
 * Locate the deepest contiguous negative region of the density on a grid and
 * report its depth, width, position offsets and trapezoidal energy content.
 */
inline WellMetrics well_metrics(const FieldScenario& scn, double t, const WellGrid& grid,
                                const DensityOptions& opt = {}) {
  if (grid.points < 8) throw std::invalid_argument("well_metrics: grid too coarse");
  const double dx = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  const double dmin = std::min(scn.alice.delta, scn.bob.delta);
  if (dx > dmin / 50.0) throw std::invalid_argument("well_metrics: grid does not resolve delta (need >= 50 points per delta)");

  std::vector<double> xs(grid.points), ds(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    xs[i] = grid.lo + dx * static_cast<double>(i);
    ds[i] = energy_density(scn, xs[i], t, opt);
  }
  std::size_t imin = 0;
  for (std::size_t i = 1; i < grid.points; ++i)
    if (ds[i] < ds[imin]) imin = i;

  WellMetrics m;
  if (ds[imin] >= 0.0) return m;  // flagged empty
  m.has_well = true;
  m.depth = -ds[imin];

  std::size_t l = imin, r = imin;
  while (l > 0 && ds[l - 1] < 0.0) --l;
  while (r + 1 < grid.points && ds[r + 1] < 0.0) ++r;
  m.width = xs[r] - xs[l] + dx;  // count the boundary cells

  double e = 0;
  for (std::size_t i = l; i < r; ++i) e += 0.5 * (ds[i] + ds[i + 1]) * dx;
  m.delta_e = e;

  const double mid = 0.5 * (xs[l] + xs[r]);
  m.delta_x = std::min(mid - (xs[l] - 0.5 * dx), (xs[r] + 0.5 * dx) - mid);
  return m;
}

/**
 * Derivative-free search for the deepest negative well within box bounds on
 * (x_B, delta_A, delta_B, T, lambda_0, mu_0) and sigma_{A,B} for the bump
 * family. <sigma_y> is set to the sign that makes the QET terms negative at
 * the found optimum (both signs are tried). Deterministic for a given seed.
 */
struct OptimizeOptions {
  int restarts = 8;
  int max_iters = 220;
  bool objective_is_depth = false;  // otherwise |delta_e|
  double eval_clearance = 1.0;      // t_eval = T + clearance * T
};

struct ScenarioBounds {
  double xb_lo = 4, xb_hi = 24;
  double delta_lo = 0.35, delta_hi = 3.0;
  double t_lo = 5, t_hi = 25;
  double amp_lo = 0.2, amp_hi = 3.0;
  double sigma_lo = 0.0, sigma_hi = 3.0;  // bump only
};

inline FieldScenario scenario_from_params(SmearingFamily family, const std::vector<double>& p,
                                          double sigma_y) {
  // p = [x_B, dA, dB, T, lam0, mu0, (sigA, sigB)]
  Smearing a, b;
  switch (family) {
    case SmearingFamily::Gaussian:
      a = Smearing::gaussian(p[4], 0.0, p[1]);
      b = Smearing::gaussian(p[5], p[0], p[2]);
      break;
    case SmearingFamily::Lorentzian:
      a = Smearing::lorentzian(p[4], 0.0, p[1]);
      b = Smearing::lorentzian(p[5], p[0], p[2]);
      break;
    case SmearingFamily::CompactBump:
      a = Smearing::bump(p[4], 0.0, p[6], p[1]);
      b = Smearing::bump(p[5], p[0], p[7], p[2]);
      break;
  }
  return FieldScenario::make(a, b, p[3], sigma_y);
}

inline WellGrid focused_grid(const FieldScenario& scn, double t) {
  const double dt = t - scn.t_signal;
  const double half = scn.bob.compact()
                          ? scn.bob.support_radius() + 2.0 * scn.alice.delta
                          : 8.0 * std::max(scn.alice.delta, scn.bob.delta);
  const double lo = scn.bob.center + dt - half, hi = scn.bob.center + dt + half;
  const double dmin = std::min(scn.alice.delta, scn.bob.delta);
  const std::size_t n = std::max<std::size_t>(
      64, static_cast<std::size_t>(std::ceil((hi - lo) / (dmin / 60.0))) + 1);
  return {lo, hi, n};
}

namespace detail {

/** Coarse depth/energy scan for optimization; no resolution precondition. */
inline std::pair<double, double> well_scan(const FieldScenario& scn, double t, const WellGrid& g,
                                           const DensityOptions& opt) {
  const double dx = (g.hi - g.lo) / static_cast<double>(g.points - 1);
  double dmin = 0, de = 0;
  double prev = energy_density(scn, g.lo, t, opt);
  for (std::size_t i = 1; i < g.points; ++i) {
    const double d = energy_density(scn, g.lo + dx * static_cast<double>(i), t, opt);
    dmin = std::min(dmin, d);
    if (d < 0 && prev < 0) de += 0.5 * (d + prev) * dx;
    prev = d;
  }
  return {-dmin, de};  // depth, integrated negative energy
}

}  // namespace detail

inline FieldScenario optimize_scenario(SmearingFamily family, const ScenarioBounds& bounds,
                                       std::uint64_t seed, const OptimizeOptions& opt = {}) {
  const bool is_bump = family == SmearingFamily::CompactBump;
  const std::size_t np = is_bump ? 8 : 6;
  std::vector<double> lo{bounds.xb_lo, bounds.delta_lo, bounds.delta_lo, bounds.t_lo,
                         bounds.amp_lo, bounds.amp_lo};
  std::vector<double> hi{bounds.xb_hi, bounds.delta_hi, bounds.delta_hi, bounds.t_hi,
                         bounds.amp_hi, bounds.amp_hi};
  if (is_bump) {
    lo.insert(lo.end(), {bounds.sigma_lo, bounds.sigma_lo});
    hi.insert(hi.end(), {bounds.sigma_hi, bounds.sigma_hi});
  }

  DensityOptions fast;
  fast.fast = true;
  auto objective_for_sign = [&](const std::vector<double>& p, double sy, std::size_t points) {
    const FieldScenario scn = scenario_from_params(family, p, sy);
    const double t = scn.t_signal * (1.0 + opt.eval_clearance);
    WellGrid g = focused_grid(scn, t);
    g.points = points;
    const auto [depth, de] = detail::well_scan(scn, t, g, fast);
    return opt.objective_is_depth ? -depth : de;
  };
  // the search runs at fixed <sigma_y> = -1; the mirrored sign is compared at
  // the optimum only, which halves the objective cost
  auto objective = [&](const std::vector<double>& p) { return objective_for_sign(p, -1.0, 320); };

  std::vector<double> x0(np);
  for (std::size_t i = 0; i < np; ++i) x0[i] = 0.5 * (lo[i] + hi[i]);
  NelderMeadOptions nm;
  nm.max_iters = opt.max_iters;
  nm.x_tol = 1e-6;
  nm.f_tol = 1e-10;
  const OptimResult best = nelder_mead_restarts(objective, x0, lo, hi, opt.restarts, seed, nm);

  const double fm = objective_for_sign(best.x, -1.0, 960);
  const double fp = objective_for_sign(best.x, +1.0, 960);
  return scenario_from_params(family, best.x, fm <= fp ? -1.0 : +1.0);
}

struct ScalingLaw {
  double upsilon = 1.0;
  int n_dims = 2;
  double xi() const { return n_dims / 2.0; }
};

/**
 * lambda(x) -> Y^{(n-2)/2} lambda(Yx), mu(x) -> Y^{n/2} mu(Yx) with all
 * lengths and times divided by Y. At n = 2 Alice's amplitude is untouched
 * and Bob's is multiplied by Y; ||alpha|| is recomputed and must not move.
 */
inline FieldScenario scaling_transform(const FieldScenario& scn, const ScalingLaw& law) {
  if (law.n_dims != 2) throw std::invalid_argument("scaling_transform: only n_dims = 2 supported");
  if (!(law.upsilon > 0)) throw std::invalid_argument("scaling_transform: upsilon must be positive");
  const double y = law.upsilon;
  Smearing a = scn.alice, b = scn.bob;
  a.center /= y; a.delta /= y; a.sigma /= y;
  b.center /= y; b.delta /= y; b.sigma /= y;
  b.amplitude *= y;  // Y^{n/2}
  FieldScenario out = scn;
  out.alice = a;
  out.bob = b;
  out.t_signal = scn.t_signal / y;
  out.norm_alpha_value = norm_alpha(a);
  return out;
}

struct ScalingRow {
  double upsilon = 1;
  WellMetrics metrics;
  double norm_alpha_value = 0;
};

/**
 * Evaluate the well under Y in `upsilons`, reusing the Y = 1 grid mapped
 * through the scaling, and report the per-Y metrics for exponent fits.
 */
inline std::vector<ScalingRow> scaling_study(const FieldScenario& scn, double t_eval,
                                             const WellGrid& base_grid,
                                             const std::vector<double>& upsilons,
                                             const DensityOptions& opt = {}) {
  const WellMetrics base = well_metrics(scn, t_eval, base_grid, opt);
  if (!base.has_well) throw std::invalid_argument("scaling_study: scenario has no negative well");
  std::vector<ScalingRow> rows;
  for (double y : upsilons) {
    const FieldScenario s = scaling_transform(scn, {y, 2});
    const WellGrid g{base_grid.lo / y, base_grid.hi / y, base_grid.points};
    ScalingRow row;
    row.upsilon = y;
    row.metrics = well_metrics(s, t_eval / y, g, opt);
    row.norm_alpha_value = s.norm_alpha_value;
    rows.push_back(row);
  }
  return rows;
}

/** Least-squares slope of log(val) against log(upsilon). */
inline double loglog_slope(const std::vector<double>& upsilons, const std::vector<double>& vals) {
  const std::size_t n = upsilons.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(upsilons[i]), ly = std::log(std::abs(vals[i]));
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
}

}  // namespace qet::qft
