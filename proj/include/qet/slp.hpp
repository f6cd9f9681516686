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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qet/optimize.hpp"
#include "qet/qcore.hpp"
#include "qet/rng.hpp"

namespace qet::slp {

/** A bipartite state/Hamiltonian pair, queried for passivity w.r.t. subsystem A. */
struct SlpInstance {
  DensityOperator rho;
  ComplexMatrix hamiltonian;
  std::size_t dim_a = 2;
  std::size_t dim_b = 2;

  SlpInstance(DensityOperator r, ComplexMatrix h, std::size_t da, std::size_t db)
      : rho(std::move(r)), hamiltonian(std::move(h)), dim_a(da), dim_b(db) {
    if (rho.dim() != da * db || hamiltonian.rows() != da * db || hamiltonian.cols() != da * db)
      throw std::invalid_argument("SlpInstance: dimension mismatch");
    if (da * db > 16) throw std::invalid_argument("SlpInstance: dim_a*dim_b must be <= 16");
    if (!hamiltonian.is_hermitian()) throw std::invalid_argument("SlpInstance: Hamiltonian not Hermitian");
  }
};

struct SlpVerdict {
  bool is_slp = false;
  ComplexMatrix c_operator;            // C on A (x) A'
  double condition_min_eigenvalue = 0; // min eig of C - T (x) 1
  double hermiticity_defect = 0;       // defect of T = Tr_A'[d_A |Phi><Phi| C]
};

/**
 * C = Tr_B[ rho^{Gamma_A} H_{A'B} ], an operator on A (x) A'. Index order of
 * the enlarged space is A (x) A' (x) B.
 */
inline ComplexMatrix build_c_operator(const SlpInstance& inst) {
  const std::size_t da = inst.dim_a, db = inst.dim_b;
  const std::size_t dim = da * da * db;
  auto idx = [da, db](std::size_t a, std::size_t ap, std::size_t b) { return (a * da + ap) * db + b; };

  // partial transpose on A
  ComplexMatrix rg(da * db, da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2)
          rg(a * db + b, a2 * db + b2) = inst.rho.matrix()(a2 * db + b, a * db + b2);

  ComplexMatrix x(dim, dim), y(dim, dim);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t a2 = 0; a2 < da; ++a2)
      for (std::size_t ap = 0; ap < da; ++ap)
        for (std::size_t ap2 = 0; ap2 < da; ++ap2)
          for (std::size_t b = 0; b < db; ++b)
            for (std::size_t b2 = 0; b2 < db; ++b2) {
              if (ap == ap2) x(idx(a, ap, b), idx(a2, ap2, b2)) = rg(a * db + b, a2 * db + b2);
              if (a == a2)
                y(idx(a, ap, b), idx(a2, ap2, b2)) = inst.hamiltonian(ap * db + b, ap2 * db + b2);
            }

  const ComplexMatrix prod = x * y;
  ComplexMatrix c(da * da, da * da);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t ap = 0; ap < da; ++ap)
      for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t ap2 = 0; ap2 < da; ++ap2) {
          Complex s(0, 0);
          for (std::size_t b = 0; b < db; ++b) s += prod(idx(a, ap, b), idx(a2, ap2, b));
          c(a * da + ap, a2 * da + ap2) = s;
        }
  return c;
}

/**
 * First-theorem test: T = Tr_A'[d_A |Phi><Phi| C] must be Hermitian and
 * C - T (x) 1_A' must be PSD. The -1e-9 eigenvalue slack absorbs Jacobi
 * roundoff on boundary cases.
 */
inline SlpVerdict slp_check(const SlpInstance& inst) {
  const std::size_t da = inst.dim_a;
  SlpVerdict v;
  v.c_operator = build_c_operator(inst);

  ComplexMatrix t(da, da);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t a2 = 0; a2 < da; ++a2) {
      Complex s(0, 0);
      for (std::size_t j = 0; j < da; ++j) s += v.c_operator(j * da + j, a2 * da + a);
      t(a, a2) = s;
    }
  v.hermiticity_defect = t.hermiticity_defect();

  ComplexMatrix m = v.c_operator - kron(t, ComplexMatrix::identity(da));
  const ComplexMatrix mh = 0.5 * (m + m.dagger());
  v.condition_min_eigenvalue = hermitian_eig(mh).eigenvalues.front();
  v.is_slp = v.hermiticity_defect < 1e-9 && v.condition_min_eigenvalue >= -1e-9;
  return v;
}

/**
 * Second-theorem upper bound on the critical ground population,
 * p* <= (1 + E_1 q_{0,min}^2 / max_{i>=1} E_i q_{i,max}^2)^{-1},
 * with energies measured from the ground level and q the Schmidt
 * coefficients of the eigenvectors.
 */
inline double ground_population_threshold(const EigenSystem& es, std::size_t dim_a, std::size_t dim_b) {
  const std::size_t n = es.eigenvalues.size();
  if (n != dim_a * dim_b) throw std::invalid_argument("ground_population_threshold: dimension mismatch");
  if (n < 2) throw std::invalid_argument("ground_population_threshold: need at least two levels");
  if (es.eigenvalues[1] - es.eigenvalues[0] <= 1e-10)
    throw std::invalid_argument("ground_population_threshold: degenerate ground state");

  auto column_state = [&](std::size_t c) {
    std::vector<Complex> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = es.eigenvectors(r, c);
    return StateVector(std::move(v));
  };

  const std::vector<double> q0 = schmidt_coefficients(column_state(0), dim_a, dim_b);
  const double q0min = q0.back();
  if (q0min <= 1e-10)
    throw std::invalid_argument("ground_population_threshold: ground state lacks full Schmidt rank");

  const double e1 = es.eigenvalues[1] - es.eigenvalues[0];
  double denom = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double ei = es.eigenvalues[i] - es.eigenvalues[0];
    const std::vector<double> qi = schmidt_coefficients(column_state(i), dim_a, dim_b);
    denom = std::max(denom, ei * qi.front() * qi.front());
  }
  return 1.0 / (1.0 + e1 * q0min * q0min / denom);
}

inline double ground_population_threshold(const ComplexMatrix& hamiltonian, std::size_t dim_a,
                                          std::size_t dim_b) {
  return ground_population_threshold(hermitian_eig(hamiltonian), dim_a, dim_b);
}

namespace detail {

/** Two Kraus operators from 16 raw reals via Gram-Schmidt of a 4x2 block. */
inline std::pair<ComplexMatrix, ComplexMatrix> kraus_from_params(const std::vector<double>& x) {
  ComplexMatrix z(4, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      z(i, j) = Complex(x[4 * i + 2 * j], x[4 * i + 2 * j + 1]);
  // modified Gram-Schmidt on the two columns
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      Complex ov(0, 0);
      for (std::size_t r = 0; r < 4; ++r) ov += std::conj(z(r, p)) * z(r, c);
      for (std::size_t r = 0; r < 4; ++r) z(r, c) -= ov * z(r, p);
    }
    double n2 = 0;
    for (std::size_t r = 0; r < 4; ++r) n2 += std::norm(z(r, c));
    if (n2 < 1e-20) { z(c % 4, c) = 1.0; n2 = 1.0; }
    const double nn = std::sqrt(n2);
    for (std::size_t r = 0; r < 4; ++r) z(r, c) /= nn;
  }
  ComplexMatrix k0(2, 2), k1(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) { k0(i, j) = z(i, j); k1(i, j) = z(i + 2, j); }
  return {k0, k1};
}

inline double channel_gain(const SlpInstance& inst, const std::vector<ComplexMatrix>& kraus_on_a,
                           double base) {
  const std::size_t d = inst.dim_a * inst.dim_b;
  ComplexMatrix out(d, d);
  const ComplexMatrix ib = ComplexMatrix::identity(inst.dim_b);
  for (const ComplexMatrix& k : kraus_on_a) {
    const ComplexMatrix ka = kron(k, ib);
    out = out + ka * inst.rho.matrix() * ka.dagger();
  }
  return base - std::real((out * inst.hamiltonian).trace());
}

}  // namespace detail

/**
 * Independent witness for slp_check: maximize the energy extracted by a
 * local channel on A over `trials` sampled channels (Haar unitaries and
 * QR-orthonormalized Gaussian 2-Kraus pairs). Raw sampling alone misses
 * extraction that needs a finely tuned dissipative channel, so the best
 * sampled starts are polished with bounded Nelder-Mead in the Kraus
 * parameterization. Deterministic for a given seed.
 */
inline double brute_force_extraction_oracle(const SlpInstance& inst, int trials, std::uint64_t seed,
                                            int polish_starts = 6) {
  if (trials < 0) throw std::invalid_argument("brute_force_extraction_oracle: trials must be >= 0");
  if (inst.dim_a != 2) throw std::invalid_argument("brute_force_extraction_oracle: implemented for qubit A");
  if (trials == 0) return 0.0;
  const double base = std::real((inst.rho.matrix() * inst.hamiltonian).trace());

  double best = 0.0;
  std::vector<std::pair<double, std::vector<double>>> starts;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    std::vector<double> x(16);
    if (t % 2 == 0) {
      // unitary trial, stored as the isometry [U; 0] for the polish space
      const ComplexMatrix u = rng.haar_unitary(2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) { x[4 * i + 2 * j] = u(i, j).real(); x[4 * i + 2 * j + 1] = u(i, j).imag(); }
      best = std::max(best, detail::channel_gain(inst, {u}, base));
      starts.emplace_back(detail::channel_gain(inst, {u}, base), x);
    } else {
      for (double& v : x) v = rng.normal();
      const auto [k0, k1] = detail::kraus_from_params(x);
      const double g = detail::channel_gain(inst, {k0, k1}, base);
      best = std::max(best, g);
      starts.emplace_back(g, x);
    }
  }

  std::sort(starts.begin(), starts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const int np = std::min<int>(polish_starts, static_cast<int>(starts.size()));
  const std::vector<double> lo(16, -3.0), hi(16, 3.0);
  NelderMeadOptions opt;
  opt.max_iters = 700;
  opt.x_tol = 1e-10;
  opt.f_tol = 1e-13;
  for (int i = 0; i < np; ++i) {
    auto objective = [&](const std::vector<double>& x) {
      const auto [k0, k1] = detail::kraus_from_params(x);
      return -detail::channel_gain(inst, {k0, k1}, base);
    };
    std::vector<double> x0 = starts[i].second;
    for (double& v : x0) v = std::clamp(v, -3.0, 3.0);
    const OptimResult r = nelder_mead(objective, x0, lo, hi, opt);
    best = std::max(best, -r.f);
  }
  return best;
}

}  // namespace qet::slp
