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

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qet/minimal_qet.hpp"
#include "qet/optimize.hpp"
#include "qet/qcore.hpp"
#include "qet/rng.hpp"

namespace qet::cooling {

/**
 * Generalized sigma_x measurement M(alpha) = e^{i delta}(m 1 + e^{i gamma} l sigma_x^A)
 * over outcomes alpha = +-1, constrained by sum(m^2 + l^2) = 1 and
 * sum(m l cos gamma) = 0 so that sum M^dag M = 1.
 */
struct PovmOutcome {
  double m = 0.5;
  double l = 0.5;
  double gamma = 0;
  double delta = 0;
};

struct PovmParams {
  PovmOutcome plus;   // alpha = +1
  PovmOutcome minus;  // alpha = -1

  const PovmOutcome& outcome(int alpha) const {
    if (alpha == 1) return plus;
    if (alpha == -1) return minus;
    throw std::invalid_argument("PovmParams: alpha must be +-1");
  }

  static PovmParams pvm() { return {{0.5, 0.5, 0, 0}, {0.5, -0.5, 0, 0}}; }

  double completeness_defect() const {
    const double s1 = plus.m * plus.m + plus.l * plus.l + minus.m * minus.m + minus.l * minus.l;
    const double s2 = plus.m * plus.l * std::cos(plus.gamma) + minus.m * minus.l * std::cos(minus.gamma);
    return std::max(std::abs(s1 - 1.0), std::abs(s2));
  }

  double p_of(int alpha) const {
    const PovmOutcome& o = outcome(alpha);
    return o.m * o.m + o.l * o.l;
  }
  double q_of(int alpha) const {
    const PovmOutcome& o = outcome(alpha);
    return 2.0 * o.l * o.m * std::cos(o.gamma);
  }
};

/** The two measurement operators on A, embedded as 4x4 with identity on B. */
inline std::vector<ComplexMatrix> povm_operators(const PovmParams& p) {
  if (p.completeness_defect() > kStructuralTol)
    throw std::invalid_argument("povm_operators: completeness constraints violated");
  std::vector<ComplexMatrix> ops;
  for (int alpha : {+1, -1}) {
    const PovmOutcome& o = p.outcome(alpha);
    const Complex phase = std::exp(Complex(0, o.delta));
    const Complex xcoef = phase * std::exp(Complex(0, o.gamma)) * o.l;
    ComplexMatrix m2(2, 2);
    m2(0, 0) = phase * o.m; m2(1, 1) = phase * o.m;
    m2(0, 1) = xcoef; m2(1, 0) = xcoef;
    ops.push_back(kron(m2, identity2()));
  }
  return ops;
}

/**
 * Feedback angle maximizing Bob's energy extraction for outcome alpha:
 * Omega = (1/2) atan2(-hk q(alpha), (h^2 + 2k^2) p(alpha)).
 */
inline double optimal_omega(minimal::MinimalParams mp, const PovmParams& povm, int alpha) {
  const double p = povm.p_of(alpha);
  if (!(p > 0)) throw std::invalid_argument("optimal_omega: outcome has zero probability");
  const double q = povm.q_of(alpha);
  return 0.5 * std::atan2(-mp.h * mp.k * q, (mp.h * mp.h + 2.0 * mp.k * mp.k) * p);
}

/** U_B(Omega) = cos(Omega) 1 + i sin(Omega) sigma_y, as a 2x2 block. */
inline ComplexMatrix omega_unitary(double omega) {
  ComplexMatrix u(2, 2);
  u(0, 0) = std::cos(omega); u(0, 1) = std::sin(omega);
  u(1, 0) = -std::sin(omega); u(1, 1) = std::cos(omega);
  return u;
}

/** Initial purity of B in the ground state: (2h^2 + k^2) / (2(h^2 + k^2)). */
inline double initial_purity(minimal::MinimalParams p) {
  if (!(p.h > 0) || !(p.k > 0)) throw std::invalid_argument("initial_purity: couplings must be positive");
  return (2.0 * p.h * p.h + p.k * p.k) / (2.0 * (p.h * p.h + p.k * p.k));
}

struct ProtocolResult {
  DensityOperator rho_final;  // two-qubit state after measurement + feedback
  double purity_b_initial = 0;
  double purity_b_final = 0;
  double e_ub = 0;  // energy cost of the feedback unitaries
};

/**
 * Run the POVM protocol with given feedback angles on an arbitrary two-qubit
 * input state (ground state by default elsewhere). This density-matrix path
 * is the normative definition the closed forms are validated against.
 */
inline ProtocolResult run_povm_protocol(const minimal::MinimalModel& model, const PovmParams& povm,
                                        double omega_plus, double omega_minus,
                                        const DensityOperator& input) {
  const std::vector<ComplexMatrix> ms = povm_operators(povm);
  ComplexMatrix rho1(4, 4), rhof(4, 4);
  int i = 0;
  for (int alpha : {+1, -1}) {
    const ComplexMatrix& m = ms[i++];
    const ComplexMatrix u = kron(identity2(), omega_unitary(alpha == 1 ? omega_plus : omega_minus));
    const ComplexMatrix branch = m * input.matrix() * m.dagger();
    rho1 = rho1 + branch;
    rhof = rhof + u * branch * u.dagger();
  }
  ProtocolResult r{DensityOperator(rhof), 0, 0, 0};
  r.purity_b_initial = partial_trace(input, {1}, 2).purity();
  r.purity_b_final = partial_trace(r.rho_final, {1}, 2).purity();
  r.e_ub = std::real(((rhof - rho1) * model.h_total()).trace());
  return r;
}

inline ProtocolResult run_povm_protocol(const minimal::MinimalModel& model, const PovmParams& povm) {
  return run_povm_protocol(model, povm, optimal_omega(model.params(), povm, +1),
                           optimal_omega(model.params(), povm, -1),
                           DensityOperator::pure(model.ground()));
}

/**
 * Closed form for the final purity of B after the gamma = 0 POVM protocol on
 * the ground state, in terms of the alpha = -1 outcome parameters (l1, m1)
 * and the angle difference Omega_0 - Omega_1 (outcome +1 maps to index 0).
 */
inline double final_purity_povm(minimal::MinimalParams mp, const PovmParams& povm) {
  if (std::abs(povm.plus.gamma) > 1e-12 || std::abs(povm.minus.gamma) > 1e-12)
    throw std::invalid_argument("final_purity_povm: closed form requires gamma = 0");
  if (povm.completeness_defect() > kStructuralTol)
    throw std::invalid_argument("final_purity_povm: completeness constraints violated");
  const double h = mp.h, k = mp.k;
  const double l1 = povm.minus.l, m1 = povm.minus.m;
  const double d = optimal_omega(mp, povm, +1) - optimal_omega(mp, povm, -1);
  const double p1 = l1 * l1 + m1 * m1;
  const double s = std::sin(d);
  return (2.0 / (h * h + k * k)) *
         (h * h / 2.0 + k * k / 4.0 - h * k * l1 * m1 * std::sin(2.0 * d) +
          (4.0 * k * k * l1 * l1 * m1 * m1 + h * h * (p1 - 1.0) * p1) * s * s);
}

/** Gibbs state e^{-beta H} / Z. */
inline DensityOperator thermal_state(const ComplexMatrix& hamiltonian, double beta) {
  if (beta < 0) throw std::invalid_argument("thermal_state: beta must be >= 0");
  const EigenSystem es = hermitian_eig(hamiltonian);
  const std::size_t n = hamiltonian.rows();
  std::vector<double> w(n);
  double z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(-beta * (es.eigenvalues[i] - es.eigenvalues.front()));
    z += w[i];
  }
  ComplexMatrix rho(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s(0, 0);
      for (std::size_t i = 0; i < n; ++i)
        s += es.eigenvectors(r, i) * (w[i] / z) * std::conj(es.eigenvectors(c, i));
      rho(r, c) = s;
    }
  return DensityOperator(rho);
}

/**
 * System Hamiltonian for the ancilla-assisted cooling scenario:
 * H = -h_A sigma_z^A - h_B sigma_z^B + k sigma_x sigma_x (operator part only;
 * identity offsets drop out of Gibbs states). Its spectrum is
 * +-sqrt(h_plus), +-sqrt(h_minus) with h_pm = (h_A +- h_B)^2 + k^2, which is
 * what gives the closed form its sinh/cosh structure.
 */
struct AncillaScenario {
  double h_a = 1.0, h_b = 1.0, k = 5.0;
  double h_an = 1.0;  // ancilla gap

  ComplexMatrix system_hamiltonian() const {
    return (-h_a) * kron(sigma_z(), identity2()) + (-h_b) * kron(identity2(), sigma_z()) +
           k * kron(sigma_x(), sigma_x());
  }
};

struct PurityReport {
  double p_initial = 0.5;
  double p_final = 0.5;
};

namespace detail {

/** rho_AB (x) rho_An rearranged into the global A (x) An (x) B ordering. */
inline ComplexMatrix three_qubit_input(const ComplexMatrix& rho_ab, const ComplexMatrix& rho_an) {
  ComplexMatrix r(8, 8);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t n = 0; n < 2; ++n)
        for (std::size_t a2 = 0; a2 < 2; ++a2)
          for (std::size_t b2 = 0; b2 < 2; ++b2)
            for (std::size_t n2 = 0; n2 < 2; ++n2)
              r((a << 2) | (n << 1) | b, (a2 << 2) | (n2 << 1) | b2) =
                  rho_ab((a << 1) | b, (a2 << 1) | b2) * rho_an(n, n2);
  return r;
}

/** B-marginal purity straight from the raw 8x8 matrix; tolerant of the
    ~1e-13 drift that repeated eigen-reconstructions accumulate. */
inline double purity_of_b(const ComplexMatrix& rho8) {
  ComplexMatrix b(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Complex s(0, 0);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t n = 0; n < 2; ++n)
          s += rho8((a << 2) | (n << 1) | i, (a << 2) | (n << 1) | j);
      b(i, j) = s;
    }
  return std::real((b * b).trace());
}

}  // namespace detail

/** Thermal system (x) thermal ancilla in the global A (x) An (x) B ordering. */
inline DensityOperator ancilla_input_state(const AncillaScenario& sc, double beta) {
  const DensityOperator rho_ab = thermal_state(sc.system_hamiltonian(), beta);
  const DensityOperator rho_an = thermal_state(sc.h_an * sigma_z(), beta);
  return DensityOperator(detail::three_qubit_input(rho_ab.matrix(), rho_an.matrix()));
}

/**
 * Fully unitary ancilla protocol with the fixed probes
 * U_A = exp(i sigma_y^A sigma_y^An), U_B = exp(i sigma_x^B sigma_z^An) on
 * the Gibbs state at inverse temperature beta (ancilla thermal at the same
 * beta with gap h_an). Full 3-qubit density-matrix simulation.
 */
inline PurityReport ancilla_protocol_simulated(const AncillaScenario& sc, double beta) {
  const DensityOperator rho_ab = thermal_state(sc.system_hamiltonian(), beta);
  const DensityOperator rho_an = thermal_state(sc.h_an * sigma_z(), beta);
  const ComplexMatrix rho0 = detail::three_qubit_input(rho_ab.matrix(), rho_an.matrix());
  const ComplexMatrix ua = embed_pair(matexp_pauli_pair(1.0, Pauli::Y, Pauli::Y), 0, 1, 3);
  const ComplexMatrix ub = embed_pair(matexp_pauli_pair(1.0, Pauli::X, Pauli::Z), 2, 1, 3);
  const ComplexMatrix u = ub * ua;
  const ComplexMatrix rf = u * rho0 * u.dagger();
  return {detail::purity_of_b(rho0), detail::purity_of_b(rf)};
}

/**
 * Closed form for the same protocol. Derived by carrying the Gibbs weights
 * through the two probe unitaries; the bracket factorizes as
 * [h- Hp^2 Sp^2 - 2 h_r Hp Hm Sp Sm + h+ Hm^2 Sm^2] * cos^2(2) (1 + tanh^2(beta h_an) sin^2(2)).
 */
inline PurityReport ancilla_protocol_purity(const AncillaScenario& sc, double beta) {
  if (beta < 0) throw std::invalid_argument("ancilla_protocol_purity: beta must be >= 0");
  const double hp_arg = (sc.h_a + sc.h_b) * (sc.h_a + sc.h_b) + sc.k * sc.k;
  const double hm_arg = (sc.h_a - sc.h_b) * (sc.h_a - sc.h_b) + sc.k * sc.k;
  const double hr2 = 0.5 * (hm_arg * hm_arg + hp_arg * hp_arg) -
                     8.0 * sc.h_a * sc.h_a * sc.h_b * sc.h_b;
  if (hr2 < 0) throw std::invalid_argument("ancilla_protocol_purity: invalid h_r radicand");
  const double hr = std::sqrt(hr2);
  const double hp_sum = sc.h_a + sc.h_b, hm_dif = sc.h_a - sc.h_b;
  const double sp = std::sinh(std::sqrt(hp_arg) * beta), sm = std::sinh(std::sqrt(hm_arg) * beta);
  const double cp = std::cosh(std::sqrt(hp_arg) * beta), cm = std::cosh(std::sqrt(hm_arg) * beta);
  const double t2 = std::tanh(beta * sc.h_an) * std::tanh(beta * sc.h_an);
  const double c2 = std::cos(2.0) * std::cos(2.0), s2 = std::sin(2.0) * std::sin(2.0);
  const double bracket = hm_arg * hp_sum * hp_sum * sp * sp -
                         2.0 * hr * hp_sum * hm_dif * sp * sm +
                         hp_arg * hm_dif * hm_dif * sm * sm;
  const double pf = 0.5 + bracket * c2 * (1.0 + t2 * s2) / (2.0 * hm_arg * hp_arg * (cp + cm) * (cp + cm));

  const DensityOperator rho_ab = thermal_state(sc.system_hamiltonian(), beta);
  PurityReport rep;
  rep.p_initial = partial_trace(rho_ab, {1}, 2).purity();
  rep.p_final = pf;
  return rep;
}

/** Probe Hamiltonian coefficients for the optimized fully unitary protocol. */
struct ProbeHamiltonians {
  std::array<double, 9> j{};      // sigma_i^A J_ij sigma_j^An
  std::array<double, 9> k_mat{};  // sigma_i^B K_ij sigma_j^An
  double h_an = 1.0;
};

namespace detail {

inline ComplexMatrix pauli_pair_sum(const std::array<double, 9>& coef) {
  static const Pauli ps[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  ComplexMatrix h(4, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (coef[3 * i + j] == 0.0) continue;
      h = h + coef[3 * i + j] * kron(pauli(ps[i]), pauli(ps[j]));
    }
  return h;
}

inline ComplexMatrix unitary_of(const ComplexMatrix& hermitian_gen) {
  const EigenSystem es = hermitian_eig(hermitian_gen);
  const std::size_t n = hermitian_gen.rows();
  ComplexMatrix u(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s(0, 0);
      for (std::size_t kk = 0; kk < n; ++kk)
        s += es.eigenvectors(r, kk) * std::exp(Complex(0, es.eigenvalues[kk])) *
             std::conj(es.eigenvectors(c, kk));
      u(r, c) = s;
    }
  return u;
}

}  // namespace detail

inline double probe_protocol_purity(const AncillaScenario& sc, double beta, const ProbeHamiltonians& pr) {
  const DensityOperator rho_ab = thermal_state(sc.system_hamiltonian(), beta);
  const DensityOperator rho_an = thermal_state(pr.h_an * sigma_z(), beta);
  const ComplexMatrix rho0 = detail::three_qubit_input(rho_ab.matrix(), rho_an.matrix());
  const ComplexMatrix ua = embed_pair(detail::unitary_of(detail::pauli_pair_sum(pr.j)), 0, 1, 3);
  const ComplexMatrix ub = embed_pair(detail::unitary_of(detail::pauli_pair_sum(pr.k_mat)), 2, 1, 3);
  const ComplexMatrix u = ub * ua;
  return detail::purity_of_b(u * rho0 * u.dagger());
}

/**
 * Derivative-free maximization of the final B purity over the 18 probe
 * coefficients, box-bounded to [-pi, pi]. Restart 0 starts at the fixed
 * analytic example (J_yy = K_xz = 1), so the optimum can only improve on it.
 */
inline std::pair<ProbeHamiltonians, PurityReport> optimize_probes(const AncillaScenario& sc, double beta,
                                                                  int restarts, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("optimize_probes: restarts must be >= 1");
  std::vector<double> x0(18, 0.0);
  x0[4] = 1.0;   // J_yy
  x0[9 + 2] = 1.0;  // K_xz
  const std::vector<double> lo(18, -M_PI), hi(18, M_PI);

  auto objective = [&](const std::vector<double>& x) {
    ProbeHamiltonians pr;
    pr.h_an = sc.h_an;
    for (int i = 0; i < 9; ++i) { pr.j[i] = x[i]; pr.k_mat[i] = x[9 + i]; }
    return -probe_protocol_purity(sc, beta, pr);
  };

  NelderMeadOptions opt;
  opt.max_iters = 2500;
  const OptimResult best = nelder_mead_restarts(objective, x0, lo, hi, restarts, seed, opt);

  ProbeHamiltonians pr;
  pr.h_an = sc.h_an;
  for (int i = 0; i < 9; ++i) { pr.j[i] = best.x[i]; pr.k_mat[i] = best.x[9 + i]; }
  PurityReport rep;
  rep.p_initial = partial_trace(thermal_state(sc.system_hamiltonian(), beta), {1}, 2).purity();
  rep.p_final = -best.f;
  return {pr, rep};
}

/**
 * One PPA round: dephase in the computational basis (the energy eigenbasis
 * of the non-interacting part), permute populations so the target qubit's
 * bath-ground population is maximal, then reset every non-target qubit to
 * the bath thermal state. "Ground" is |1>, the majority state of the bath
 * Gibbs qubit exp(-beta_bath h_bath sigma_z)/Z.
 */
inline DensityOperator ppa_step(const DensityOperator& state, std::size_t n_qubits,
                                std::size_t target_index, double bath_beta, double bath_h) {
  if (n_qubits != 2 && n_qubits != 3) throw std::invalid_argument("ppa_step: n_qubits must be 2 or 3");
  if (target_index >= n_qubits) throw std::invalid_argument("ppa_step: bad target index");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (state.dim() != dim) throw std::invalid_argument("ppa_step: dimension mismatch");

  std::vector<double> pops(dim);
  for (std::size_t i = 0; i < dim; ++i) pops[i] = std::real(state.matrix()(i, i));

  std::vector<std::size_t> by_pop(dim);
  std::iota(by_pop.begin(), by_pop.end(), std::size_t{0});
  std::stable_sort(by_pop.begin(), by_pop.end(),
                   [&](std::size_t a, std::size_t b) { return pops[a] > pops[b]; });

  // bitstrings with target bit = 1 (bath ground) first
  std::vector<std::size_t> slots;
  const std::size_t tshift = n_qubits - 1 - target_index;
  for (std::size_t s = 0; s < dim; ++s)
    if (((s >> tshift) & 1) == 1) slots.push_back(s);
  for (std::size_t s = 0; s < dim; ++s)
    if (((s >> tshift) & 1) == 0) slots.push_back(s);

  std::vector<double> newp(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) newp[slots[r]] = pops[by_pop[r]];

  // target marginal after compression
  double p1 = 0;
  for (std::size_t s = 0; s < dim; ++s)
    if (((s >> tshift) & 1) == 1) p1 += newp[s];

  const DensityOperator bath = thermal_state(bath_h * sigma_z(), bath_beta);
  ComplexMatrix out(1, 1);
  out(0, 0) = 1.0;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    ComplexMatrix factor(2, 2);
    if (q == target_index) { factor(0, 0) = 1.0 - p1; factor(1, 1) = p1; }
    else factor = bath.matrix();
    out = kron(out, factor);
  }
  return DensityOperator(out);
}

/** Iterate ppa_step to its purity fixed point. */
inline double ppa_fixed_point_purity(const DensityOperator& initial, std::size_t n_qubits,
                                     std::size_t target_index, double bath_beta, double bath_h,
                                     int max_rounds = 500) {
  DensityOperator state = initial;
  double last = -1;
  for (int round = 0; round < max_rounds; ++round) {
    state = ppa_step(state, n_qubits, target_index, bath_beta, bath_h);
    std::vector<std::size_t> keep{target_index};
    const double pur = partial_trace(state, keep, n_qubits).purity();
    if (std::abs(pur - last) < 1e-12) return pur;
    last = pur;
  }
  return last;
}

}  // namespace qet::cooling
