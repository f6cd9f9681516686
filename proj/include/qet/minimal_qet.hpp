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

#include "qet/qcore.hpp"

namespace qet::minimal {

/**
 * Two interacting qubits A, B with local gaps h and sigma_x sigma_x coupling
 * of strength 2k. Identity offsets are fixed so the total Hamiltonian is PSD
 * with ground energy exactly zero, which makes every protocol energy a plain
 * expectation value.
 */
struct MinimalParams {
  double h = 1.0;
  double k = 1.0;
};

struct EnergyLedger {
  double e_pa = 0;    // energy deposited by the measurement
  double e_hb = 0;    // <H_B> after the protocol
  double e_vab = 0;   // <V_AB> after the protocol
  double e_ub = 0;    // net cost of Bob's unitary (negative = extraction)
};

class MinimalModel {
 public:
  explicit MinimalModel(MinimalParams p)
      : params_(p),
        h_a_(4, 4), h_b_(4, 4), v_ab_(4, 4), h_total_(4, 4),
        ground_({Complex(1, 0), 0, 0, 0}) {
    if (!(p.h > 0) || !(p.k > 0))
      throw std::invalid_argument("minimal model requires h > 0 and k > 0");
    const double s = std::hypot(p.h, p.k);
    f_ = p.h * p.h / s;

    const ComplexMatrix i4 = ComplexMatrix::identity(4);
    h_a_ = p.h * kron(sigma_z(), identity2()) + f_ * i4;
    h_b_ = p.h * kron(identity2(), sigma_z()) + f_ * i4;
    v_ab_ = 2.0 * p.k * kron(sigma_x(), sigma_x()) + (2.0 * p.k * p.k / (p.h * p.h) * f_) * i4;
    h_total_ = h_a_ + h_b_ + v_ab_;

    // Ground state (C+|11> - C-|00>)/sqrt(2) in the sigma_z|0> = |0> basis.
    // The heavier amplitude C+ sits on |11>, the local ground configuration;
    // this is the unique state with <H_A> = <H_B> = <V_AB> = 0.
    const double cp = std::sqrt(1.0 + f_ / p.h);
    const double cm = std::sqrt(1.0 - f_ / p.h);
    ground_ = StateVector({-cm / std::sqrt(2.0), 0, 0, cp / std::sqrt(2.0)});
    c_plus_ = cp;
    c_minus_ = cm;
  }

  const MinimalParams& params() const { return params_; }
  double f() const { return f_; }
  double c_plus() const { return c_plus_; }
  double c_minus() const { return c_minus_; }
  const ComplexMatrix& h_a() const { return h_a_; }
  const ComplexMatrix& h_b() const { return h_b_; }
  const ComplexMatrix& v_ab() const { return v_ab_; }
  const ComplexMatrix& h_total() const { return h_total_; }
  const StateVector& ground() const { return ground_; }

 private:
  MinimalParams params_;
  double f_ = 0, c_plus_ = 0, c_minus_ = 0;
  ComplexMatrix h_a_, h_b_, v_ab_, h_total_;
  StateVector ground_;
};

inline MinimalModel build_model(MinimalParams p) { return MinimalModel(p); }

/** f(h, k) = h^2 / sqrt(h^2 + k^2). */
inline double f_of(MinimalParams p) { return p.h * p.h / std::hypot(p.h, p.k); }

/** Projector (1 + alpha sigma_x^A)/2 (x) 1_B for alpha = +-1. */
inline ComplexMatrix projector(int alpha) {
  if (alpha != 1 && alpha != -1) throw std::invalid_argument("projector: alpha must be +-1");
  const ComplexMatrix sxI = kron(sigma_x(), identity2());
  ComplexMatrix m = ComplexMatrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = 0.5 * (m(i, j) + static_cast<double>(alpha) * sxI(i, j));
  return m;
}

/** rho_1 = 1/2 |g><g| + 1/2 sigma_x^A |g><g| sigma_x^A. */
inline DensityOperator post_measurement_state(const MinimalModel& m) {
  const DensityOperator g = DensityOperator::pure(m.ground());
  const ComplexMatrix sxI = kron(sigma_x(), identity2());
  const ComplexMatrix r = 0.5 * g.matrix() + 0.5 * (sxI * g.matrix() * sxI);
  return DensityOperator(r);
}

/**
 * Feedback angle minimizing Bob's energy cost:
 * theta = (1/2) atan2(hk, h^2 + 2k^2), always in (0, pi/4).
 */
inline double optimal_theta(MinimalParams p) {
  if (!(p.h > 0) || !(p.k > 0)) throw std::invalid_argument("optimal_theta: couplings must be positive");
  return 0.5 * std::atan2(p.h * p.k, p.h * p.h + 2.0 * p.k * p.k);
}

/** U_B(alpha) = cos(theta) 1 - i alpha sin(theta) sigma_y^B, as 1_A (x) u. */
inline ComplexMatrix bob_unitary(int alpha, double theta) {
  if (alpha != 1 && alpha != -1) throw std::invalid_argument("bob_unitary: alpha must be +-1");
  ComplexMatrix u(2, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  u(0, 0) = c; u(0, 1) = -alpha * s;
  u(1, 0) = alpha * s; u(1, 1) = c;
  return kron(identity2(), u);
}

/** Closed form for E_{U_B}(theta). */
inline double bob_cost_closed_form(MinimalParams p, double theta) {
  const double s = std::hypot(p.h, p.k);
  return -(p.h * p.k * std::sin(2 * theta) -
           (p.h * p.h + 2 * p.k * p.k) * (1 - std::cos(2 * theta))) / s;
}

/** Run measurement + classical feedback and book the energies. */
inline EnergyLedger run_protocol(const MinimalModel& m, double theta) {
  const DensityOperator g = DensityOperator::pure(m.ground());
  ComplexMatrix rho1(4, 4), rho2(4, 4);
  for (int alpha : {+1, -1}) {
    const ComplexMatrix pa = projector(alpha);
    const ComplexMatrix branch = pa * g.matrix() * pa;
    rho1 = rho1 + branch;
    const ComplexMatrix u = bob_unitary(alpha, theta);
    rho2 = rho2 + u * branch * u.dagger();
  }
  EnergyLedger led;
  led.e_pa = std::real((rho1 * m.h_total()).trace());
  led.e_hb = std::real((rho2 * m.h_b()).trace());
  led.e_vab = std::real((rho2 * m.v_ab()).trace());
  led.e_ub = std::real((rho2 * m.h_total()).trace()) - led.e_pa;
  return led;
}

inline EnergyLedger run_protocol(MinimalParams p, double theta) {
  return run_protocol(MinimalModel(p), theta);
}

/**
 * Cost of an outcome-independent unitary W on B: E_W = <g|W^dag H W|g>.
 * Nonnegative because H is PSD with ground energy zero.
 */
inline double no_communication_cost(const MinimalModel& m, const ComplexMatrix& w_on_b) {
  if (w_on_b.rows() != 2 || w_on_b.cols() != 2 || !w_on_b.is_unitary(1e-10))
    throw std::invalid_argument("no_communication_cost: W must be a 2x2 unitary");
  const ComplexMatrix w = kron(identity2(), w_on_b);
  const DensityOperator g = DensityOperator::pure(m.ground());
  return std::real(((w * g.matrix() * w.dagger()) * m.h_total()).trace());
}

/**
 * <H_B(t)> after the measurement, from exact eigen-evolution; cross-checked
 * against the closed form (1/2) f (1 - cos 4kt) at the call site by tests.
 */
inline double energy_flow(const MinimalModel& m, double t) {
  if (t < 0) throw std::invalid_argument("energy_flow: t must be nonnegative");
  const ComplexMatrix u = matexp_hermitian(m.h_total(), t);
  const ComplexMatrix rho1 = post_measurement_state(m).matrix();
  const ComplexMatrix rt = u * rho1 * u.dagger();
  return std::real((rt * m.h_b()).trace());
}

inline double energy_flow_closed_form(const MinimalModel& m, double t) {
  return 0.5 * m.f() * (1.0 - std::cos(4.0 * m.params().k * t));
}

inline double interaction_energy_flow(const MinimalModel& m, double t) {
  const ComplexMatrix u = matexp_hermitian(m.h_total(), t);
  const ComplexMatrix rho1 = post_measurement_state(m).matrix();
  const ComplexMatrix rt = u * rho1 * u.dagger();
  return std::real((rt * m.v_ab()).trace());
}

}  // namespace qet::minimal
