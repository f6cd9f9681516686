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
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qet/minimal_qet.hpp"
#include "qet/qcore.hpp"
#include "qet/rng.hpp"

namespace qet::hardware {

struct Gate {
  enum class Kind { RY, H, X, Z, CNOT, CTRL_U, ACTRL_U, MEASURE_Z };
  Kind kind = Kind::H;
  std::size_t q0 = 0;      // target (single-qubit), control (controlled kinds)
  std::size_t q1 = 0;      // target of CNOT / controlled unitaries
  double angle = 0;        // RY only
  ComplexMatrix u;         // CTRL_U / ACTRL_U block

  static Gate ry(std::size_t q, double angle) { return {Kind::RY, q, 0, angle, {}}; }
  static Gate h(std::size_t q) { return {Kind::H, q, 0, 0, {}}; }
  static Gate x(std::size_t q) { return {Kind::X, q, 0, 0, {}}; }
  static Gate z(std::size_t q) { return {Kind::Z, q, 0, 0, {}}; }
  static Gate cnot(std::size_t control, std::size_t target) {
    return {Kind::CNOT, control, target, 0, {}};
  }
  static Gate ctrl_u(std::size_t control, std::size_t target, ComplexMatrix u) {
    return {Kind::CTRL_U, control, target, 0, std::move(u)};
  }
  static Gate actrl_u(std::size_t control, std::size_t target, ComplexMatrix u) {
    return {Kind::ACTRL_U, control, target, 0, std::move(u)};
  }
  static Gate measure_z(std::size_t q) { return {Kind::MEASURE_Z, q, 0, 0, {}}; }
};

/** Gate list on a fixed-width register; measurements only as a terminal block. */
struct Circuit {
  std::size_t width = 2;
  std::vector<Gate> gates;

  void append(Gate g) {
    validate_gate(g);
    if (g.kind != Gate::Kind::MEASURE_Z && !gates.empty() &&
        gates.back().kind == Gate::Kind::MEASURE_Z)
      throw std::invalid_argument("Circuit: measurements must be terminal");
    gates.push_back(std::move(g));
  }
  void append(const std::vector<Gate>& fragment) {
    for (const Gate& g : fragment) append(g);
  }

 private:
  void validate_gate(const Gate& g) const {
    if (g.q0 >= width) throw std::invalid_argument("Circuit: qubit index out of range");
    const bool two = g.kind == Gate::Kind::CNOT || g.kind == Gate::Kind::CTRL_U ||
                     g.kind == Gate::Kind::ACTRL_U;
    if (two) {
      if (g.q1 >= width || g.q1 == g.q0)
        throw std::invalid_argument("Circuit: bad two-qubit operand pair");
      if (g.kind != Gate::Kind::CNOT && !(g.u.rows() == 2 && g.u.is_unitary(1e-10)))
        throw std::invalid_argument("Circuit: controlled block must be a 2x2 unitary");
    }
    if (g.kind == Gate::Kind::RY && !std::isfinite(g.angle))
      throw std::invalid_argument("Circuit: angle must be finite");
  }
};

namespace detail {

inline ComplexMatrix ry_matrix(double angle) {
  ComplexMatrix m(2, 2);
  m(0, 0) = std::cos(angle / 2); m(0, 1) = -std::sin(angle / 2);
  m(1, 0) = std::sin(angle / 2); m(1, 1) = std::cos(angle / 2);
  return m;
}

inline ComplexMatrix x_matrix() { return sigma_x(); }

inline ComplexMatrix gate_unitary(const Gate& g, std::size_t width) {
  switch (g.kind) {
    case Gate::Kind::RY: return embed_single(ry_matrix(g.angle), g.q0, width);
    case Gate::Kind::H: return embed_single(hadamard(), g.q0, width);
    case Gate::Kind::X: return embed_single(sigma_x(), g.q0, width);
    case Gate::Kind::Z: return embed_single(sigma_z(), g.q0, width);
    case Gate::Kind::CNOT: {
      ComplexMatrix c(4, 4);
      c(0, 0) = 1; c(1, 1) = 1; c(2, 3) = 1; c(3, 2) = 1;
      return embed_pair(c, g.q0, g.q1, width);
    }
    case Gate::Kind::CTRL_U: {
      ComplexMatrix c(4, 4);
      c(0, 0) = 1; c(1, 1) = 1;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) c(2 + i, 2 + j) = g.u(i, j);
      return embed_pair(c, g.q0, g.q1, width);
    }
    case Gate::Kind::ACTRL_U: {
      ComplexMatrix c(4, 4);
      c(2, 2) = 1; c(3, 3) = 1;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) c(i, j) = g.u(i, j);
      return embed_pair(c, g.q0, g.q1, width);
    }
    case Gate::Kind::MEASURE_Z:
      throw std::logic_error("gate_unitary: MEASURE_Z has no unitary");
  }
  throw std::logic_error("gate_unitary: unknown gate");
}

}  // namespace detail

/** Statevector after all unitary gates (terminal measurements skipped). */
inline StateVector statevector(const Circuit& c) {
  std::vector<Complex> psi(std::size_t{1} << c.width, Complex(0, 0));
  psi[0] = 1.0;
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::MEASURE_Z) continue;
    psi = detail::gate_unitary(g, c.width) * psi;
  }
  return StateVector(std::move(psi));
}

/** Exact density matrix; a MEASURE_Z gate dephases its qubit in the Z basis. */
inline DensityOperator exact_density(const Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.width;
  ComplexMatrix rho(dim, dim);
  rho(0, 0) = 1.0;
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::MEASURE_Z) {
      const std::size_t shift = c.width - 1 - g.q0;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t col = 0; col < dim; ++col)
          if (((r >> shift) & 1) != ((col >> shift) & 1)) rho(r, col) = 0;
      continue;
    }
    const ComplexMatrix u = detail::gate_unitary(g, c.width);
    rho = u * rho * u.dagger();
  }
  return DensityOperator(rho);
}

inline std::string bitstring_of(std::size_t index, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((index >> (width - 1 - i)) & 1) s[i] = '1';
  return s;
}

inline std::size_t index_of_bitstring(const std::string& s) {
  std::size_t v = 0;
  for (char ch : s) v = (v << 1) | (ch == '1' ? 1 : 0);
  return v;
}

struct ShotResult {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::size_t width = 2;

  std::vector<double> frequencies() const {
    std::vector<double> f(std::size_t{1} << width, 0.0);
    for (const auto& [bits, n] : counts)
      f[index_of_bitstring(bits)] = static_cast<double>(n) / static_cast<double>(shots);
    return f;
  }
};

/** Sample terminal Z-basis outcomes from the exact output distribution. */
inline ShotResult run_shots(const Circuit& c, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("run_shots: shots must be >= 1");
  const StateVector psi = statevector(c);
  const std::size_t dim = psi.dim();
  std::vector<double> cdf(dim);
  double acc = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += std::norm(psi[i]);
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Rng rng = Rng::stream(seed, 0);
  ShotResult r;
  r.shots = shots;
  r.seed = seed;
  r.width = c.width;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++r.counts[bitstring_of(std::min(idx, dim - 1), c.width)];
  }
  return r;
}

/** Row-stochastic P(measured | true) over two-qubit bitstrings. */
struct ConfusionMatrix {
  std::array<std::array<double, 4>, 4> m{};

  static ConfusionMatrix identity_matrix() {
    ConfusionMatrix c;
    for (int i = 0; i < 4; ++i) c.m[i][i] = 1.0;
    return c;
  }

  /** Independent per-qubit symmetric flip probability p. */
  static ConfusionMatrix symmetric_flip(double p) {
    if (p < 0 || p > 1) throw std::invalid_argument("ConfusionMatrix: flip probability out of range");
    ConfusionMatrix c;
    const double q[2] = {1.0 - p, p};
    for (int t = 0; t < 4; ++t)
      for (int o = 0; o < 4; ++o) {
        const int b0 = ((t >> 1) ^ (o >> 1)) & 1, b1 = (t ^ o) & 1;
        c.m[t][o] = q[b0] * q[b1];
      }
    return c;
  }

  void validate() const {
    for (int i = 0; i < 4; ++i) {
      double s = 0;
      for (int j = 0; j < 4; ++j) {
        if (m[i][j] < 0 || m[i][j] > 1)
          throw std::invalid_argument("ConfusionMatrix: entries must be in [0, 1]");
        s += m[i][j];
      }
      if (std::abs(s - 1.0) > kStructuralTol)
        throw std::invalid_argument("ConfusionMatrix: rows must sum to 1");
    }
  }
};

/** Resample each recorded shot through its confusion row. Deterministic per seed. */
inline ShotResult apply_readout_noise(const ShotResult& r, const ConfusionMatrix& cm,
                                      std::uint64_t seed) {
  cm.validate();
  Rng rng = Rng::stream(seed, 1);
  ShotResult out;
  out.shots = r.shots;
  out.seed = seed;
  out.width = r.width;
  for (const auto& [bits, n] : r.counts) {
    const std::size_t t = index_of_bitstring(bits);
    for (std::uint64_t s = 0; s < n; ++s) {
      const double u = rng.uniform();
      double acc = 0;
      std::size_t o = 3;
      for (std::size_t j = 0; j < 4; ++j) {
        acc += cm.m[t][j];
        if (u < acc) { o = j; break; }
      }
      ++out.counts[bitstring_of(o, r.width)];
    }
  }
  return out;
}

namespace detail {

/** Solve the 4x4 system A x = b by partial-pivot elimination. */
inline std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    if (std::abs(a[col][col]) < 1e-14) throw std::invalid_argument("confusion matrix is singular");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int cc = col; cc < 4; ++cc) a[r][cc] -= f * a[col][cc];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline double condition_estimate(const std::array<std::array<double, 4>, 4>& m) {
  // 1-norm of M times 1-norm of M^-1 (columns reconstructed by solves)
  double nm = 0;
  for (int j = 0; j < 4; ++j) {
    double s = 0;
    for (int i = 0; i < 4; ++i) s += std::abs(m[i][j]);
    nm = std::max(nm, s);
  }
  double ninv = 0;
  for (int j = 0; j < 4; ++j) {
    std::array<double, 4> e{};
    e[j] = 1.0;
    const std::array<double, 4> x = solve4(m, e);
    double s = 0;
    for (int i = 0; i < 4; ++i) s += std::abs(x[i]);
    ninv = std::max(ninv, s);
  }
  return nm * ninv;
}

}  // namespace detail

/**
 * Invert the confusion map on measured frequencies; negative quasi-probability
 * entries are clipped to zero and the vector renormalized.
 */
inline std::map<std::string, double> mitigate(const ShotResult& r, const ConfusionMatrix& cm) {
  cm.validate();
  if (detail::condition_estimate(cm.m) >= 1e6)
    throw std::invalid_argument("mitigate: confusion matrix condition number too large");
  const std::vector<double> f = r.frequencies();
  // measured = M^T true  =>  true = (M^T)^{-1} measured
  std::array<std::array<double, 4>, 4> mt{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mt[i][j] = cm.m[j][i];
  std::array<double, 4> b{f[0], f[1], f[2], f[3]};
  std::array<double, 4> x = detail::solve4(mt, b);
  double s = 0;
  for (double& v : x) {
    v = std::max(v, 0.0);
    s += v;
  }
  std::map<std::string, double> out;
  for (int i = 0; i < 4; ++i) out[bitstring_of(i, 2)] = (s > 0 ? x[i] / s : 0.25);
  return out;
}

// ---------------------------------------------------------------------------
// Protocol circuits
// ---------------------------------------------------------------------------

/** Preparation angle theta = -arccos(sqrt((1 - g)/2)), g = h/sqrt(h^2+k^2). */
inline double prep_angle(minimal::MinimalParams p) {
  const double g = p.h / std::hypot(p.h, p.k);
  return -std::acos(std::sqrt((1.0 - g) / 2.0));
}

/** RY(2 theta) on A then CNOT(A -> B); output equals |g> up to a global phase. */
inline Circuit prep_circuit(minimal::MinimalParams p) {
  if (!(p.h > 0) || !(p.k > 0)) throw std::invalid_argument("prep_circuit: couplings must be positive");
  Circuit c;
  c.width = 2;
  c.append(Gate::ry(0, 2.0 * prep_angle(p)));
  c.append(Gate::cnot(0, 1));
  return c;
}

/**
 * Deferred measurement of the sigma_x feedback: u0 fires when A reads 0 and
 * u1 when A reads 1 (after Alice's Hadamard upstream). CTRL then ACTRL; the
 * two commute.
 */
inline std::vector<Gate> defer_measurement(const ComplexMatrix& u0, const ComplexMatrix& u1) {
  if (!(u0.rows() == 2 && u0.is_unitary(1e-10)) || !(u1.rows() == 2 && u1.is_unitary(1e-10)))
    throw std::invalid_argument("defer_measurement: blocks must be 2x2 unitaries");
  return {Gate::ctrl_u(0, 1, u1), Gate::actrl_u(0, 1, u0)};
}

enum class Observable { V_AB, H_B };

/**
 * Full estimation circuit for one observable: prepare the ground state, rotate
 * A into the sigma_x measurement basis, run the deferred feedback RY(+-2 phi),
 * change basis for the estimator and measure both qubits.
 *
 * Estimator contracts on the resulting counts (a, b = measured bits):
 *   <V_AB> = 2k E[(-1)^(a+b)] + 2 (k^2/h^2) f(h,k)      (H on B appended)
 *   <H_B>  =  h E[(-1)^b]     + f(h,k)                  (no basis change)
 */
inline Circuit measurement_circuit(Observable obs, minimal::MinimalParams p, double phi) {
  Circuit c = prep_circuit(p);
  c.append(Gate::h(0));
  c.append(defer_measurement(detail::ry_matrix(2.0 * phi), detail::ry_matrix(-2.0 * phi)));
  if (obs == Observable::V_AB) c.append(Gate::h(1));
  c.append(Gate::measure_z(0));
  c.append(Gate::measure_z(1));
  return c;
}

inline Circuit measurement_circuit(Observable obs, minimal::MinimalParams p) {
  return measurement_circuit(obs, p, minimal::optimal_theta(p));
}

struct EstimatorResult {
  double value = 0;
  double std_err = 0;
};

/**
 * Linear estimator sum_b w(b) p(b) from counts, with the exact multinomial
 * standard error. With a confusion matrix the weights are pulled back through
 * the inverse map, which is the unbiased mitigated estimator.
 */
inline EstimatorResult estimate(const ShotResult& r, const std::vector<double>& weights,
                                const ConfusionMatrix* cm = nullptr) {
  std::vector<double> w = weights;
  if (cm != nullptr) {
    std::array<double, 4> b{weights[0], weights[1], weights[2], weights[3]};
    const std::array<double, 4> wp = detail::solve4(cm->m, b);  // w' = M^{-1} w
    w.assign(wp.begin(), wp.end());
  }
  const std::vector<double> f = r.frequencies();
  double mean = 0, m2 = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mean += w[i] * f[i];
    m2 += w[i] * w[i] * f[i];
  }
  const double var = std::max(0.0, m2 - mean * mean) / static_cast<double>(r.shots);
  return {mean, std::sqrt(var)};
}

inline std::vector<double> parity_weights(double scale, bool qubit_a, bool qubit_b) {
  std::vector<double> w(4);
  for (int i = 0; i < 4; ++i) {
    int s = 0;
    if (qubit_a) s += (i >> 1) & 1;
    if (qubit_b) s += i & 1;
    w[i] = scale * ((s % 2) ? -1.0 : 1.0);
  }
  return w;
}

struct QuantityReport {
  double exact = 0;
  EstimatorResult raw;
  EstimatorResult mitigated;
};

struct TableReport {
  minimal::EnergyLedger exact;
  QuantityReport e_pa, e_hb, e_vab, e_ub;
};

/**
 * Reproduce the protocol's energy table. Exact values come from the closed
 * density-matrix path; shot estimates from the estimation circuits, with
 * E_PA's post-measurement ensemble realized as an even split between the
 * identity and sigma_x^A branches. Optional readout noise is applied to every
 * shot; mitigated estimators invert the confusion map.
 */
inline TableReport table_reproduction(minimal::MinimalParams p, std::uint64_t shots,
                                      std::uint64_t seed, const ConfusionMatrix* noise = nullptr,
                                      bool with_mitigation = false) {
  const minimal::MinimalModel model(p);
  const double f = model.f();
  const double phi = minimal::optimal_theta(p);

  TableReport rep;
  rep.exact = minimal::run_protocol(model, phi);

  auto run = [&](const Circuit& c, std::uint64_t stream) {
    ShotResult r = run_shots(c, std::max<std::uint64_t>(shots, 1), derive_seed(seed, stream));
    if (noise != nullptr)
      r = apply_readout_noise(r, *noise, derive_seed(seed, stream + 100));
    return r;
  };
  const ConfusionMatrix* mit = (noise != nullptr && with_mitigation) ? noise : nullptr;

  // rho_1 ensemble: half the shots with an extra X on A before measuring
  Circuit z_plain = prep_circuit(p);
  z_plain.append(Gate::measure_z(0));
  z_plain.append(Gate::measure_z(1));
  Circuit z_flip = prep_circuit(p);
  z_flip.append(Gate::x(0));
  z_flip.append(Gate::measure_z(0));
  z_flip.append(Gate::measure_z(1));
  Circuit xx = prep_circuit(p);
  xx.append(Gate::h(0));
  xx.append(Gate::h(1));
  xx.append(Gate::measure_z(0));
  xx.append(Gate::measure_z(1));

  const ShotResult rz1 = run(z_plain, 1), rz2 = run(z_flip, 2), rxx = run(xx, 3);
  const double epa_offset = 2.0 * f + 2.0 * p.k * p.k / (p.h * p.h) * f;

  auto halved = [](const EstimatorResult& a, const EstimatorResult& b) {
    EstimatorResult r;
    r.value = 0.5 * (a.value + b.value);
    r.std_err = 0.5 * std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
    return r;
  };
  auto epa_estimate = [&](const ConfusionMatrix* cmx) {
    const EstimatorResult za = halved(estimate(rz1, parity_weights(p.h, true, false), cmx),
                                      estimate(rz2, parity_weights(p.h, true, false), cmx));
    const EstimatorResult zb = halved(estimate(rz1, parity_weights(p.h, false, true), cmx),
                                      estimate(rz2, parity_weights(p.h, false, true), cmx));
    const EstimatorResult exx = estimate(rxx, parity_weights(2.0 * p.k, true, true), cmx);
    EstimatorResult r;
    r.value = za.value + zb.value + exx.value + epa_offset;
    r.std_err = std::sqrt(za.std_err * za.std_err + zb.std_err * zb.std_err +
                          exx.std_err * exx.std_err);
    return r;
  };
  rep.e_pa.exact = rep.exact.e_pa;
  rep.e_pa.raw = epa_estimate(nullptr);
  rep.e_pa.mitigated = (mit != nullptr) ? epa_estimate(mit) : rep.e_pa.raw;

  // post-protocol circuits
  const ShotResult rhb = run(measurement_circuit(Observable::H_B, p, phi), 4);
  const ShotResult rvab = run(measurement_circuit(Observable::V_AB, p, phi), 5);

  auto fill = [&](QuantityReport& qr, const ShotResult& r, const std::vector<double>& w,
                  double offset, double exact) {
    qr.exact = exact;
    const EstimatorResult raw = estimate(r, w, nullptr);
    qr.raw = {raw.value + offset, raw.std_err};
    if (mit != nullptr) {
      const EstimatorResult m = estimate(r, w, mit);
      qr.mitigated = {m.value + offset, m.std_err};
    } else {
      qr.mitigated = qr.raw;
    }
  };
  fill(rep.e_hb, rhb, parity_weights(p.h, false, true), f, rep.exact.e_hb);
  fill(rep.e_vab, rvab, parity_weights(2.0 * p.k, true, true),
       2.0 * p.k * p.k / (p.h * p.h) * f, rep.exact.e_vab);

  rep.e_ub.exact = rep.exact.e_ub;
  rep.e_ub.raw.value = rep.e_hb.raw.value + rep.e_vab.raw.value;
  rep.e_ub.raw.std_err = std::sqrt(rep.e_hb.raw.std_err * rep.e_hb.raw.std_err +
                                   rep.e_vab.raw.std_err * rep.e_vab.raw.std_err);
  rep.e_ub.mitigated.value = rep.e_hb.mitigated.value + rep.e_vab.mitigated.value;
  rep.e_ub.mitigated.std_err = std::sqrt(rep.e_hb.mitigated.std_err * rep.e_hb.mitigated.std_err +
                                         rep.e_vab.mitigated.std_err * rep.e_vab.mitigated.std_err);
  return rep;
}

/** Exact-mode check helper: measurement-circuit expectations without sampling. */
inline double exact_observable(Observable obs, minimal::MinimalParams p, double phi) {
  const Circuit c = measurement_circuit(obs, p, phi);
  const DensityOperator rho = exact_density(c);
  const minimal::MinimalModel model(p);
  const double f = model.f();
  ComplexMatrix zz(4, 4);
  if (obs == Observable::H_B) {
    // weights h * (-1)^b plus offset f
    for (std::size_t i = 0; i < 4; ++i) zz(i, i) = p.h * ((i & 1) ? -1.0 : 1.0);
    return expect(zz, rho) + f;
  }
  for (std::size_t i = 0; i < 4; ++i)
    zz(i, i) = 2.0 * p.k * ((((i >> 1) + i) % 2) ? -1.0 : 1.0);
  return expect(zz, rho) + 2.0 * p.k * p.k / (p.h * p.h) * f;
}

}  // namespace qet::hardware
