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

#include <catch2/catch_amalgamated.hpp>

#include "qet/minimal_qet.hpp"
#include "qet/rng.hpp"
#include "qet/slp.hpp"

using namespace qet;
using namespace qet::slp;

namespace {

/** Random mixture diagonal in the Hamiltonian eigenbasis. p0 optionally forced high. */
DensityOperator energy_diagonal_state(const ComplexMatrix& h, Rng& rng, bool mostly_ground) {
  const EigenSystem es = hermitian_eig(h);
  const std::size_t n = h.rows();
  std::vector<double> p(n);
  double z = 0;
  for (auto& v : p) { v = rng.uniform(0.02, 1.0); z += v; }
  for (auto& v : p) v /= z;
  if (mostly_ground) {
    const double rest = 1.0 - p[0];
    const double target = rng.uniform(0.985, 0.999);
    for (std::size_t i = 1; i < n; ++i) p[i] *= (1.0 - target) / rest;
    p[0] = target;
  }
  ComplexMatrix rho(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s(0, 0);
      for (std::size_t i = 0; i < n; ++i)
        s += es.eigenvectors(r, i) * p[i] * std::conj(es.eigenvectors(c, i));
      rho(r, c) = s;
    }
  return DensityOperator(rho);
}

ComplexMatrix swap_qubits(const ComplexMatrix& m4) {
  ComplexMatrix s(4, 4);
  const std::size_t perm[4] = {0, 2, 1, 3};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) s(perm[r], perm[c]) = m4(r, c);
  return s;
}

}  // namespace

TEST_CASE("C operator on reference instances", "[slp]") {
  // rho = I/4, H = I: C = I/2
  const SlpInstance flat(DensityOperator(0.25 * ComplexMatrix::identity(4)),
                         ComplexMatrix::identity(4), 2, 2);
  CHECK(build_c_operator(flat).approx_equal(0.5 * ComplexMatrix::identity(4), 1e-12));

  // rho = |00><00|, H = sigma_z (x) 1: support only in the |0><0|_A block
  ComplexMatrix r00(4, 4);
  r00(0, 0) = 1;
  const SlpInstance inst(DensityOperator(r00), kron(sigma_z(), identity2()), 2, 2);
  const ComplexMatrix c = build_c_operator(inst);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i >= 2 || j >= 2) CHECK(std::abs(c(i, j)) < 1e-14);
  CHECK(std::abs(c(0, 0) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(c(1, 1) - Complex(-1, 0)) < 1e-14);
}

TEST_CASE("verdicts on hand-checkable instances", "[slp]") {
  const ComplexMatrix h2 = kron(sigma_z(), identity2()) + kron(identity2(), sigma_z());

  ComplexMatrix r11(4, 4);
  r11(3, 3) = 1;  // product ground state of the local Hamiltonian
  CHECK(slp_check({DensityOperator(r11), h2, 2, 2}).is_slp);

  ComplexMatrix r00(4, 4);
  r00(0, 0) = 1;  // fully excited
  const SlpVerdict bad = slp_check({DensityOperator(r00), h2, 2, 2});
  CHECK_FALSE(bad.is_slp);
  CHECK(bad.condition_min_eigenvalue < -1.0);

  // minimal-model ground states across the coupling grid
  for (double h : {0.5, 1.0, 1.5, 2.0, 2.5})
    for (double k : {0.5, 1.0, 1.5, 2.0, 2.5}) {
      const minimal::MinimalModel m({h, k});
      CHECK(slp_check({DensityOperator::pure(m.ground()), m.h_total(), 2, 2}).is_slp);
    }
}

TEST_CASE("verdict invariant under identity shifts of H", "[slp]") {
  Rng rng(4);
  const minimal::MinimalModel m({1.1, 0.9});
  for (double shift : {-3.0, 0.7, 12.0}) {
    const DensityOperator rho = energy_diagonal_state(m.h_total(), rng, false);
    const SlpVerdict a = slp_check({rho, m.h_total(), 2, 2});
    const SlpVerdict b =
        slp_check({rho, m.h_total() + shift * ComplexMatrix::identity(4), 2, 2});
    CHECK(a.is_slp == b.is_slp);
    CHECK(a.condition_min_eigenvalue ==
          Catch::Approx(b.condition_min_eigenvalue).margin(1e-9));
  }
}

TEST_CASE("hermiticity defect vanishes for energy-diagonal states", "[slp]") {
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const minimal::MinimalModel m({rng.uniform(0.5, 2.0), rng.uniform(0.3, 2.0)});
    const DensityOperator rho = energy_diagonal_state(m.h_total(), rng, i % 2 == 0);
    CHECK(slp_check({rho, m.h_total(), 2, 2}).hermiticity_defect < 1e-10);
  }
}

TEST_CASE("extraction oracle basics", "[slp]") {
  const ComplexMatrix h2 = kron(sigma_z(), identity2()) + kron(identity2(), sigma_z());
  ComplexMatrix r00(4, 4);
  r00(0, 0) = 1;
  const SlpInstance excited(DensityOperator(r00), h2, 2, 2);
  CHECK(brute_force_extraction_oracle(excited, 500, 7) >= 2.0 - 1e-6);
  CHECK(brute_force_extraction_oracle(excited, 0, 7) == 0.0);

  const minimal::MinimalModel m({1, 1});
  const SlpInstance ground(DensityOperator::pure(m.ground()), m.h_total(), 2, 2);
  CHECK(brute_force_extraction_oracle(ground, 200, 3) <= 1e-6);
}

TEST_CASE("verdict agrees with the oracle on random energy-diagonal instances", "[slp]") {
  Rng rng(2024);
  int slp_count = 0, active_count = 0;
  for (int i = 0; i < 20; ++i) {
    const minimal::MinimalModel m({rng.uniform(0.4, 2.5), rng.uniform(0.2, 2.5)});
    const DensityOperator rho = energy_diagonal_state(m.h_total(), rng, i % 2 == 0);
    const SlpInstance inst(rho, m.h_total(), 2, 2);
    const SlpVerdict v = slp_check(inst);
    const double gain = brute_force_extraction_oracle(inst, 500, 555 + i);
    INFO("instance " << i << " slp=" << v.is_slp << " gain=" << gain);
    CHECK(v.is_slp == (gain <= 1e-6));
    (v.is_slp ? slp_count : active_count)++;
  }
  // the instance family must exercise both verdicts
  CHECK(slp_count >= 3);
  CHECK(active_count >= 3);
}

TEST_CASE("second-theorem threshold for the minimal model", "[slp]") {
  const minimal::MinimalModel m({1, 1});
  const double p = ground_population_threshold(m.h_total(), 2, 2);
  CHECK(p > 0);
  CHECK(p < 1);
  // frozen regression value for (h, k) = (1, 1)
  CHECK(p == Catch::Approx(0.9754895892494557).margin(1e-12));

  // symmetric model: identical threshold with A and B swapped
  const double pswap = ground_population_threshold(swap_qubits(m.h_total()), 2, 2);
  CHECK(p == Catch::Approx(pswap).margin(1e-12));

  // k -> 0: the ground state becomes a product, full Schmidt rank fails
  const minimal::MinimalModel decoupled({1.0, 1e-12});
  CHECK_THROWS_AS(ground_population_threshold(decoupled.h_total(), 2, 2),
                  std::invalid_argument);
}

TEST_CASE("threshold certifies mostly-ground mixtures as passive", "[slp]") {
  Rng rng(77);
  const minimal::MinimalModel m({1.0, 1.2});
  const double pstar = ground_population_threshold(m.h_total(), 2, 2);
  for (int i = 0; i < 5; ++i) {
    DensityOperator rho = energy_diagonal_state(m.h_total(), rng, true);
    // ground population of these draws is >= 0.985 > p*
    CHECK(pstar < 0.985);
    CHECK(slp_check({rho, m.h_total(), 2, 2}).is_slp);
  }
}
