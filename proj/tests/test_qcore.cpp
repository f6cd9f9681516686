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
#include "qet/qcore.hpp"
#include "qet/rng.hpp"

using namespace qet;

namespace {

ComplexMatrix random_matrix(Rng& rng, std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.normal_complex();
  return m;
}

ComplexMatrix random_density(Rng& rng, std::size_t n) {
  ComplexMatrix g = random_matrix(rng, n);
  ComplexMatrix r = g * g.dagger();
  const double tr = std::real(r.trace());
  return (1.0 / tr) * r;
}

}  // namespace

TEST_CASE("kron identities and Pauli sign convention", "[qcore]") {
  CHECK(kron(identity2(), identity2()).approx_equal(ComplexMatrix::identity(4)));

  // sigma_z |1> = -|1>, so sigma_z (x) 1 flips the sign of |10>
  const StateVector ten = StateVector::basis(4, 2);
  const auto out = kron(sigma_z(), identity2()) * ten.amplitudes();
  CHECK(std::abs(out[2] - Complex(-1, 0)) < 1e-15);

  const ComplexMatrix sxsx = kron(sigma_x(), sigma_x());
  CHECK((sxsx * sxsx).approx_equal(ComplexMatrix::identity(4)));
}

TEST_CASE("kron is associative", "[qcore]") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 2),
                        c = random_matrix(rng, 2);
    CHECK(kron(kron(a, b), c).approx_equal(kron(a, kron(b, c)), 1e-12));
  }
}

TEST_CASE("partial trace of product and entangled states", "[qcore]") {
  // product state |00><00|
  const DensityOperator rho00 = DensityOperator::pure(StateVector::basis(4, 0));
  const DensityOperator rb = partial_trace(rho00, {1}, 2);
  CHECK(rb.matrix().approx_equal(DensityOperator::pure(StateVector::basis(2, 0)).matrix()));

  // Bell state -> maximally mixed marginal
  const StateVector bell({1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)});
  const DensityOperator rbell = partial_trace(DensityOperator::pure(bell), {1}, 2);
  CHECK(rbell.matrix().approx_equal(0.5 * ComplexMatrix::identity(2), 1e-12));

  // the published two-qubit ground-state form (C-|11> - C+|00>)/sqrt(2) at h=k=1:
  // tracing out A leaves diag(C+^2, C-^2)/2
  const double f = 1.0 / std::sqrt(2.0);
  const double cp = std::sqrt(1 + f), cm = std::sqrt(1 - f);
  const StateVector g({-cp / std::sqrt(2.0), 0, 0, cm / std::sqrt(2.0)});
  const DensityOperator gb = partial_trace(DensityOperator::pure(g), {1}, 2);
  CHECK(std::abs(gb.matrix()(0, 0) - Complex(cp * cp / 2, 0)) < 1e-12);
  CHECK(std::abs(gb.matrix()(1, 1) - Complex(cm * cm / 2, 0)) < 1e-12);
}

TEST_CASE("partial trace undoes kron for random product states", "[qcore]") {
  Rng rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const ComplexMatrix ra = random_density(rng, 2), rb2 = random_density(rng, 2);
    const DensityOperator joint{kron(ra, rb2)};
    CHECK(partial_trace(joint, {0}, 2).matrix().approx_equal(ra, 1e-12));
    CHECK(partial_trace(joint, {1}, 2).matrix().approx_equal(rb2, 1e-12));
  }
}

TEST_CASE("partial trace rejects dimension mismatch", "[qcore]") {
  const DensityOperator rho = DensityOperator::pure(StateVector::basis(4, 0));
  CHECK_THROWS_AS(partial_trace(rho, {1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {2}, 2), std::invalid_argument);
}

TEST_CASE("partial trace by subsystem label", "[qcore]") {
  // |0_A>(|0_An 1_B> + |1_An 0_B>)/sqrt(2) in the global A (x) An (x) B order
  const StateVector psi({0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 0, 0, 0, 0});
  const DensityOperator rho = DensityOperator::pure(psi);
  const QubitOrdering order = QubitOrdering::three_qubit();

  const DensityOperator ra = partial_trace(rho, order, {"A"});
  CHECK(ra.matrix().approx_equal(DensityOperator::pure(StateVector::basis(2, 0)).matrix()));
  const DensityOperator rb = partial_trace(rho, order, {"B"});
  CHECK(rb.matrix().approx_equal(0.5 * ComplexMatrix::identity(2), 1e-12));
  // label order does not matter; qubit positions do
  const DensityOperator rab = partial_trace(rho, order, {"B", "A"});
  CHECK(std::abs(rab.matrix()(0, 0) - Complex(0.5, 0)) < 1e-12);  // |0_A 0_B> weight
  CHECK_THROWS_AS(partial_trace(rho, order, {"C"}), std::invalid_argument);
}

TEST_CASE("expectation values", "[qcore]") {
  const minimal::MinimalModel m({1.3, 0.8});
  CHECK(std::abs(expect(m.h_total(), m.ground())) < 1e-12);
  CHECK(expect(ComplexMatrix::identity(4), DensityOperator::pure(m.ground())) ==
        Catch::Approx(1.0).margin(1e-12));

  const StateVector plus({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  CHECK(expect(sigma_x(), plus) == Catch::Approx(1.0).margin(1e-12));

  ComplexMatrix nh(2, 2);
  nh(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(expect(nh, plus), std::invalid_argument);
}

TEST_CASE("hermitian eigensolver basics", "[qcore]") {
  const EigenSystem ez = hermitian_eig(sigma_z());
  CHECK(ez.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(ez.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));

  ComplexMatrix d(3, 3);
  d(0, 0) = 3; d(1, 1) = 1; d(2, 2) = 2;
  const EigenSystem ed = hermitian_eig(d);
  CHECK(ed.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(ed.eigenvalues[1] == Catch::Approx(2.0).margin(1e-12));
  CHECK(ed.eigenvalues[2] == Catch::Approx(3.0).margin(1e-12));

  const minimal::MinimalModel m({1, 1});
  CHECK(std::abs(hermitian_eig(m.h_total()).eigenvalues.front()) < 1e-10);

  ComplexMatrix nh(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(nh), std::invalid_argument);
}

TEST_CASE("hermitian eigensolver reconstruction and orthonormality", "[qcore]") {
  Rng rng(23);
  for (std::size_t n : {2, 4, 8, 16}) {
    ComplexMatrix g = random_matrix(rng, n);
    const ComplexMatrix h = 0.5 * (g + g.dagger());
    const EigenSystem es = hermitian_eig(h);

    ComplexMatrix rec(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        Complex s(0, 0);
        for (std::size_t k = 0; k < n; ++k)
          s += es.eigenvectors(r, k) * es.eigenvalues[k] * std::conj(es.eigenvectors(c, k));
        rec(r, c) = s;
      }
    CHECK((rec - h).frobenius_norm() < 1e-10);
    CHECK((es.eigenvectors.dagger() * es.eigenvectors)
              .max_abs_diff(ComplexMatrix::identity(n)) < 1e-10);
    for (std::size_t i = 1; i < n; ++i) CHECK(es.eigenvalues[i] >= es.eigenvalues[i - 1]);
  }
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::identity(17)), std::invalid_argument);

  // doubly degenerate spectrum: sigma_x (x) sigma_x has eigenvalues -1,-1,1,1
  const EigenSystem dg = hermitian_eig(kron(sigma_x(), sigma_x()));
  CHECK(dg.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(dg.eigenvalues[1] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(dg.eigenvalues[2] == Catch::Approx(1.0).margin(1e-12));
  CHECK(dg.eigenvalues[3] == Catch::Approx(1.0).margin(1e-12));
  CHECK((dg.eigenvectors.dagger() * dg.eigenvectors)
            .max_abs_diff(ComplexMatrix::identity(4)) < 1e-10);
}

TEST_CASE("pauli pair exponential closed form", "[qcore]") {
  CHECK(matexp_pauli_pair(0.0, Pauli::Y, Pauli::Y).approx_equal(ComplexMatrix::identity(4)));

  const ComplexMatrix half_pi = matexp_pauli_pair(M_PI / 2, Pauli::Y, Pauli::Y);
  CHECK(half_pi.approx_equal(Complex(0, 1) * kron(sigma_y(), sigma_y()), 1e-12));

  const ComplexMatrix u = matexp_pauli_pair(1.0, Pauli::X, Pauli::Z);
  const ComplexMatrix expected =
      Complex(std::cos(1.0), 0) * ComplexMatrix::identity(4) +
      Complex(0, std::sin(1.0)) * kron(sigma_x(), sigma_z());
  CHECK(u.approx_equal(expected, 1e-12));
  CHECK((u * u.dagger()).max_abs_diff(ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("state vector and density operator invariants", "[qcore]") {
  const StateVector s({2.0, 0, 0, 0});  // renormalized on construction
  CHECK(std::abs(s[0] - Complex(1, 0)) < 1e-12);
  CHECK_THROWS_AS(StateVector({0.0, 0.0}), std::invalid_argument);

  ComplexMatrix bad(2, 2);
  bad(0, 0) = 0.7; bad(1, 1) = 0.7;  // trace 1.4
  CHECK_THROWS_AS(DensityOperator(bad), std::invalid_argument);
  bad(1, 1) = 0.3;
  bad(0, 1) = Complex(0, 0.5);  // not Hermitian
  CHECK_THROWS_AS(DensityOperator(bad), std::invalid_argument);

  ComplexMatrix neg(2, 2);
  neg(0, 0) = 1.2; neg(1, 1) = -0.2;  // trace 1 but not PSD
  CHECK_THROWS_AS(DensityOperator(neg), std::invalid_argument);
  ComplexMatrix edge(2, 2);
  edge(0, 0) = 1.0 + 5e-11; edge(1, 1) = -5e-11;  // within the -1e-10 slack
  CHECK_NOTHROW(DensityOperator(edge));
}

TEST_CASE("schmidt coefficients", "[qcore]") {
  const StateVector bell({1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)});
  const std::vector<double> q = schmidt_coefficients(bell, 2, 2);
  CHECK(q[0] == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-12));
  CHECK(q[1] == Catch::Approx(1 / std::sqrt(2.0)).margin(1e-12));

  const std::vector<double> qp = schmidt_coefficients(StateVector::basis(4, 0), 2, 2);
  CHECK(qp[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(qp[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("operator embedding follows the global qubit order", "[qcore]") {
  // embed_pair maps the operator's first tensor factor onto qubit p; with the
  // pair reversed the embedded CNOT flips its control and target
  ComplexMatrix cnot(4, 4);
  cnot(0, 0) = 1; cnot(1, 1) = 1; cnot(2, 3) = 1; cnot(3, 2) = 1;

  const ComplexMatrix fwd = embed_pair(cnot, 0, 1, 2);
  CHECK(fwd.approx_equal(cnot, 1e-15));

  const ComplexMatrix rev = embed_pair(cnot, 1, 0, 2);  // control on qubit 1
  const auto out = rev * StateVector::basis(4, 0b01).amplitudes();
  CHECK(std::abs(out[0b11] - Complex(1, 0)) < 1e-15);

  // three-qubit embedding on the outer pair leaves the middle qubit alone
  const ComplexMatrix wide = embed_pair(cnot, 0, 2, 3);
  const auto out3 = wide * StateVector::basis(8, 0b110).amplitudes();
  CHECK(std::abs(out3[0b111] - Complex(1, 0)) < 1e-15);

  const ComplexMatrix xz = embed_single(sigma_z(), 1, 3);
  const auto outz = xz * StateVector::basis(8, 0b010).amplitudes();
  CHECK(std::abs(outz[0b010] - Complex(-1, 0)) < 1e-15);

  CHECK_THROWS_AS(embed_pair(cnot, 0, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed_single(sigma_z(), 3, 3), std::invalid_argument);
}

TEST_CASE("generator stability across builds", "[qcore]") {
  // every seeded experiment in the library relies on these exact streams
  Rng r(12345);
  CHECK(r.next_u64() == 13720838825685603483ull);
  CHECK(r.next_u64() == 2398916695208396998ull);
  CHECK(r.next_u64() == 17770384849984869256ull);
  CHECK(r.next_u64() == 891717726879801395ull);
  CHECK(Rng::stream(7, 3).next_u64() == 2001052815362096135ull);
  CHECK(Rng(99).uniform() == Catch::Approx(0.34870385642514956).margin(1e-17));

  Rng h(5);
  const ComplexMatrix u = h.haar_unitary(2);
  CHECK((u * u.dagger()).approx_equal(ComplexMatrix::identity(2), 1e-12));
  const auto [k0, k1] = Rng(6).kraus_pair();
  CHECK((k0.dagger() * k0 + k1.dagger() * k1).approx_equal(ComplexMatrix::identity(2), 1e-12));
}

TEST_CASE("phase alignment and trace distance", "[qcore]") {
  const ComplexMatrix u = Complex(std::exp(Complex(0, 1.234))) * ComplexMatrix::identity(3);
  CHECK(phase_align(u).approx_equal(ComplexMatrix::identity(3), 1e-12));

  const DensityOperator a = DensityOperator::pure(StateVector::basis(2, 0));
  const DensityOperator b = DensityOperator::pure(StateVector::basis(2, 1));
  CHECK(trace_distance(a, b) == Catch::Approx(1.0).margin(1e-12));
  CHECK(trace_distance(a, a) < 1e-14);
}
