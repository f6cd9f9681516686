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
#include <complex>
#include <cstdint>
#include <vector>

#include "qet/qcore.hpp"

namespace qet {

/** SplitMix64 step; used for seeding and stream derivation. */
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/** The single stream-split rule: substream s of master seed m. */
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  return master_seed ^ (0x9E3779B97F4A7C15ull * (stream_id + 1));
}

/**
 * Xoshiro256** PRNG, seeded through SplitMix64.
 *
 * Stream-split rule: the generator for logical stream `s` under master seed
 * `m` is seeded from SplitMix64 initialized at m ^ (0x9E3779B97F4A7C15 * (s + 1)).
 * This is the single rule used everywhere shots, trials, or optimizer
 * restarts need independent deterministic substreams.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(derive_seed(master_seed, stream_id));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /** Uniform double in [0, 1) with 53-bit resolution. */
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /** Standard normal via Box-Muller (no caching; deterministic call sequence). */
  double normal() {
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Complex normal_complex() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im);
  }

  /** Haar-distributed n x n unitary via QR of a complex Ginibre matrix. */
  ComplexMatrix haar_unitary(std::size_t n) {
    ComplexMatrix z(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) z(i, j) = normal_complex();
    return gram_schmidt_columns(z, n).first;
  }

  /**
   * Random 2-Kraus channel on C^2: QR-orthonormalize a Gaussian 4x2 block
   * into an isometry, split into the two stacked Kraus operators.
   */
  std::pair<ComplexMatrix, ComplexMatrix> kraus_pair() {
    ComplexMatrix z(4, 2);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j) z(i, j) = normal_complex();
    const ComplexMatrix q = gram_schmidt_columns(z, 2).first;
    ComplexMatrix k0(2, 2), k1(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        k0(i, j) = q(i, j);
        k1(i, j) = q(i + 2, j);
      }
    return {k0, k1};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  /** Modified Gram-Schmidt with sign fixing; returns (Q, diag-phase-fixed). */
  static std::pair<ComplexMatrix, bool> gram_schmidt_columns(const ComplexMatrix& a, std::size_t ncols) {
    ComplexMatrix q = a;
    for (std::size_t c = 0; c < ncols; ++c) {
      for (std::size_t p = 0; p < c; ++p) {
        Complex ov(0, 0);
        for (std::size_t r = 0; r < q.rows(); ++r) ov += std::conj(q(r, p)) * q(r, c);
        for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) -= ov * q(r, p);
      }
      double n2 = 0;
      for (std::size_t r = 0; r < q.rows(); ++r) n2 += std::norm(q(r, c));
      const double n = std::sqrt(n2);
      for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) /= n;
      // fix the phase so the first nonzero entry of each column is real positive
      for (std::size_t r = 0; r < q.rows(); ++r) {
        if (std::abs(q(r, c)) > 1e-12) {
          const Complex ph = std::conj(q(r, c)) / std::abs(q(r, c));
          for (std::size_t rr = 0; rr < q.rows(); ++rr) q(rr, c) *= ph;
          break;
        }
      }
    }
    ComplexMatrix out(a.rows(), ncols);
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < ncols; ++c) out(r, c) = q(r, c);
    return {out, true};
  }

  std::uint64_t s_[4];
};

}  // namespace qet
