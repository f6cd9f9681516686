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
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qet {

using Complex = std::complex<double>;

constexpr double kStructuralTol = 1e-12;  // norms, traces, Hermiticity
constexpr double kDerivedTol = 1e-10;     // derived quantities (eigensolver etc.)

/** Dense complex matrix, row-major. Sized for few-qubit operators (dim <= 16). */
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Complex(0, 0)) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    require_same_shape(o);
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }
  ComplexMatrix operator-(const ComplexMatrix& o) const {
    require_same_shape(o);
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
  }
  ComplexMatrix operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix m(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Complex v = (*this)(i, k);
        if (v == Complex(0, 0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) m(i, j) += v * o(k, j);
      }
    return m;
  }
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
    ComplexMatrix r(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.a_.size(); ++i) r.a_[i] = s * m.a_[i];
    return r;
  }
  friend ComplexMatrix operator*(double s, const ComplexMatrix& m) { return Complex(s, 0) * m; }

  std::vector<Complex> operator*(const std::vector<Complex>& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<Complex> r(rows_, Complex(0, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  ComplexMatrix dagger() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  Complex trace() const {
    Complex t(0, 0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs_diff(const ComplexMatrix& o) const {
    require_same_shape(o);
    double d = 0;
    for (std::size_t i = 0; i < a_.size(); ++i) d = std::max(d, std::abs(a_[i] - o.a_[i]));
    return d;
  }

  bool approx_equal(const ComplexMatrix& o, double tol = kStructuralTol) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && max_abs_diff(o) <= tol;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double hermiticity_defect() const {
    double d = 0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  bool is_hermitian(double tol = 1e-10) const { return rows_ == cols_ && hermiticity_defect() <= tol; }

  bool is_unitary(double tol = kStructuralTol) const {
    if (rows_ != cols_) return false;
    return ((*this) * dagger()).max_abs_diff(identity(rows_)) <= tol;
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }
  std::size_t rows_, cols_;
  std::vector<Complex> a_;
};

/** Normalized pure state. Construction renormalizes and rejects near-zero vectors. */
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    double n2 = 0;
    for (const auto& a : amps_) n2 += std::norm(a);
    if (n2 < 1e-24) throw std::invalid_argument("state vector has zero norm");
    const double n = std::sqrt(n2);
    if (std::abs(n - 1.0) > kStructuralTol)
      for (auto& a : amps_) a /= n;
  }
  static StateVector basis(std::size_t dim, std::size_t index) {
    std::vector<Complex> v(dim, Complex(0, 0));
    v.at(index) = 1.0;
    return StateVector(std::move(v));
  }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  double overlap_abs(const StateVector& o) const {
    Complex s(0, 0);
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * o.amps_[i];
    return std::abs(s);
  }

 private:
  std::vector<Complex> amps_;
};

/** Trace-1 Hermitian PSD matrix; invariants checked on construction. */
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("density operator must be square");
    if (m_.hermiticity_defect() > kStructuralTol)
      throw std::invalid_argument("density operator not Hermitian");
    if (std::abs(m_.trace() - Complex(1, 0)) > kStructuralTol)
      throw std::invalid_argument("density operator trace != 1");
    if (!psd_within(1e-10))
      throw std::invalid_argument("density operator has a negative eigenvalue");
  }
  static DensityOperator pure(const StateVector& psi) {
    const std::size_t d = psi.dim();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
    return DensityOperator(std::move(m));
  }
  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.rows(); }

  double purity() const { return std::real((m_ * m_).trace()); }

 private:
  /** Cholesky of m + tol*I succeeds iff the spectrum is >= -tol (up to roundoff). */
  bool psd_within(double tol) const {
    const std::size_t n = m_.rows();
    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Complex diag = m_(j, j) + tol;
      for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
      if (diag.real() < 0) return false;
      const double d = std::sqrt(std::max(diag.real(), 1e-300));
      l(j, j) = d;
      for (std::size_t i = j + 1; i < n; ++i) {
        Complex v = m_(i, j) + (i == j ? tol : 0.0);
        for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
        l(i, j) = v / d;
      }
    }
    return true;
  }

  ComplexMatrix m_;
};

// Pauli matrices with the convention sigma_z|0> = |0>, sigma_z|1> = -|1>.
enum class Pauli { X, Y, Z };

inline ComplexMatrix pauli(Pauli p) {
  ComplexMatrix m(2, 2);
  switch (p) {
    case Pauli::X: m(0, 1) = 1; m(1, 0) = 1; break;
    case Pauli::Y: m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    case Pauli::Z: m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

inline ComplexMatrix sigma_x() { return pauli(Pauli::X); }
inline ComplexMatrix sigma_y() { return pauli(Pauli::Y); }
inline ComplexMatrix sigma_z() { return pauli(Pauli::Z); }
inline ComplexMatrix identity2() { return ComplexMatrix::identity(2); }
inline ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m(0, 0) = s; m(0, 1) = s; m(1, 0) = s; m(1, 1) = -s;
  return m;
}

/**
 * Ordered subsystem labels. The global convention is A (x) An (x) B;
 * two-qubit scenarios drop An. States quoted in other orderings are
 * permuted into this one at construction time.
 */
struct QubitOrdering {
  std::vector<std::string> labels;

  static QubitOrdering two_qubit() { return {{"A", "B"}}; }
  static QubitOrdering three_qubit() { return {{"A", "An", "B"}}; }

  std::size_t size() const { return labels.size(); }
  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return i;
    throw std::invalid_argument("unknown subsystem label: " + label);
  }
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex v = a(i, j);
      if (v == Complex(0, 0)) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          m(i * b.rows() + p, j * b.cols() + q) = v * b(p, q);
    }
  return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  return kron(kron(a, b), c);
}

/**
 * Embed a two-qubit operator into an n-qubit register. `op` acts with its
 * first tensor factor on qubit `p` and its second on qubit `q` of the
 * global ordering (qubit 0 is the leftmost / most significant factor).
 */
inline ComplexMatrix embed_pair(const ComplexMatrix& op, std::size_t p, std::size_t q, std::size_t n) {
  if (op.rows() != 4 || op.cols() != 4) throw std::invalid_argument("embed_pair expects a 4x4 operator");
  if (p == q || p >= n || q >= n) throw std::invalid_argument("bad qubit indices");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix m(dim, dim);
  auto bit = [n](std::size_t s, std::size_t qq) { return (s >> (n - 1 - qq)) & 1; };
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      bool match = true;
      for (std::size_t t = 0; t < n && match; ++t)
        if (t != p && t != q && bit(r, t) != bit(c, t)) match = false;
      if (!match) continue;
      m(r, c) = op((bit(r, p) << 1) | bit(r, q), (bit(c, p) << 1) | bit(c, q));
    }
  return m;
}

inline ComplexMatrix embed_single(const ComplexMatrix& op, std::size_t p, std::size_t n) {
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("embed_single expects a 2x2 operator");
  if (p >= n) throw std::invalid_argument("embed_single: qubit index out of range");
  ComplexMatrix m = ComplexMatrix::identity(1);
  for (std::size_t t = 0; t < n; ++t) m = kron(m, t == p ? op : identity2());
  return m;
}

/** Partial trace keeping the subsystems listed in `keep` (ascending qubit indices). */
inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::size_t>& keep,
                                     std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (rho.dim() != dim) throw std::invalid_argument("partial_trace: dimension mismatch with ordering");
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (keep[i] <= keep[i - 1]) throw std::invalid_argument("partial_trace: keep list must be ascending");
  for (std::size_t q : keep)
    if (q >= n_qubits) throw std::invalid_argument("partial_trace: keep index out of range");

  std::vector<std::size_t> drop;
  for (std::size_t q2 = 0; q2 < n_qubits; ++q2)
    if (std::find(keep.begin(), keep.end(), q2) == keep.end()) drop.push_back(q2);

  const std::size_t dk = std::size_t{1} << keep.size();
  const std::size_t dd = std::size_t{1} << drop.size();
  auto assemble = [&](std::size_t kept_bits, std::size_t dropped_bits) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      s |= ((kept_bits >> (keep.size() - 1 - i)) & 1) << (n_qubits - 1 - keep[i]);
    for (std::size_t i = 0; i < drop.size(); ++i)
      s |= ((dropped_bits >> (drop.size() - 1 - i)) & 1) << (n_qubits - 1 - drop[i]);
    return s;
  };

  ComplexMatrix out(dk, dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      Complex s(0, 0);
      for (std::size_t d = 0; d < dd; ++d) s += rho.matrix()(assemble(r, d), assemble(c, d));
      out(r, c) = s;
    }
  return DensityOperator(std::move(out));
}

inline DensityOperator partial_trace(const DensityOperator& rho, const QubitOrdering& ordering,
                                     const std::vector<std::string>& keep_labels) {
  std::vector<std::size_t> keep;
  for (const std::string& label : keep_labels) keep.push_back(ordering.index_of(label));
  std::sort(keep.begin(), keep.end());
  return partial_trace(rho, keep, ordering.size());
}

/** Tr(rho * obs) for a Hermitian observable; the imaginary residue is checked then dropped. */
inline double expect(const ComplexMatrix& obs, const DensityOperator& rho) {
  if (!obs.is_hermitian()) throw std::invalid_argument("expect: observable is not Hermitian");
  const Complex t = (rho.matrix() * obs).trace();
  if (std::abs(t.imag()) > 1e-10) throw std::runtime_error("expect: imaginary residue exceeds tolerance");
  return t.real();
}

inline double expect(const ComplexMatrix& obs, const StateVector& psi) {
  return expect(obs, DensityOperator::pure(psi));
}

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, matching eigenvalue order
};

/**
 * Hermitian eigensolver: cyclic Jacobi on the embedded 2n x 2n real
 * symmetric form. Dimensions here never exceed 16, where Jacobi is both
 * simple and accurate to ~1e-14.
 */
inline EigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
  if (m.rows() > 16) throw std::invalid_argument("hermitian_eig: dimension exceeds 16");
  if (!m.is_hermitian()) throw std::invalid_argument("hermitian_eig: matrix not Hermitian");
  const std::size_t n = m.rows();

  // Complex Hermitian H = A + iB maps to the real symmetric [[A, -B], [B, A]];
  // each eigenvalue appears twice, with eigenvectors (x, y) and (-y, x) for x + iy.
  const std::size_t N = 2 * n;
  std::vector<double> S(N * N, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return S[r * N + c]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      at(i, j) = v.real();
      at(i + n, j + n) = v.real();
      at(i, j + n) = -v.imag();
      at(i + n, j) = v.imag();
    }

  std::vector<double> V(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) V[i * N + i] = 1.0;
  auto vat = [&](std::size_t r, std::size_t c) -> double& { return V[r * N + c]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-18) continue;
        const double app = at(p, p), aqq = at(q, q);
        const double tau = (aqq - app) / (2 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const double c = 1.0 / std::sqrt(1 + t * t), s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double vkp = vat(k, p), vkq = vat(k, q);
          vat(k, p) = c * vkp - s * vkq;
          vat(k, q) = s * vkp + c * vkq;
        }
      }
  }

  // Collect the doubled spectrum, then keep one representative per pair by
  // greedily selecting vectors that stay linearly independent as complex vectors.
  std::vector<std::size_t> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return at(a, a) < at(b, b); });

  EigenSystem es;
  es.eigenvectors = ComplexMatrix(n, n);
  std::vector<std::vector<Complex>> chosen;
  for (std::size_t ii = 0; ii < N && chosen.size() < n; ++ii) {
    const std::size_t col = idx[ii];
    std::vector<Complex> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = Complex(vat(r, col), vat(r + n, col));
    // Gram-Schmidt against already chosen vectors (degenerate-pair partners project away).
    for (const auto& u : chosen) {
      Complex ov(0, 0);
      for (std::size_t r = 0; r < n; ++r) ov += std::conj(u[r]) * v[r];
      for (std::size_t r = 0; r < n; ++r) v[r] -= ov * u[r];
    }
    double n2 = 0;
    for (const auto& a : v) n2 += std::norm(a);
    if (n2 < 1e-12) continue;
    const double nn = std::sqrt(n2);
    for (auto& a : v) a /= nn;
    es.eigenvalues.push_back(at(col, col));
    chosen.push_back(v);
  }
  if (chosen.size() != n) throw std::runtime_error("hermitian_eig: failed to extract full eigenbasis");
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) es.eigenvectors(r, c) = chosen[c][r];
  return es;
}

/** exp(i theta p(x)q) = cos(theta) I + i sin(theta) p(x)q, valid because (p(x)q)^2 = I. */
inline ComplexMatrix matexp_pauli_pair(double theta, Pauli p, Pauli q) {
  const ComplexMatrix pq = kron(pauli(p), pauli(q));
  ComplexMatrix m = ComplexMatrix::identity(4);
  const Complex c(std::cos(theta), 0), is(0, std::sin(theta));
  ComplexMatrix out(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out(i, j) = c * m(i, j) + is * pq(i, j);
  return out;
}

/** exp(-i H t) for Hermitian H via eigendecomposition. */
inline ComplexMatrix matexp_hermitian(const ComplexMatrix& h, double t) {
  const EigenSystem es = hermitian_eig(h);
  const std::size_t n = h.rows();
  ComplexMatrix u(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s(0, 0);
      for (std::size_t k = 0; k < n; ++k) {
        const Complex ph = std::exp(Complex(0, -es.eigenvalues[k] * t));
        s += es.eigenvectors(r, k) * ph * std::conj(es.eigenvectors(c, k));
      }
      u(r, c) = s;
    }
  return u;
}

/** Align the global phase so the largest-magnitude entry of `m` is real positive. */
inline ComplexMatrix phase_align(const ComplexMatrix& m) {
  std::size_t br = 0, bc = 0;
  double best = -1;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > best) { best = std::abs(m(r, c)); br = r; bc = c; }
  if (best < 1e-300) return m;
  const Complex ph = std::conj(m(br, bc)) / best;
  return ph * m;
}

inline double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  const EigenSystem es = hermitian_eig(a.matrix() - b.matrix());
  double s = 0;
  for (double w : es.eigenvalues) s += std::abs(w);
  return 0.5 * s;
}

/** Schmidt coefficients (singular values) of a bipartite pure state on dA x dB. */
inline std::vector<double> schmidt_coefficients(const StateVector& psi, std::size_t da, std::size_t db) {
  if (psi.dim() != da * db) throw std::invalid_argument("schmidt_coefficients: dimension mismatch");
  // singular values of the da x db coefficient matrix M = sqrt(eigenvalues of M M^dag)
  ComplexMatrix mm(da, da);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      Complex s(0, 0);
      for (std::size_t b = 0; b < db; ++b) s += psi[i * db + b] * std::conj(psi[j * db + b]);
      mm(i, j) = s;
    }
  const EigenSystem es = hermitian_eig(mm);
  std::vector<double> out;
  for (double w : es.eigenvalues) out.push_back(std::sqrt(std::max(0.0, w)));
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

}  // namespace qet
