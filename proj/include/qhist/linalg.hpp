// Copyright 2026 The qhist Authors
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

#include <atomic>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qhist/errors.hpp"
#include "qhist/tolerances.hpp"

namespace qhist {

using Complex = std::complex<double>;

/// Ceiling on Hilbert-space dimensions (default 64; the scenarios use ≤ 16).
inline std::atomic<int>& dim_cap() {
  static std::atomic<int> cap{64};
  return cap;
}

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

namespace detail {

inline void check_dim(int dim) {
  if (dim < 1) throw DimensionError("dimension must be >= 1, got " + std::to_string(dim));
  if (dim > dim_cap().load())
    throw DimensionError("dimension " + std::to_string(dim) + " exceeds cap " +
                         std::to_string(dim_cap().load()));
}

inline void check_finite(const std::vector<Complex>& entries, const char* what) {
  for (const Complex& z : entries)
    if (!is_finite(z)) throw NonFiniteEntry(std::string(what) + " contains a non-finite entry");
}

}  // namespace detail

/**
 * Dense complex square matrix on a finite-dimensional Hilbert space.
 *
 * Row-major storage; immutable after construction. All entries are checked
 * finite on construction.
 */
class Operator {
 public:
  Operator(int dim, std::vector<Complex> entries) : dim_(dim), a_(std::move(entries)) {
    detail::check_dim(dim_);
    if (a_.size() != static_cast<size_t>(dim_) * dim_)
      throw DimensionError("entry count " + std::to_string(a_.size()) +
                           " does not match dim " + std::to_string(dim_));
    detail::check_finite(a_, "operator");
  }

  static Operator identity(int dim) {
    detail::check_dim(dim);
    std::vector<Complex> e(static_cast<size_t>(dim) * dim, Complex{0, 0});
    for (int i = 0; i < dim; ++i) e[static_cast<size_t>(i) * dim + i] = Complex{1, 0};
    return Operator(dim, std::move(e));
  }

  static Operator zero(int dim) {
    detail::check_dim(dim);
    return Operator(dim, std::vector<Complex>(static_cast<size_t>(dim) * dim, Complex{0, 0}));
  }

  int dim() const { return dim_; }

  Complex operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  const std::vector<Complex>& entries() const { return a_; }

 private:
  int dim_;
  std::vector<Complex> a_;
};

/** General complex vector; norm is not constrained (projection residues live here). */
class Vector {
 public:
  Vector(int dim, std::vector<Complex> amplitudes) : dim_(dim), a_(std::move(amplitudes)) {
    detail::check_dim(dim_);
    if (a_.size() != static_cast<size_t>(dim_))
      throw DimensionError("amplitude count does not match dim");
    detail::check_finite(a_, "vector");
  }

  explicit Vector(std::vector<Complex> amplitudes)
      : Vector(static_cast<int>(amplitudes.size()), std::move(amplitudes)) {}

  /// Standard basis vector |k⟩.
  static Vector basis(int dim, int k) {
    detail::check_dim(dim);
    if (k < 0 || k >= dim) throw DimensionError("basis index out of range");
    std::vector<Complex> a(static_cast<size_t>(dim), Complex{0, 0});
    a[static_cast<size_t>(k)] = Complex{1, 0};
    return Vector(dim, std::move(a));
  }

  static Vector zero(int dim) {
    detail::check_dim(dim);
    return Vector(dim, std::vector<Complex>(static_cast<size_t>(dim), Complex{0, 0}));
  }

  int dim() const { return dim_; }
  Complex operator[](int i) const { return a_[static_cast<size_t>(i)]; }
  const std::vector<Complex>& amplitudes() const { return a_; }

 private:
  int dim_;
  std::vector<Complex> a_;
};

inline double norm(const Vector& v) {
  double s = 0;
  for (const Complex& z : v.amplitudes()) s += std::norm(z);
  return std::sqrt(s);
}

/// ⟨u, v⟩ with the conjugate on the first argument.
inline Complex inner(const Vector& u, const Vector& v) {
  if (u.dim() != v.dim())
    throw DimensionError("inner product dimension mismatch: " + std::to_string(u.dim()) +
                         " vs " + std::to_string(v.dim()));
  Complex s{0, 0};
  for (int i = 0; i < u.dim(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

/**
 * Unit-norm state vector (‖ψ‖ = 1 within τ_norm).
 */
class StateVector {
 public:
  explicit StateVector(Vector v, double tau_norm = kTauNorm) : v_(std::move(v)) {
    double n = norm(v_);
    if (std::abs(n - 1.0) > tau_norm)
      throw NormalizationError("state vector norm " + std::to_string(n) + " is not 1");
  }

  StateVector(int dim, std::vector<Complex> amplitudes, double tau_norm = kTauNorm)
      : StateVector(Vector(dim, std::move(amplitudes)), tau_norm) {}

  /// Rescale an arbitrary nonzero vector to unit norm.
  static StateVector normalized(const Vector& v) {
    double n = norm(v);
    if (n < 1e-14) throw NormalizationError("cannot normalize a (near-)zero vector");
    std::vector<Complex> a = v.amplitudes();
    for (Complex& z : a) z /= n;
    return StateVector(Vector(v.dim(), std::move(a)));
  }

  static StateVector basis(int dim, int k) { return StateVector(Vector::basis(dim, k)); }

  int dim() const { return v_.dim(); }
  Complex operator[](int i) const { return v_[i]; }
  const Vector& vec() const { return v_; }

 private:
  Vector v_;
};

// -- operations ------------------------------------------------------------

inline Operator matmul(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim())
    throw DimensionError("matmul dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  const int n = a.dim();
  std::vector<Complex> out(static_cast<size_t>(n) * n, Complex{0, 0});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0, 0}) continue;
      for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] += aik * b(k, j);
    }
  return Operator(n, std::move(out));
}

/// Conjugate transpose. An exact involution: adjoint(adjoint(A)) == A bitwise.
inline Operator adjoint(const Operator& a) {
  const int n = a.dim();
  std::vector<Complex> out(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] = std::conj(a(j, i));
  return Operator(n, std::move(out));
}

/// Kronecker product, row-major block convention: block (i,j) equals A(i,j)·B.
inline Operator tensor(const Operator& a, const Operator& b) {
  const int na = a.dim(), nb = b.dim();
  const int n = na * nb;
  detail::check_dim(n);
  std::vector<Complex> out(static_cast<size_t>(n) * n);
  for (int ia = 0; ia < na; ++ia)
    for (int ja = 0; ja < na; ++ja) {
      const Complex aij = a(ia, ja);
      for (int ib = 0; ib < nb; ++ib)
        for (int jb = 0; jb < nb; ++jb)
          out[static_cast<size_t>(ia * nb + ib) * n + (ja * nb + jb)] = aij * b(ib, jb);
    }
  return Operator(n, std::move(out));
}

inline Vector tensor(const Vector& u, const Vector& v) {
  const int n = u.dim() * v.dim();
  detail::check_dim(n);
  std::vector<Complex> out(static_cast<size_t>(n));
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) out[static_cast<size_t>(i * v.dim() + j)] = u[i] * v[j];
  return Vector(n, std::move(out));
}

inline Complex trace(const Operator& a) {
  Complex s{0, 0};
  for (int i = 0; i < a.dim(); ++i) s += a(i, i);
  return s;
}

/// Matrix-vector product; the result may be unnormalized.
inline Vector apply(const Operator& a, const Vector& v) {
  if (a.dim() != v.dim())
    throw DimensionError("apply dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(v.dim()));
  const int n = a.dim();
  std::vector<Complex> out(static_cast<size_t>(n), Complex{0, 0});
  for (int i = 0; i < n; ++i) {
    Complex s{0, 0};
    for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
    out[static_cast<size_t>(i)] = s;
  }
  return Vector(n, std::move(out));
}

inline Vector apply(const Operator& a, const StateVector& psi) { return apply(a, psi.vec()); }

inline Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator sum dimension mismatch");
  std::vector<Complex> out = a.entries();
  for (size_t i = 0; i < out.size(); ++i) out[i] += b.entries()[i];
  return Operator(a.dim(), std::move(out));
}

inline Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator difference dimension mismatch");
  std::vector<Complex> out = a.entries();
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b.entries()[i];
  return Operator(a.dim(), std::move(out));
}

inline Operator operator*(Complex c, const Operator& a) {
  std::vector<Complex> out = a.entries();
  for (Complex& z : out) z *= c;
  return Operator(a.dim(), std::move(out));
}

/// Max entry modulus, the norm used by every tolerance check in the library.
inline double max_abs(const Operator& a) {
  double m = 0;
  for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("comparison dimension mismatch");
  double m = 0;
  for (size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw DimensionError("comparison dimension mismatch");
  double m = 0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool approx_equal(const Operator& a, const Operator& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

inline bool is_unitary(const Operator& u, double tol = kTauProj) {
  return approx_equal(matmul(adjoint(u), u), Operator::identity(u.dim()), tol);
}

}  // namespace qhist
