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

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "qhist/linalg.hpp"

namespace qhist {

/** Unit 3-vector selecting a spin component (a measurement axis). */
struct SpinDirection {
  double nx, ny, nz;

  /// Requires an exactly unit vector (within 1e-12).
  static SpinDirection unit(double x, double y, double z) {
    const double n2 = x * x + y * y + z * z;
    if (std::abs(n2 - 1.0) > 1e-12)
      throw NonUnitDirection("direction (" + std::to_string(x) + "," + std::to_string(y) + "," +
                             std::to_string(z) + ") is not unit");
    return SpinDirection{x, y, z};
  }

  /// Rescales an arbitrary nonzero vector to unit length.
  static SpinDirection normalized(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n < 1e-12) throw NonUnitDirection("cannot normalize a (near-)zero direction");
    return SpinDirection{x / n, y / n, z / n};
  }

  static SpinDirection x() { return {1, 0, 0}; }
  static SpinDirection y() { return {0, 1, 0}; }
  static SpinDirection z() { return {0, 0, 1}; }

  /// Angle θ in the x–z plane, measured from +z toward +x.
  static SpinDirection planar(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }
};

inline double dot(const SpinDirection& a, const SpinDirection& b) {
  return a.nx * b.nx + a.ny * b.ny + a.nz * b.nz;
}

inline bool same_direction(const SpinDirection& a, const SpinDirection& b, double tol = 1e-12) {
  return std::abs(a.nx - b.nx) <= tol && std::abs(a.ny - b.ny) <= tol &&
         std::abs(a.nz - b.nz) <= tol;
}

/// "x", "y", "z" for the named axes, else a "(nx,ny,nz)" triple.
inline std::string axis_name(const SpinDirection& n) {
  if (same_direction(n, SpinDirection::x())) return "x";
  if (same_direction(n, SpinDirection::y())) return "y";
  if (same_direction(n, SpinDirection::z())) return "z";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.6g,%.6g,%.6g)", n.nx, n.ny, n.nz);
  return buf;
}

/**
 * Validated orthogonal projector: P·P == P and P† == P within τ_proj,
 * plus an opaque text label (e.g. "Sz=+1/2").
 */
class Projector {
 public:
  Projector(Operator op, std::string label, double tau_proj = kTauProj)
      : op_(std::move(op)), label_(std::move(label)) {
    const double herm = max_abs_diff(adjoint(op_), op_);
    if (herm > tau_proj)
      throw NotHermitian("projector '" + label_ + "' is not hermitian (max deviation " +
                             std::to_string(herm) + ")",
                         herm);
    const double idem = max_abs_diff(matmul(op_, op_), op_);
    if (idem > tau_proj)
      throw NotIdempotent("projector '" + label_ + "' is not idempotent (max deviation " +
                              std::to_string(idem) + ")",
                          idem);
  }

  const Operator& op() const { return op_; }
  const std::string& label() const { return label_; }
  int dim() const { return op_.dim(); }

 private:
  Operator op_;
  std::string label_;
};

inline Projector validate_projector(const Operator& m, const std::string& label,
                                    double tau_proj = kTauProj) {
  return Projector(m, label, tau_proj);
}

/**
 * Spin-component projector (I + sign·n̂·σ)/2 on the 2-dimensional space.
 *
 * The label records direction and sign ("Sz=+1/2" for the named axes).
 */
inline Projector spin_projector(const SpinDirection& n, int sign, double tau_proj = kTauProj) {
  const double n2 = n.nx * n.nx + n.ny * n.ny + n.nz * n.nz;
  if (std::abs(n2 - 1.0) > 1e-12) throw NonUnitDirection("spin_projector needs a unit direction");
  if (sign != 1 && sign != -1) throw Error("spin_projector sign must be +1 or -1");
  const double s = sign;
  // (I + s(nx σx + ny σy + nz σz))/2 written out entrywise.
  std::vector<Complex> e = {
      Complex{(1 + s * n.nz) / 2, 0},
      Complex{s * n.nx / 2, -s * n.ny / 2},
      Complex{s * n.nx / 2, s * n.ny / 2},
      Complex{(1 - s * n.nz) / 2, 0},
  };
  const std::string label = "S" + axis_name(n) + "=" + (sign > 0 ? "+1/2" : "-1/2");
  return Projector(Operator(2, std::move(e)), label, tau_proj);
}

/// +1/−1 eigenstate of n̂·σ, obtained by projecting a basis ket.
inline StateVector spin_state(const SpinDirection& n, int sign) {
  const Projector p = spin_projector(n, sign);
  Vector v = apply(p.op(), Vector::basis(2, 0));
  if (norm(v) * norm(v) < 0.5) v = apply(p.op(), Vector::basis(2, 1));
  return StateVector::normalized(v);
}

struct CommuteCheck {
  bool commutes;
  double deviation;  // max entrywise |PQ − QP|
  explicit operator bool() const { return commutes; }
};

inline CommuteCheck commutes(const Projector& p, const Projector& q, double tau_proj = kTauProj) {
  if (p.dim() != q.dim())
    throw DimensionError("commutes dimension mismatch: " + std::to_string(p.dim()) + " vs " +
                         std::to_string(q.dim()));
  const double dev = max_abs(matmul(p.op(), q.op()) - matmul(q.op(), p.op()));
  return CommuteCheck{dev <= tau_proj, dev};
}

/**
 * Projective decomposition of the identity: mutually orthogonal projectors
 * with distinct labels summing to I. The quantum sample space at one time.
 *
 * Members keep insertion order.
 */
class PDI {
 public:
  const std::vector<Projector>& members() const { return members_; }
  const Projector& member(size_t i) const { return members_[i]; }
  size_t size() const { return members_.size(); }
  int dim() const { return dim_; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(members_.size());
    for (const Projector& p : members_) out.push_back(p.label());
    return out;
  }

  friend PDI make_pdi(std::vector<Projector> projectors, double tau_proj);

 private:
  PDI(std::vector<Projector> members, int dim) : members_(std::move(members)), dim_(dim) {}
  std::vector<Projector> members_;
  int dim_;
};

inline PDI make_pdi(std::vector<Projector> projectors, double tau_proj = kTauProj) {
  if (projectors.empty()) throw IncompletePDI("a PDI needs at least one projector");
  const int dim = projectors.front().dim();
  for (const Projector& p : projectors)
    if (p.dim() != dim) throw DimensionError("PDI members have mixed dimensions");
  for (size_t i = 0; i < projectors.size(); ++i)
    for (size_t j = i + 1; j < projectors.size(); ++j)
      if (projectors[i].label() == projectors[j].label())
        throw DuplicateLabel("duplicate PDI label '" + projectors[i].label() + "'");
  for (size_t i = 0; i < projectors.size(); ++i)
    for (size_t j = 0; j < projectors.size(); ++j) {
      if (i == j) continue;
      const double dev = max_abs(matmul(projectors[i].op(), projectors[j].op()));
      if (dev > tau_proj)
        throw NonOrthogonal("PDI members '" + projectors[i].label() + "' and '" +
                            projectors[j].label() + "' are not orthogonal (max product entry " +
                            std::to_string(dev) + ")");
    }
  Operator sum = Operator::zero(dim);
  for (const Projector& p : projectors) sum = sum + p.op();
  const double dev = max_abs_diff(sum, Operator::identity(dim));
  if (dev > tau_proj)
    throw IncompletePDI("PDI members do not sum to the identity (max deviation " +
                        std::to_string(dev) + ")");
  return PDI(std::move(projectors), dim);
}

/// The one-member decomposition {I}.
inline PDI trivial_pdi(int dim, const std::string& label = "true") {
  return make_pdi({Projector(Operator::identity(dim), label)});
}

/// True iff every projector pair across the two decompositions commutes.
inline bool pdi_commutes(const PDI& d1, const PDI& d2, double tau_proj = kTauProj) {
  if (d1.dim() != d2.dim())
    throw DimensionError("pdi_commutes dimension mismatch: " + std::to_string(d1.dim()) +
                         " vs " + std::to_string(d2.dim()));
  for (const Projector& p : d1.members())
    for (const Projector& q : d2.members())
      if (!commutes(p, q, tau_proj)) return false;
  return true;
}

/// Label joiner for refinements and compound outcomes.
inline constexpr const char* kLabelJoiner = "∧";  // "∧"

/**
 * Common refinement of two commuting decompositions: all nonzero products
 * Pᵢ·Qⱼ with compound labels "coarse∧fine". Products whose max entry modulus
 * is ≤ τ_proj are treated as zero and dropped. Enumeration is coarse-major,
 * fine-minor.
 */
inline PDI refine_pdi(const PDI& coarse, const PDI& fine, double tau_proj = kTauProj) {
  if (!pdi_commutes(coarse, fine, tau_proj))
    throw IncompatiblePDIs("cannot refine decompositions whose members fail to commute");
  std::vector<Projector> products;
  for (const Projector& p : coarse.members())
    for (const Projector& q : fine.members()) {
      Operator prod = matmul(p.op(), q.op());
      if (max_abs(prod) <= tau_proj) continue;
      products.emplace_back(std::move(prod), p.label() + kLabelJoiner + q.label(), tau_proj);
    }
  return make_pdi(std::move(products), tau_proj);
}

}  // namespace qhist
