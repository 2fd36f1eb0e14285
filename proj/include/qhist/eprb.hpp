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

#include <string>
#include <utility>
#include <vector>

#include "qhist/causality.hpp"

namespace qhist {

enum class Owner { alice, bob };

inline const char* to_string(Owner o) { return o == Owner::alice ? "Alice" : "Bob"; }

/** One observer's choice of spin-measurement axis. */
struct MeasurementSetting {
  Owner owner;
  SpinDirection direction;
  std::string symbol;  // display text, e.g. "a=z"
};

inline MeasurementSetting make_setting(Owner owner, const SpinDirection& dir,
                                       std::string symbol = "") {
  if (symbol.empty()) symbol = std::string(owner == Owner::alice ? "a=" : "b=") + axis_name(dir);
  return MeasurementSetting{owner, dir, std::move(symbol)};
}

inline MeasurementSetting alice_setting(const SpinDirection& dir, std::string symbol = "") {
  return make_setting(Owner::alice, dir, std::move(symbol));
}

inline MeasurementSetting bob_setting(const SpinDirection& dir, std::string symbol = "") {
  return make_setting(Owner::bob, dir, std::move(symbol));
}

/** A macroscopic measurement record, ±1. */
struct Outcome {
  Owner owner;
  int value;  // +1 or −1
};

inline std::string outcome_label(int value) { return value > 0 ? "+1" : "-1"; }

/// Two-particle total-spin-zero state (|01⟩ − |10⟩)/√2, ordering |Alice,Bob⟩.
inline StateVector singlet_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return StateVector(4, {Complex{0, 0}, Complex{r, 0}, Complex{-r, 0}, Complex{0, 0}});
}

namespace detail {

inline Operator pauli_x() { return Operator(2, {{0, 0}, {1, 0}, {1, 0}, {0, 0}}); }

/// |k⟩⟨k| on one qubit.
inline Operator ket_proj(int k) {
  return Operator(2, {Complex{k == 0 ? 1.0 : 0.0, 0}, {0, 0}, {0, 0}, Complex{k == 1 ? 1.0 : 0.0, 0}});
}

}  // namespace detail

/**
 * Pointer-model measurement coupling on particle⊗pointer (dim 4): the
 * pointer starts "ready" (|0⟩), stays put on the +1 branch of the measured
 * axis and flips on the −1 branch. The coupling is the same for either
 * observer; the owner tag records whose apparatus this is.
 */
inline Operator measurement_unitary(Owner /*owner*/, const SpinDirection& dir) {
  const Projector plus = spin_projector(dir, +1);
  const Projector minus = spin_projector(dir, -1);
  return tensor(plus.op(), Operator::identity(2)) + tensor(minus.op(), detail::pauli_x());
}

namespace detail {

/// Pointer-basis PDI {A=+1, A=−1} on particle⊗pointer (dim 4).
inline PDI single_pointer_pdi() {
  const Operator i2 = Operator::identity(2);
  return make_pdi({Projector(tensor(i2, ket_proj(0)), "A=+1"),
                   Projector(tensor(i2, ket_proj(1)), "A=-1")});
}

/// Spin PDI along `dir` on the particle factor of particle⊗pointer.
inline PDI single_spin_pdi(const SpinDirection& dir) {
  const Operator i2 = Operator::identity(2);
  const Projector plus = spin_projector(dir, +1);
  const Projector minus = spin_projector(dir, -1);
  return make_pdi({Projector(tensor(plus.op(), i2), plus.label()),
                   Projector(tensor(minus.op(), i2), minus.label())});
}

/// Bloch axis of a pure qubit state, sign-canonicalized so the first
/// nonzero component of (x,y,z) is positive; returns the axis and which
/// eigenstate (±1) the state is along that axis.
inline std::pair<SpinDirection, int> bloch_axis(const StateVector& prep) {
  if (prep.dim() != 2) throw DimensionError("prep state must be a single qubit");
  const Complex c0 = prep[0], c1 = prep[1];
  const Complex cross = std::conj(c0) * c1;
  double bx = 2 * cross.real();
  double by = 2 * cross.imag();
  double bz = std::norm(c0) - std::norm(c1);
  int sign = +1;
  const double first = std::abs(bx) > 1e-9 ? bx : (std::abs(by) > 1e-9 ? by : bz);
  if (first < 0) {
    bx = -bx;
    by = -by;
    bz = -bz;
    sign = -1;
  }
  return {SpinDirection::normalized(bx, by, bz), sign};
}

}  // namespace detail

/**
 * The three-framework family for one particle flying into a spin
 * measurement: F (measured axis at t1 + outcome at t2), E_pm (refined by
 * the preparation axis at t0), and E_pp (preparation axis at both t0 and
 * t1 — the foil whose t1 value is independent of the outcome).
 */
struct SingleParticleFrameworks {
  StateVector initial;  // particle⊗pointer, pointer ready
  Dynamics dynamics;    // identity flight, then the measurement coupling
  Framework f_meas;
  Framework e_prep_meas;
  Framework e_prep_prep;
  SpinDirection prep_axis;
  int prep_sign;  // prep = ±1 eigenstate of prep_axis
};

inline SingleParticleFrameworks build_single_particle_frameworks(const StateVector& prep,
                                                                 const SpinDirection& setting) {
  const auto [prep_axis, prep_sign] = detail::bloch_axis(prep);
  const std::string sp = "S" + axis_name(prep_axis);
  const std::string sm = "S" + axis_name(setting);

  const TimeGrid grid({"t0", "t1", "t2"});
  const PDI prep_pdi = detail::single_spin_pdi(prep_axis);
  const PDI meas_pdi = detail::single_spin_pdi(setting);
  const PDI pointer = detail::single_pointer_pdi();
  const PDI all = trivial_pdi(4);

  Vector initial = tensor(prep.vec(), Vector::basis(2, 0));
  Dynamics dyn({Operator::identity(4), measurement_unitary(Owner::alice, setting)});

  Framework f("F[" + sm + "]", grid, {all, meas_pdi, pointer});
  Framework e_pm("E[" + sp + "," + sm + "]", grid, {prep_pdi, meas_pdi, pointer});
  Framework e_pp("E[" + sp + "," + sp + "]", grid, {prep_pdi, prep_pdi, pointer});
  return SingleParticleFrameworks{StateVector(std::move(initial)), std::move(dyn),
                                  std::move(f),   std::move(e_pm),
                                  std::move(e_pp), prep_axis,
                                  prep_sign};
}

namespace detail {

inline void require_pair(const MeasurementSetting& a, const MeasurementSetting& b) {
  if (a.owner == b.owner)
    throw SameOwner("joint distribution needs one setting per observer, got two for " +
                    std::string(to_string(a.owner)));
}

/// Lifts to particles⊗pointers (dim 16), ordering [pA, pB, ptrA, ptrB].
inline Operator lift_particles(const Operator& on_a, const Operator& on_b) {
  return tensor(tensor(on_a, on_b), Operator::identity(4));
}

inline Operator lift_pointers(const Operator& on_a, const Operator& on_b) {
  return tensor(Operator::identity(4), tensor(on_a, on_b));
}

/// Both measurement couplings on the 16-dimensional space (they commute).
inline Operator joint_measurement(const SpinDirection& a_dir, const SpinDirection& b_dir) {
  const Operator i2 = Operator::identity(2);
  const Operator ua = tensor(tensor(spin_projector(a_dir, +1).op(), i2), tensor(i2, i2)) +
                      tensor(tensor(spin_projector(a_dir, -1).op(), i2), tensor(pauli_x(), i2));
  const Operator ub = tensor(tensor(i2, spin_projector(b_dir, +1).op()), tensor(i2, i2)) +
                      tensor(tensor(i2, spin_projector(b_dir, -1).op()), tensor(i2, pauli_x()));
  return matmul(ua, ub);
}

/// Pointer-readout PDI {A=±1 ∧ B=±1} on the 16-dimensional space.
inline PDI joint_pointer_pdi() {
  std::vector<Projector> members;
  for (int av : {+1, -1})
    for (int bv : {+1, -1})
      members.emplace_back(lift_pointers(ket_proj(av > 0 ? 0 : 1), ket_proj(bv > 0 ? 0 : 1)),
                           "A=" + outcome_label(av) + kLabelJoiner + "B=" + outcome_label(bv));
  return make_pdi(std::move(members));
}

}  // namespace detail

/** The full two-particle arrangement: state, settings, grid, dynamics. */
struct EPRBScenario {
  StateVector initial;  // dim 16, pointers ready
  MeasurementSetting a, b;
  TimeGrid grid;
  Dynamics dynamics;
};

inline EPRBScenario make_eprb_scenario(const MeasurementSetting& a, const MeasurementSetting& b,
                                       const StateVector& particles = singlet_state()) {
  detail::require_pair(a, b);
  if (particles.dim() != 4) throw DimensionError("two-particle state must have dimension 4");
  const MeasurementSetting& alice = a.owner == Owner::alice ? a : b;
  const MeasurementSetting& bob = a.owner == Owner::alice ? b : a;
  Vector initial = tensor(particles.vec(), tensor(Vector::basis(2, 0), Vector::basis(2, 0)));
  Dynamics dyn({Operator::identity(16),
                detail::joint_measurement(alice.direction, bob.direction)});
  return EPRBScenario{StateVector(std::move(initial)), alice, bob, TimeGrid({"t0", "t1", "t2"}),
                      std::move(dyn)};
}

/// The outcome sample space of a two-particle arrangement: trivial until
/// the pointers are read out at t2.
inline Framework eprb_joint_framework(const EPRBScenario& s) {
  return Framework("EPRB[" + s.a.symbol + "," + s.b.symbol + "]", s.grid,
                   {trivial_pdi(16), trivial_pdi(16), detail::joint_pointer_pdi()});
}

/**
 * Born-rule joint distribution of the two outcomes, computed through the
 * full 16-dimensional pipeline (state → couplings → pointer readout).
 */
inline ProbabilityTable eprb_joint_distribution(const MeasurementSetting& a,
                                                const MeasurementSetting& b,
                                                const StateVector& particles = singlet_state(),
                                                double tau_cons = kTauCons,
                                                double tau_prob = kTauProb) {
  const EPRBScenario s = make_eprb_scenario(a, b, particles);
  return framework_distribution(eprb_joint_framework(s), s.initial, s.dynamics, tau_cons,
                                tau_prob);
}

/// E(a,b) = Σ αβ · Pr(A=α, B=β).
inline double correlator(const MeasurementSetting& a, const MeasurementSetting& b,
                         const StateVector& particles = singlet_state()) {
  const ProbabilityTable t = eprb_joint_distribution(a, b, particles);
  double e = 0;
  for (int av : {+1, -1})
    for (int bv : {+1, -1})
      e += av * bv *
           probability_of(t, {Assignment{"t2", "A", outcome_label(av)},
                              Assignment{"t2", "B", outcome_label(bv)}});
  return e;
}

/// S = E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′).
inline double chsh_value(const MeasurementSetting& a, const MeasurementSetting& a_prime,
                         const MeasurementSetting& b, const MeasurementSetting& b_prime) {
  if (a.owner != Owner::alice || a_prime.owner != Owner::alice)
    throw OwnerMismatch("the first two CHSH settings must be Alice's");
  if (b.owner != Owner::bob || b_prime.owner != Owner::bob)
    throw OwnerMismatch("the last two CHSH settings must be Bob's");
  return correlator(a, b) + correlator(a, b_prime) + correlator(a_prime, b) -
         correlator(a_prime, b_prime);
}

struct ParameterIndependenceCheck {
  bool passes;
  double max_marginal_deviation;
  explicit operator bool() const { return passes; }
};

/**
 * No-signaling check: the marginal of `fixed`'s outcome is the same
 * whichever of the two far-side settings is in force.
 */
inline ParameterIndependenceCheck parameter_independence_check(
    const MeasurementSetting& fixed, const MeasurementSetting& far1,
    const MeasurementSetting& far2, double tau_prob = kTauProb,
    const StateVector& particles = singlet_state()) {
  if (far1.owner != far2.owner)
    throw OwnerMismatch("the two varied settings must belong to the same observer");
  detail::require_pair(fixed, far1);
  const std::string var = fixed.owner == Owner::alice ? "A" : "B";
  const ProbabilityTable t1 = eprb_joint_distribution(fixed, far1, particles);
  const ProbabilityTable t2 = eprb_joint_distribution(fixed, far2, particles);
  double worst = 0;
  for (int v : {+1, -1}) {
    const double p1 = probability_of(t1, {Assignment{"t2", var, outcome_label(v)}});
    const double p2 = probability_of(t2, {Assignment{"t2", var, outcome_label(v)}});
    worst = std::max(worst, std::abs(p1 - p2));
  }
  return ParameterIndependenceCheck{worst <= tau_prob, worst};
}

/** Outcome of the equal-settings common-cause analysis. */
struct QuantumCommonCause {
  ProbabilityTable table;      // distribution over (spin pair at t1, A, B)
  CommonCauseResult analysis;  // the t1 event standing in the ideal relation
  std::string framework_name;
};

/**
 * For equal settings a = b = n, the t1 spin-pair decomposition
 * {(+,−), (−,+), other} is a consistent sample space in which the
 * anticorrelated pair event is an ideal common cause of both outcomes.
 * Unequal settings are refused: no single earlier event plays that role
 * across different measured axes.
 */
inline QuantumCommonCause quantum_common_cause(const MeasurementSetting& a,
                                               const MeasurementSetting& b,
                                               double tau_cons = kTauCons,
                                               double tau_prob = kTauProb) {
  detail::require_pair(a, b);
  if (!same_direction(a.direction, b.direction, 1e-9))
    throw SettingsMismatch("common-cause analysis needs equal settings, got " + a.symbol +
                           " vs " + b.symbol);
  const EPRBScenario s = make_eprb_scenario(a, b);
  const SpinDirection n = s.a.direction;
  const std::string pair_var = "S" + axis_name(n) + "(A,B)";

  const Projector pp = spin_projector(n, +1);
  const Projector pm = spin_projector(n, -1);
  const Operator anti_pm = detail::lift_particles(pp.op(), pm.op());
  const Operator anti_mp = detail::lift_particles(pm.op(), pp.op());
  const Operator rest = Operator::identity(16) - anti_pm - anti_mp;
  const PDI pair_pdi = make_pdi({Projector(anti_pm, pair_var + "=+-"),
                                 Projector(anti_mp, pair_var + "=-+"),
                                 Projector(rest, pair_var + "=other")});

  Framework f("EPRB[" + s.a.symbol + "," + s.b.symbol + ",pair]", s.grid,
              {trivial_pdi(16), pair_pdi, detail::joint_pointer_pdi()});
  ProbabilityTable table = framework_distribution(f, s.initial, s.dynamics, tau_cons, tau_prob);
  CommonCauseResult analysis =
      find_common_cause(table, event("t2", "A", "+1"), event("t2", "B", "-1"), "t1", tau_prob);
  return QuantumCommonCause{std::move(table), std::move(analysis), f.name()};
}

}  // namespace qhist
