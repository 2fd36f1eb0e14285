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

#include "qhist/eprb.hpp"

namespace qhist {

namespace detail {

inline void check_prob_rows(std::vector<std::vector<double>>& rows, size_t lambdas,
                            size_t settings, const char* side, double tau) {
  if (rows.size() != lambdas)
    throw DimensionError(std::string(side) + " response table has wrong lambda count");
  for (std::vector<double>& row : rows) {
    if (row.size() != settings)
      throw DimensionError(std::string(side) + " response table has wrong setting count");
    for (double& p : row) {
      if (!std::isfinite(p) || p < -tau || p > 1 + tau)
        throw NormalizationError(std::string(side) + " response probability " +
                                 std::to_string(p) + " outside [0,1]");
      p = std::min(std::max(p, 0.0), 1.0);
    }
  }
}

inline int index_of_name(const std::vector<std::string>& names, const std::string& name,
                         const char* what) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw UnknownSetting(std::string(what) + " '" + name + "' is not declared by the model");
}

}  // namespace detail

/**
 * A locally causal hidden-variable model: a finite λ space with
 * setting-independent weights, and per-observer response distributions
 * Pr(A=+1 | a, λ) and Pr(B=+1 | b, λ). Joint outcome probabilities
 * factorize through λ by construction.
 */
class HiddenVariableModel {
 public:
  HiddenVariableModel(std::vector<std::string> lambdas, std::vector<double> weights,
                      std::vector<std::string> alice_settings,
                      std::vector<std::string> bob_settings,
                      std::vector<std::vector<double>> alice_plus,
                      std::vector<std::vector<double>> bob_plus, double tau_prob = kTauProb)
      : lambdas_(std::move(lambdas)),
        weights_(std::move(weights)),
        alice_settings_(std::move(alice_settings)),
        bob_settings_(std::move(bob_settings)),
        alice_plus_(std::move(alice_plus)),
        bob_plus_(std::move(bob_plus)) {
    if (lambdas_.empty()) throw DimensionError("a model needs at least one lambda");
    if (weights_.size() != lambdas_.size())
      throw DimensionError("one weight per lambda required");
    if (alice_settings_.empty() || bob_settings_.empty())
      throw DimensionError("each observer needs at least one setting");
    for (size_t i = 0; i < lambdas_.size(); ++i)
      for (size_t j = i + 1; j < lambdas_.size(); ++j)
        if (lambdas_[i] == lambdas_[j]) throw DuplicateLabel("duplicate lambda " + lambdas_[i]);
    double sum = 0;
    for (double& w : weights_) {
      if (!std::isfinite(w) || w < -tau_prob || w > 1 + tau_prob)
        throw NormalizationError("lambda weight " + std::to_string(w) + " outside [0,1]");
      w = std::min(std::max(w, 0.0), 1.0);
      sum += w;
    }
    if (std::abs(sum - 1) > tau_prob)
      throw NormalizationError("lambda weights sum to " + std::to_string(sum));
    detail::check_prob_rows(alice_plus_, lambdas_.size(), alice_settings_.size(), "Alice",
                            tau_prob);
    detail::check_prob_rows(bob_plus_, lambdas_.size(), bob_settings_.size(), "Bob", tau_prob);
  }

  const std::vector<std::string>& lambdas() const { return lambdas_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& alice_settings() const { return alice_settings_; }
  const std::vector<std::string>& bob_settings() const { return bob_settings_; }

  int alice_setting_index(const std::string& name) const {
    return detail::index_of_name(alice_settings_, name, "Alice setting");
  }
  int bob_setting_index(const std::string& name) const {
    return detail::index_of_name(bob_settings_, name, "Bob setting");
  }

  /// Pr(A=value | setting, λ).
  double alice_response(size_t lambda, int setting, int value) const {
    const double p = alice_plus_[lambda][static_cast<size_t>(setting)];
    return value > 0 ? p : 1 - p;
  }
  double bob_response(size_t lambda, int setting, int value) const {
    const double p = bob_plus_[lambda][static_cast<size_t>(setting)];
    return value > 0 ? p : 1 - p;
  }

 private:
  std::vector<std::string> lambdas_;
  std::vector<double> weights_;
  std::vector<std::string> alice_settings_, bob_settings_;
  std::vector<std::vector<double>> alice_plus_, bob_plus_;
};

/** Extremal model: a fixed ±1 answer per setting on each side. */
struct DeterministicStrategy {
  std::vector<int> alice_signs;  // one ±1 per Alice setting
  std::vector<int> bob_signs;    // one ±1 per Bob setting
};

/// Embeds a strategy as a single-λ model.
inline HiddenVariableModel to_model(const DeterministicStrategy& s,
                                    std::vector<std::string> alice_settings,
                                    std::vector<std::string> bob_settings) {
  if (s.alice_signs.size() != alice_settings.size() ||
      s.bob_signs.size() != bob_settings.size())
    throw DimensionError("strategy does not cover the declared settings");
  std::vector<double> ap, bp;
  for (int v : s.alice_signs) ap.push_back(v > 0 ? 1.0 : 0.0);
  for (int v : s.bob_signs) bp.push_back(v > 0 ? 1.0 : 0.0);
  return HiddenVariableModel({"strategy"}, {1.0}, std::move(alice_settings),
                             std::move(bob_settings), {ap}, {bp});
}

/** Independent distributions over each observer's settings. */
class SettingDistribution {
 public:
  SettingDistribution(std::vector<std::string> alice_settings, std::vector<double> alice_probs,
                      std::vector<std::string> bob_settings, std::vector<double> bob_probs,
                      double tau_prob = kTauProb)
      : alice_settings_(std::move(alice_settings)),
        alice_probs_(std::move(alice_probs)),
        bob_settings_(std::move(bob_settings)),
        bob_probs_(std::move(bob_probs)) {
    validate(alice_settings_, alice_probs_, tau_prob);
    validate(bob_settings_, bob_probs_, tau_prob);
  }

  const std::vector<std::string>& alice_settings() const { return alice_settings_; }
  const std::vector<std::string>& bob_settings() const { return bob_settings_; }

  /// Pr(a,b) = Pr(a)·Pr(b): the joint is the product by construction.
  double joint(const std::string& a, const std::string& b) const {
    const int ia = detail::index_of_name(alice_settings_, a, "Alice setting");
    const int ib = detail::index_of_name(bob_settings_, b, "Bob setting");
    return alice_probs_[static_cast<size_t>(ia)] * bob_probs_[static_cast<size_t>(ib)];
  }

 private:
  static void validate(const std::vector<std::string>& names, std::vector<double>& probs,
                       double tau) {
    if (names.empty() || probs.size() != names.size())
      throw DimensionError("setting distribution needs one probability per setting");
    double sum = 0;
    for (double& p : probs) {
      if (!std::isfinite(p) || p < -tau || p > 1 + tau)
        throw NormalizationError("setting probability outside [0,1]");
      p = std::min(std::max(p, 0.0), 1.0);
      sum += p;
    }
    if (std::abs(sum - 1) > tau)
      throw NormalizationError("setting probabilities sum to " + std::to_string(sum));
  }

  std::vector<std::string> alice_settings_;
  std::vector<double> alice_probs_;
  std::vector<std::string> bob_settings_;
  std::vector<double> bob_probs_;
};

/// Pr(A,B | a,b) = Σ_λ Pr(λ) · Pr(A|a,λ) · Pr(B|b,λ).
inline ProbabilityTable blc_joint(const HiddenVariableModel& m, const std::string& a,
                                  const std::string& b) {
  const int ia = m.alice_setting_index(a);
  const int ib = m.bob_setting_index(b);
  std::vector<double> entries;
  entries.reserve(4);
  for (int av : {+1, -1})
    for (int bv : {+1, -1}) {
      double p = 0;
      for (size_t l = 0; l < m.lambdas().size(); ++l)
        p += m.weights()[l] * m.alice_response(l, ia, av) * m.bob_response(l, ib, bv);
      entries.push_back(p);
    }
  return ProbabilityTable({Variable{"t2", "A", {"+1", "-1"}}, Variable{"t2", "B", {"+1", "-1"}}},
                          std::move(entries));
}

/// E(a,b) = Σ αβ · Pr(α,β) under the model.
inline double hv_correlator(const HiddenVariableModel& m, const std::string& a,
                            const std::string& b) {
  const ProbabilityTable t = blc_joint(m, a, b);
  double e = 0;
  for (int av : {+1, -1})
    for (int bv : {+1, -1})
      e += av * bv *
           probability_of(t, {Assignment{"t2", "A", outcome_label(av)},
                              Assignment{"t2", "B", outcome_label(bv)}});
  return e;
}

struct ClassicalCHSHBound {
  double bound;  // max |S| over all deterministic strategies
  double s;      // the signed S of the reported maximizer
  DeterministicStrategy strategy;
};

/**
 * Exhausts the 2⁴ deterministic strategies (the extremal points of the
 * locally causal model class; mixtures cannot exceed them) and reports the
 * maximum |S|. Strategies are scanned in lexicographic sign order, −1
 * before +1, and the first maximizer is kept.
 */
inline ClassicalCHSHBound classical_chsh_max(const std::pair<std::string, std::string>& alice,
                                             const std::pair<std::string, std::string>& bob) {
  const std::vector<std::string> as{alice.first, alice.second};
  const std::vector<std::string> bs{bob.first, bob.second};
  ClassicalCHSHBound best{-1, 0, {}};
  for (int ea : {-1, +1})
    for (int eap : {-1, +1})
      for (int eb : {-1, +1})
        for (int ebp : {-1, +1}) {
          const DeterministicStrategy strat{{ea, eap}, {eb, ebp}};
          const HiddenVariableModel m = to_model(strat, as, bs);
          const double s = hv_correlator(m, as[0], bs[0]) + hv_correlator(m, as[0], bs[1]) +
                           hv_correlator(m, as[1], bs[0]) - hv_correlator(m, as[1], bs[1]);
          if (std::abs(s) > best.bound + 1e-12) best = ClassicalCHSHBound{std::abs(s), s, strat};
        }
  return best;
}

/** The λ = |ψ⟩ factorization test and its verdict. */
struct FactorizationReport {
  SpinDirection axis;
  double quantum_joint;       // Pr(A=+1, B=+1) from the full quantum pipeline
  double alice_plus_marginal; // Pr(A=+1) — the one-point λ's Alice response
  double bob_plus_marginal;   // Pr(B=+1)
  double factorized_joint;    // product, via the one-point λ model
  double mismatch;            // |quantum − factorized|
  bool contradiction;         // mismatch beyond τ_prob
};

/**
 * Treats the prepared state itself as a single hidden variable: the λ
 * space is one point whose response distributions are the quantum
 * single-side marginals. For the singlet and equal settings the factorized
 * joint (0.25) contradicts the quantum joint (0); for a product state the
 * two agree, so the failure is a property of the entangled state, not of
 * the bookkeeping.
 */
inline FactorizationReport factorization_contradiction(
    const SpinDirection& axis, const StateVector& particles = singlet_state(),
    double tau_prob = kTauProb) {
  const MeasurementSetting a = alice_setting(axis);
  const MeasurementSetting b = bob_setting(axis);
  const ProbabilityTable quantum = eprb_joint_distribution(a, b, particles);
  const double q = probability_of(
      quantum, {Assignment{"t2", "A", "+1"}, Assignment{"t2", "B", "+1"}});
  const double pa = probability_of(quantum, {Assignment{"t2", "A", "+1"}});
  const double pb = probability_of(quantum, {Assignment{"t2", "B", "+1"}});
  const HiddenVariableModel one_point({"psi"}, {1.0}, {a.symbol}, {b.symbol}, {{pa}}, {{pb}});
  const ProbabilityTable factorized = blc_joint(one_point, a.symbol, b.symbol);
  const double f = probability_of(
      factorized, {Assignment{"t2", "A", "+1"}, Assignment{"t2", "B", "+1"}});
  const double mismatch = std::abs(q - f);
  return FactorizationReport{axis, q, pa, pb, f, mismatch, mismatch > tau_prob};
}

struct SettingIndependenceReport {
  bool holds;
  std::vector<std::string> assumptions;  // the factorization conditions in force
};

/**
 * Confirms the two background assumptions of the locally causal model
 * class. Both are structural here: the model type stores one weight per λ
 * with no setting argument, and the setting distribution type stores
 * independent per-side distributions whose joint is their product.
 */
inline SettingIndependenceReport setting_independence_check(const HiddenVariableModel& m,
                                                            const SettingDistribution& dist) {
  // The distribution must speak about the model's settings.
  for (const std::string& s : dist.alice_settings()) m.alice_setting_index(s);
  for (const std::string& s : dist.bob_settings()) m.bob_setting_index(s);
  return SettingIndependenceReport{
      true,
      {"Pr(lambda|a,b) = Pr(lambda) (lambda weights carry no setting dependence)",
       "Pr(a,b) = Pr(a)Pr(b) (setting choices are independent of each other)"}};
}

/**
 * Deliberately out-of-class variant: λ weights that depend on the chosen
 * settings. Exists to demonstrate that outcome correlations are easy to
 * reproduce once λ may correlate with (a,b); it is not accepted by
 * classical_chsh_max or any bound computation.
 */
class CorrelatedLambdaModel {
 public:
  CorrelatedLambdaModel(std::vector<std::string> lambdas,
                        std::vector<std::string> alice_settings,
                        std::vector<std::string> bob_settings,
                        std::vector<std::vector<std::vector<double>>> weights_per_pair,
                        std::vector<std::vector<double>> alice_plus,
                        std::vector<std::vector<double>> bob_plus, double tau_prob = kTauProb)
      : lambdas_(std::move(lambdas)),
        alice_settings_(std::move(alice_settings)),
        bob_settings_(std::move(bob_settings)),
        weights_(std::move(weights_per_pair)),
        alice_plus_(std::move(alice_plus)),
        bob_plus_(std::move(bob_plus)) {
    if (weights_.size() != alice_settings_.size())
      throw DimensionError("one weight table row per Alice setting required");
    for (std::vector<std::vector<double>>& row : weights_) {
      if (row.size() != bob_settings_.size())
        throw DimensionError("one weight table column per Bob setting required");
      for (std::vector<double>& w : row) {
        if (w.size() != lambdas_.size()) throw DimensionError("one weight per lambda required");
        double sum = 0;
        for (double& x : w) {
          if (!std::isfinite(x) || x < -tau_prob || x > 1 + tau_prob)
            throw NormalizationError("lambda weight outside [0,1]");
          x = std::min(std::max(x, 0.0), 1.0);
          sum += x;
        }
        if (std::abs(sum - 1) > tau_prob)
          throw NormalizationError("conditional lambda weights sum to " + std::to_string(sum));
      }
    }
    detail::check_prob_rows(alice_plus_, lambdas_.size(), alice_settings_.size(), "Alice",
                            tau_prob);
    detail::check_prob_rows(bob_plus_, lambdas_.size(), bob_settings_.size(), "Bob", tau_prob);
  }

  const std::vector<std::string>& lambdas() const { return lambdas_; }
  const std::vector<std::string>& alice_settings() const { return alice_settings_; }
  const std::vector<std::string>& bob_settings() const { return bob_settings_; }

  /// Pr(λ | a, b) — the dependence Bell models forbid.
  double weight(const std::string& a, const std::string& b, size_t lambda) const {
    const int ia = detail::index_of_name(alice_settings_, a, "Alice setting");
    const int ib = detail::index_of_name(bob_settings_, b, "Bob setting");
    return weights_[static_cast<size_t>(ia)][static_cast<size_t>(ib)][lambda];
  }

  double alice_response(size_t lambda, const std::string& a, int value) const {
    const int ia = detail::index_of_name(alice_settings_, a, "Alice setting");
    const double p = alice_plus_[lambda][static_cast<size_t>(ia)];
    return value > 0 ? p : 1 - p;
  }
  double bob_response(size_t lambda, const std::string& b, int value) const {
    const int ib = detail::index_of_name(bob_settings_, b, "Bob setting");
    const double p = bob_plus_[lambda][static_cast<size_t>(ib)];
    return value > 0 ? p : 1 - p;
  }

 private:
  std::vector<std::string> lambdas_;
  std::vector<std::string> alice_settings_, bob_settings_;
  std::vector<std::vector<std::vector<double>>> weights_;
  std::vector<std::vector<double>> alice_plus_, bob_plus_;
};

/// Joint distribution under a correlated-λ model.
inline ProbabilityTable correlated_blc_joint(const CorrelatedLambdaModel& m, const std::string& a,
                                             const std::string& b) {
  std::vector<double> entries;
  entries.reserve(4);
  for (int av : {+1, -1})
    for (int bv : {+1, -1}) {
      double p = 0;
      for (size_t l = 0; l < m.lambdas().size(); ++l)
        p += m.weight(a, b, l) * m.alice_response(l, a, av) * m.bob_response(l, b, bv);
      entries.push_back(p);
    }
  return ProbabilityTable({Variable{"t2", "A", {"+1", "-1"}}, Variable{"t2", "B", {"+1", "-1"}}},
                          std::move(entries));
}

/**
 * Concrete correlated-λ illustration: λ ranges over the four outcome pairs,
 * the responses simply announce the pair, and Pr(λ|a,b) is the quantum
 * joint for those settings. Outcome statistics then reproduce the quantum
 * table exactly — the factorization condition alone forbids nothing once λ
 * may depend on the settings.
 */
inline CorrelatedLambdaModel quantum_mimic_model(
    const std::vector<MeasurementSetting>& alice_settings,
    const std::vector<MeasurementSetting>& bob_settings,
    const StateVector& particles = singlet_state()) {
  if (alice_settings.empty() || bob_settings.empty())
    throw DimensionError("each observer needs at least one setting");
  std::vector<std::string> lambdas{"++", "+-", "-+", "--"};
  std::vector<std::string> as, bs;
  for (const MeasurementSetting& s : alice_settings) {
    if (s.owner != Owner::alice) throw OwnerMismatch("Alice settings required in first list");
    as.push_back(s.symbol);
  }
  for (const MeasurementSetting& s : bob_settings) {
    if (s.owner != Owner::bob) throw OwnerMismatch("Bob settings required in second list");
    bs.push_back(s.symbol);
  }
  std::vector<std::vector<std::vector<double>>> weights(
      as.size(), std::vector<std::vector<double>>(bs.size()));
  for (size_t ia = 0; ia < as.size(); ++ia)
    for (size_t ib = 0; ib < bs.size(); ++ib) {
      const ProbabilityTable t =
          eprb_joint_distribution(alice_settings[ia], bob_settings[ib], particles);
      std::vector<double> w;
      for (int av : {+1, -1})
        for (int bv : {+1, -1})
          w.push_back(probability_of(t, {Assignment{"t2", "A", outcome_label(av)},
                                         Assignment{"t2", "B", outcome_label(bv)}}));
      weights[ia][ib] = std::move(w);
    }
  // λ announces the pair: responses are deterministic and setting-free.
  std::vector<std::vector<double>> ap, bp;
  for (const std::string& l : lambdas) {
    ap.push_back(std::vector<double>(as.size(), l[0] == '+' ? 1.0 : 0.0));
    bp.push_back(std::vector<double>(bs.size(), l[1] == '+' ? 1.0 : 0.0));
  }
  return CorrelatedLambdaModel(std::move(lambdas), std::move(as), std::move(bs),
                               std::move(weights), std::move(ap), std::move(bp));
}

}  // namespace qhist
