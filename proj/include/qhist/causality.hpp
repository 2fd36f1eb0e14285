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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhist/histories.hpp"

namespace qhist {

/**
 * An event in a probability table: a variable at a time taking one of a
 * set of outcomes (singleton for a sharp event, larger for a coarse one).
 */
struct Event {
  std::string time;  // may be empty when the variable name is unique
  std::string variable;
  std::vector<std::string> outcomes;
};

/// Sharp event shorthand.
inline Event event(std::string time, std::string variable, std::string outcome) {
  return Event{std::move(time), std::move(variable), {std::move(outcome)}};
}

enum class Relation { independent, correlated, ideal_cause, common_cause_found };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::independent: return "independent";
    case Relation::correlated: return "correlated";
    case Relation::ideal_cause: return "ideal-cause";
    case Relation::common_cause_found: return "common-cause-found";
  }
  return "?";
}

/** A causal claim plus the probabilities that substantiate it. */
struct CausalVerdict {
  Relation relation;
  std::vector<std::pair<std::string, double>> witnesses;  // named Pr values, fixed order
  std::string source_framework;
};

namespace detail {

inline CellConstraint resolve_event(const ProbabilityTable& t, const Event& e) {
  const int var = t.var_index(VarRef{e.time, e.variable});
  if (e.outcomes.empty()) throw UnknownEvent("event on '" + e.variable + "' lists no outcomes");
  std::vector<int> idx;
  idx.reserve(e.outcomes.size());
  for (const std::string& o : e.outcomes) idx.push_back(t.outcome_index(var, o));
  return {var, std::move(idx)};
}

inline std::string event_text(const ProbabilityTable& t, const Event& e, int var) {
  std::string s = t.variables()[static_cast<size_t>(var)].name + "=";
  for (size_t i = 0; i < e.outcomes.size(); ++i) s += (i ? "|" : "") + e.outcomes[i];
  return s + "@" + t.variables()[static_cast<size_t>(var)].time;
}

inline std::string source_name(const ProbabilityTable& t) {
  return t.source() ? t.source()->name() : std::string();
}

}  // namespace detail

struct IndependenceCheck {
  bool independent;
  double deviation;  // |Pr(F,G) − Pr(F)·Pr(G)|
  double p_joint, p_f, p_g;
  explicit operator bool() const { return independent; }
};

/// Factorization test |Pr(F,G) − Pr(F)·Pr(G)| ≤ τ_prob.
inline IndependenceCheck independent(const ProbabilityTable& t, const Event& f, const Event& g,
                                     double tau_prob = kTauProb) {
  const detail::CellConstraint cf = detail::resolve_event(t, f);
  const detail::CellConstraint cg = detail::resolve_event(t, g);
  if (cf.first == cg.first)
    throw UnknownEvent("independence needs two distinct variables, got '" + f.variable +
                       "' twice");
  const double pf = detail::mass(t, {cf});
  const double pg = detail::mass(t, {cg});
  const double pfg = detail::mass(t, {cf, cg});
  const double dev = std::abs(pfg - pf * pg);
  return IndependenceCheck{dev <= tau_prob, dev, pfg, pf, pg};
}

struct CorrelationCheck {
  bool correlated;
  double deviation;
  double g_given_f;  // Pr(G|F)
  explicit operator bool() const { return correlated; }
};

/// Negation of `independent`, reporting the conditional Pr(G|F).
inline CorrelationCheck correlated(const ProbabilityTable& t, const Event& f, const Event& g,
                                   double tau_prob = kTauProb) {
  const IndependenceCheck ind = independent(t, f, g, tau_prob);
  if (ind.p_f <= tau_prob)
    throw ZeroConditionProbability("conditioning event '" + f.variable +
                                   "' has probability " + std::to_string(ind.p_f));
  return CorrelationCheck{!ind.independent, ind.deviation, ind.p_joint / ind.p_f};
}

struct IdealCauseCheck {
  bool ideal;
  double g_given_f;  // Pr(G|F)
  double f_given_g;  // Pr(F|G)
  explicit operator bool() const { return ideal; }
};

/**
 * Complete-cause test for an earlier F and later G:
 * Pr(G|F) = 1 = Pr(F|G) within τ_prob.
 */
inline IdealCauseCheck ideal_cause(const ProbabilityTable& t, const Event& f, const Event& g,
                                   double tau_prob = kTauProb) {
  const detail::CellConstraint cf = detail::resolve_event(t, f);
  const detail::CellConstraint cg = detail::resolve_event(t, g);
  const std::string& tf = t.variables()[static_cast<size_t>(cf.first)].time;
  const std::string& tg = t.variables()[static_cast<size_t>(cg.first)].time;
  if (t.time_rank(tf) >= t.time_rank(tg))
    throw TemporalOrderError("cause at " + tf + " does not precede effect at " + tg);
  const double pf = detail::mass(t, {cf});
  const double pg = detail::mass(t, {cg});
  if (pf <= tau_prob || pg <= tau_prob)
    throw ZeroConditionProbability("cannot condition on a probability-zero event");
  const double pfg = detail::mass(t, {cf, cg});
  const double gf = pfg / pf;
  const double fg = pfg / pg;
  return IdealCauseCheck{gf >= 1 - tau_prob && fg >= 1 - tau_prob, gf, fg};
}

struct CommonCauseResult {
  std::optional<Event> cause;  // first qualifying candidate, if any
  CausalVerdict verdict;
  std::vector<Event> qualifiers;  // every qualifying candidate, scan order
  explicit operator bool() const { return cause.has_value(); }
};

/**
 * Scans the sharp events at `candidate_time` for an E standing in the
 * ideal-cause relation to both F and G (all four conditionals = 1 within
 * τ_prob). Candidates are visited in the table's declared variable and
 * outcome order; the first qualifier is returned, all qualifiers listed.
 */
inline CommonCauseResult find_common_cause(const ProbabilityTable& t, const Event& f,
                                           const Event& g, const std::string& candidate_time,
                                           double tau_prob = kTauProb) {
  const detail::CellConstraint cf = detail::resolve_event(t, f);
  const detail::CellConstraint cg = detail::resolve_event(t, g);
  const int cand_rank = t.time_rank(candidate_time);
  const std::string& tf = t.variables()[static_cast<size_t>(cf.first)].time;
  const std::string& tg = t.variables()[static_cast<size_t>(cg.first)].time;
  if (cand_rank >= t.time_rank(tf) || cand_rank >= t.time_rank(tg))
    throw TemporalOrderError("candidate time " + candidate_time +
                             " does not precede both events");
  const double pf = detail::mass(t, {cf});
  const double pg = detail::mass(t, {cg});

  CommonCauseResult result;
  result.verdict.relation = Relation::independent;  // overwritten on success
  result.verdict.source_framework = detail::source_name(t);
  for (size_t v = 0; v < t.variables().size(); ++v) {
    const Variable& var = t.variables()[v];
    if (var.time != candidate_time) continue;
    for (size_t o = 0; o < var.outcomes.size(); ++o) {
      const detail::CellConstraint ce{static_cast<int>(v), {static_cast<int>(o)}};
      const double pe = detail::mass(t, {ce});
      if (pe <= tau_prob) continue;
      const double pef = detail::mass(t, {ce, cf});
      const double peg = detail::mass(t, {ce, cg});
      const double f_given_e = pef / pe;
      const double e_given_f = pf > tau_prob ? pef / pf : 0.0;
      const double g_given_e = peg / pe;
      const double e_given_g = pg > tau_prob ? peg / pg : 0.0;
      const bool ideal = f_given_e >= 1 - tau_prob && e_given_f >= 1 - tau_prob &&
                         g_given_e >= 1 - tau_prob && e_given_g >= 1 - tau_prob;
      if (!ideal) continue;
      const Event cand = event(candidate_time, var.name, var.outcomes[o]);
      result.qualifiers.push_back(cand);
      if (!result.cause) {
        result.cause = cand;
        result.verdict.relation = Relation::common_cause_found;
        result.verdict.witnesses = {
            {"Pr(F|E)", f_given_e}, {"Pr(E|F)", e_given_f},
            {"Pr(G|E)", g_given_e}, {"Pr(E|G)", e_given_g},
        };
      }
    }
  }
  return result;
}

/**
 * The single framework rule's gate: conclusions may be combined only when
 * every pair of source frameworks is compatible. Call before any causal
 * query that draws on more than one table.
 */
inline void guard_single_framework(const std::vector<const ProbabilityTable*>& tables,
                                   double tau_proj = kTauProj) {
  for (const ProbabilityTable* t : tables)
    if (!t->source())
      throw MissingSourceFramework("a table in a cross-framework query has no source framework");
  for (size_t i = 0; i < tables.size(); ++i)
    for (size_t j = i + 1; j < tables.size(); ++j) {
      const Framework& a = *tables[i]->source();
      const Framework& b = *tables[j]->source();
      if (!frameworks_compatible(a, b, tau_proj))
        throw SingleFrameworkViolation("frameworks " + a.name() + " and " + b.name() +
                                       " are incompatible; their conclusions must not be combined");
    }
}

}  // namespace qhist
