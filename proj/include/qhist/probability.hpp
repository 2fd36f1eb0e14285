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

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qhist/errors.hpp"
#include "qhist/tolerances.hpp"

namespace qhist {

class Framework;  // histories.hpp; tables remember where they came from

/** One random variable of a joint table: a quantity at a time. */
struct Variable {
  std::string time;
  std::string name;
  std::vector<std::string> outcomes;
};

/** Reference to a table variable. Empty time matches a unique name. */
struct VarRef {
  std::string time;
  std::string name;
};

/** A point constraint: variable = outcome. */
struct Assignment {
  std::string time;  // may be empty when the name is unique
  std::string variable;
  std::string outcome;
};

/**
 * Joint probability distribution over a list of variables.
 *
 * Entries are stored dense in row-major order (last variable fastest) so
 * that iteration and serialization are deterministic. Zero-probability
 * cells are kept: conditioning and independence checks quantify over the
 * full outcome lattice.
 *
 * A table may carry the framework it was derived from; cross-table causal
 * reasoning uses that to enforce the single framework rule.
 */
class ProbabilityTable {
 public:
  ProbabilityTable(std::vector<Variable> variables, std::vector<double> entries,
                   std::shared_ptr<const Framework> source = nullptr,
                   double tau_prob = kTauProb)
      : vars_(std::move(variables)), p_(std::move(entries)), source_(std::move(source)) {
    size_t want = 1;
    for (size_t i = 0; i < vars_.size(); ++i) {
      const Variable& v = vars_[i];
      if (v.outcomes.empty())
        throw DimensionError("variable '" + v.name + "' has no outcomes");
      for (size_t a = 0; a < v.outcomes.size(); ++a)
        for (size_t b = a + 1; b < v.outcomes.size(); ++b)
          if (v.outcomes[a] == v.outcomes[b])
            throw DuplicateLabel("variable '" + v.name + "' repeats outcome '" + v.outcomes[a] +
                                 "'");
      for (size_t j = i + 1; j < vars_.size(); ++j)
        if (vars_[j].time == v.time && vars_[j].name == v.name)
          throw DuplicateLabel("duplicate variable '" + v.name + "' at time " + v.time);
      want *= v.outcomes.size();
    }
    if (p_.size() != want)
      throw DimensionError("table has " + std::to_string(p_.size()) + " entries, expected " +
                           std::to_string(want));
    double sum = 0;
    for (double& x : p_) {
      if (!std::isfinite(x)) throw NonFiniteEntry("table entry is not finite");
      if (x < -tau_prob || x > 1 + tau_prob)
        throw NormalizationError("table entry " + std::to_string(x) + " outside [0,1]");
      x = std::min(std::max(x, 0.0), 1.0);
      sum += x;
    }
    if (std::abs(sum - 1) > tau_prob)
      throw NormalizationError("table entries sum to " + std::to_string(sum) + ", expected 1");
    for (const Variable& v : vars_)
      if (std::find(times_.begin(), times_.end(), v.time) == times_.end())
        times_.push_back(v.time);
  }

  const std::vector<Variable>& variables() const { return vars_; }
  size_t size() const { return p_.size(); }
  double entry(size_t flat) const { return p_[flat]; }
  const std::shared_ptr<const Framework>& source() const { return source_; }

  /// Distinct time labels in first-appearance order (the table's time axis).
  const std::vector<std::string>& times() const { return times_; }

  int time_rank(const std::string& time) const {
    for (size_t i = 0; i < times_.size(); ++i)
      if (times_[i] == time) return static_cast<int>(i);
    throw UnknownEvent("time '" + time + "' not present in table");
  }

  /// Resolves a variable reference; empty time requires a unique name.
  int var_index(const VarRef& ref) const {
    int found = -1;
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].name != ref.name) continue;
      if (!ref.time.empty() && vars_[i].time != ref.time) continue;
      if (found >= 0)
        throw UnknownEvent("variable '" + ref.name + "' is ambiguous without a time label");
      found = static_cast<int>(i);
    }
    if (found < 0)
      throw UnknownEvent("variable '" + ref.name +
                         (ref.time.empty() ? std::string() : "' at time " + ref.time + "'") +
                         "' not present in table");
    return found;
  }

  int outcome_index(int var, const std::string& outcome) const {
    const Variable& v = vars_[static_cast<size_t>(var)];
    for (size_t i = 0; i < v.outcomes.size(); ++i)
      if (v.outcomes[i] == outcome) return static_cast<int>(i);
    throw UnknownEvent("variable '" + v.name + "' has no outcome '" + outcome + "'");
  }

  /// Outcome index of variable `var` within the flat cell index.
  int coordinate(size_t flat, int var) const {
    return static_cast<int>(flat / stride(var) % vars_[static_cast<size_t>(var)].outcomes.size());
  }

  size_t stride(int var) const {
    size_t s = 1;
    for (size_t j = static_cast<size_t>(var) + 1; j < vars_.size(); ++j)
      s *= vars_[j].outcomes.size();
    return s;
  }

 private:
  std::vector<Variable> vars_;
  std::vector<double> p_;
  std::vector<std::string> times_;
  std::shared_ptr<const Framework> source_;
};

namespace detail {

/// (variable index, admissible outcome indices) conjunction, resolved.
using CellConstraint = std::pair<int, std::vector<int>>;

inline bool cell_matches(const ProbabilityTable& t, size_t flat,
                         const std::vector<CellConstraint>& cs) {
  for (const CellConstraint& c : cs) {
    const int got = t.coordinate(flat, c.first);
    if (std::find(c.second.begin(), c.second.end(), got) == c.second.end()) return false;
  }
  return true;
}

/// Total probability mass of the cells satisfying every constraint.
inline double mass(const ProbabilityTable& t, const std::vector<CellConstraint>& cs) {
  double s = 0;
  for (size_t f = 0; f < t.size(); ++f)
    if (cell_matches(t, f, cs)) s += t.entry(f);
  return s;
}

inline std::vector<CellConstraint> resolve(const ProbabilityTable& t,
                                           const std::vector<Assignment>& given) {
  std::vector<CellConstraint> cs;
  for (const Assignment& a : given) {
    const int var = t.var_index(VarRef{a.time, a.variable});
    for (const CellConstraint& seen : cs)
      if (seen.first == var)
        throw UnknownEvent("variable '" + a.variable + "' constrained twice");
    cs.push_back({var, {t.outcome_index(var, a.outcome)}});
  }
  return cs;
}

}  // namespace detail

/// Joint probability of a (partial) point assignment.
inline double probability_of(const ProbabilityTable& t, const std::vector<Assignment>& given) {
  return detail::mass(t, detail::resolve(t, given));
}

/**
 * Marginal distribution over the referenced variables (kept in table order;
 * all others are summed out). The source framework is carried along.
 */
inline ProbabilityTable marginal(const ProbabilityTable& t, const std::vector<VarRef>& kept) {
  std::vector<char> keep(t.variables().size(), 0);
  for (const VarRef& r : kept) keep[static_cast<size_t>(t.var_index(r))] = 1;
  std::vector<Variable> vars;
  std::vector<int> kept_idx;
  for (size_t i = 0; i < t.variables().size(); ++i)
    if (keep[i]) {
      vars.push_back(t.variables()[i]);
      kept_idx.push_back(static_cast<int>(i));
    }
  size_t n = 1;
  for (const Variable& v : vars) n *= v.outcomes.size();
  std::vector<double> out(n, 0.0);
  for (size_t f = 0; f < t.size(); ++f) {
    size_t g = 0;
    for (int i : kept_idx) g = g * t.variables()[static_cast<size_t>(i)].outcomes.size() +
                               static_cast<size_t>(t.coordinate(f, i));
    out[g] += t.entry(f);
  }
  return ProbabilityTable(std::move(vars), std::move(out), t.source());
}

/**
 * Conditional distribution given a partial point assignment: conditioned
 * variables are removed and the rest renormalized by the condition's mass.
 */
inline ProbabilityTable conditional(const ProbabilityTable& t,
                                    const std::vector<Assignment>& condition,
                                    double tau_prob = kTauProb) {
  const std::vector<detail::CellConstraint> cs = detail::resolve(t, condition);
  const double denom = detail::mass(t, cs);
  if (denom <= tau_prob)
    throw ZeroConditionProbability("condition has probability " + std::to_string(denom));
  std::vector<char> fixed(t.variables().size(), 0);
  for (const detail::CellConstraint& c : cs) fixed[static_cast<size_t>(c.first)] = 1;
  std::vector<Variable> vars;
  std::vector<int> free_idx;
  for (size_t i = 0; i < t.variables().size(); ++i)
    if (!fixed[i]) {
      vars.push_back(t.variables()[i]);
      free_idx.push_back(static_cast<int>(i));
    }
  size_t n = 1;
  for (const Variable& v : vars) n *= v.outcomes.size();
  std::vector<double> out(n, 0.0);
  for (size_t f = 0; f < t.size(); ++f) {
    if (!detail::cell_matches(t, f, cs)) continue;
    size_t g = 0;
    for (int i : free_idx) g = g * t.variables()[static_cast<size_t>(i)].outcomes.size() +
                               static_cast<size_t>(t.coordinate(f, i));
    out[g] += t.entry(f) / denom;
  }
  return ProbabilityTable(std::move(vars), std::move(out), t.source());
}

}  // namespace qhist
