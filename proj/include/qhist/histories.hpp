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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qhist/probability.hpp"
#include "qhist/projectors.hpp"

namespace qhist {

/** Ordered labels for the times a history speaks about. */
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw GridMismatch("a time grid needs at least two times");
    for (size_t i = 0; i < labels_.size(); ++i)
      for (size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j]) throw DuplicateLabel("duplicate time label " + labels_[i]);
  }

  size_t size() const { return labels_.size(); }
  const std::string& label(size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  int index_of(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<int>(i);
    throw GridMismatch("time label " + label + " not on grid");
  }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.labels_ == b.labels_; }
  friend bool operator!=(const TimeGrid& a, const TimeGrid& b) { return !(a == b); }

 private:
  std::vector<std::string> labels_;
};

/** Interval unitaries, one per consecutive pair of grid times. */
class Dynamics {
 public:
  explicit Dynamics(std::vector<Operator> steps, double tau_proj = kTauProj)
      : steps_(std::move(steps)) {
    if (steps_.empty()) throw GridMismatch("dynamics needs at least one interval unitary");
    for (const Operator& u : steps_) {
      if (u.dim() != steps_.front().dim())
        throw DimensionError("dynamics steps have mixed dimensions");
      if (!is_unitary(u, tau_proj)) throw NotUnitary("dynamics step is not unitary");
    }
  }

  /// Field-free flight: identity on every interval.
  static Dynamics trivial(int dim, size_t intervals) {
    return Dynamics(std::vector<Operator>(intervals, Operator::identity(dim)));
  }

  size_t size() const { return steps_.size(); }
  const Operator& step(size_t i) const { return steps_[i]; }
  int dim() const { return steps_.front().dim(); }

 private:
  std::vector<Operator> steps_;
};

/** A sequence of properties at successive times: one projector per time. */
class History {
 public:
  History(TimeGrid grid, std::vector<Projector> projectors)
      : grid_(std::move(grid)), projectors_(std::move(projectors)) {
    if (projectors_.size() != grid_.size())
      throw GridMismatch("history has " + std::to_string(projectors_.size()) +
                         " projectors for " + std::to_string(grid_.size()) + " times");
    for (const Projector& p : projectors_) {
      if (p.dim() != projectors_.front().dim())
        throw DimensionError("history projectors have mixed dimensions");
      if (!label_.empty()) label_ += kLabelJoiner;
      label_ += p.label();
    }
  }

  const TimeGrid& grid() const { return grid_; }
  const std::vector<Projector>& projectors() const { return projectors_; }
  const Projector& projector(size_t i) const { return projectors_[i]; }
  const std::string& label() const { return label_; }
  int dim() const { return projectors_.front().dim(); }

 private:
  TimeGrid grid_;
  std::vector<Projector> projectors_;
  std::string label_;
};

namespace detail {

inline void check_grid(const History& h, const Dynamics& dyn) {
  if (dyn.size() != h.grid().size() - 1)
    throw GridMismatch("dynamics has " + std::to_string(dyn.size()) + " steps for " +
                       std::to_string(h.grid().size()) + " times");
  if (dyn.dim() != h.dim()) throw DimensionError("dynamics and history dimensions differ");
}

/// K(h)·ψ without forming the chain operator.
inline Vector chain_apply(const History& h, const Dynamics& dyn, const StateVector& psi) {
  check_grid(h, dyn);
  if (psi.dim() != h.dim()) throw DimensionError("state and history dimensions differ");
  Vector v = apply(h.projector(0).op(), psi.vec());
  for (size_t i = 1; i < h.grid().size(); ++i)
    v = apply(h.projector(i).op(), apply(dyn.step(i - 1), v));
  return v;
}

}  // namespace detail

/**
 * Chain operator K(h) = P_n·U_{n−1}·…·U_1·P_1·U_0·P_0 — the earliest
 * projector acts first.
 */
inline Operator chain_operator(const History& h, const Dynamics& dyn) {
  detail::check_grid(h, dyn);
  Operator k = h.projector(0).op();
  for (size_t i = 1; i < h.grid().size(); ++i)
    k = matmul(h.projector(i).op(), matmul(dyn.step(i - 1), k));
  return k;
}

/// Born-rule weight ‖K(h)·ψ‖².
inline double history_probability(const History& h, const StateVector& psi, const Dynamics& dyn) {
  const double n = norm(detail::chain_apply(h, dyn, psi));
  return n * n;
}

/// D(h1,h2) = ⟨K(h2)·ψ, K(h1)·ψ⟩.
inline Complex decoherence_functional(const History& h1, const History& h2,
                                      const StateVector& psi, const Dynamics& dyn) {
  if (h1.grid() != h2.grid()) throw GridMismatch("histories live on different grids");
  return inner(detail::chain_apply(h2, dyn, psi), detail::chain_apply(h1, dyn, psi));
}

/**
 * A framework: one PDI per time, spanning the full Cartesian family of
 * histories. The sample space within which probabilistic (and causal)
 * statements are licensed.
 */
class Framework {
 public:
  Framework(std::string name, TimeGrid grid, std::vector<PDI> pdis)
      : name_(std::move(name)), grid_(std::move(grid)), pdis_(std::move(pdis)) {
    if (pdis_.size() != grid_.size())
      throw GridMismatch("framework has " + std::to_string(pdis_.size()) + " decompositions for " +
                         std::to_string(grid_.size()) + " times");
    for (const PDI& d : pdis_)
      if (d.dim() != pdis_.front().dim())
        throw DimensionError("framework decompositions have mixed dimensions");
    // Materialize the member histories, last time fastest.
    size_t total = 1;
    for (const PDI& d : pdis_) total *= d.size();
    histories_.reserve(total);
    for (size_t flat = 0; flat < total; ++flat) {
      std::vector<Projector> ps;
      ps.reserve(pdis_.size());
      size_t rem = flat;
      size_t block = total;
      for (const PDI& d : pdis_) {
        block /= d.size();
        ps.push_back(d.member(rem / block));
        rem %= block;
      }
      histories_.emplace_back(grid_, std::move(ps));
    }
  }

  const std::string& name() const { return name_; }
  const TimeGrid& grid() const { return grid_; }
  const std::vector<PDI>& pdis() const { return pdis_; }
  const PDI& pdi(size_t i) const { return pdis_[i]; }
  const std::vector<History>& histories() const { return histories_; }
  int dim() const { return pdis_.front().dim(); }

 private:
  std::string name_;
  TimeGrid grid_;
  std::vector<PDI> pdis_;
  std::vector<History> histories_;
};

struct ConsistencyCheck {
  bool consistent;
  double worst_off_diagonal;  // max |D(h1,h2)| over distinct pairs
  explicit operator bool() const { return consistent; }
};

/**
 * Medium-decoherence test: every off-diagonal decoherence-functional entry
 * must vanish within τ_cons before the framework's Born weights may be
 * read as probabilities.
 */
inline ConsistencyCheck is_consistent(const Framework& f, const StateVector& psi,
                                      const Dynamics& dyn, double tau_cons = kTauCons) {
  std::vector<Vector> branches;
  branches.reserve(f.histories().size());
  for (const History& h : f.histories()) branches.push_back(detail::chain_apply(h, dyn, psi));
  double worst = 0;
  for (size_t i = 0; i < branches.size(); ++i)
    for (size_t j = i + 1; j < branches.size(); ++j)
      worst = std::max(worst, std::abs(inner(branches[j], branches[i])));
  return ConsistencyCheck{worst <= tau_cons, worst};
}

/// True iff the decompositions commute pairwise at every time.
inline bool frameworks_compatible(const Framework& f1, const Framework& f2,
                                  double tau_proj = kTauProj) {
  if (f1.grid() != f2.grid()) throw GridMismatch("frameworks live on different grids");
  for (size_t i = 0; i < f1.grid().size(); ++i)
    if (!pdi_commutes(f1.pdi(i), f2.pdi(i), tau_proj)) return false;
  return true;
}

namespace detail {

/// Variables contributed by one PDI, plus each member's outcome coordinates.
struct SplitPDI {
  std::vector<Variable> vars;                   // empty for a one-member PDI
  std::vector<std::vector<int>> member_coords;  // per member, one index per var
};

inline std::vector<std::string> split_label(const std::string& s, const std::string& sep) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    const size_t hit = s.find(sep, pos);
    if (hit == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

inline int push_unique(std::vector<std::string>& seen, const std::string& s) {
  for (size_t i = 0; i < seen.size(); ++i)
    if (seen[i] == s) return static_cast<int>(i);
  seen.push_back(s);
  return static_cast<int>(seen.size()) - 1;
}

/**
 * Reads a PDI as a set of random variables at one time.
 *
 * Labels of the form "name=outcome" joined with the refinement joiner are
 * unpacked into one variable per component when the members enumerate the
 * full Cartesian product of component outcomes (a product sample space,
 * e.g. two pointer readings). Anything else stays a single variable; a
 * one-member PDI contributes no variable at all.
 */
inline SplitPDI split_pdi(const PDI& d, const std::string& time) {
  SplitPDI out;
  if (d.size() == 1) {
    out.member_coords.assign(1, {});
    return out;
  }
  const std::vector<std::string> labels = d.labels();
  std::vector<std::vector<std::string>> parts;
  parts.reserve(labels.size());
  size_t k = 0;
  for (const std::string& l : labels) {
    parts.push_back(split_label(l, kLabelJoiner));
    if (parts.size() == 1) k = parts.front().size();
    if (parts.back().size() != k) k = 0;  // ragged: treat whole labels as outcomes
  }
  if (k > 1) {
    // Try the product reading: every component "name=outcome", one common
    // name per position, members covering the full coordinate grid.
    std::vector<std::string> names(k);
    std::vector<std::vector<std::string>> outcomes(k);
    std::vector<std::vector<int>> coords(labels.size(), std::vector<int>(k));
    bool ok = true;
    for (size_t m = 0; ok && m < labels.size(); ++m)
      for (size_t p = 0; ok && p < k; ++p) {
        const std::string& part = parts[m][p];
        const size_t eq = part.find('=');
        if (eq == std::string::npos || eq == 0) {
          ok = false;
          break;
        }
        const std::string name = part.substr(0, eq);
        if (m == 0)
          names[p] = name;
        else if (names[p] != name)
          ok = false;
        coords[m][static_cast<size_t>(p)] = push_unique(outcomes[p], part.substr(eq + 1));
      }
    if (ok) {
      size_t product = 1;
      for (const std::vector<std::string>& o : outcomes) product *= o.size();
      ok = product == labels.size();
      for (size_t m = 0; ok && m < coords.size(); ++m)
        for (size_t m2 = m + 1; m2 < coords.size(); ++m2)
          if (coords[m] == coords[m2]) {
            ok = false;
            break;
          }
    }
    if (ok) {
      for (size_t p = 0; p < k; ++p) out.vars.push_back(Variable{time, names[p], outcomes[p]});
      out.member_coords = std::move(coords);
      return out;
    }
  }
  // Single variable; prefer the "name=outcome" reading when uniform.
  std::string name;
  std::vector<std::string> outcomes;
  bool uniform = true;
  for (const std::string& l : labels) {
    const size_t eq = l.find('=');
    if (eq == std::string::npos || eq == 0 || l.find(kLabelJoiner) != std::string::npos) {
      uniform = false;
      break;
    }
    if (name.empty())
      name = l.substr(0, eq);
    else if (name != l.substr(0, eq))
      uniform = false;
    outcomes.push_back(l.substr(eq + 1));
  }
  if (!uniform) {
    name = "event";
    outcomes = labels;
  }
  out.vars.push_back(Variable{time, name, std::move(outcomes)});
  out.member_coords.resize(labels.size());
  for (size_t m = 0; m < labels.size(); ++m) out.member_coords[m] = {static_cast<int>(m)};
  return out;
}

}  // namespace detail

/**
 * Born-rule distribution over a consistent framework's histories.
 *
 * Refuses (InconsistentFramework) when the medium-decoherence test fails:
 * an inconsistent family has no probabilities to report. The result keeps
 * a copy of the framework so later cross-table reasoning can enforce the
 * single framework rule.
 */
inline ProbabilityTable framework_distribution(const Framework& f, const StateVector& psi,
                                               const Dynamics& dyn, double tau_cons = kTauCons,
                                               double tau_prob = kTauProb) {
  const ConsistencyCheck check = is_consistent(f, psi, dyn, tau_cons);
  if (!check.consistent)
    throw InconsistentFramework(
        "framework " + f.name() + " fails the consistency test (worst off-diagonal " +
            std::to_string(check.worst_off_diagonal) + "); it admits no probability assignment",
        check.worst_off_diagonal);

  std::vector<detail::SplitPDI> splits;
  std::vector<Variable> vars;
  for (size_t t = 0; t < f.grid().size(); ++t) {
    splits.push_back(detail::split_pdi(f.pdi(t), f.grid().label(t)));
    for (const Variable& v : splits.back().vars) vars.push_back(v);
  }
  std::vector<size_t> sizes;
  sizes.reserve(vars.size());
  size_t cells = 1;
  for (const Variable& v : vars) {
    sizes.push_back(v.outcomes.size());
    cells *= v.outcomes.size();
  }

  std::vector<double> entries(cells, 0.0);
  const std::vector<History>& hs = f.histories();
  size_t total = hs.size();
  for (size_t flat = 0; flat < total; ++flat) {
    // Recover the per-time member indices from the enumeration order.
    size_t rem = flat;
    size_t block = total;
    size_t cell = 0, var_at = 0;
    for (size_t t = 0; t < f.grid().size(); ++t) {
      block /= f.pdi(t).size();
      const size_t member = rem / block;
      rem %= block;
      for (int c : splits[t].member_coords[member]) {
        cell = cell * sizes[var_at] + static_cast<size_t>(c);
        ++var_at;
      }
    }
    entries[cell] += history_probability(hs[flat], psi, dyn);
  }
  return ProbabilityTable(std::move(vars), std::move(entries),
                          std::make_shared<const Framework>(f), tau_prob);
}

}  // namespace qhist
