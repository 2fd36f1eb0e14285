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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qhist/random.hpp"
#include "qhist/report.hpp"

namespace qhist {

inline constexpr double kPi = 3.14159265358979323846;

/** Everything a scenario run needs, resolved from flags and config file. */
struct ScenarioConfig {
  std::string kind = "single-particle";
  std::string format = "human";  // human | machine
  std::uint64_t seed = 1;
  double tolerance = 0;  // 0: per-check defaults; otherwise overrides proj/cons/prob

  std::string prep = "x+";     // single-particle: prepared qubit state
  std::string setting = "z";   // single-particle: measured axis
  std::string a = "z";         // eprb / chsh: Alice's (first) setting
  std::string b = "z";         // eprb / chsh: Bob's (first) setting
  std::string a2, b2;          // chsh: second settings
  bool optimal = false;        // chsh: use the maximal-violation angles
  std::string axis = "z";      // contradiction: shared measurement axis
  int trials = 100;            // sweep: random scenario count
  int models = 1000;           // hv-bound: random model count
  int lambdas = 3;             // hv-bound: λ values per random model
};

/** A finished run: one structured document, rendered two ways. */
struct Report {
  Json document;
  std::string human;
  int exit_code = 0;

  std::string machine() const { return document.dump(); }
};

// -- parsing -----------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw ParseError(what + ": '" + s + "' is not a number");
  return v;
}

inline long long parse_integer(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ParseError(what + ": '" + s + "' is not an integer");
  return v;
}

}  // namespace detail

/**
 * Direction syntax: a named axis ("x", "y", "z"), an explicit vector
 * "nx,ny,nz", or a single number read as the angle from +z toward +x in
 * the x–z plane, in radians. Near-unit vectors (within 1e-6) are
 * renormalized with a warning; anything farther from unit is rejected.
 */
inline SpinDirection parse_direction(const std::string& spec, const std::string& what) {
  if (spec == "x") return SpinDirection::x();
  if (spec == "y") return SpinDirection::y();
  if (spec == "z") return SpinDirection::z();
  if (spec.find(',') != std::string::npos) {
    std::vector<double> c;
    std::string part;
    std::istringstream in(spec);
    while (std::getline(in, part, ',')) c.push_back(detail::parse_number(part, what));
    if (c.size() != 3) throw ParseError(what + ": '" + spec + "' needs exactly 3 components");
    const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    if (std::abs(n - 1) > 1e-6)
      throw ParseError(what + ": vector '" + spec + "' has norm " + format_real(n) +
                       ", too far from unit");
    if (std::abs(n - 1) > 1e-9)
      std::fprintf(stderr, "warning: %s: renormalizing '%s' (norm %s)\n", what.c_str(),
                   spec.c_str(), format_real(n).c_str());
    return SpinDirection::normalized(c[0], c[1], c[2]);
  }
  char* end = nullptr;
  const double angle = std::strtod(spec.c_str(), &end);
  if (end == spec.c_str() || *end != '\0' || !std::isfinite(angle))
    throw ParseError(what + ": '" + spec +
                     "' is not an axis name (x|y|z), an 'nx,ny,nz' vector, or an angle");
  return SpinDirection::planar(angle);
}

/// Prep syntax: a direction spec with a trailing sign ("x-", "z+",
/// "0.785+", "0,1,0-"); "0" and "1" name the z-basis states.
inline StateVector parse_prep(const std::string& spec) {
  if (spec == "0") return spin_state(SpinDirection::z(), +1);
  if (spec == "1") return spin_state(SpinDirection::z(), -1);
  if (spec.size() < 2 || (spec.back() != '+' && spec.back() != '-'))
    throw ParseError("prep: '" + spec + "' needs a trailing + or - eigenvalue sign");
  const int sign = spec.back() == '+' ? +1 : -1;
  return spin_state(parse_direction(spec.substr(0, spec.size() - 1), "prep"), sign);
}

namespace detail {

inline void apply_config_entry(ScenarioConfig& cfg, const std::string& key,
                               const std::string& value, int line_no) {
  const std::string at = "config line " + std::to_string(line_no);
  if (key == "format") {
    if (value != "human" && value != "machine")
      throw ParseError(at + ": format must be 'human' or 'machine', got '" + value + "'");
    cfg.format = value;
  } else if (key == "seed") {
    const long long v = parse_integer(value, at);
    if (v < 0) throw ParseError(at + ": seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "tolerance") {
    cfg.tolerance = parse_number(value, at);
    if (cfg.tolerance <= 0) throw ParseError(at + ": tolerance must be positive");
  } else if (key == "prep") {
    cfg.prep = value;
  } else if (key == "setting") {
    cfg.setting = value;
  } else if (key == "a") {
    cfg.a = value;
  } else if (key == "b") {
    cfg.b = value;
  } else if (key == "a2") {
    cfg.a2 = value;
  } else if (key == "b2") {
    cfg.b2 = value;
  } else if (key == "axis") {
    cfg.axis = value;
  } else if (key == "optimal") {
    if (value == "true" || value == "1")
      cfg.optimal = true;
    else if (value == "false" || value == "0")
      cfg.optimal = false;
    else
      throw ParseError(at + ": optimal must be true or false");
  } else if (key == "trials" || key == "models" || key == "lambdas") {
    const long long v = parse_integer(value, at);
    if (v < 1) throw ParseError(at + ": " + key + " must be at least 1");
    (key == "trials" ? cfg.trials : key == "models" ? cfg.models : cfg.lambdas) =
        static_cast<int>(v);
  } else {
    throw ParseError(at + ": unknown key '" + key + "'");
  }
}

}  // namespace detail

/**
 * Flat "key = value" config text ('#' comments, blank lines ignored).
 * Values use the same syntax as the equivalent command-line flags; flags
 * later override whatever the file set.
 */
inline ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    detail::apply_config_entry(base, detail::trim(t.substr(0, eq)),
                               detail::trim(t.substr(eq + 1)), line_no);
  }
  return base;
}

// -- report building ---------------------------------------------------------

namespace detail {

inline std::string pad(std::string s, size_t w) {
  while (s.size() < w) s += ' ';
  return s;
}

inline std::string direction_text(const SpinDirection& d) { return axis_name(d); }

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

/// Fixed-width text rendering of a joint table, numbers via format_real.
inline std::string human_table(const ProbabilityTable& t, const std::string& indent) {
  if (t.variables().empty())
    return indent + "Pr() = " + format_real(t.entry(0)) + "\n";
  std::vector<std::string> headers;
  std::vector<size_t> widths;
  for (const Variable& v : t.variables()) {
    headers.push_back(v.name + "@" + v.time);
    size_t w = headers.back().size();
    for (const std::string& o : v.outcomes) w = std::max(w, o.size());
    widths.push_back(w + 2);
  }
  std::string out = indent;
  for (size_t v = 0; v < headers.size(); ++v) out += pad(headers[v], widths[v]);
  out += "Pr\n";
  for (size_t f = 0; f < t.size(); ++f) {
    out += indent;
    for (size_t v = 0; v < t.variables().size(); ++v)
      out += pad(t.variables()[v].outcomes[static_cast<size_t>(
                     t.coordinate(f, static_cast<int>(v)))],
                 widths[v]);
    out += format_real(t.entry(f)) + "\n";
  }
  return out;
}

inline Json scenario_echo(const ScenarioConfig& cfg,
                          std::vector<std::pair<std::string, std::string>> extra) {
  Json s = Json::object();
  s.add("kind", Json::text(cfg.kind));
  s.add("seed", Json::integer(static_cast<std::int64_t>(cfg.seed)));
  if (cfg.tolerance > 0)
    s.add("tolerance", Json::real(cfg.tolerance));
  else
    s.add("tolerance", Json::text("default"));
  for (auto& kv : extra) s.add(kv.first, Json::text(kv.second));
  return s;
}

inline std::string human_header(const std::string& title) {
  return title + "\n" + std::string(title.size(), '=') + "\n";
}

inline std::string human_section(const std::string& title) {
  return "\n" + title + "\n" + std::string(title.size(), '-') + "\n";
}

/// E(a,b) read off a joint (A,B) table.
inline double table_correlator(const ProbabilityTable& t) {
  double e = 0;
  for (int av : {+1, -1})
    for (int bv : {+1, -1})
      e += av * bv *
           probability_of(t, {Assignment{"t2", "A", outcome_label(av)},
                              Assignment{"t2", "B", outcome_label(bv)}});
  return e;
}

}  // namespace detail

// -- scenario runners ---------------------------------------------------------

namespace detail {

inline Report run_single_particle(const ScenarioConfig& cfg, const Tolerances& tol) {
  const StateVector prep = parse_prep(cfg.prep);
  const SpinDirection setting = parse_direction(cfg.setting, "setting");
  const SingleParticleFrameworks sp = build_single_particle_frameworks(prep, setting);

  const std::string prep_text =
      "S" + axis_name(sp.prep_axis) + "=" + (sp.prep_sign > 0 ? "+1/2" : "-1/2");
  Json doc = Json::object();
  doc.add("scenario", scenario_echo(cfg, {{"prep", cfg.prep},
                                          {"prep_state", prep_text},
                                          {"setting", direction_text(setting)}}));

  const Framework* fws[3] = {&sp.f_meas, &sp.e_prep_meas, &sp.e_prep_prep};
  std::vector<ProbabilityTable> tables;
  Json jfws = Json::array();
  Json jcons = Json::array();
  std::string h = human_header("single-particle measurement frameworks");
  h += "  prep    = " + cfg.prep + "  (" + prep_text + ")\n";
  h += "  setting = " + direction_text(setting) + "\n";

  for (const Framework* f : fws) {
    const ConsistencyCheck cc = is_consistent(*f, sp.initial, sp.dynamics, tol.cons);
    Json jc = Json::object();
    jc.add("framework", Json::text(f->name()));
    jc.add("consistent", Json::boolean(cc.consistent));
    jc.add("worst_off_diagonal", Json::real(cc.worst_off_diagonal));
    jcons.push(std::move(jc));
    tables.push_back(framework_distribution(*f, sp.initial, sp.dynamics, tol.cons, tol.prob));
    Json jf = Json::object();
    jf.add("name", Json::text(f->name()));
    jf.add("table", table_json(tables.back()));
    jfws.push(std::move(jf));
    h += human_section("framework " + f->name() + "  (worst off-diagonal " +
                       format_real(cc.worst_off_diagonal) + ")");
    h += human_table(tables.back(), "  ");
  }

  // Cause reading in the measured-basis framework: the t1 spin value and
  // the pointer outcome determine one another.
  const std::string meas_var = "S" + axis_name(setting);
  Json jcauses = Json::array();
  h += human_section("cause analysis in " + sp.f_meas.name());
  {
    const ProbabilityTable& t = tables[0];
    const Variable& v = t.variables()[static_cast<size_t>(t.var_index(VarRef{"t1", meas_var}))];
    for (const std::string& o : v.outcomes) {
      const std::string effect = o[0] == '+' ? "+1" : "-1";
      Json row = Json::object();
      row.add("cause", Json::text(meas_var + "=" + o + "@t1"));
      row.add("effect", Json::text("A=" + effect + "@t2"));
      const double pf = probability_of(t, {Assignment{"t1", meas_var, o}});
      if (pf <= tol.prob) {
        row.add("evaluated", Json::boolean(false));
        row.add("note", Json::text("cause has probability zero"));
        h += "  " + meas_var + "=" + o + "@t1 -> A=" + effect +
             "@t2: not evaluated (cause has probability zero)\n";
      } else {
        const IdealCauseCheck ic = ideal_cause(t, event("t1", meas_var, o),
                                               event("t2", "A", effect), tol.prob);
        row.add("evaluated", Json::boolean(true));
        row.add("ideal_cause", Json::boolean(ic.ideal));
        row.add("g_given_f", Json::real(ic.g_given_f));
        row.add("f_given_g", Json::real(ic.f_given_g));
        h += "  " + meas_var + "=" + o + "@t1 -> A=" + effect + "@t2: ideal cause " +
             yes_no(ic.ideal) + "  (Pr(G|F) " + format_real(ic.g_given_f) + ", Pr(F|G) " +
             format_real(ic.f_given_g) + ")\n";
      }
      jcauses.push(std::move(row));
    }
  }

  // Retrodiction in the refined framework: condition on the outcome.
  Json jinfer = Json::array();
  h += human_section("inference from the outcome in " + sp.e_prep_meas.name());
  for (const std::string& o : {std::string("+1"), std::string("-1")}) {
    const double pa = probability_of(tables[1], {Assignment{"t2", "A", o}});
    if (pa <= tol.prob) continue;
    const ProbabilityTable cond =
        conditional(tables[1], {Assignment{"t2", "A", o}}, tol.prob);
    Json row = Json::object();
    row.add("condition", Json::text("A=" + o));
    row.add("table", table_json(cond));
    jinfer.push(std::move(row));
    h += "  given A=" + o + ":\n" + human_table(cond, "    ");
  }

  // The foil framework: the prep-basis value at t1 is statistically
  // independent of the later outcome.
  const std::string prep_var = "S" + axis_name(sp.prep_axis);
  Json jind = Json::object();
  {
    const ProbabilityTable& t = tables[2];
    const Variable& v = t.variables()[static_cast<size_t>(t.var_index(VarRef{"t1", prep_var}))];
    double worst = 0;
    bool all = true;
    Json pairs = Json::array();
    for (const std::string& o : v.outcomes)
      for (const std::string& a : {std::string("+1"), std::string("-1")}) {
        const IndependenceCheck ic =
            independent(t, Event{"t1", prep_var, {o}}, Event{"t2", "A", {a}}, tol.prob);
        worst = std::max(worst, ic.deviation);
        all = all && ic.independent;
        Json row = Json::object();
        row.add("f", Json::text(prep_var + "=" + o + "@t1"));
        row.add("g", Json::text("A=" + a + "@t2"));
        row.add("independent", Json::boolean(ic.independent));
        row.add("deviation", Json::real(ic.deviation));
        pairs.push(std::move(row));
      }
    jind.add("framework", Json::text(sp.e_prep_prep.name()));
    jind.add("all_independent", Json::boolean(all));
    jind.add("max_deviation", Json::real(worst));
    jind.add("pairs", std::move(pairs));
    h += human_section("independence in " + sp.e_prep_prep.name());
    h += "  " + prep_var + "@t1 vs A@t2: independent " + yes_no(all) + "  (max deviation " +
         format_real(worst) + ")\n";
  }

  // Which frameworks may be reasoned about jointly.
  Json jcompat = Json::object();
  Json jnames = Json::array();
  for (const Framework* f : fws) jnames.push(Json::text(f->name()));
  Json jmatrix = Json::array();
  h += human_section("framework compatibility");
  size_t name_w = 0;
  for (const Framework* f : fws) name_w = std::max(name_w, f->name().size());
  h += "  " + pad("", name_w + 2);
  for (const Framework* f : fws) h += pad(f->name(), f->name().size() + 2);
  h += "\n";
  for (const Framework* fi : fws) {
    Json row = Json::array();
    h += "  " + pad(fi->name(), name_w + 2);
    for (const Framework* fj : fws) {
      const bool c = frameworks_compatible(*fi, *fj, tol.proj);
      row.push(Json::boolean(c));
      h += pad(yes_no(c), fj->name().size() + 2);
    }
    h += "\n";
    jmatrix.push(std::move(row));
  }
  jcompat.add("frameworks", std::move(jnames));
  jcompat.add("matrix", std::move(jmatrix));

  Json jguard = Json::array();
  h += human_section("single framework rule");
  const std::pair<size_t, size_t> guarded[3] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& [i, j] : guarded) {
    bool combinable = true;
    try {
      guard_single_framework({&tables[i], &tables[j]}, tol.proj);
    } catch (const SingleFrameworkViolation&) {
      combinable = false;
    }
    Json row = Json::object();
    row.add("tables", Json::array().push(Json::text(fws[i]->name()))
                          .push(Json::text(fws[j]->name())));
    row.add("combinable", Json::boolean(combinable));
    jguard.push(std::move(row));
    h += "  " + fws[i]->name() + " + " + fws[j]->name() + ": " +
         (combinable ? "conclusions may be combined" : "refused (incompatible frameworks)") +
         "\n";
  }

  Json results = Json::object();
  results.add("frameworks", std::move(jfws));
  results.add("cause_analysis", std::move(jcauses));
  results.add("outcome_inference", std::move(jinfer));
  results.add("independence", std::move(jind));
  results.add("single_framework_guard", std::move(jguard));
  Json diag = Json::object();
  diag.add("consistency", std::move(jcons));
  diag.add("compatibility", std::move(jcompat));
  doc.add("results", std::move(results));
  doc.add("diagnostics", std::move(diag));
  return Report{std::move(doc), std::move(h), 0};
}

inline Report run_eprb(const ScenarioConfig& cfg, const Tolerances& tol) {
  const MeasurementSetting a = alice_setting(parse_direction(cfg.a, "a"));
  const MeasurementSetting b = bob_setting(parse_direction(cfg.b, "b"));
  const EPRBScenario s = make_eprb_scenario(a, b);
  const Framework fw = eprb_joint_framework(s);
  const ConsistencyCheck cc = is_consistent(fw, s.initial, s.dynamics, tol.cons);
  const ProbabilityTable table =
      framework_distribution(fw, s.initial, s.dynamics, tol.cons, tol.prob);

  const double e = table_correlator(table);
  const double closed = -dot(a.direction, b.direction);
  const double pa = probability_of(table, {Assignment{"t2", "A", "+1"}});
  const double pb = probability_of(table, {Assignment{"t2", "B", "+1"}});

  Json doc = Json::object();
  doc.add("scenario",
          scenario_echo(cfg, {{"a", a.symbol}, {"b", b.symbol}, {"state", "singlet"}}));
  Json results = Json::object();
  results.add("joint", table_json(table));
  results.add("correlator", Json::real(e));
  results.add("minus_cos_angle", Json::real(closed));
  results.add("correlator_deviation", Json::real(std::abs(e - closed)));
  Json marg = Json::object();
  marg.add("Pr(A=+1)", Json::real(pa));
  marg.add("Pr(B=+1)", Json::real(pb));
  results.add("marginals", std::move(marg));

  std::string h = human_header("EPRB joint measurement");
  h += "  a = " + a.symbol + "\n  b = " + b.symbol + "\n  state = singlet\n";
  h += human_section("joint outcome distribution  (worst off-diagonal " +
                     format_real(cc.worst_off_diagonal) + ")");
  h += human_table(table, "  ");
  h += human_section("correlation");
  h += "  E(a,b)        = " + format_real(e) + "\n";
  h += "  -cos(angle)   = " + format_real(closed) + "\n";
  h += "  Pr(A=+1)      = " + format_real(pa) + "\n";
  h += "  Pr(B=+1)      = " + format_real(pb) + "\n";

  Json jcc = Json::object();
  if (same_direction(a.direction, b.direction, 1e-9)) {
    const QuantumCommonCause qcc = quantum_common_cause(a, b, tol.cons, tol.prob);
    jcc.add("applicable", Json::boolean(true));
    jcc.add("framework", Json::text(qcc.framework_name));
    h += human_section("common cause (framework " + qcc.framework_name + ")");
    if (qcc.analysis.cause) {
      const Event& ev = *qcc.analysis.cause;
      jcc.add("cause", Json::text(ev.variable + "=" + ev.outcomes.front() + "@" + ev.time));
      Json w = Json::object();
      for (const auto& kv : qcc.analysis.verdict.witnesses)
        w.add(kv.first, Json::real(kv.second));
      jcc.add("witnesses", std::move(w));
      h += "  cause of (A=+1, B=-1): " + ev.variable + "=" + ev.outcomes.front() + "@" + ev.time +
           "\n";
      for (const auto& kv : qcc.analysis.verdict.witnesses)
        h += "    " + kv.first + " = " + format_real(kv.second) + "\n";
    } else {
      jcc.add("cause", Json::text(""));
      h += "  no qualifying earlier event\n";
    }
    jcc.add("table", table_json(qcc.table));
    h += human_table(qcc.table, "  ");
  } else {
    jcc.add("applicable", Json::boolean(false));
    jcc.add("note", Json::text("settings differ; no single earlier event is a common cause"));
    h += human_section("common cause");
    h += "  settings differ; no single earlier event is a common cause\n";
  }
  results.add("common_cause", std::move(jcc));

  Json diag = Json::object();
  Json jcons = Json::array();
  Json jc = Json::object();
  jc.add("framework", Json::text(fw.name()));
  jc.add("consistent", Json::boolean(cc.consistent));
  jc.add("worst_off_diagonal", Json::real(cc.worst_off_diagonal));
  jcons.push(std::move(jc));
  diag.add("consistency", std::move(jcons));
  doc.add("results", std::move(results));
  doc.add("diagnostics", std::move(diag));
  return Report{std::move(doc), std::move(h), 0};
}

inline Report run_chsh(const ScenarioConfig& cfg, const Tolerances& tol) {
  SpinDirection da(SpinDirection::z()), da2(SpinDirection::z());
  SpinDirection db(SpinDirection::z()), db2(SpinDirection::z());
  if (cfg.optimal) {
    da = SpinDirection::planar(kPi / 2);
    da2 = SpinDirection::planar(0);
    db = SpinDirection::planar(kPi / 4);
    db2 = SpinDirection::planar(3 * kPi / 4);
  } else {
    if (cfg.a2.empty() || cfg.b2.empty())
      throw ParseError("chsh needs --a2 and --b2 (or --optimal)");
    da = parse_direction(cfg.a, "a");
    da2 = parse_direction(cfg.a2, "a2");
    db = parse_direction(cfg.b, "b");
    db2 = parse_direction(cfg.b2, "b2");
  }
  const MeasurementSetting a = alice_setting(da, "a");
  const MeasurementSetting ap = alice_setting(da2, "a'");
  const MeasurementSetting b = bob_setting(db, "b");
  const MeasurementSetting bp = bob_setting(db2, "b'");

  const std::pair<const MeasurementSetting*, const MeasurementSetting*> pairs[4] = {
      {&a, &b}, {&a, &bp}, {&ap, &b}, {&ap, &bp}};
  const char* names[4] = {"E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"};
  double e[4];
  Json jcons = Json::array();
  for (int i = 0; i < 4; ++i) {
    const EPRBScenario s = make_eprb_scenario(*pairs[i].first, *pairs[i].second);
    const Framework fw = eprb_joint_framework(s);
    const ConsistencyCheck cc = is_consistent(fw, s.initial, s.dynamics, tol.cons);
    const ProbabilityTable t =
        framework_distribution(fw, s.initial, s.dynamics, tol.cons, tol.prob);
    e[i] = table_correlator(t);
    Json jc = Json::object();
    jc.add("framework", Json::text(fw.name()));
    jc.add("consistent", Json::boolean(cc.consistent));
    jc.add("worst_off_diagonal", Json::real(cc.worst_off_diagonal));
    jcons.push(std::move(jc));
  }
  const double s_value = e[0] + e[1] + e[2] - e[3];
  const double quantum_max = 2 * std::sqrt(2.0);
  const ClassicalCHSHBound classical = classical_chsh_max({"a", "a'"}, {"b", "b'"});
  const bool violated = std::abs(s_value) > classical.bound + tol.prob;

  Json doc = Json::object();
  doc.add("scenario", scenario_echo(cfg, {{"a", direction_text(da)},
                                          {"a'", direction_text(da2)},
                                          {"b", direction_text(db)},
                                          {"b'", direction_text(db2)},
                                          {"optimal", cfg.optimal ? "true" : "false"}}));
  Json results = Json::object();
  Json jcorr = Json::object();
  for (int i = 0; i < 4; ++i) jcorr.add(names[i], Json::real(e[i]));
  results.add("correlators", std::move(jcorr));
  results.add("S", Json::real(s_value));
  results.add("abs_S", Json::real(std::abs(s_value)));
  results.add("quantum_max", Json::real(quantum_max));
  results.add("classical_bound", Json::real(classical.bound));
  Json jstrat = Json::object();
  jstrat.add("a", Json::integer(classical.strategy.alice_signs[0]));
  jstrat.add("a'", Json::integer(classical.strategy.alice_signs[1]));
  jstrat.add("b", Json::integer(classical.strategy.bob_signs[0]));
  jstrat.add("b'", Json::integer(classical.strategy.bob_signs[1]));
  results.add("classical_maximizer", std::move(jstrat));
  results.add("classical_S", Json::real(classical.s));
  results.add("violated", Json::boolean(violated));

  std::string h = human_header("CHSH");
  h += "  a  = " + direction_text(da) + "\n  a' = " + direction_text(da2) + "\n";
  h += "  b  = " + direction_text(db) + "\n  b' = " + direction_text(db2) + "\n";
  h += human_section("correlators");
  for (int i = 0; i < 4; ++i)
    h += "  " + pad(names[i], 10) + " = " + format_real(e[i]) + "\n";
  h += human_section("inequality");
  h += "  S               = " + format_real(s_value) + "\n";
  h += "  |S|             = " + format_real(std::abs(s_value)) + "\n";
  h += "  quantum max     = " + format_real(quantum_max) + "\n";
  h += "  classical bound = " + format_real(classical.bound) + "  (strategy a=" +
       std::to_string(classical.strategy.alice_signs[0]) + ", a'=" +
       std::to_string(classical.strategy.alice_signs[1]) + ", b=" +
       std::to_string(classical.strategy.bob_signs[0]) + ", b'=" +
       std::to_string(classical.strategy.bob_signs[1]) + ")\n";
  h += "  violated        = " + yes_no(violated) + "\n";

  Json diag = Json::object();
  diag.add("consistency", std::move(jcons));
  doc.add("results", std::move(results));
  doc.add("diagnostics", std::move(diag));
  return Report{std::move(doc), std::move(h), 0};
}

inline Report run_hv_bound(const ScenarioConfig& cfg, const Tolerances& tol) {
  const std::vector<std::string> as{"a", "a'"};
  const std::vector<std::string> bs{"b", "b'"};
  const ClassicalCHSHBound classical = classical_chsh_max({"a", "a'"}, {"b", "b'"});

  Rng rng(cfg.seed);
  double sweep_max = 0;
  for (int m = 0; m < cfg.models; ++m) {
    const HiddenVariableModel model =
        random_model(rng, static_cast<size_t>(cfg.lambdas), as, bs);
    const double s = hv_correlator(model, "a", "b") + hv_correlator(model, "a", "b'") +
                     hv_correlator(model, "a'", "b") - hv_correlator(model, "a'", "b'");
    sweep_max = std::max(sweep_max, std::abs(s));
  }
  const bool within = sweep_max <= classical.bound + 1e-12;

  const HiddenVariableModel extremal = to_model(classical.strategy, as, bs);
  const SettingDistribution uniform(as, {0.5, 0.5}, bs, {0.5, 0.5});
  const SettingIndependenceReport independence = setting_independence_check(extremal, uniform);

  // Correlated-λ illustration at the maximal-violation angles: once the λ
  // weights may depend on the settings, the quantum statistics are easy to
  // mimic — so that dependence is exactly what the model class must forbid.
  const std::vector<MeasurementSetting> alices{
      alice_setting(SpinDirection::planar(kPi / 2), "a"),
      alice_setting(SpinDirection::planar(0), "a'")};
  const std::vector<MeasurementSetting> bobs{
      bob_setting(SpinDirection::planar(kPi / 4), "b"),
      bob_setting(SpinDirection::planar(3 * kPi / 4), "b'")};
  const CorrelatedLambdaModel mimic = quantum_mimic_model(alices, bobs);
  double mimic_dev = 0;
  double mimic_e[2][2];
  for (size_t ia = 0; ia < 2; ++ia)
    for (size_t ib = 0; ib < 2; ++ib) {
      const ProbabilityTable ct = correlated_blc_joint(mimic, as[ia], bs[ib]);
      const ProbabilityTable qt =
          eprb_joint_distribution(alices[ia], bobs[ib], singlet_state(), tol.cons, tol.prob);
      for (int av : {+1, -1})
        for (int bv : {+1, -1}) {
          const std::vector<Assignment> cell{Assignment{"t2", "A", outcome_label(av)},
                                             Assignment{"t2", "B", outcome_label(bv)}};
          mimic_dev = std::max(mimic_dev,
                               std::abs(probability_of(ct, cell) - probability_of(qt, cell)));
        }
      mimic_e[ia][ib] = table_correlator(ct);
    }
  const double mimic_s = mimic_e[0][0] + mimic_e[0][1] + mimic_e[1][0] - mimic_e[1][1];

  Json doc = Json::object();
  doc.add("scenario", scenario_echo(cfg, {{"models", std::to_string(cfg.models)},
                                          {"lambdas", std::to_string(cfg.lambdas)}}));
  Json results = Json::object();
  results.add("classical_bound", Json::real(classical.bound));
  Json jstrat = Json::object();
  jstrat.add("a", Json::integer(classical.strategy.alice_signs[0]));
  jstrat.add("a'", Json::integer(classical.strategy.alice_signs[1]));
  jstrat.add("b", Json::integer(classical.strategy.bob_signs[0]));
  jstrat.add("b'", Json::integer(classical.strategy.bob_signs[1]));
  results.add("maximizer", std::move(jstrat));
  results.add("maximizer_S", Json::real(classical.s));
  Json jsweep = Json::object();
  jsweep.add("models", Json::integer(cfg.models));
  jsweep.add("lambdas", Json::integer(cfg.lambdas));
  jsweep.add("max_abs_S", Json::real(sweep_max));
  jsweep.add("within_bound", Json::boolean(within));
  results.add("random_model_sweep", std::move(jsweep));
  Json jassume = Json::array();
  for (const std::string& s : independence.assumptions) jassume.push(Json::text(s));
  Json jind = Json::object();
  jind.add("holds", Json::boolean(independence.holds));
  jind.add("assumptions", std::move(jassume));
  results.add("setting_independence", std::move(jind));
  Json jmimic = Json::object();
  jmimic.add("max_table_deviation", Json::real(mimic_dev));
  jmimic.add("chsh", Json::real(mimic_s));
  jmimic.add("within_model_class", Json::boolean(false));
  jmimic.add("note", Json::text("lambda weights depend on the settings; such a model is outside "
                                "the locally causal class and is refused by the bound search"));
  results.add("correlated_lambda_illustration", std::move(jmimic));

  std::string h = human_header("locally causal models: CHSH bound");
  h += human_section("deterministic strategies");
  h += "  bound (max |S| over 16 strategies) = " + format_real(classical.bound) + "\n";
  h += "  first maximizer: a=" + std::to_string(classical.strategy.alice_signs[0]) +
       ", a'=" + std::to_string(classical.strategy.alice_signs[1]) +
       ", b=" + std::to_string(classical.strategy.bob_signs[0]) +
       ", b'=" + std::to_string(classical.strategy.bob_signs[1]) +
       "  (S = " + format_real(classical.s) + ")\n";
  h += human_section("random mixed models");
  h += "  models     = " + std::to_string(cfg.models) + "  (lambdas per model: " +
       std::to_string(cfg.lambdas) + ")\n";
  h += "  max |S|    = " + format_real(sweep_max) + "\n";
  h += "  within bound: " + yes_no(within) + "\n";
  h += human_section("background assumptions");
  for (const std::string& s : independence.assumptions) h += "  - " + s + "\n";
  h += human_section("correlated-lambda illustration");
  h += "  max deviation from quantum tables = " + format_real(mimic_dev) + "\n";
  h += "  CHSH of the mimic                 = " + format_real(mimic_s) + "\n";
  h += "  (weights depend on settings: outside the locally causal class)\n";

  doc.add("results", std::move(results));
  return Report{std::move(doc), std::move(h), within ? 0 : 3};
}

inline Report run_contradiction(const ScenarioConfig& cfg, const Tolerances& tol) {
  const SpinDirection axis = parse_direction(cfg.axis, "axis");
  const FactorizationReport singlet = factorization_contradiction(axis, singlet_state(), tol.prob);
  const FactorizationReport control =
      factorization_contradiction(axis, StateVector::basis(4, 0), tol.prob);

  auto fr_json = [](const FactorizationReport& r) {
    Json j = Json::object();
    j.add("quantum_joint", Json::real(r.quantum_joint));
    j.add("Pr(A=+1)", Json::real(r.alice_plus_marginal));
    j.add("Pr(B=+1)", Json::real(r.bob_plus_marginal));
    j.add("factorized_joint", Json::real(r.factorized_joint));
    j.add("mismatch", Json::real(r.mismatch));
    j.add("contradiction", Json::boolean(r.contradiction));
    return j;
  };
  auto fr_human = [](const FactorizationReport& r, const std::string& label) {
    std::string h = human_section(label);
    h += "  quantum Pr(A=+1, B=+1)   = " + format_real(r.quantum_joint) + "\n";
    h += "  Pr(A=+1) * Pr(B=+1)      = " + format_real(r.factorized_joint) + "\n";
    h += "  mismatch                 = " + format_real(r.mismatch) + "\n";
    h += "  contradiction            = " + yes_no(r.contradiction) + "\n";
    return h;
  };

  Json doc = Json::object();
  doc.add("scenario", scenario_echo(cfg, {{"axis", direction_text(axis)}}));
  Json results = Json::object();
  results.add("singlet", fr_json(singlet));
  results.add("product_control", fr_json(control));
  doc.add("results", std::move(results));

  std::string h = human_header("factorization with lambda = the prepared state");
  h += "  axis = " + direction_text(axis) + "  (equal settings a = b)\n";
  h += fr_human(singlet, "singlet state");
  h += fr_human(control, "product-state control");
  h += "\nThe factorized value is wrong exactly when the state is entangled:\n";
  h += "treating the quantum state as a classical hidden variable discards\n";
  h += "the outcome correlations it encodes.\n";
  return Report{std::move(doc), std::move(h), 0};
}

inline Report run_sweep(const ScenarioConfig& cfg, const Tolerances& tol) {
  Rng rng(cfg.seed);
  double corr_dev = 0;
  for (int i = 0; i < cfg.trials; ++i) {
    const SpinDirection da = random_direction(rng);
    const SpinDirection db = random_direction(rng);
    const double e = correlator(alice_setting(da), bob_setting(db));
    corr_dev = std::max(corr_dev, std::abs(e - (-dot(da, db))));
  }
  const bool corr_ok = corr_dev <= 1e-12;

  double pi_dev = 0;
  for (int i = 0; i < cfg.trials; ++i) {
    const MeasurementSetting fixed = alice_setting(random_direction(rng));
    const MeasurementSetting far1 = bob_setting(random_direction(rng));
    const MeasurementSetting far2 = bob_setting(random_direction(rng));
    const ParameterIndependenceCheck pc =
        parameter_independence_check(fixed, far1, far2, tol.prob);
    pi_dev = std::max(pi_dev, pc.max_marginal_deviation);
  }
  const bool pi_ok = pi_dev <= 1e-12;
  const bool all_ok = corr_ok && pi_ok;

  Json doc = Json::object();
  doc.add("scenario", scenario_echo(cfg, {{"trials", std::to_string(cfg.trials)}}));
  Json results = Json::object();
  Json jc = Json::object();
  jc.add("trials", Json::integer(cfg.trials));
  jc.add("max_deviation", Json::real(corr_dev));
  jc.add("pass", Json::boolean(corr_ok));
  results.add("correlator_vs_closed_form", std::move(jc));
  Json jp = Json::object();
  jp.add("trials", Json::integer(cfg.trials));
  jp.add("max_marginal_deviation", Json::real(pi_dev));
  jp.add("pass", Json::boolean(pi_ok));
  results.add("parameter_independence", std::move(jp));
  results.add("all_pass", Json::boolean(all_ok));
  doc.add("results", std::move(results));

  std::string h = human_header("random-settings property sweep");
  h += "  trials = " + std::to_string(cfg.trials) + ", seed = " + std::to_string(cfg.seed) + "\n";
  h += human_section("correlator vs closed form");
  h += "  max |E(a,b) + a.b| = " + format_real(corr_dev) + "  pass: " + yes_no(corr_ok) + "\n";
  h += human_section("parameter independence");
  h += "  max marginal shift = " + format_real(pi_dev) + "  pass: " + yes_no(pi_ok) + "\n";
  h += "\nall pass: " + yes_no(all_ok) + "\n";
  return Report{std::move(doc), std::move(h), all_ok ? 0 : 3};
}

}  // namespace detail

/** Dispatches a validated config to its scenario runner. */
inline Report run(const ScenarioConfig& cfg) {
  if (cfg.format != "human" && cfg.format != "machine")
    throw ParseError("format must be 'human' or 'machine', got '" + cfg.format + "'");
  if (cfg.trials < 1 || cfg.models < 1 || cfg.lambdas < 1)
    throw ParseError("trials, models and lambdas must be at least 1");
  if (cfg.tolerance < 0) throw ParseError("tolerance must be positive");
  const Tolerances tol =
      cfg.tolerance > 0 ? Tolerances::uniform(cfg.tolerance) : Tolerances{};
  if (cfg.kind == "single-particle") return detail::run_single_particle(cfg, tol);
  if (cfg.kind == "eprb") return detail::run_eprb(cfg, tol);
  if (cfg.kind == "chsh") return detail::run_chsh(cfg, tol);
  if (cfg.kind == "hv-bound") return detail::run_hv_bound(cfg, tol);
  if (cfg.kind == "contradiction") return detail::run_contradiction(cfg, tol);
  if (cfg.kind == "sweep") return detail::run_sweep(cfg, tol);
  throw ParseError("unknown scenario kind '" + cfg.kind + "'");
}

// -- binary entry point --------------------------------------------------------

/**
 * Full command-line front end. Exit codes: 0 success, 2 bad usage or
 * config, 3 a physics invariant failed, 4 anything unexpected.
 */
inline int run_cli(int argc, char** argv) {
  CLI::App app{"consistent-histories spin scenarios"};
  app.require_subcommand(1);

  struct Flags {
    std::string config, format, prep, setting, a, b, a2, b2, axis;
    std::uint64_t seed = 0;
    double tolerance = 0;
    int trials = 0, models = 0, lambdas = 0;
    bool optimal = false;
  };
  Flags fl;

  auto add_common = [&fl](CLI::App* sub) {
    sub->add_option("--config", fl.config, "key = value file; flags override it");
    sub->add_option("--format", fl.format, "human | machine");
    sub->add_option("--seed", fl.seed, "RNG seed for randomized parts");
    sub->add_option("--tolerance", fl.tolerance, "uniform numeric tolerance override");
  };

  CLI::App* sp = app.add_subcommand("single-particle", "one spin, three frameworks");
  sp->add_option("--prep", fl.prep, "prepared state, e.g. x+, z-, 0.785+");
  sp->add_option("--setting", fl.setting, "measured axis: x|y|z|angle|nx,ny,nz");
  add_common(sp);

  CLI::App* ep = app.add_subcommand("eprb", "singlet pair, joint outcome statistics");
  ep->add_option("--a", fl.a, "Alice's axis");
  ep->add_option("--b", fl.b, "Bob's axis");
  add_common(ep);

  CLI::App* ch = app.add_subcommand("chsh", "CHSH correlations, two settings per side");
  ch->add_option("--a", fl.a, "Alice's first axis");
  ch->add_option("--a2", fl.a2, "Alice's second axis");
  ch->add_option("--b", fl.b, "Bob's first axis");
  ch->add_option("--b2", fl.b2, "Bob's second axis");
  ch->add_flag("--optimal", fl.optimal, "use the maximal-violation angles");
  add_common(ch);

  CLI::App* hv = app.add_subcommand("hv-bound", "locally causal CHSH bound and sweep");
  hv->add_option("--models", fl.models, "random models to sweep");
  hv->add_option("--lambdas", fl.lambdas, "hidden-variable values per model");
  add_common(hv);

  CLI::App* co = app.add_subcommand("contradiction", "factorization with lambda = the state");
  co->add_option("--axis", fl.axis, "shared measurement axis");
  add_common(co);

  CLI::App* sw = app.add_subcommand("sweep", "randomized property checks");
  sw->add_option("--trials", fl.trials, "random scenarios per check");
  add_common(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    auto set = [&sub](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };

    ScenarioConfig cfg;
    cfg.kind = sub->get_name();
    if (set("--config")) {
      std::ifstream in(fl.config);
      if (!in) throw ParseError("cannot read config file '" + fl.config + "'");
      std::ostringstream text;
      text << in.rdbuf();
      cfg = parse_config(text.str(), cfg);
      cfg.kind = sub->get_name();
    }
    if (set("--format")) cfg.format = fl.format;
    if (set("--seed")) cfg.seed = fl.seed;
    if (set("--tolerance")) cfg.tolerance = fl.tolerance;
    if (set("--prep")) cfg.prep = fl.prep;
    if (set("--setting")) cfg.setting = fl.setting;
    if (set("--a")) cfg.a = fl.a;
    if (set("--b")) cfg.b = fl.b;
    if (set("--a2")) cfg.a2 = fl.a2;
    if (set("--b2")) cfg.b2 = fl.b2;
    if (set("--optimal")) cfg.optimal = fl.optimal;
    if (set("--axis")) cfg.axis = fl.axis;
    if (set("--trials")) cfg.trials = fl.trials;
    if (set("--models")) cfg.models = fl.models;
    if (set("--lambdas")) cfg.lambdas = fl.lambdas;

    const Report report = run(cfg);
    if (cfg.format == "machine")
      std::fputs(report.machine().c_str(), stdout);
    else
      std::fputs(report.human.c_str(), stdout);
    return report.exit_code;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}

}  // namespace qhist
