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

#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace qhist;
using Catch::Matchers::WithinAbs;

namespace {

// E at t0 perfectly steers F at t1 and G at t2.
ProbabilityTable steering_table() {
  return ProbabilityTable({Variable{"t0", "E", {"e1", "e2"}},
                           Variable{"t1", "F", {"f1", "f2"}},
                           Variable{"t2", "G", {"g1", "g2"}}},
                          {0.5, 0, 0, 0, 0, 0, 0, 0.5});
}

ProbabilityTable random_table(Rng& rng) {
  std::vector<double> p(2 * 3 * 2);
  double sum = 0;
  for (double& x : p) {
    x = uniform_double(rng) + 1e-6;
    sum += x;
  }
  for (double& x : p) x /= sum;
  return ProbabilityTable({Variable{"t0", "A", {"a0", "a1"}},
                           Variable{"t1", "B", {"b0", "b1", "b2"}},
                           Variable{"t2", "C", {"c0", "c1"}}},
                          std::move(p));
}

}  // namespace

TEST_CASE("independence detects product structure", "[causality]") {
  // Pr factorizes: independent regardless of outcome choice.
  const ProbabilityTable prod({Variable{"t0", "F", {"u", "v"}},
                               Variable{"t1", "G", {"x", "y"}}},
                              {0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4});
  const IndependenceCheck ok = independent(prod, Event{"t0", "F", {"u"}},
                                           Event{"t1", "G", {"x"}});
  REQUIRE(ok.independent);
  REQUIRE_THAT(ok.deviation, WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(ok.p_f, WithinAbs(0.3, 1e-15));
  REQUIRE_THAT(ok.p_g, WithinAbs(0.6, 1e-15));

  const ProbabilityTable corr({Variable{"t0", "F", {"u", "v"}},
                               Variable{"t1", "G", {"x", "y"}}},
                              {0.5, 0, 0, 0.5});
  const IndependenceCheck bad = independent(corr, Event{"t0", "F", {"u"}},
                                            Event{"t1", "G", {"x"}});
  REQUIRE_FALSE(bad.independent);
  REQUIRE_THAT(bad.deviation, WithinAbs(0.25, 1e-15));

  REQUIRE_THROWS_AS(independent(corr, Event{"t0", "F", {"u"}}, Event{"t0", "F", {"v"}}),
                    UnknownEvent);
}

TEST_CASE("correlation conditionals", "[causality]") {
  const ProbabilityTable t({Variable{"t0", "F", {"u", "v"}},
                            Variable{"t1", "G", {"x", "y"}}},
                           {0.4, 0.1, 0.1, 0.4});
  const CorrelationCheck cc = correlated(t, Event{"t0", "F", {"u"}}, Event{"t1", "G", {"x"}});
  REQUIRE(cc.correlated);
  REQUIRE_THAT(cc.g_given_f, WithinAbs(0.8, 1e-12));

  const ProbabilityTable zero({Variable{"t0", "F", {"u", "v"}},
                               Variable{"t1", "G", {"x", "y"}}},
                              {0, 0, 0.5, 0.5});
  REQUIRE_THROWS_AS(correlated(zero, Event{"t0", "F", {"u"}}, Event{"t1", "G", {"x"}}),
                    ZeroConditionProbability);
}

TEST_CASE("ideal cause requires perfect two-way conditionals", "[causality]") {
  const ProbabilityTable t = steering_table();
  const IdealCauseCheck ic = ideal_cause(t, event("t0", "E", "e1"), event("t1", "F", "f1"));
  REQUIRE(ic.ideal);
  REQUIRE_THAT(ic.g_given_f, WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(ic.f_given_g, WithinAbs(1.0, 1e-15));

  // An 80% correlation is not an ideal cause.
  const ProbabilityTable soft({Variable{"t0", "F", {"u", "v"}},
                               Variable{"t1", "G", {"x", "y"}}},
                              {0.4, 0.1, 0.1, 0.4});
  REQUIRE_FALSE(ideal_cause(soft, event("t0", "F", "u"), event("t1", "G", "x")).ideal);

  // The cause must come first.
  REQUIRE_THROWS_AS(ideal_cause(t, event("t1", "F", "f1"), event("t0", "E", "e1")),
                    TemporalOrderError);
  REQUIRE_THROWS_AS(ideal_cause(t, event("t0", "E", "e1"), event("t0", "E", "e2")),
                    TemporalOrderError);
}

TEST_CASE("events resolve by unique name when the time is omitted", "[causality]") {
  const ProbabilityTable t = steering_table();
  const IdealCauseCheck ic = ideal_cause(t, Event{"", "E", {"e1"}}, Event{"", "G", {"g1"}});
  REQUIRE(ic.ideal);
  REQUIRE_THROWS_AS(ideal_cause(t, Event{"", "nope", {"e1"}}, Event{"", "G", {"g1"}}),
                    UnknownEvent);
  REQUIRE_THROWS_AS(ideal_cause(t, Event{"t0", "E", {}}, Event{"", "G", {"g1"}}), UnknownEvent);
}

TEST_CASE("common cause search scans candidate outcomes in order", "[causality]") {
  const ProbabilityTable t = steering_table();
  const CommonCauseResult r =
      find_common_cause(t, event("t1", "F", "f1"), event("t2", "G", "g1"), "t0");
  REQUIRE(r.cause.has_value());
  REQUIRE(r.cause->variable == "E");
  REQUIRE(r.cause->outcomes.front() == "e1");
  REQUIRE(r.verdict.relation == Relation::common_cause_found);
  REQUIRE(r.verdict.witnesses.size() == 4);
  for (const auto& w : r.verdict.witnesses) REQUIRE_THAT(w.second, WithinAbs(1.0, 1e-15));
  REQUIRE(r.qualifiers.size() == 1);

  // Candidate time must precede both effects.
  REQUIRE_THROWS_AS(
      find_common_cause(t, event("t0", "E", "e1"), event("t2", "G", "g1"), "t1"),
      TemporalOrderError);

  // A mixing table has no ideal common cause.
  const ProbabilityTable fuzzy({Variable{"t0", "E", {"e1", "e2"}},
                                Variable{"t1", "F", {"f1", "f2"}},
                                Variable{"t2", "G", {"g1", "g2"}}},
                               {0.2, 0.05, 0.05, 0.2, 0.2, 0.05, 0.05, 0.2});
  const CommonCauseResult none =
      find_common_cause(fuzzy, event("t1", "F", "f1"), event("t2", "G", "g1"), "t0");
  REQUIRE_FALSE(none.cause.has_value());
  REQUIRE(none.qualifiers.empty());
}

TEST_CASE("single framework rule is enforced on tables", "[causality]") {
  const TimeGrid grid({"t0", "t1"});
  const PDI z = make_pdi({spin_projector(SpinDirection::z(), +1),
                          spin_projector(SpinDirection::z(), -1)});
  const PDI x = make_pdi({spin_projector(SpinDirection::x(), +1),
                          spin_projector(SpinDirection::x(), -1)});
  const Dynamics dyn = Dynamics::trivial(2, 1);
  const StateVector psi = spin_state(SpinDirection::normalized(1, 0, 1), +1);

  const ProbabilityTable tz =
      framework_distribution(Framework("Z", grid, {trivial_pdi(2), z}), psi, dyn);
  const ProbabilityTable tz2 =
      framework_distribution(Framework("Z2", grid, {z, z}), psi, dyn);
  const ProbabilityTable tx =
      framework_distribution(Framework("X", grid, {trivial_pdi(2), x}), psi, dyn);

  REQUIRE_NOTHROW(guard_single_framework({&tz, &tz2}));
  REQUIRE_THROWS_AS(guard_single_framework({&tz, &tx}), SingleFrameworkViolation);
  try {
    guard_single_framework({&tz, &tx});
  } catch (const SingleFrameworkViolation& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("Z") != std::string::npos);
    REQUIRE(msg.find("X") != std::string::npos);
  }

  const ProbabilityTable bare({Variable{"t0", "v", {"a", "b"}}}, {0.5, 0.5});
  REQUIRE_THROWS_AS(guard_single_framework({&tz, &bare}), MissingSourceFramework);
}

TEST_CASE("verdicts agree with the brute-force oracle", "[causality][oracle]") {
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const ProbabilityTable t = random_table(rng);
    const Event f{"t0", "A", {"a0"}};
    const Event g{"t2", "C", {"c1"}};

    const IndependenceCheck ind = independent(t, f, g, 0.02);
    REQUIRE(ind.independent ==
            testutil::oracle_independent(t, testutil::as_oracle(f), testutil::as_oracle(g), 0.02));
    REQUIRE_THAT(testutil::oracle_mass(t, {testutil::as_oracle(f)}),
                 WithinAbs(ind.p_f, 1e-12));

    const IdealCauseCheck ic = ideal_cause(t, f, g, 0.02);
    REQUIRE(ic.ideal == testutil::oracle_ideal_cause(t, testutil::as_oracle(f),
                                                     testutil::as_oracle(g), 0.02));

    const CommonCauseResult cc =
        find_common_cause(t, Event{"t1", "B", {"b0"}}, g, "t0", 0.02);
    const std::string want = testutil::oracle_common_cause(
        t, "t0", "A", testutil::OracleEvent{"t1", "B", {"b0"}}, testutil::as_oracle(g), 0.02);
    if (cc.cause.has_value())
      REQUIRE(cc.cause->outcomes.front() == want);
    else
      REQUIRE(want.empty());
  }

  // And on the engineered table, where a cause does exist.
  const ProbabilityTable t = steering_table();
  REQUIRE(testutil::oracle_common_cause(t, "t0", "E", testutil::OracleEvent{"t1", "F", {"f1"}},
                                        testutil::OracleEvent{"t2", "G", {"g1"}},
                                        1e-9) == "e1");
}

TEST_CASE("event masses match the oracle", "[causality][oracle]") {
  Rng rng(67);
  for (int trial = 0; trial < 25; ++trial) {
    const ProbabilityTable t = random_table(rng);
    const std::vector<Assignment> cell{Assignment{"t0", "A", "a1"},
                                       Assignment{"t1", "B", "b2"}};
    const double lib = probability_of(t, cell);
    const double oracle = testutil::oracle_mass(
        t, {testutil::OracleEvent{"t0", "A", {"a1"}}, testutil::OracleEvent{"t1", "B", {"b2"}}});
    REQUIRE_THAT(lib, WithinAbs(oracle, 1e-13));
  }
}
