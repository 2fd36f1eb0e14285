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

namespace qhist {

/// Projector algebra: idempotence, hermiticity, orthogonality, completeness,
/// unitarity of dynamics. Deviations beyond this indicate a construction bug,
/// not round-off: every scenario matrix is built from ±1, ±1/2, 1/√2.
inline constexpr double kTauProj = 1e-10;

/// Consistency (medium decoherence): |D(h1,h2)| on off-diagonal history pairs.
inline constexpr double kTauCons = 1e-10;

/// Probability comparisons, normalization of tables and distributions.
inline constexpr double kTauProb = 1e-9;

/// State-vector normalization.
inline constexpr double kTauNorm = 1e-10;

/**
 * Tolerance bundle threaded through scenario-level entry points.
 *
 * Low-level operations take a single tolerance argument defaulting to the
 * constants above; bundles exist so a runner can override proj/cons/prob
 * jointly without touching call sites.
 */
struct Tolerances {
  double proj = kTauProj;
  double cons = kTauCons;
  double prob = kTauProb;
  double norm = kTauNorm;

  /// One value for proj, cons and prob at once (norm keeps its default).
  static Tolerances uniform(double tau) {
    Tolerances t;
    t.proj = tau;
    t.cons = tau;
    t.prob = tau;
    return t;
  }
};

}  // namespace qhist
