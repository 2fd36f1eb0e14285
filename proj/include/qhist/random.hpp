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

#include <random>

#include "qhist/classical_hv.hpp"

// Deterministic sampling helpers. The distributions are mapped from the
// raw engine by hand because the standard <random> distribution adaptors
// are implementation-defined, and identical seeds must give identical
// reports on every platform.

namespace qhist {

using Rng = std::mt19937_64;

/// Uniform double in [0,1) with 53 random bits.
inline double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform direction on the unit sphere.
inline SpinDirection random_direction(Rng& rng) {
  const double z = 2 * uniform_double(rng) - 1;
  const double phi = 2 * 3.14159265358979323846 * uniform_double(rng);
  const double r = std::sqrt(std::max(0.0, 1 - z * z));
  return SpinDirection::normalized(r * std::cos(phi), r * std::sin(phi), z);
}

/// Uniform (Haar) pure qubit state.
inline StateVector random_qubit_state(Rng& rng) {
  while (true) {
    Complex c0{uniform_double(rng) - 0.5, uniform_double(rng) - 0.5};
    Complex c1{uniform_double(rng) - 0.5, uniform_double(rng) - 0.5};
    const double n = std::sqrt(std::norm(c0) + std::norm(c1));
    if (n < 1e-3) continue;  // too close to the origin to give a direction
    return StateVector(2, {c0 / n, c1 / n});
  }
}

/// Arbitrary mixed locally causal model: random weights and responses.
inline HiddenVariableModel random_model(Rng& rng, size_t lambdas,
                                        std::vector<std::string> alice_settings,
                                        std::vector<std::string> bob_settings) {
  std::vector<std::string> names;
  std::vector<double> weights;
  double sum = 0;
  for (size_t i = 0; i < lambdas; ++i) {
    names.push_back("l" + std::to_string(i));
    weights.push_back(uniform_double(rng) + 1e-9);
    sum += weights.back();
  }
  for (double& w : weights) w /= sum;
  std::vector<std::vector<double>> ap, bp;
  for (size_t i = 0; i < lambdas; ++i) {
    std::vector<double> a, b;
    for (size_t s = 0; s < alice_settings.size(); ++s) a.push_back(uniform_double(rng));
    for (size_t s = 0; s < bob_settings.size(); ++s) b.push_back(uniform_double(rng));
    ap.push_back(std::move(a));
    bp.push_back(std::move(b));
  }
  return HiddenVariableModel(std::move(names), std::move(weights), std::move(alice_settings),
                             std::move(bob_settings), std::move(ap), std::move(bp));
}

}  // namespace qhist
