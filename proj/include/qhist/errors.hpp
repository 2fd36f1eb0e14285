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

#include <stdexcept>
#include <string>

namespace qhist {

/** Base class for every error raised by the library. */
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- linalg --------------------------------------------------------------

struct DimensionError : Error {
  using Error::Error;
};

struct NonFiniteEntry : Error {
  using Error::Error;
};

struct NormalizationError : Error {
  using Error::Error;
};

// -- projectors ----------------------------------------------------------

/** Candidate operator fails P·P == P; carries the max entrywise deviation. */
struct NotIdempotent : Error {
  double deviation;
  NotIdempotent(const std::string& msg, double dev) : Error(msg), deviation(dev) {}
};

/** Candidate operator fails P† == P; carries the max entrywise deviation. */
struct NotHermitian : Error {
  double deviation;
  NotHermitian(const std::string& msg, double dev) : Error(msg), deviation(dev) {}
};

struct NonUnitDirection : Error {
  using Error::Error;
};

struct IncompletePDI : Error {
  using Error::Error;
};

struct NonOrthogonal : Error {
  using Error::Error;
};

struct DuplicateLabel : Error {
  using Error::Error;
};

struct IncompatiblePDIs : Error {
  using Error::Error;
};

// -- histories -----------------------------------------------------------

struct NotUnitary : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

struct InconsistentFramework : Error {
  double worst_off_diagonal;
  InconsistentFramework(const std::string& msg, double worst)
      : Error(msg), worst_off_diagonal(worst) {}
};

struct ZeroConditionProbability : Error {
  using Error::Error;
};

// -- causality -----------------------------------------------------------

struct UnknownEvent : Error {
  using Error::Error;
};

struct TemporalOrderError : Error {
  using Error::Error;
};

struct SingleFrameworkViolation : Error {
  using Error::Error;
};

/** A cross-table query was handed a table with no source framework attached. */
struct MissingSourceFramework : Error {
  using Error::Error;
};

// -- eprb / classical_hv ---------------------------------------------------

struct SameOwner : Error {
  using Error::Error;
};

struct OwnerMismatch : Error {
  using Error::Error;
};

struct SettingsMismatch : Error {
  using Error::Error;
};

struct UnknownSetting : Error {
  using Error::Error;
};

// -- cli -------------------------------------------------------------------

struct ParseError : Error {
  using Error::Error;
};

}  // namespace qhist
