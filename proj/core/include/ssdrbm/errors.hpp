// Copyright 2026 The ssdrbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSDRBM_ERRORS_HPP
#define SSDRBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ssdrbm {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition (domain, range, sign) does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Factorisation failure: non-SPD matrix, NaN produced, and so on.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// SVD iteration did not converge.
class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Exact enumeration requested beyond the supported number of units.
class OracleScaleError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (bad key, value or combination).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable dataset / checkpoint file.
class DataError : public Error {
 public:
  enum class Kind {
    io,
    bad_magic,
    bad_header,
    truncated,
    trailing_bytes,
    dimension_overflow,
    bad_dimensions,
    domain_violation,
    non_finite,
  };

  DataError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace ssdrbm

#endif  // SSDRBM_ERRORS_HPP
