// Copyright 2026 The quasiwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace quasiwit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose sizes do not agree (matrix dimensions, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix or parameter set that violates a state invariant.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Ill-conditioning, quadrature non-convergence or insufficient truncation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quasiwit
