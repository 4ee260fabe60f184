// Copyright 2026 The DFA Workbench Authors
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

namespace dfa {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user-supplied configuration (unknown cipher, invalid flag values, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent data (corrupt CSV rows, model files, fixtures).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UniverseMismatchError : public Error {
 public:
  using Error::Error;
};

class MonomialBudgetError : public Error {
 public:
  using Error::Error;
};

class MissingAssignmentError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised when a symbolic run needs a value that only exists concretely,
/// e.g. ATOM's key-filter counter computed from a symbolic LFSR.
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

class InconsistentSystemError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (e.g. a harvested equation that the
/// simulated ground truth does not satisfy).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfa
