// Copyright 2026 The Authors.
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

#ifndef TSM_ERRORS_HPP_
#define TSM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tsm {

// Input that violates a documented invariant (bad file, bad instance).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized input; the message names the offending field.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An operation was asked to do something its configuration does not allow,
// e.g. an edge-weight policy on an instance without edge weights.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive oracles refuse inputs above their enumeration limits.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (q outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace tsm

#endif  // TSM_ERRORS_HPP_
