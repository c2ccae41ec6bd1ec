// Copyright 2026 The hazchain authors
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

#ifndef HAZCHAIN_ERRORS_HPP_
#define HAZCHAIN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hazchain {

// Bad user input: unreadable files, malformed CSV/JSON, missing required
// fields. Maps to CLI exit code 2.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Semantically invalid model: negative rates, probabilities outside [0,1],
// absorbing initial state. Maps to CLI exit code 3.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside a solver (uniformization step cap exceeded,
// calibration bracket not found). Maps to CLI exit code 4.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hazchain

#endif  // HAZCHAIN_ERRORS_HPP_
