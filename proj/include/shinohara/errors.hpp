// Copyright 2026 The Shinohara RPS Authors. All rights reserved.
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

#ifndef SHINOHARA_ERRORS_HPP_
#define SHINOHARA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace shinohara {

// Raised when a caller breaks a documented precondition (malformed action
// maps, states that are already terminal, unknown players).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when an exact computation would exceed its enumeration limits.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// Raised when a serialized profile or request body cannot be interpreted.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shinohara

#endif  // SHINOHARA_ERRORS_HPP_
