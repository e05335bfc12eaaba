// Copyright 2026 The bilevel Authors
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

#ifndef BILEVEL_ERRORS_HPP_
#define BILEVEL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bilevel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector or matrix shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An enumeration or search exceeded its configured cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// An internal postcondition failed. These indicate a bug or a broken
// theoretical guarantee and are never expected on valid input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// A polyhedral operation that requires a bounded region got an unbounded one.
class UnboundedSystemError : public Error {
 public:
  using Error::Error;
};

// The closed linear relaxation of a problem has no point.
class InfeasibleRelaxation : public Error {
 public:
  using Error::Error;
};

// Rejected input data. `code()` is a stable machine-readable identifier such
// as "shape-mismatch" or "unbounded-P".
class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& what)
      : Error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace bilevel

#endif  // BILEVEL_ERRORS_HPP_
