// Copyright 2026 The qtoken Authors
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

#ifndef QTOKEN_ERROR_HPP
#define QTOKEN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtoken {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorCode : int {
  kRuntime = 1,
  kUsage = 2,
  kData = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A caller violated a documented precondition (bad argument, bad option).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::kUsage, what) {}
};

/// Input data is well-formed but physically or logically invalid.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorCode::kData, what) {}
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::kData, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A numerical fit failed (degenerate input or no convergence).
class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ErrorCode::kRuntime, what) {}
};

}  // namespace qtoken

#endif  // QTOKEN_ERROR_HPP
