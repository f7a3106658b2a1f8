// Copyright 2026 The Retell Authors.
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

namespace retell {

// Base class for every failure the library reports. Command-line drivers map
// IoError to exit status 1 and everything else to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (XML, lexicon table, CSV). Carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        message_(what),
        line_(line),
        column_(column) {}

  // The message without the position prefix.
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

// Well-formed input that violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A cross-reference (plan proposition, tree id) that does not resolve.
class ReferenceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An "in order to" site whose shape cannot be de-aggregated.
class MalformedContingencyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A tree path or nesting that does not match the expected structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class RealizationError : public Error {
 public:
  using Error::Error;
};

class InflectionError : public RealizationError {
 public:
  using RealizationError::RealizationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace retell
