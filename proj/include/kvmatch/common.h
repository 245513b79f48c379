// Copyright 2026 The kvmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kvmatch {

using VertexId = uint32_t;
constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();

/** Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Malformed text input. Carries the 1-based line number when known (0 otherwise). */
class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

/** An input violated a documented precondition (bad order, bad update batch, bad plan). */
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::vector<std::string> diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/** A guarded brute-force routine was asked to run beyond its size limit. */
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/** Stored adjacency data disagrees with an update (e.g. deleting an absent edge). */
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/** Backend failure for a particular key. */
class StoreError : public Error {
 public:
  StoreError(const std::string& what, VertexId key) : Error(what + " (key " + std::to_string(key) + ")"), key_(key) {}
  VertexId key() const { return key_; }

 private:
  VertexId key_;
};

}  // namespace kvmatch
