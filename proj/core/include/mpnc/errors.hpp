/*
 * Copyright 2026 The mpnc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpnc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Two pieces of state that must agree do not (e.g. an RTT that is not a
/// multiple of the round clock it is looked up in).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// The closed-form NC model was asked to evaluate outside R > 1/(1-p).
class RegimeError : public Error {
 public:
  RegimeError(const std::string& what, std::size_t path_index)
      : Error(what), path_index_(path_index) {}
  std::size_t path_index() const noexcept { return path_index_; }

 private:
  std::size_t path_index_;
};

/// Decoding was requested before enough degrees of freedom arrived.
class NotReadyError : public Error {
 public:
  NotReadyError(const std::string& what, std::size_t missing_dof)
      : Error(what), missing_dof_(missing_dof) {}
  std::size_t missing_dof() const noexcept { return missing_dof_; }

 private:
  std::size_t missing_dof_;
};

/// Trace parsing failures carry the 1-based line number of the offending row.
class TraceError : public Error {
 public:
  TraceError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public TraceError {
 public:
  using TraceError::TraceError;
};

class RangeError : public TraceError {
 public:
  using TraceError::TraceError;
};

class OrderError : public TraceError {
 public:
  using TraceError::TraceError;
};

}  // namespace mpnc
