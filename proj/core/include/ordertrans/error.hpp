// Copyright 2026 The ordertrans Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordertrans {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or arguments supplied by the caller (CLI exit code 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be processed (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class UnknownEventType : public DataError {
 public:
  explicit UnknownEventType(std::string wire)
      : DataError("unknown event type '" + wire + "'"), wire_(std::move(wire)) {}
  const std::string& wire() const noexcept { return wire_; }

 private:
  std::string wire_;
};

class TooManyMalformedRows : public DataError {
 public:
  TooManyMalformedRows(std::size_t count, std::size_t line, const std::string& reason)
      : DataError("aborting after " + std::to_string(count) + " malformed rows (last at line " +
                  std::to_string(line) + ": " + reason + ")") {}
};

class OutOfOrderTimestamp : public DataError {
 public:
  OutOfOrderTimestamp(const std::string& ticker, const std::string& date, std::size_t line)
      : DataError("timestamp goes backwards for " + ticker + " on " + date + " at line " +
                  std::to_string(line)),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SequenceTooShort : public DataError {
 public:
  SequenceTooShort(std::size_t length, std::size_t required)
      : DataError("sequence of length " + std::to_string(length) + " is too short (need > " +
                  std::to_string(required) + ")") {}
};

class DegenerateTable : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCounts : public DataError {
 public:
  EmptyCounts() : DataError("count matrix has no transitions") {}
};

class EmptyInput : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class AbsoluteContinuityViolation : public DataError {
 public:
  explicit AbsoluteContinuityViolation(std::size_t index)
      : DataError("u[" + std::to_string(index) + "] > 0 but v[" + std::to_string(index) +
                  "] = 0"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class LengthMismatch : public DataError {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : DataError("distribution lengths differ: " + std::to_string(a) + " vs " +
                  std::to_string(b)) {}
};

class InvalidDistribution : public DataError {
 public:
  using DataError::DataError;
};

class InvalidTransitionMatrix : public DataError {
 public:
  using DataError::DataError;
};

class TooFewObservations : public DataError {
 public:
  TooFewObservations(std::size_t have, std::size_t need)
      : DataError("need at least " + std::to_string(need) + " observations, have " +
                  std::to_string(have)) {}
};

class ConvergenceFailure : public DataError {
 public:
  using DataError::DataError;
};

class KTooLarge : public ValidationError {
 public:
  KTooLarge(std::size_t k, std::size_t points)
      : ValidationError("k = " + std::to_string(k) + " requires more than " +
                        std::to_string(k) + " points, have " + std::to_string(points)) {}
};

class ZoneTooShort : public DataError {
 public:
  ZoneTooShort(std::size_t events, long long capacity_ms)
      : DataError(std::to_string(events) + " events do not fit in a zone of " +
                  std::to_string(capacity_ms) + " ms") {}
};

/// Internal consistency check failed; indicates a bug or numerically hopeless input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordertrans
