// Copyright 2026 The Oddball Authors.
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

#ifndef ODDBALL_ERROR_HPP_
#define ODDBALL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace oddball {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range probability values.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A distribution whose mass is further than the tolerance from 1.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Residual mass that cannot be placed below the smallest stored probability.
class InvalidTruncationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A well-formed record that breaks a data invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string sentence_id, std::string field,
                  const std::string& what)
      : Error("sentence '" + sentence_id + "', field '" + field + "': " +
              what),
        sentence_id_(std::move(sentence_id)),
        field_(std::move(field)) {}

  const std::string& sentence_id() const noexcept { return sentence_id_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string sentence_id_;
  std::string field_;
};

/// Dataset tokens that cannot be located in the dumped sentence text.
/// The span is in code points of the original text.
class AlignmentError : public Error {
 public:
  AlignmentError(std::size_t token_index, std::size_t span_start,
                 std::size_t span_end, const std::string& what)
      : Error(what),
        token_index_(token_index),
        span_start_(span_start),
        span_end_(span_end) {}

  std::size_t token_index() const noexcept { return token_index_; }
  std::size_t span_start() const noexcept { return span_start_; }
  std::size_t span_end() const noexcept { return span_end_; }

 private:
  std::size_t token_index_;
  std::size_t span_start_;
  std::size_t span_end_;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

class CombinationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMethodError : public Error {
 public:
  using Error::Error;
};

class InvalidThresholdError : public Error {
 public:
  using Error::Error;
};

/// Evaluation inputs that do not line up (lengths, empty grids).
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace oddball

#endif  // ODDBALL_ERROR_HPP_
