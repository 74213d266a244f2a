// Copyright 2026 The RRA Authors.
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

#ifndef RRA_ERRORS_H_
#define RRA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rra {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument is outside the domain the operation accepts.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Numeric failures abort training (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

// The attention weights sum to (almost) zero, so they cannot be normalized.
class DegenerateAttentionError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Input data is missing or malformed (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public DataError {
 public:
  using DataError::DataError;
};

class TruncatedError : public DataError {
 public:
  using DataError::DataError;
};

class CountMismatchError : public DataError {
 public:
  using DataError::DataError;
};

// Checkpoint container errors.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class CorruptError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Attention export requested for a run without an attention gate.
class NoAttentionError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace rra

#endif  // RRA_ERRORS_H_
