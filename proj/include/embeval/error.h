// Copyright 2026 The embeval Authors.
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

#ifndef EMBEVAL_ERROR_H_
#define EMBEVAL_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embeval {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based line number when known (0 if not).
class FormatError : public Error {
 public:
  FormatError(const std::string &source, std::size_t line,
              const std::string &message)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Precondition on an argument violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An embedding provider answered with something that breaks the record
// protocol (wrong dimension, missing tokens, non-zero exit).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace embeval

#endif  // EMBEVAL_ERROR_H_
