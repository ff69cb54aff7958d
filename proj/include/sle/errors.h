// Copyright 2026 The SLE Authors
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

#ifndef SLE_ERRORS_H_
#define SLE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sle {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(Format(message, line, column)),
        message_(message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& bare_message() const { return message_; }

 private:
  static std::string Format(const std::string& message, int line,
                            int column) {
    if (line <= 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           message;
  }

  std::string message_;
  int line_;
  int column_;
};

// An element type outside {bf16, f16, f32, f64, i1, i8, i16, i32, i64}.
class UnsupportedDtypeError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class UnsupportedLayoutError : public Error {
 public:
  using Error::Error;
};

// Oracle simulator invoked outside its scale limits.
class GuardError : public Error {
 public:
  using Error::Error;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

class MissingRegimeError : public Error {
 public:
  using Error::Error;
};

class MissingCalibrationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Model or calibration file that cannot be read back.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sle

#endif  // SLE_ERRORS_H_
