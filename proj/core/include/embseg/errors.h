// Copyright 2026 The embseg Authors.
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

#ifndef EMBSEG_ERRORS_H_
#define EMBSEG_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embseg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed UTF-8 in a corpus file. `line()` is 1-based.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Unknown word or id.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Inputs that do not line up with each other (fragment counts, baseline
// tokens vs. raw text).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Gold and predicted corpora disagree on sentence count or characters.
class AlignmentError : public Error {
 public:
  AlignmentError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Artifact file that fails structural validation.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Values outside the domain of a numeric routine (e.g. cosine of a zero
// vector).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace embseg

#endif  // EMBSEG_ERRORS_H_
