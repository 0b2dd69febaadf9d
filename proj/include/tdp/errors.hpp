// Copyright 2026 The tdp Authors
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

#ifndef TDP_ERRORS_HPP_
#define TDP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tdp {

// Root of every error raised by the library. Each subclass corresponds to one
// failure category so callers (and tests) can catch precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TDP_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

TDP_DEFINE_ERROR(NotFound);
TDP_DEFINE_ERROR(IndexError);
TDP_DEFINE_ERROR(InvalidGenotype);
TDP_DEFINE_ERROR(InvalidPressings);
TDP_DEFINE_ERROR(InvalidMove);
TDP_DEFINE_ERROR(InvalidParameter);
TDP_DEFINE_ERROR(InvalidInput);
TDP_DEFINE_ERROR(BudgetError);
TDP_DEFINE_ERROR(SpecError);
TDP_DEFINE_ERROR(EmptyPool);
TDP_DEFINE_ERROR(EmptyInput);

#undef TDP_DEFINE_ERROR

// Text could not be parsed. `line` and `column` are 1-based, 0 when the
// failure is not tied to a position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string field,
             int column = 0)
      : Error(what), line_(line), column_(column), field_(std::move(field)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  int column_;
  std::string field_;
};

// A syntactically valid document violated a domain invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace tdp

#endif  // TDP_ERRORS_HPP_
