/*
 * Copyright 2026 The cstk Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CSTK_ERRORS_H_
#define CSTK_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cstk {

// Malformed input; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Unknown name in a fixed table (attribute, cause, strategy, learner).
class LookupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model was applied to data whose attribute schema differs.
class SchemaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cstk

#endif  // CSTK_ERRORS_H_
