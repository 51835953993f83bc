/*
 * Copyright 2026 The maxcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAXCON_ERRORS_HPP_
#define MAXCON_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace maxcon {

// Input data carries no usable signal (zero spread, empty survivor set, ...).
class DegenerateDataError : public std::runtime_error {
 public:
  explicit DegenerateDataError(const std::string& what)
      : std::runtime_error(what) {}
};

// A configured enumeration/size guard was exceeded.
class LimitExceededError : public std::runtime_error {
 public:
  explicit LimitExceededError(const std::string& what)
      : std::runtime_error(what) {}
};

// A convex subproblem failed to reach optimality (pivot cap, numerics).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text input; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace maxcon

#endif  // MAXCON_ERRORS_HPP_
