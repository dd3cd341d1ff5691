/*
 * Copyright 2026 The qsg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace qsg {

/// Malformed input, reported with the 1-based line where it was detected.
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Structural violation of an arena, lasso or strategy invariant.
class ModelError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration cap was hit. Carries what ran out and how much was needed
/// (when known) so that callers can report it instead of failing silently.
class BudgetExceeded : public std::runtime_error {
  public:
    BudgetExceeded(std::string resource, std::uint64_t cap, std::string required = {})
      : std::runtime_error(resource + " exceeded cap " + std::to_string(cap) +
                           (required.empty() ? std::string() : " (required: " + required + ")")),
        resource_(std::move(resource)), cap_(cap), required_(std::move(required)) {}
    const std::string& resource() const { return resource_; }
    std::uint64_t cap() const { return cap_; }
    const std::string& required() const { return required_; }

  private:
    std::string resource_;
    std::uint64_t cap_;
    std::string required_;
};

/// Enumeration caps. QSG_BUDGET, when set to a positive integer, replaces
/// every cap at once.
struct Budget {
    std::uint64_t extStates = 1u << 16;
    std::uint64_t cycles = 1000000;
    std::uint64_t strategies = 1000000;
    std::uint64_t cells = 100000;
    std::uint64_t gapSummaries = 2000000;

    static Budget defaults() {
      Budget b;
      if (const char* env = std::getenv("QSG_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
          b.extStates = b.cycles = b.strategies = b.cells = b.gapSummaries = v;
      }
      return b;
    }
};

}  // namespace qsg
