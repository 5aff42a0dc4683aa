// Copyright 2026 The avoidlab Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace avoidlab {

/// Bad input: malformed text, arity mismatch, parameter outside its domain.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration budget was exceeded. Never a silent truncation.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string &what,
                         std::optional<std::uint64_t> best_upper_bound = std::nullopt)
      : std::runtime_error(what), best_upper_bound_(best_upper_bound) {}

  /// For MCSP budget failures: the smallest circuit size known to suffice.
  std::optional<std::uint64_t> best_upper_bound() const { return best_upper_bound_; }

 private:
  std::optional<std::uint64_t> best_upper_bound_;
};

}  // namespace avoidlab
