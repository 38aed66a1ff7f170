// Copyright 2026 The svoctl Authors
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

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace svoctl {

/// Raised when a simulated gap closes to zero or below. A collision means the
/// scenario is mis-specified and must be surfaced, not absorbed into a large
/// deceleration.
class CollisionError : public std::runtime_error {
 public:
  explicit CollisionError(const std::string& what,
                          double time = std::numeric_limits<double>::quiet_NaN(),
                          int vehicle = -1)
      : std::runtime_error(what), time_(time), vehicle_(vehicle) {}

  /// Simulation time of the failure, NaN when unknown.
  double time() const { return time_; }
  /// 1-based platoon index of the colliding vehicle, -1 when unknown.
  int vehicle() const { return vehicle_; }

 private:
  double time_;
  int vehicle_;
};

/// Raised by the lead-profile CSV reader; carries the 1-based line number.
class ProfileParseError : public std::runtime_error {
 public:
  ProfileParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a scenario config document fails to parse or validate.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace svoctl
