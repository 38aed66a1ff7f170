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

#include <filesystem>
#include <string_view>

#include "svoctl/metrics.hpp"
#include "svoctl/scenario.hpp"

namespace svoctl {

/// A scenario plus the metrics window, as described by one config document.
struct RunConfig {
  Scenario scenario;
  Window window{30.0, 60.0};
};

/// Parses a scenario config (JSON syntax). Every section is optional and
/// defaults to the five-vehicle preset. Relative lead-profile CSV paths
/// resolve against `base_dir`. Throws ConfigError on malformed or invalid
/// input.
RunConfig parse_config(std::string_view text,
                       const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

}  // namespace svoctl
