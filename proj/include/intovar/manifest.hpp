// Copyright 2026 The Intovar Authors.
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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace intovar {

inline constexpr const char* kVersion = "0.1.0";

// One manifest.json per artifact directory: command, config snapshot, seed,
// version, outputs, wall clock. The wall-clock field is the only
// non-reproducible content.
void write_run_manifest(const std::filesystem::path& dir,
                        const std::string& command,
                        const nlohmann::json& config, std::uint64_t seed,
                        const std::vector<std::string>& outputs,
                        double wall_clock_seconds);

}  // namespace intovar
