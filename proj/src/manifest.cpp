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

#include "intovar/manifest.hpp"

#include <fstream>

#include "intovar/errors.hpp"
#include "intovar/kernels.hpp"

namespace intovar {

void write_run_manifest(const std::filesystem::path& dir,
                        const std::string& command,
                        const nlohmann::json& config, std::uint64_t seed,
                        const std::vector<std::string>& outputs,
                        double wall_clock_seconds) {
  std::filesystem::create_directories(dir);
  const nlohmann::json j{{"command", command},
                         {"config", config},
                         {"seed", seed},
                         {"version", kVersion},
                         {"kernels", kernels::active_backend()},
                         {"outputs", outputs},
                         {"wall_clock_seconds", wall_clock_seconds}};
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out)
    throw DataError("write_run_manifest: cannot write in " + dir.string());
  out << j.dump(2) << "\n";
}

}  // namespace intovar
