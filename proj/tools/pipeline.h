// Copyright 2026 The mmart Authors.
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

#ifndef MMART_TOOLS_PIPELINE_H_
#define MMART_TOOLS_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "config.h"

namespace mmart::cli {

// Stage names accepted by run_stage, in pipeline order.
const std::vector<std::string>& stage_names();

struct StageArgs {
  // query only
  std::string text;
  std::optional<std::string> attribute_value;
};

// Runs one stage against config.output_dir: takes the directory lock, checks
// that inputs recorded by earlier manifests are unchanged, writes artifacts
// and manifest_<stage>.json, and prints the stage's JSON result on `out`.
// Logs go to `log`. Errors propagate as mmart::Error subclasses.
void run_stage(std::string_view stage, const Config& config, const StageArgs& args,
               std::ostream& out, std::ostream& log);

// Hex SHA-256 of a file's bytes. Throws DataError when unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace mmart::cli

#endif  // MMART_TOOLS_PIPELINE_H_
