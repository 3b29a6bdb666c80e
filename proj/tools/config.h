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
//
// Flat "key = value" pipeline configuration. Every key has a default;
// unknown keys are rejected. Precedence: --set overrides > MMA_SEED (seed
// only) > config file > defaults.

#ifndef MMART_TOOLS_CONFIG_H_
#define MMART_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmart::cli {

class Config {
 public:
  // All keys at their defaults.
  Config();

  // Parses "key = value" lines; '#' starts a comment line. Throws UsageError
  // on a malformed line or an unknown key. Relative paths given in the file
  // resolve against `base_dir`.
  void merge_text(std::string_view text, const std::filesystem::path& base_dir = {});
  void merge_file(const std::filesystem::path& path);
  // "key=value".
  void set_override(std::string_view assignment);
  void set(std::string_view key, std::string value);

  const std::string& get(std::string_view key) const;
  std::string path(std::string_view key) const;  // throws UsageError when empty
  std::uint64_t get_u64(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<std::string> get_list(std::string_view key) const;  // comma separated

  // Sorted "key=value\n" lines.
  std::string canonical() const;

  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, bool, std::less<>> is_path_;
};

// Full precedence chain. `env_seed` is the value of MMA_SEED when set.
Config load_config(const std::optional<std::filesystem::path>& file,
                   const std::vector<std::string>& overrides,
                   const std::optional<std::string>& env_seed);

}  // namespace mmart::cli

#endif  // MMART_TOOLS_CONFIG_H_
