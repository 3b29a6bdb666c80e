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

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.h"
#include "mmart/errors.h"
#include "pipeline.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int fail(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-modal painting retrieval pipeline"};
  app.require_subcommand(1, 1);

  std::optional<std::string> config_file;
  std::vector<std::string> overrides;
  std::optional<std::string> output_dir;
  mmart::cli::StageArgs args;
  std::optional<std::size_t> top_k;

  for (const auto& name : mmart::cli::stage_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_file, "Flat key = value config file");
    sub->add_option("-s,--set", overrides, "Override a config key (key=value), repeatable");
    sub->add_option("-o,--out", output_dir, "Output directory (overrides output_dir)");
    if (name == "query") {
      sub->add_option("-t,--text", args.text, "Free-text query")->required();
      sub->add_option("-a,--attribute-value", args.attribute_value,
                      "Attribute value appended to the query");
      sub->add_option("-k,--top-k", top_k, "Number of results");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    if (const auto nl = message.find('\n'); nl != std::string::npos) message.resize(nl);
    return fail(kExitUsage, message);
  }
  const std::string stage = app.get_subcommands().front()->get_name();

  try {
    if (output_dir) overrides.push_back("output_dir=" + *output_dir);
    if (top_k) overrides.push_back("query.top_k=" + std::to_string(*top_k));
    std::optional<std::string> env_seed;
    if (const char* s = std::getenv("MMA_SEED"); s != nullptr && *s != '\0') env_seed = s;
    std::optional<std::filesystem::path> file;
    if (config_file) file = *config_file;
    const mmart::cli::Config config = mmart::cli::load_config(file, overrides, env_seed);
    mmart::cli::run_stage(stage, config, args, std::cout, std::cerr);
  } catch (const mmart::UsageError& e) {
    return fail(kExitUsage, e.what());
  } catch (const mmart::DataError& e) {
    return fail(kExitData, e.what());
  } catch (const mmart::NumericError& e) {
    return fail(kExitNumeric, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitData, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 0;
}
