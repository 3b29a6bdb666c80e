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

#include "config.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "mmart/errors.h"

namespace mmart::cli {
namespace {

struct Default {
  const char* key;
  const char* value;
  bool is_path = false;
};

// clang-format off
const Default kDefaults[] = {
    {"seed", "0"},
    {"output_dir", "", true},
    {"corpus.train", "", true},
    {"corpus.val", "", true},
    {"corpus.test", "", true},
    {"corpus.delimiter", "tab"},
    {"features.visual", "", true},
    {"features.context", "", true},
    {"mode", "att_contextnet"},
    {"attribute", "author"},
    {"vocab.comment_min_count", "10"},
    {"vocab.count_mode", "total"},
    {"graph.attributes", "type,school,timeframe,author"},
    {"node2vec.p", "1"},
    {"node2vec.q", "1"},
    {"node2vec.walks_per_node", "10"},
    {"node2vec.walk_length", "40"},
    {"node2vec.window", "5"},
    {"node2vec.negatives", "5"},
    {"node2vec.epochs", "5"},
    {"node2vec.learning_rate", "0.025"},
    {"node2vec.min_learning_rate", "0.0001"},
    {"node2vec.dim", "128"},
    {"node2vec.threads", "1"},
    {"contextnet.lambda_c", "1"},
    {"contextnet.lambda_e", "1"},
    {"contextnet.epochs", "100"},
    {"contextnet.batch", "32"},
    {"contextnet.lr", "0.001"},
    {"contextnet.classifier_bias_init", "1"},
    {"projection.space_dim", "128"},
    {"projection.batch", "32"},
    {"projection.lr", "0.0001"},
    {"projection.epochs", "10"},
    {"projection.margin", "0.1"},
    {"projection.negatives", "0"},
    {"projection.select_best_val", "true"},
    {"eval.split", "test"},
    {"ten_choice.mode", "easy"},
    {"ten_choice.trials", "1000"},
    {"query.top_k", "10"},
    {"synth.paintings", "64"},
    {"synth.types", "4"},
    {"synth.authors", "8"},
    {"synth.schools", "3"},
    {"synth.timeframes", "4"},
    {"synth.val_fraction", "0"},
    {"synth.test_fraction", "0"},
    {"synth.author_mention_rate", "1"},
    {"synth.filler_words", "4"},
    {"synth.features.dim", "64"},
    {"synth.features.attribute", "type"},
    {"synth.features.noise_sigma", "0"},
    {"synth.features.identity_scale", "0"},
};
// clang-format on

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config::Config() {
  for (const auto& d : kDefaults) {
    values_[d.key] = d.value;
    is_path_[d.key] = d.is_path;
  }
}

void Config::set(std::string_view key, std::string value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown config key: " + std::string(key));
  it->second = std::move(value);
}

void Config::merge_text(std::string_view text, const std::filesystem::path& base_dir) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    const auto p = is_path_.find(key);
    if (p != is_path_.end() && p->second && !value.empty() && !base_dir.empty() &&
        std::filesystem::path(value).is_relative()) {
      value = (base_dir / value).lexically_normal().string();
    }
    set(key, std::move(value));
  }
}

void Config::merge_file(const std::filesystem::path& path) {
  const std::string text = [&] {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (f == nullptr) throw UsageError("missing input: config file " + path.string());
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, n);
    std::fclose(f);
    return out;
  }();
  merge_text(text, path.parent_path());
}

void Config::set_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw UsageError("--set expects key=value, got " + std::string(assignment));
  }
  set(trim(assignment.substr(0, eq)), std::string(trim(assignment.substr(eq + 1))));
}

const std::string& Config::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("unknown config key: " + std::string(key));
  return it->second;
}

std::string Config::path(std::string_view key) const {
  const std::string& v = get(key);
  if (v.empty()) throw UsageError("missing input: config key " + std::string(key) + " is not set");
  return v;
}

std::uint64_t Config::get_u64(std::string_view key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw UsageError("config key " + std::string(key) + " expects an unsigned integer, got '" +
                     v + "'");
  }
  return out;
}

double Config::get_double(std::string_view key) const {
  const std::string& v = get(key);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw UsageError("config key " + std::string(key) + " expects a number, got '" + v + "'");
  }
  return out;
}

bool Config::get_bool(std::string_view key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key " + std::string(key) + " expects true or false, got '" + v + "'");
}

std::vector<std::string> Config::get_list(std::string_view key) const {
  std::vector<std::string> out;
  std::string_view rest = get(key);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

Config load_config(const std::optional<std::filesystem::path>& file,
                   const std::vector<std::string>& overrides,
                   const std::optional<std::string>& env_seed) {
  Config config;
  if (file) config.merge_file(*file);
  if (env_seed) config.set("seed", *env_seed);
  for (const auto& o : overrides) config.set_override(o);
  config.get_u64("seed");  // validate early
  return config;
}

}  // namespace mmart::cli
