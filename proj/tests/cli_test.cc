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

#include <gtest/gtest.h>

#include <sstream>

#include "cli_runner.h"
#include "config.h"
#include "json.hpp"
#include "mmart/errors.h"
#include "pipeline.h"
#include "test_util.h"

namespace mmart {
namespace {

using testing::read_file;
using testing::run_cli;
using testing::TempDir;
using testing::write_file;

const std::filesystem::path kCli = MMART_CLI_PATH;

constexpr const char* kSmallConfig = R"(# tiny end-to-end run
output_dir = run
corpus.train = data/train.tsv
corpus.val = data/val.tsv
features.visual = data/visual.mmaf
mode = att_contextnet
attribute = type
vocab.comment_min_count = 1
synth.paintings = 30
synth.types = 3
synth.authors = 4
synth.val_fraction = 0.4
synth.features.dim = 16
synth.features.noise_sigma = 0.2
node2vec.dim = 16
node2vec.walks_per_node = 2
node2vec.walk_length = 10
node2vec.window = 3
node2vec.epochs = 1
contextnet.epochs = 5
projection.space_dim = 16
projection.epochs = 3
projection.batch = 4
eval.split = val
ten_choice.trials = 50
seed = 3
)";

const std::vector<std::string> kTrainingStages = {
    "synth-corpus",     "synth-features",   "build-vocab", "build-graph", "train-node2vec",
    "train-contextnet", "train-projection", "evaluate",    "ten-choice"};

void run_all(const std::filesystem::path& dir) {
  write_file(dir / "small.conf", kSmallConfig);
  for (const auto& stage : kTrainingStages) {
    const auto r = run_cli(kCli, dir, stage + " -c small.conf");
    ASSERT_EQ(r.exit_code, 0) << stage << ": " << r.out;
  }
}

TEST(Cli, FullPipelineAndQuery) {
  TempDir dir;
  run_all(dir.path());
  for (const char* artifact :
       {"title_vocab.tsv", "comment_vocab.tsv", "labels_type.txt", "graph.tsv", "node2vec.mmaf",
        "node2vec_loss.csv", "contextnet.mmck", "contextnet_trace.csv", "projection.mmck",
        "projection_trace.csv", "report.json", "ten_choice.json", "manifest_evaluate.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "run" / artifact)) << artifact;
  }
  const auto report = nlohmann::json::parse(read_file(dir / "run" / "report.json"));
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0]["direction"], "text_to_image");
  EXPECT_EQ(report[1]["direction"], "image_to_text");

  const auto q = run_cli(kCli, dir.path(), "query -c small.conf -t 'portrait' -k 3");
  ASSERT_EQ(q.exit_code, 0) << q.out;
  const auto result = nlohmann::json::parse(read_file(dir / "run" / "query.json"));
  EXPECT_EQ(result["results"].size(), 3u);

  const auto manifest = nlohmann::json::parse(read_file(dir / "run" / "manifest_evaluate.json"));
  EXPECT_EQ(manifest["stage"], "evaluate");
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_FALSE(manifest["inputs"].empty());
}

TEST(Cli, DeterministicAcrossRuns) {
  TempDir a, b;
  run_all(a.path());
  run_all(b.path());
  for (const char* artifact : {"contextnet.mmck", "projection.mmck", "node2vec.mmaf",
                               "report.json", "ten_choice.json", "projection_trace.csv"}) {
    EXPECT_EQ(read_file(a / "run" / artifact), read_file(b / "run" / artifact)) << artifact;
  }
}

TEST(Cli, EvaluateWithoutModelIsDataError) {
  TempDir dir;
  write_file(dir / "small.conf", kSmallConfig);
  for (const char* stage : {"synth-corpus", "synth-features", "build-vocab"}) {
    ASSERT_EQ(run_cli(kCli, dir.path(), std::string(stage) + " -c small.conf").exit_code, 0);
  }
  const auto r = run_cli(kCli, dir.path(), "evaluate -c small.conf");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.out.find("missing model"), std::string::npos) << r.out;
}

TEST(Cli, StaleInputDetected) {
  TempDir dir;
  write_file(dir / "small.conf", kSmallConfig);
  for (const char* stage : {"synth-corpus", "synth-features", "build-vocab"}) {
    ASSERT_EQ(run_cli(kCli, dir.path(), std::string(stage) + " -c small.conf").exit_code, 0);
  }
  const std::string train = read_file(dir / "data" / "train.tsv") + "\n";
  write_file(dir / "data" / "train.tsv", train);
  const auto r = run_cli(kCli, dir.path(), "build-graph -c small.conf");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.out.find("stale input"), std::string::npos) << r.out;
}

TEST(Cli, LockedOutputDirIsUsageError) {
  TempDir dir;
  write_file(dir / "small.conf", kSmallConfig);
  std::filesystem::create_directories(dir / "run");
  write_file(dir / "run" / ".mmart.lock", "");
  const auto r = run_cli(kCli, dir.path(), "synth-corpus -c small.conf");
  EXPECT_EQ(r.exit_code, 2) << r.out;
}

TEST(Cli, UsageErrors) {
  TempDir dir;
  EXPECT_EQ(run_cli(kCli, dir.path(), "").exit_code, 2);
  EXPECT_EQ(run_cli(kCli, dir.path(), "fly").exit_code, 2);
  EXPECT_EQ(run_cli(kCli, dir.path(), "build-vocab -s bogus.key=1").exit_code, 2);
  EXPECT_EQ(run_cli(kCli, dir.path(), "query -c nothing.conf").exit_code, 2);
  const auto r = run_cli(kCli, dir.path(), "build-vocab");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("missing input"), std::string::npos) << r.out;
}

TEST(Cli, MissingCorpusFileIsDataError) {
  TempDir dir;
  write_file(dir / "small.conf", kSmallConfig);
  EXPECT_EQ(run_cli(kCli, dir.path(), "build-vocab -c small.conf").exit_code, 3);
}

TEST(Cli, ModeMismatchIsUsageError) {
  TempDir dir;
  run_all(dir.path());
  const auto r = run_cli(kCli, dir.path(), "evaluate -c small.conf -s mode=vis_lang");
  EXPECT_EQ(r.exit_code, 2) << r.out;
}

TEST(Config, Precedence) {
  TempDir dir;
  write_file(dir / "c.conf", "seed = 5\nprojection.lr = 0.5\n");
  using cli::load_config;
  EXPECT_EQ(load_config(dir / "c.conf", {}, std::nullopt).get("seed"), "5");
  EXPECT_EQ(load_config(dir / "c.conf", {}, "9").get("seed"), "9");
  EXPECT_EQ(load_config(dir / "c.conf", {"seed=11"}, "9").get("seed"), "11");
  EXPECT_EQ(load_config(std::nullopt, {}, std::nullopt).get("projection.lr"), "0.0001");
  EXPECT_THROW(load_config(std::nullopt, {}, "abc"), UsageError);
}

TEST(Config, RelativePathsResolveAgainstFile) {
  TempDir dir;
  std::filesystem::create_directories(dir / "sub");
  write_file(dir / "sub" / "c.conf", "corpus.train = data/t.tsv\n");
  const auto c = cli::load_config(dir / "sub" / "c.conf", {}, std::nullopt);
  EXPECT_EQ(std::filesystem::path(c.get("corpus.train")), dir / "sub" / "data" / "t.tsv");
}

TEST(Config, RejectsUnknownKeysAndBadLines) {
  cli::Config c;
  EXPECT_THROW(c.merge_text("nope = 1\n"), UsageError);
  EXPECT_THROW(c.merge_text("seed\n"), UsageError);
  EXPECT_THROW(c.set_override("seed"), UsageError);
  c.merge_text("# comment\n\nseed = 4\n");
  EXPECT_EQ(c.get_u64("seed"), 4u);
  EXPECT_THROW(c.get_double("mode"), UsageError);
}

TEST(Pipeline, StageNamesAndHash) {
  EXPECT_EQ(cli::stage_names().size(), 10u);
  EXPECT_EQ(cli::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Pipeline, UnknownStage) {
  const auto c = cli::load_config(std::nullopt, {}, std::nullopt);
  std::ostringstream out, log;
  EXPECT_THROW(cli::run_stage("fly", c, {}, out, log), UsageError);
}

}  // namespace
}  // namespace mmart
