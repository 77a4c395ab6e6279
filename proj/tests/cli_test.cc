// Copyright 2026 The objseq Authors.
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

#include "objseq/binary_io.h"
#include "objseq/cli.h"
#include "objseq/json_io.h"
#include "objseq/scene_io.h"
#include "objseq/synth.h"
#include "objseq/tasking.h"
#include "test_util.h"

namespace objseq {
namespace {

using nlohmann::json;
using testing::ReadAll;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Synth(const TempDir& dir, std::uint64_t seed) {
  const std::string path = (dir / "scenes" / ("synth_" + std::to_string(seed))).string();
  EXPECT_EQ(Cli({"synth", "--out", path, "--seed", std::to_string(seed)}).code, 0);
  return path;
}

TEST(Cli, TokenCost) {
  const Result r = Cli({"token-cost", "--n", "100", "--scheme", "plain_text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "600\n");
  EXPECT_EQ(Cli({"token-cost", "--n", "100"}).out, "300\n");
  EXPECT_EQ(Cli({"token-cost", "--n", "100", "--scheme", "none"}).out, "200\n");
}

TEST(Cli, UsageErrorsAndHelp) {
  EXPECT_EQ(Cli({}).code, cli::kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(Cli({"token-cost", "--n", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(Cli({"token-cost", "--n", "1", "--scheme", "gaussian"}).code, cli::kExitUsage);
  const Result help = Cli({"--help"});
  EXPECT_EQ(help.code, 0);
  for (const char* sub : {"validate", "build-sequence", "build-tasks", "gen-cot", "assemble", "eval", "synth",
                          "token-cost"}) {
    EXPECT_NE(help.out.find(sub), std::string::npos) << sub;
  }
  const Result seq_help = Cli({"build-sequence", "--help"});
  for (const char* flag : {"--bundle", "--out", "--order", "--seed", "--epsilon", "--require-depth", "--mask-size",
                           "--min-hits", "--patch-size", "--id-width", "--features-3d", "--proj-3d", "--proj-2d"}) {
    EXPECT_NE(seq_help.out.find(flag), std::string::npos) << flag;
  }
  const Result eval_help = Cli({"eval", "--help"});
  for (const char* flag : {"--benchmark", "--pred", "--gt", "--out", "--scene-dir", "--thresholds", "--cider-scale"}) {
    EXPECT_NE(eval_help.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, ValidateBundleAndIoErrors) {
  TempDir dir;
  const std::string bundle = Synth(dir, 4);
  const Result ok = Cli({"validate", "--bundle", bundle});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("ok synth_4", 0), 0u);
  EXPECT_EQ(Cli({"validate", "--bundle", (dir / "missing").string()}).code, cli::kExitIo);
  auto j = ReadJsonFile(std::filesystem::path(bundle) / "scene.json");
  j["proposals"][0]["point_indices"] = {5, 3};
  WriteJsonFile(std::filesystem::path(bundle) / "scene.json", j);
  EXPECT_EQ(Cli({"validate", "--bundle", bundle}).code, cli::kExitValidation);
}

TEST(Cli, BuildSequenceIsJobCountInvariant) {
  TempDir dir;
  const std::string bundle = Synth(dir, 9);
  for (const char* jobs : {"1", "4"}) {
    const Result r = Cli({"--jobs", jobs, "build-sequence", "--bundle", bundle, "--out", (dir / ("o" + std::string(jobs))).string(),
                          "--order", "random", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"sequence.json", "features_2d.bin"}) {
    EXPECT_EQ(ReadAll(dir / "o1" / f), ReadAll(dir / "o4" / f)) << f;
  }
  const json seq = ReadJsonFile(dir / "o1" / "sequence.json");
  const Scene s = LoadScene(bundle);
  EXPECT_EQ(seq["objects"].size(), s.num_objects());
  EXPECT_EQ(seq["bindings"], seq["permutation"]);
  EXPECT_EQ(seq["system_prompt"].get<std::string>(),
            RenderSystemPrompt({seq["permutation"].get<std::vector<int>>(), std::nullopt}).text);
}

TEST(Cli, BuildSequenceWithProjectors) {
  TempDir dir;
  const std::string bundle = Synth(dir, 2);
  const Scene s = LoadScene(bundle);
  FeatureTable f3d(s.num_objects(), 4);
  FeatureTable proj2d(3, 9), proj3d(2, 5);
  WriteFeatureTable(dir / "f3d.bin", f3d);
  WriteFeatureTable(dir / "p2.bin", proj2d);
  WriteFeatureTable(dir / "p3.bin", proj3d);
  const Result r = Cli({"build-sequence", "--bundle", bundle, "--out", (dir / "o").string(), "--features-3d",
                        (dir / "f3d.bin").string(), "--proj-2d", (dir / "p2.bin").string(), "--proj-3d",
                        (dir / "p3.bin").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadFeatureTable(dir / "o" / "embed_2d.bin").dim(), 3u);
  EXPECT_EQ(ReadFeatureTable(dir / "o" / "embed_3d.bin").rows(), s.num_objects());
  WriteFeatureTable(dir / "bad.bin", FeatureTable(3, 4));
  EXPECT_EQ(Cli({"build-sequence", "--bundle", bundle, "--out", (dir / "o2").string(), "--proj-2d",
                 (dir / "bad.bin").string()})
                .code,
            cli::kExitValidation);
}

TEST(Cli, TasksCotAssembleEvalPipeline) {
  TempDir dir;
  Synth(dir, 1);
  const std::string scenes = (dir / "scenes").string();
  WriteJsonl(dir / "ann.jsonl", {{{"scene_id", "synth_1"}, {"task_kind", "grounding_single"}, {"description", "a box"}, {"targets", {0}}},
                                 {{"scene_id", "synth_1"}, {"task_kind", "qa"}, {"question", "How many?"}, {"answers", {"two"}}},
                                 {{"scene_id", "synth_1"}, {"task_kind", "grounding_multi"}, {"description", "boxes"}, {"targets", {0, 1}}}});
  const Result bt = Cli({"build-tasks", "--scene-dir", scenes, "--manifest", (dir / "ann.jsonl").string(), "--seed", "7",
                         "--out", (dir / "tasks.jsonl").string()});
  ASSERT_EQ(bt.code, 0) << bt.err;
  EXPECT_EQ(Cli({"validate", "--tasks", (dir / "tasks.jsonl").string(), "--scene-dir", scenes}).code, 0);

  WriteJsonl(dir / "cot.jsonl", {{{"scene_id", "synth_1"}, {"question", "What color?"}, {"related", {0, 2}}, {"answer", "red"}},
                                 {{"scene_id", "synth_1"}, {"question", "Missing answer"}, {"related", {1}}}});
  const Result gc = Cli({"gen-cot", "--kind", "qa", "--annotations", (dir / "cot.jsonl").string(), "--scene-dir", scenes,
                         "--seed", "7", "--out", (dir / "cot_out.jsonl").string()});
  ASSERT_EQ(gc.code, 0) << gc.err;
  const json run = ReadJsonFile(dir / "cot_out.jsonl.run.json");
  EXPECT_EQ(run["records"], 1);
  EXPECT_EQ(run["skipped"].size(), 1u);

  WriteJsonFile(dir / "manifest.json", {{"entries", {{{"name", "tasks"}, {"path", "tasks.jsonl"}, {"expected_count", 3}},
                                                     {{"name", "cot"}, {"path", "cot_out.jsonl"}, {"expected_count", 1}}}}});
  const Result as = Cli({"assemble", "--manifest", (dir / "manifest.json").string(), "--seed", "1", "--out",
                         (dir / "train.jsonl").string()});
  ASSERT_EQ(as.code, 0) << as.err;
  EXPECT_EQ(ReadJsonl(dir / "train.jsonl").size(), 4u);
  WriteJsonFile(dir / "manifest2.json", {{"entries", {{{"name", "tasks"}, {"path", "tasks.jsonl"}, {"expected_count", 5}}}}});
  EXPECT_EQ(Cli({"assemble", "--manifest", (dir / "manifest2.json").string(), "--seed", "1", "--out",
                 (dir / "t2.jsonl").string()})
                .code,
            cli::kExitValidation);

  // Ground truth as prediction through the grounding records.
  std::vector<json> gt, pred;
  for (const json& row : ReadJsonl(dir / "tasks.jsonl")) {
    if (row["task_kind"] != "grounding_single") continue;
    gt.push_back(row);
    pred.push_back({{"record_id", row["record_id"]}, {"text", row["assistant_text"]}});
  }
  WriteJsonl(dir / "gt.jsonl", gt);
  WriteJsonl(dir / "pred.jsonl", pred);
  const Result ev = Cli({"eval", "--benchmark", "scanrefer", "--pred", (dir / "pred.jsonl").string(), "--gt",
                         (dir / "gt.jsonl").string(), "--scene-dir", scenes, "--out", (dir / "report").string()});
  ASSERT_EQ(ev.code, 0) << ev.err;
  const json report = ReadJsonFile(dir / "report" / "report.json");
  EXPECT_EQ(report["aggregates"]["acc@0.25"], 1.0);
  EXPECT_EQ(report["aggregates"]["acc@0.5"], 1.0);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
  TempDir dir;
  testing::WriteAll(dir / "c.toml", "[token-cost]\nn = 10\nscheme = \"plain_text\"\n");
  const Result r = Cli({"--config", (dir / "c.toml").string(), "token-cost"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "60\n");
  const Result flag = Cli({"--config", (dir / "c.toml").string(), "token-cost", "--n", "1"});
  EXPECT_EQ(flag.out, "6\n");
}

}  // namespace
}  // namespace objseq
