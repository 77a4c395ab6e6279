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

#include <algorithm>
#include <random>

#include "objseq/error.h"
#include "objseq/gcot.h"
#include "objseq/synth.h"
#include "test_util.h"

namespace objseq {
namespace {

using Eigen::Vector3d;
using testing::ReadAll;

Scene LineScene(int n) {
  std::vector<Vector3d> c;
  for (int i = 0; i < n; ++i) c.emplace_back(i, 0, 0);
  return testing::CentroidScene(c);
}

TEST(GenQaCot, Golden) {
  const Scene s = LineScene(10);
  CotAnnotation a;
  a.record_id = "q";
  a.text = "What color is the chair next to the desk?";
  a.related = {2, 7, 9};
  a.answer = "brown";
  const TaskRecord r = GenQaCot(a, s, AssignIds(10, OrderPolicy::kFixed));
  EXPECT_EQ(r.user_text, ReadAll(testing::GoldenPath("cot_qa_user.txt")));
  EXPECT_EQ(r.assistant_text, ReadAll(testing::GoldenPath("cot_qa_assistant.txt")));
  EXPECT_EQ(r.task_kind, TaskKind::kCotQa);
}

TEST(GenQaCot, SingularForm) {
  CotAnnotation a;
  a.record_id = "q";
  a.text = "Is the lamp on?";
  a.related = {5};
  a.answer = "yes";
  const TaskRecord r = GenQaCot(a, LineScene(6), AssignIds(6, OrderPolicy::kFixed));
  EXPECT_EQ(r.assistant_text, "[Step 1] The objects related to the question is <OBJ005>.\n[Step 2] The answer is: yes.");
}

TEST(GenCategoryCot, Golden) {
  CotAnnotation a;
  a.record_id = "c";
  a.text = "the chair closest to the window";
  a.category = "chair";
  a.same_category = {13, 45};
  a.target = 45;
  const TaskRecord r = GenCategoryCot(a, LineScene(50), AssignIds(50, OrderPolicy::kFixed));
  EXPECT_EQ(r.user_text, ReadAll(testing::GoldenPath("cot_category_user.txt")));
  EXPECT_EQ(r.assistant_text, ReadAll(testing::GoldenPath("cot_category_assistant.txt")));
  EXPECT_EQ(r.target_ids, std::vector<int>{45});
}

TEST(GenCategoryCot, SoleMember) {
  CotAnnotation a;
  a.record_id = "c";
  a.text = "the only sink";
  a.category = "sink";
  a.same_category = {3};
  a.target = 3;
  const TaskRecord r = GenCategoryCot(a, LineScene(4), AssignIds(4, OrderPolicy::kFixed));
  const CotParse p = ParseCotResponse(r.assistant_text);
  ASSERT_EQ(p.steps.size(), 3u);
  EXPECT_EQ(p.steps[1].cited, std::vector<int>{3});
  EXPECT_EQ(p.steps[2].cited, std::vector<int>{3});
  a.target = 2;
  EXPECT_THROW(GenCategoryCot(a, LineScene(4), AssignIds(4, OrderPolicy::kFixed)), ArgumentError);
}

TEST(GenSpaceCot, GoldenCollinear) {
  CotAnnotation a;
  a.record_id = "s";
  a.text = "the lamp beside the bed";
  a.target = 1;
  const TaskRecord r = GenSpaceCot(a, LineScene(7), AssignIds(7, OrderPolicy::kFixed));
  EXPECT_EQ(r.user_text, ReadAll(testing::GoldenPath("cot_space_user.txt")));
  EXPECT_EQ(r.assistant_text, ReadAll(testing::GoldenPath("cot_space_assistant.txt")));
}

TEST(NearestPositions, FewerThanKAndTieBreak) {
  EXPECT_EQ(NearestPositions(LineScene(4), AssignIds(4, OrderPolicy::kFixed), 1, 5), (std::vector<int>{2, 3, 4}));
  // Proposals 1 and 2 are equidistant from 0; lower proposal index first.
  const Scene s = testing::CentroidScene({Vector3d(0, 0, 0), Vector3d(0, 2, 0), Vector3d(2, 0, 0), Vector3d(1, 0, 0)});
  const IdAssignment perm{{3, 2, 1, 0}, std::nullopt};  // proposal 0 at position 4
  EXPECT_EQ(NearestPositions(s, perm, 4, 2), (std::vector<int>{1, 3}));
}

TEST(NearestPositions, MatchesBruteForceOnSynthScenes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    const Scene s = synth::GenScene(spec).scene;
    const int n = static_cast<int>(s.num_objects());
    const IdAssignment a = AssignIds(n, OrderPolicy::kRandom, seed);
    for (int t = 1; t <= n; ++t) {
      const int target = a.ProposalAt(t);
      std::vector<std::pair<double, int>> d;
      for (int i = 0; i < n; ++i) {
        if (i == target) continue;
        d.push_back({(ObjectCentroid(s, i) - ObjectCentroid(s, target)).norm(), i});
      }
      std::sort(d.begin(), d.end());
      std::vector<int> expected;
      for (std::size_t k = 0; k < std::min<std::size_t>(5, d.size()); ++k) expected.push_back(a.PositionOf(d[k].second));
      EXPECT_EQ(NearestPositions(s, a, t), expected);
    }
  }
}

TEST(ParseCotResponse, FreeFormAndOutOfOrder) {
  const CotParse free = ParseCotResponse("brown wooden chair");
  EXPECT_TRUE(free.steps.empty());
  EXPECT_EQ(free.answer, std::optional<std::string>("brown wooden chair"));
  EXPECT_EQ(ParseCotResponse("<OBJ004>").final_positions, std::vector<int>{4});

  const CotParse ooo = ParseCotResponse("[Step 2] The target object is <OBJ002>. [Step 1] first <OBJ009>");
  ASSERT_EQ(ooo.steps.size(), 2u);
  EXPECT_EQ(ooo.steps[0].number, 2);
  EXPECT_EQ(ooo.steps[1].number, 1);
  EXPECT_FALSE(ooo.diagnostics.empty());
  EXPECT_EQ(ooo.final_positions, std::vector<int>{9});
}

TEST(QuotedText, ExtractsDescription) {
  EXPECT_EQ(QuotedText("say \"a \"big\" box\" now"), std::optional<std::string>("a \"big\" box"));
  EXPECT_FALSE(QuotedText("none").has_value());
}

std::string RandomWords(std::mt19937_64& gen, int max_words) {
  static const std::vector<std::string> words = {"the", "red", "chair", "near", "a", "window", "table",
                                                 "lamp", "big", "on", "left", "of", "cabinet", "two"};
  std::uniform_int_distribution<int> count(1, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::string out;
  const int n = count(gen);
  for (int i = 0; i < n; ++i) out += (i ? " " : "") + words[pick(gen)];
  return out;
}

std::vector<int> RandomSubset(std::mt19937_64& gen, int n, int max_size) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(all.begin(), all.end(), gen);
  std::uniform_int_distribution<int> size(1, std::min(n, max_size));
  all.resize(static_cast<std::size_t>(size(gen)));
  return all;
}

TEST(CotRoundTrip, FuzzedAnnotations) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> objects(2, 40), kind(0, 2), kk(1, 8);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = objects(gen);
    std::vector<Vector3d> c;
    std::uniform_real_distribution<double> u(0, 5);
    for (int i = 0; i < n; ++i) c.emplace_back(u(gen), u(gen), u(gen));
    const Scene s = testing::CentroidScene(c);
    const IdAssignment assign = AssignIds(n, OrderPolicy::kRandom, static_cast<std::uint64_t>(trial));
    CotAnnotation a;
    a.record_id = std::to_string(trial);
    a.text = RandomWords(gen, 10);
    switch (kind(gen)) {
      case 0: {
        a.related = RandomSubset(gen, n, 6);
        a.answer = RandomWords(gen, 3);
        const CotParse p = ParseCotResponse(GenQaCot(a, s, assign).assistant_text);
        if (p.steps.size() != 2 || p.steps[0].cited != a.related || p.answer != a.answer || !p.diagnostics.empty()) {
          ++mismatches;
        }
        break;
      }
      case 1: {
        a.same_category = RandomSubset(gen, n, 8);
        a.target = a.same_category[static_cast<std::size_t>(gen() % a.same_category.size())];
        a.category = RandomWords(gen, 2);
        const TaskRecord r = GenCategoryCot(a, s, assign);
        const CotParse p = ParseCotResponse(r.assistant_text);
        const std::string m = "There are " + std::to_string(p.steps.size() == 3 ? p.steps[1].cited.size() : 0);
        if (p.steps.size() != 3 || p.steps[1].cited != a.same_category || p.final_positions != std::vector<int>{a.target} ||
            p.steps[1].text.find(m) == std::string::npos || QuotedText(p.steps[0].text) != a.category ||
            QuotedText(r.user_text) != a.text) {
          ++mismatches;
        }
        break;
      }
      default: {
        a.target = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(n));
        const int k = kk(gen);
        const TaskRecord r = GenSpaceCot(a, s, assign, k);
        const CotParse p = ParseCotResponse(r.assistant_text);
        if (p.steps.size() != 2 || p.steps[0].cited != NearestPositions(s, assign, a.target, k) ||
            p.final_positions != std::vector<int>{a.target}) {
          ++mismatches;
        }
        break;
      }
    }
  }
  EXPECT_EQ(mismatches, 0);
}

}  // namespace
}  // namespace objseq
