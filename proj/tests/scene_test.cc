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

#include <random>

#include "objseq/binary_io.h"
#include "objseq/error.h"
#include "objseq/json_io.h"
#include "objseq/scene.h"
#include "objseq/scene_io.h"
#include "objseq/synth.h"
#include "test_util.h"

namespace objseq {
namespace {

using Eigen::Vector3d;
using testing::PointScene;
using testing::TempDir;

TEST(SceneIo, MinimalBundleLoads) {
  TempDir dir;
  const Scene s = PointScene({{Vector3d(1, 2, 3)}}, "min");
  WriteScene(dir.path(), s);
  const Scene back = LoadScene(dir.path());
  EXPECT_EQ(back.num_objects(), 1u);
  EXPECT_TRUE(back.views.empty());
  EXPECT_EQ(back, s);
}

TEST(SceneIo, ProposalPastPointCountRejected) {
  TempDir dir;
  WriteScene(dir.path(), PointScene({{Vector3d(0, 0, 0)}}));
  auto j = ReadJsonFile(dir / "scene.json");
  j["proposals"][0]["point_indices"] = {0, 1};
  WriteJsonFile(dir / "scene.json", j);
  EXPECT_THROW(LoadScene(dir.path()), ValidationError);
}

TEST(SceneIo, MissingBundleIsIoError) {
  TempDir dir;
  EXPECT_THROW(LoadScene(dir / "nope"), IoError);
}

TEST(SceneIo, SynthBundleRoundTripsBitIdentically) {
  TempDir dir;
  synth::SynthSpec spec;
  spec.seed = 11;
  spec.occluder_probability = 1.0;
  const synth::SynthScene s = synth::GenScene(spec);
  WriteScene(dir / "a", s.scene);
  const Scene back = LoadScene(dir / "a");
  EXPECT_EQ(back, s.scene);
  WriteScene(dir / "b", back);
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), dir / "a");
    EXPECT_EQ(testing::ReadAll(entry.path()), testing::ReadAll(dir / "b" / rel)) << rel;
  }
}

TEST(SceneIo, RepeatedLoadsAreIdentical) {
  TempDir dir;
  synth::SynthSpec spec;
  spec.seed = 3;
  WriteScene(dir.path(), synth::GenScene(spec).scene);
  EXPECT_EQ(LoadScene(dir.path()), LoadScene(dir.path()));
}

TEST(FeatureTableIo, RoundTripAndBadMagic) {
  TempDir dir;
  FeatureTable t(2, 3, {1, 2, 3, 4, 5, 6.5f});
  WriteFeatureTable(dir / "t.bin", t);
  EXPECT_EQ(ReadFeatureTable(dir / "t.bin"), t);
  std::string bytes = testing::ReadAll(dir / "t.bin");
  EXPECT_EQ(bytes.size(), 16u + 6 * 4);
  bytes[0] = 'X';
  testing::WriteAll(dir / "bad.bin", bytes);
  EXPECT_THROW(ReadFeatureTable(dir / "bad.bin"), ValidationError);
  testing::WriteAll(dir / "short.bin", testing::ReadAll(dir / "t.bin").substr(0, 20));
  EXPECT_THROW(ReadFeatureTable(dir / "short.bin"), ValidationError);
}

TEST(ValidateScene, RejectsDuplicateAndDescendingIndices) {
  Scene s = PointScene({{Vector3d(0, 0, 0), Vector3d(1, 1, 1)}});
  s.proposals[0].point_indices = {1, 1};
  EXPECT_THROW(ValidateScene(s), ValidationError);
  s.proposals[0].point_indices = {1, 0};
  EXPECT_THROW(ValidateScene(s), ValidationError);
  s.proposals[0].point_indices = {};
  EXPECT_THROW(ValidateScene(s), ValidationError);
  s.proposals[0].point_indices = {0, 1};
  EXPECT_NO_THROW(ValidateScene(s));
}

TEST(ValidateScene, RejectsBadIntrinsicsAndDepthShape) {
  Scene s = PointScene({{Vector3d(0, 0, 1)}});
  CameraView v = testing::PinholeView(32, 32, 10);
  v.intrinsics.fx = 0;
  s.views = {v};
  EXPECT_THROW(ValidateScene(s), ValidationError);
  v.intrinsics.fx = 10;
  v.depth = FeatureTable(31, 32);
  s.views = {v};
  EXPECT_THROW(ValidateScene(s), ValidationError);
  v.depth = FeatureTable(32, 32);
  s.views = {v, v};
  EXPECT_THROW(ValidateScene(s), ValidationError);  // duplicate view id
}

TEST(ObjectCentroid, HandExamples) {
  EXPECT_EQ(ObjectCentroid(PointScene({{Vector3d(1, 2, 3)}}), 0), Vector3d(1, 2, 3));
  EXPECT_EQ(ObjectCentroid(PointScene({{Vector3d(0, 0, 0), Vector3d(2, 0, 0)}}), 0), Vector3d(1, 0, 0));
}

TEST(ObjectCentroid, MatchesSummationOracle) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Vector3d> pts;
  for (int i = 0; i < 100; ++i) pts.emplace_back(u(gen), u(gen), u(gen));
  const Scene s = PointScene({pts});
  double sx = 0, sy = 0, sz = 0;
  for (const auto& p : pts) {
    sx += p.x();
    sy += p.y();
    sz += p.z();
  }
  const Vector3d c = ObjectCentroid(s, 0);
  EXPECT_NEAR(c.x(), sx / 100, 1e-9);
  EXPECT_NEAR(c.y(), sy / 100, 1e-9);
  EXPECT_NEAR(c.z(), sz / 100, 1e-9);
}

TEST(ObjectAabb, HandExamplesAndOracle) {
  const Aabb b = ObjectAabb(PointScene({{Vector3d(0, 0, 0), Vector3d(1, 2, 3)}}), 0);
  EXPECT_EQ(b.min, Vector3d(0, 0, 0));
  EXPECT_EQ(b.max, Vector3d(1, 2, 3));
  const Aabb d = ObjectAabb(PointScene({{Vector3d(4, 5, 6)}}), 0);
  EXPECT_EQ(d.Volume(), 0.0);

  std::mt19937_64 gen(9);
  std::normal_distribution<double> n(0, 3);
  std::vector<Vector3d> pts;
  for (int i = 0; i < 57; ++i) pts.emplace_back(n(gen), n(gen), n(gen));
  Vector3d lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    for (int k = 0; k < 3; ++k) {
      if (p[k] < lo[k]) lo[k] = p[k];
      if (p[k] > hi[k]) hi[k] = p[k];
    }
  }
  const Aabb r = ObjectAabb(PointScene({pts}), 0);
  EXPECT_EQ(r.min, lo);
  EXPECT_EQ(r.max, hi);
}

TEST(ObjectAabb, ContainsCentroidOnSynthScenes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    const Scene s = synth::GenScene(spec).scene;
    for (int i = 0; i < static_cast<int>(s.num_objects()); ++i) {
      EXPECT_TRUE(ObjectAabb(s, i).Contains(ObjectCentroid(s, i))) << "seed " << seed << " object " << i;
    }
  }
}

TEST(ObjectCentroid, StaysInsideHullForNearlyEqualPoints) {
  const double x = 0.1;
  const Scene s = PointScene({{Vector3d(x, x, x), Vector3d(x, x, x), Vector3d(x, x, x)}});
  EXPECT_TRUE(ObjectAabb(s, 0).Contains(ObjectCentroid(s, 0)));
}

}  // namespace
}  // namespace objseq
