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

#include "objseq/aggregation.h"
#include "objseq/error.h"
#include "objseq/synth.h"
#include "test_util.h"

namespace objseq {
namespace {

using Eigen::VectorXd;
using testing::MaxRelErr;
using testing::PinholeView;

CameraView FeatureView(int w, int h, const std::vector<std::vector<float>>& rows, std::string id = "v0") {
  CameraView v = PinholeView(w, h, 1.0, std::move(id));
  FeatureTable t(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t d = 0; d < rows[r].size(); ++d) t.at(r, d) = rows[r][d];
  }
  v.patch_features = t;
  return v;
}

PatchMask MaskOf(const CameraView& v, std::vector<int> covered) {
  PatchMask m;
  m.view_id = v.view_id;
  m.grid_w = v.width / 16;
  m.grid_h = v.height / 16;
  m.pixel_hits.assign(static_cast<std::size_t>(m.grid_w * m.grid_h), 0);
  for (int c : covered) m.pixel_hits[static_cast<std::size_t>(c)] = 1;
  m.covered = std::move(covered);
  return m;
}

VectorXd Vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(PerViewFeature, SinglePatchIsIdentity) {
  const CameraView v = FeatureView(32, 16, {{5, -1}, {7, 7}});
  const ViewFeature f = PerViewFeature(v, MaskOf(v, {1}));
  EXPECT_EQ(f.feature, Vec({7, 7}));
  EXPECT_EQ(f.mask_size, 1);
}

TEST(PerViewFeature, TwoPatchMean) {
  const CameraView v = FeatureView(32, 16, {{1, 0}, {3, 2}});
  EXPECT_EQ(PerViewFeature(v, MaskOf(v, {0, 1})).feature, Vec({2, 1}));
}

TEST(PerViewFeature, RandomMaskMatchesBruteForce) {
  std::mt19937_64 gen(3);
  std::normal_distribution<float> n(0, 5);
  std::vector<std::vector<float>> rows(12, std::vector<float>(8));
  for (auto& r : rows) {
    for (auto& x : r) x = n(gen);
  }
  const CameraView v = FeatureView(64, 48, rows);
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), gen);
  std::vector<int> covered(all.begin(), all.begin() + 7);
  std::sort(covered.begin(), covered.end());
  VectorXd expected = VectorXd::Zero(8);
  for (int c : covered) {
    for (int d = 0; d < 8; ++d) expected[d] += rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
  }
  expected /= 7.0;
  EXPECT_LT(MaxRelErr(PerViewFeature(v, MaskOf(v, covered)).feature, expected), 1e-6);
}

TEST(PerViewFeature, PointHitModeWeighsByHits) {
  const CameraView v = FeatureView(32, 16, {{1, 0}, {3, 2}});
  PatchMask m = MaskOf(v, {0, 1});
  m.pixel_hits = {4, 2};
  EXPECT_EQ(PerViewFeature(v, m, MaskSizeMode::kPatchCount).mask_size, 2);
  EXPECT_EQ(PerViewFeature(v, m, MaskSizeMode::kPointHits).mask_size, 6);
}

TEST(PerViewFeature, RejectsMissingFeaturesAndEmptyMask) {
  CameraView v = FeatureView(32, 16, {{1}, {2}});
  EXPECT_THROW(PerViewFeature(v, MaskOf(v, {})), ArgumentError);
  v.patch_features.reset();
  EXPECT_THROW(PerViewFeature(v, MaskOf(v, {0})), ArgumentError);
}

TEST(FuseViews, HandExamples) {
  const std::vector<ViewFeature> one = {{"a", Vec({4, 5}), 9}};
  EXPECT_EQ(FuseViews(one), Vec({4, 5}));
  const std::vector<ViewFeature> two = {{"a", Vec({2, 0}), 3}, {"b", Vec({0, 4}), 1}};
  EXPECT_EQ(FuseViews(two), Vec({1.5, 1.0}));
  const std::vector<ViewFeature> equal = {{"a", Vec({2, 0}), 5}, {"b", Vec({0, 4}), 5}, {"c", Vec({1, 1}), 5}};
  EXPECT_LT(MaxRelErr(FuseViews(equal), Vec({1, 5.0 / 3})), 1e-15);
  EXPECT_THROW(FuseViews(std::vector<ViewFeature>{}), ArgumentError);
}

std::vector<ViewFeature> RandomViews(std::mt19937_64& gen, int count, int dim) {
  std::normal_distribution<double> n(0, 3);
  std::uniform_int_distribution<long> s(1, 40);
  std::vector<ViewFeature> out;
  for (int i = 0; i < count; ++i) {
    VectorXd f(dim);
    for (int d = 0; d < dim; ++d) f[d] = n(gen);
    out.push_back({"view_" + std::to_string(i), f, s(gen)});
  }
  return out;
}

TEST(FuseViews, Properties) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto views = RandomViews(gen, 1 + trial % 6, 5);
    const VectorXd fused = FuseViews(views);
    // Permutation invariance.
    auto shuffled = views;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_LT((FuseViews(shuffled) - fused).lpNorm<Eigen::Infinity>(), 1e-12);
    // Convex hull.
    for (int d = 0; d < 5; ++d) {
      double lo = 1e300, hi = -1e300;
      for (const auto& v : views) {
        lo = std::min(lo, v.feature[d]);
        hi = std::max(hi, v.feature[d]);
      }
      EXPECT_GE(fused[d], lo - 1e-12);
      EXPECT_LE(fused[d], hi + 1e-12);
    }
    // Duplicating a view equals doubling its weight.
    auto dup = views;
    dup.push_back(views[0]);
    dup.back().view_id += "_copy";
    auto doubled = views;
    doubled[0].mask_size *= 2;
    EXPECT_LT((FuseViews(dup) - FuseViews(doubled)).lpNorm<Eigen::Infinity>(), 1e-12);
    // Uniform scaling of weights.
    auto scaled = views;
    for (auto& v : scaled) v.mask_size *= 7;
    EXPECT_LT((FuseViews(scaled) - fused).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(AffineProjector, IdentityConstantAndOracle) {
  AffineProjector id{"id", Eigen::MatrixXd::Identity(3, 3), VectorXd::Zero(3)};
  EXPECT_EQ(id.Apply(Vec({1, 2, 3})), Vec({1, 2, 3}));
  AffineProjector c{"c", Eigen::MatrixXd::Zero(2, 3), Vec({4, 5})};
  EXPECT_EQ(c.Apply(Vec({1, 2, 3})), Vec({4, 5}));
  EXPECT_THROW(c.Apply(Vec({1, 2})), ArgumentError);

  std::mt19937_64 gen(12);
  std::normal_distribution<float> n(0, 1);
  FeatureTable t(4, 7);  // 4 outputs, 6 inputs plus bias column
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t d = 0; d < 7; ++d) t.at(r, d) = n(gen);
  }
  const AffineProjector p = AffineProjector::FromTable("p", t);
  EXPECT_EQ(p.ToTable(), t);
  const VectorXd z = Vec({0.5, -1, 2, 0.25, 3, -0.75});
  for (Eigen::Index r = 0; r < 4; ++r) {
    double dot = t.at(static_cast<std::size_t>(r), 6);
    for (std::size_t d = 0; d < 6; ++d) dot += t.at(static_cast<std::size_t>(r), d) * z[static_cast<Eigen::Index>(d)];
    EXPECT_NEAR(p.Apply(z)[r], dot, 1e-6);
  }
}

TEST(BuildObjectRecord, InvisibleObjectGetsZeroVector) {
  Scene s = testing::CentroidScene({Eigen::Vector3d(0, 0, -5)});
  CameraView v = FeatureView(32, 16, {{1, 2, 3}, {4, 5, 6}});
  s.views = {v};
  const ObjectRecord r = BuildObjectRecord(s, 0, {});
  EXPECT_FALSE(r.visible_anywhere);
  EXPECT_EQ(*r.feature_2d, VectorXd::Zero(3));
  EXPECT_EQ(r.views_used, 0);
  AggregationConfig cfg;
  EXPECT_EQ(synth::Oracle2dFeature(s, 0, cfg), VectorXd::Zero(3));
}

TEST(BuildObjectRecord, ViewsWithoutFeaturesAreCounted) {
  Scene s = testing::CentroidScene({Eigen::Vector3d(0, 0, 2)});
  CameraView a = FeatureView(32, 16, {{1, 2}, {3, 4}}, "a");
  CameraView b = PinholeView(32, 16, 1.0, "b");
  s.views = {a, b};
  const ObjectRecord r = BuildObjectRecord(s, 0, {});
  EXPECT_EQ(r.views_without_features, 1);
  EXPECT_EQ(r.views_used, 1);
  EXPECT_EQ(*r.feature_2d, Vec({3, 4}));
}

TEST(BuildObjectRecord, ProjectorsProduceEmbeddings) {
  Scene s = testing::CentroidScene({Eigen::Vector3d(0, 0, 2)});
  s.views = {FeatureView(32, 16, {{1, 2}, {3, 4}})};
  Projectors proj;
  proj.image = AffineProjector{"f_v", Eigen::MatrixXd::Identity(2, 2) * 2, Vec({1, 1})};
  proj.point = AffineProjector{"f_p", Eigen::MatrixXd::Ones(1, 3), Vec({0})};
  const ObjectRecord r = BuildObjectRecord(s, 0, {}, Vec({1, 2, 3}), proj);
  EXPECT_EQ(*r.embed_2d, Vec({7, 9}));
  EXPECT_EQ(*r.embed_3d, Vec({6}));
}

TEST(BuildObjectRecord, SingleViewEqualsPerViewFeature) {
  synth::SynthSpec spec;
  spec.seed = 5;
  spec.num_views = 1;
  const Scene s = synth::GenScene(spec).scene;
  const AggregationConfig cfg;
  for (int i = 0; i < static_cast<int>(s.num_objects()); ++i) {
    const auto vis = VisiblePoints(s, i, s.views[0], cfg.occlusion);
    const PatchMask m = MakePatchMask(vis, s.views[0]);
    const ObjectRecord r = BuildObjectRecord(s, i, cfg);
    if (m.empty()) {
      EXPECT_FALSE(r.visible_anywhere);
    } else {
      EXPECT_EQ(*r.feature_2d, PerViewFeature(s.views[0], m).feature);
    }
  }
}

TEST(BuildObjectRecord, MatchesOracleOnSynthScenes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synth::SynthSpec spec;
    spec.seed = seed;
    const Scene s = synth::GenScene(spec).scene;
    for (MaskSizeMode mode : {MaskSizeMode::kPatchCount, MaskSizeMode::kPointHits}) {
      AggregationConfig cfg;
      cfg.mask_size = mode;
      for (int i = 0; i < static_cast<int>(s.num_objects()); ++i) {
        const ObjectRecord r = BuildObjectRecord(s, i, cfg);
        EXPECT_LT(MaxRelErr(*r.feature_2d, synth::Oracle2dFeature(s, i, cfg)), 1e-6)
            << "seed " << seed << " object " << i;
      }
    }
  }
}

TEST(MaskSizeMode, ParseAndPrint) {
  EXPECT_EQ(ParseMaskSizeMode("patches"), MaskSizeMode::kPatchCount);
  EXPECT_EQ(ParseMaskSizeMode("points"), MaskSizeMode::kPointHits);
  EXPECT_EQ(ToString(MaskSizeMode::kPointHits), "points");
  EXPECT_THROW(ParseMaskSizeMode("pixels"), ArgumentError);
}

}  // namespace
}  // namespace objseq
