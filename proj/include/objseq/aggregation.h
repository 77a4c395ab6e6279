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

#ifndef OBJSEQ_AGGREGATION_H_
#define OBJSEQ_AGGREGATION_H_

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "objseq/projection.h"
#include "objseq/scene.h"

namespace objseq {

// What counts as a view's mask size when weighting views during fusion.
enum class MaskSizeMode {
  kPatchCount,  // covered patches (default)
  kPointHits,   // visible points landing in covered patches
};

MaskSizeMode ParseMaskSizeMode(const std::string& name);
std::string ToString(MaskSizeMode mode);

struct ViewFeature {
  std::string view_id;
  Eigen::VectorXd feature;
  long mask_size = 0;
};

// Mean of the patch features under `mask`.
ViewFeature PerViewFeature(const CameraView& view, const PatchMask& mask,
                           MaskSizeMode mode = MaskSizeMode::kPatchCount);

// Mask-size-weighted mean of per-view features. Terms are summed in
// ascending view_id order so the result does not depend on input order.
Eigen::VectorXd FuseViews(std::span<const ViewFeature> per_view);

// Fixed affine map into the language embedding space: matrix * z + bias.
struct AffineProjector {
  std::string name;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd bias;

  Eigen::VectorXd Apply(const Eigen::VectorXd& z) const;

  // Table layout: rows = D_out, dim = D_in + 1, last column is the bias.
  static AffineProjector FromTable(std::string name, const FeatureTable& table);
  static AffineProjector Load(std::string name, const std::filesystem::path& path);
  FeatureTable ToTable() const;
};

struct Projectors {
  std::optional<AffineProjector> point;  // f_p, applied to the 3D feature
  std::optional<AffineProjector> image;  // f_v, applied to the 2D feature
};

struct AggregationConfig {
  OcclusionPolicy occlusion;
  int patch_size = kDefaultPatchSize;
  int min_hits = 1;
  MaskSizeMode mask_size = MaskSizeMode::kPatchCount;
  // Dimension of the zero fallback for objects seen in no view. 0 means
  // take it from the first view with patch features.
  std::size_t feature_dim = 0;
};

struct ObjectRecord {
  int index = 0;
  std::optional<Eigen::VectorXd> feature_3d;
  std::optional<Eigen::VectorXd> feature_2d;
  std::optional<Eigen::VectorXd> embed_3d;
  std::optional<Eigen::VectorXd> embed_2d;
  bool visible_anywhere = false;
  int views_used = 0;
  int views_without_features = 0;
};

ObjectRecord BuildObjectRecord(const Scene& scene, int index, const AggregationConfig& config,
                               const std::optional<Eigen::VectorXd>& feature_3d = std::nullopt,
                               const Projectors& projectors = {});

}  // namespace objseq

#endif  // OBJSEQ_AGGREGATION_H_
