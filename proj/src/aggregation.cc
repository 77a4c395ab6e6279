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

#include "objseq/aggregation.h"

#include <algorithm>
#include <numeric>

#include "objseq/binary_io.h"
#include "objseq/error.h"

namespace objseq {

MaskSizeMode ParseMaskSizeMode(const std::string& name) {
  if (name == "patches") return MaskSizeMode::kPatchCount;
  if (name == "points") return MaskSizeMode::kPointHits;
  throw ArgumentError("unknown mask size mode '" + name + "' (expected patches|points)");
}

std::string ToString(MaskSizeMode mode) {
  return mode == MaskSizeMode::kPatchCount ? "patches" : "points";
}

ViewFeature PerViewFeature(const CameraView& view, const PatchMask& mask, MaskSizeMode mode) {
  if (!view.patch_features) throw ArgumentError("view " + view.view_id + " has no patch features");
  if (mask.empty()) throw ArgumentError("empty patch mask for view " + view.view_id);
  if (mask.view_id != view.view_id) {
    throw ArgumentError("mask for view " + mask.view_id + " applied to view " + view.view_id);
  }
  const FeatureTable& table = *view.patch_features;
  if (table.rows() != mask.pixel_hits.size()) {
    throw ArgumentError("patch feature rows do not match the mask grid for view " + view.view_id);
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.dim()));
  for (int j : mask.covered) {
    const float* f = table.row(static_cast<std::size_t>(j));
    for (std::size_t d = 0; d < table.dim(); ++d) sum[static_cast<Eigen::Index>(d)] += f[d];
  }
  ViewFeature out;
  out.view_id = view.view_id;
  out.feature = sum / static_cast<double>(mask.covered.size());
  out.mask_size = mode == MaskSizeMode::kPatchCount ? static_cast<long>(mask.covered.size())
                                                    : mask.HitsOnCovered();
  return out;
}

Eigen::VectorXd FuseViews(std::span<const ViewFeature> per_view) {
  if (per_view.empty()) throw ArgumentError("FuseViews: no views to fuse");
  const Eigen::Index dim = per_view.front().feature.size();
  std::vector<std::size_t> order(per_view.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return per_view[a].view_id < per_view[b].view_id;
  });
  Eigen::VectorXd num = Eigen::VectorXd::Zero(dim);
  double den = 0.0;
  for (std::size_t k : order) {
    const ViewFeature& vf = per_view[k];
    if (vf.feature.size() != dim) throw ArgumentError("FuseViews: feature dim mismatch in view " + vf.view_id);
    if (vf.mask_size < 1) throw ArgumentError("FuseViews: view " + vf.view_id + " has empty mask");
    num += vf.feature * static_cast<double>(vf.mask_size);
    den += static_cast<double>(vf.mask_size);
  }
  return num / den;
}

Eigen::VectorXd AffineProjector::Apply(const Eigen::VectorXd& z) const {
  if (z.size() != matrix.cols()) {
    throw ArgumentError("projector " + name + " expects dim " + std::to_string(matrix.cols()) +
                        ", got " + std::to_string(z.size()));
  }
  return matrix * z + bias;
}

AffineProjector AffineProjector::FromTable(std::string name, const FeatureTable& table) {
  if (table.dim() < 1 || table.rows() < 1) throw ArgumentError("projector table " + name + " is empty");
  AffineProjector p;
  p.name = std::move(name);
  const auto rows = static_cast<Eigen::Index>(table.rows());
  const auto in = static_cast<Eigen::Index>(table.dim() - 1);
  p.matrix.resize(rows, in);
  p.bias.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < in; ++c) {
      p.matrix(r, c) = table.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
    p.bias[r] = table.at(static_cast<std::size_t>(r), static_cast<std::size_t>(in));
  }
  return p;
}

AffineProjector AffineProjector::Load(std::string name, const std::filesystem::path& path) {
  return FromTable(std::move(name), ReadFeatureTable(path));
}

FeatureTable AffineProjector::ToTable() const {
  FeatureTable t(static_cast<std::size_t>(matrix.rows()), static_cast<std::size_t>(matrix.cols() + 1));
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      t.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = static_cast<float>(matrix(r, c));
    }
    t.at(static_cast<std::size_t>(r), static_cast<std::size_t>(matrix.cols())) = static_cast<float>(bias[r]);
  }
  return t;
}

ObjectRecord BuildObjectRecord(const Scene& scene, int index, const AggregationConfig& config,
                               const std::optional<Eigen::VectorXd>& feature_3d,
                               const Projectors& projectors) {
  ObjectRecord rec;
  rec.index = index;
  rec.feature_3d = feature_3d;

  std::size_t dim = config.feature_dim;
  std::vector<ViewFeature> per_view;
  for (const CameraView& view : scene.views) {
    if (!view.patch_features) {
      ++rec.views_without_features;
      continue;
    }
    if (dim == 0) dim = view.patch_features->dim();
    const auto visible = VisiblePoints(scene, index, view, config.occlusion);
    const PatchMask mask = MakePatchMask(visible, view, config.patch_size, config.min_hits);
    if (mask.empty()) continue;
    per_view.push_back(PerViewFeature(view, mask, config.mask_size));
  }
  rec.views_used = static_cast<int>(per_view.size());
  if (per_view.empty()) {
    rec.feature_2d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    rec.visible_anywhere = false;
  } else {
    rec.feature_2d = FuseViews(per_view);
    rec.visible_anywhere = true;
  }

  if (projectors.point && rec.feature_3d) rec.embed_3d = projectors.point->Apply(*rec.feature_3d);
  if (projectors.image && rec.feature_2d) rec.embed_2d = projectors.image->Apply(*rec.feature_2d);
  return rec;
}

}  // namespace objseq
