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

#include "objseq/scene.h"

#include <cmath>
#include <limits>

#include "objseq/error.h"

namespace objseq {

FeatureTable::FeatureTable(std::size_t rows, std::size_t dim, std::vector<float> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (data_.size() != rows_ * dim_) {
    throw ArgumentError("FeatureTable: data length " + std::to_string(data_.size()) +
                        " != rows*dim " + std::to_string(rows_ * dim_));
  }
}

void FeatureTable::CheckFinite(const std::string& where) const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError(where, "non-finite entry at row " + std::to_string(i / std::max<std::size_t>(dim_, 1)));
    }
  }
}

double Aabb::Volume() const {
  const Eigen::Vector3d extent = (max - min).cwiseMax(0.0);
  return extent.x() * extent.y() * extent.z();
}

bool Aabb::Contains(const Eigen::Vector3d& p) const {
  return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

bool Aabb::IsValid() const {
  return min.allFinite() && max.allFinite() && (min.array() <= max.array()).all();
}

void ValidateScene(const Scene& scene, int patch_size) {
  if (scene.scene_id.empty()) throw ValidationError("scene.json:scene_id", "must be non-empty");
  for (std::size_t i = 0; i < scene.points.size(); ++i) {
    if (!scene.points[i].allFinite()) {
      throw ValidationError("points.bin:row " + std::to_string(i), "non-finite coordinate");
    }
  }
  if (scene.colors) {
    if (scene.colors->size() != scene.points.size()) {
      throw ValidationError("colors.bin:rows", "color count differs from point count");
    }
    for (std::size_t i = 0; i < scene.colors->size(); ++i) {
      const Eigen::Vector3d& c = (*scene.colors)[i];
      if (!((c.array() >= 0.0).all() && (c.array() <= 1.0).all())) {
        throw ValidationError("colors.bin:row " + std::to_string(i), "RGB outside [0,1]");
      }
    }
  }
  for (std::size_t k = 0; k < scene.proposals.size(); ++k) {
    const ObjectProposal& p = scene.proposals[k];
    const std::string where = "scene.json:proposals[" + std::to_string(k) + "]";
    if (p.index != static_cast<int>(k)) {
      throw ValidationError(where + ".index", "expected " + std::to_string(k));
    }
    if (p.point_indices.empty()) throw ValidationError(where + ".point_indices", "empty mask");
    for (std::size_t j = 0; j < p.point_indices.size(); ++j) {
      if (p.point_indices[j] >= scene.points.size()) {
        throw ValidationError(where + ".point_indices",
                              "index " + std::to_string(p.point_indices[j]) + " >= point count " +
                                  std::to_string(scene.points.size()));
      }
      if (j > 0 && p.point_indices[j] <= p.point_indices[j - 1]) {
        throw ValidationError(where + ".point_indices", "not strictly increasing at position " +
                                                            std::to_string(j));
      }
    }
  }
  for (const CameraView& v : scene.views) {
    const std::string where = "views/" + v.view_id;
    if (v.view_id.empty()) throw ValidationError("scene.json:views", "empty view_id");
    if (!(v.intrinsics.fx > 0.0) || !(v.intrinsics.fy > 0.0)) {
      throw ValidationError(where + ".json:intrinsics", "fx and fy must be positive");
    }
    if (v.width <= 0 || v.height <= 0) {
      throw ValidationError(where + ".json:width/height", "must be positive");
    }
    if (!v.world_to_camera.allFinite()) {
      throw ValidationError(where + ".json:extrinsics", "non-finite entry");
    }
    if (v.depth && (v.depth->rows() != static_cast<std::size_t>(v.height) ||
                    v.depth->dim() != static_cast<std::size_t>(v.width))) {
      throw ValidationError(where + ".depth.bin:shape", "depth dims must equal (height, width)");
    }
    if (v.patch_features) {
      if (v.width % patch_size != 0 || v.height % patch_size != 0) {
        throw ValidationError(where + ".json:width/height",
                              "image dims must be multiples of patch size " + std::to_string(patch_size));
      }
      const std::size_t expected =
          static_cast<std::size_t>(v.width / patch_size) * static_cast<std::size_t>(v.height / patch_size);
      if (v.patch_features->rows() != expected) {
        throw ValidationError(where + ".patch.bin:rows", "expected " + std::to_string(expected) +
                                                             " patches, found " +
                                                             std::to_string(v.patch_features->rows()));
      }
    }
  }
  for (std::size_t i = 0; i < scene.views.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.views.size(); ++j) {
      if (scene.views[i].view_id == scene.views[j].view_id) {
        throw ValidationError("scene.json:views", "duplicate view_id " + scene.views[i].view_id);
      }
    }
  }
}

namespace {

const ObjectProposal& CheckedProposal(const Scene& scene, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= scene.proposals.size()) {
    throw ArgumentError("proposal index " + std::to_string(index) + " out of range [0, " +
                        std::to_string(scene.proposals.size()) + ")");
  }
  return scene.proposals[static_cast<std::size_t>(index)];
}

}  // namespace

Eigen::Vector3d ObjectCentroid(const Scene& scene, int index) {
  const ObjectProposal& p = CheckedProposal(scene, index);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d lo = scene.points[p.point_indices.front()];
  Eigen::Vector3d hi = lo;
  for (std::uint32_t i : p.point_indices) {
    sum += scene.points[i];
    lo = lo.cwiseMin(scene.points[i]);
    hi = hi.cwiseMax(scene.points[i]);
  }
  // Rounding in the division can push the mean one ulp outside the hull.
  return (sum / static_cast<double>(p.point_indices.size())).cwiseMax(lo).cwiseMin(hi);
}

Aabb ObjectAabb(const Scene& scene, int index) {
  const ObjectProposal& p = CheckedProposal(scene, index);
  Aabb box;
  box.min = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  box.max = -box.min;
  for (std::uint32_t i : p.point_indices) {
    box.min = box.min.cwiseMin(scene.points[i]);
    box.max = box.max.cwiseMax(scene.points[i]);
  }
  return box;
}

}  // namespace objseq
