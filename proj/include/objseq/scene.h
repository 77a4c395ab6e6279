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

#ifndef OBJSEQ_SCENE_H_
#define OBJSEQ_SCENE_H_

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace objseq {

inline constexpr int kDefaultPatchSize = 16;

// Dense row-major float matrix. Used for patch features, depth maps,
// point arrays and projector weights; all share one on-disk format.
class FeatureTable {
 public:
  FeatureTable() = default;
  FeatureTable(std::size_t rows, std::size_t dim)
      : rows_(rows), dim_(dim), data_(rows * dim, 0.0f) {}
  FeatureTable(std::size_t rows, std::size_t dim, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  const std::vector<float>& data() const { return data_; }

  float at(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  float& at(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }

  const float* row(std::size_t r) const { return data_.data() + r * dim_; }

  // Throws ValidationError on a non-finite entry.
  void CheckFinite(const std::string& where) const;

  friend bool operator==(const FeatureTable&, const FeatureTable&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

struct ObjectProposal {
  int index = 0;
  std::vector<std::uint32_t> point_indices;  // strictly increasing

  friend bool operator==(const ObjectProposal&, const ObjectProposal&) = default;
};

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  friend bool operator==(const Intrinsics&, const Intrinsics&) = default;
};

struct CameraView {
  std::string view_id;
  Intrinsics intrinsics;
  Eigen::Matrix4d world_to_camera = Eigen::Matrix4d::Identity();
  int width = 0;
  int height = 0;
  // rows = height, dim = width, meters; 0 means no reading.
  std::optional<FeatureTable> depth;
  // rows = patch count in row-major patch order.
  std::optional<FeatureTable> patch_features;

  float DepthAt(int x, int y) const { return depth->at(static_cast<std::size_t>(y), static_cast<std::size_t>(x)); }

  friend bool operator==(const CameraView&, const CameraView&) = default;
};

struct Aabb {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();

  double Volume() const;
  bool Contains(const Eigen::Vector3d& p) const;
  bool IsValid() const;

  friend bool operator==(const Aabb&, const Aabb&) = default;
};

struct Scene {
  std::string scene_id;
  std::vector<Eigen::Vector3d> points;
  std::optional<std::vector<Eigen::Vector3d>> colors;  // RGB in [0,1]
  std::vector<ObjectProposal> proposals;
  std::vector<CameraView> views;

  std::size_t num_objects() const { return proposals.size(); }

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Checks every structural invariant of a scene. `patch_size` is the grid
// the patch features are expected on. Throws ValidationError.
void ValidateScene(const Scene& scene, int patch_size = kDefaultPatchSize);

// Arithmetic mean of the proposal's points. Throws ArgumentError on a bad index.
Eigen::Vector3d ObjectCentroid(const Scene& scene, int index);

// Componentwise hull of the proposal's points.
Aabb ObjectAabb(const Scene& scene, int index);

}  // namespace objseq

#endif  // OBJSEQ_SCENE_H_
