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

#ifndef OBJSEQ_PROJECTION_H_
#define OBJSEQ_PROJECTION_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "objseq/scene.h"

namespace objseq {

// Continuous pixel coordinates use the pixel-area convention: pixel (x, y)
// covers [x, x+1) x [y, y+1), so the nearest pixel to (u, v) is
// (floor(u), floor(v)) and the image rectangle is [0, width) x [0, height).
struct PixelProjection {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;  // camera-space depth, meters
};

// Empty when the point is behind the camera (z <= 0) or lands outside the image.
std::optional<PixelProjection> ProjectPoint(const Eigen::Vector3d& world, const CameraView& view);

struct OcclusionPolicy {
  double epsilon = 0.05;  // meters
  bool require_depth = false;

  void Validate() const;
};

struct VisiblePoint {
  std::uint32_t point_index = 0;
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const VisiblePoint&, const VisiblePoint&) = default;
};

// Projects proposal `index` into `view` and keeps points whose depth agrees
// with the view's depth map within policy.epsilon. Pixels with no depth
// reading (0) reject the point. Without a depth map every in-frustum point
// is kept, unless policy.require_depth, which makes that an ArgumentError.
// Output is in ascending point index order.
std::vector<VisiblePoint> VisiblePoints(const Scene& scene, int index, const CameraView& view,
                                        const OcclusionPolicy& policy);

struct PatchMask {
  std::string view_id;
  int grid_w = 0;
  int grid_h = 0;
  std::vector<int> covered;     // ascending row-major patch indices
  std::vector<int> pixel_hits;  // grid_w * grid_h visible-point counts

  bool empty() const { return covered.empty(); }
  // Visible points landing in covered patches.
  long HitsOnCovered() const;
};

// Bins visible points onto the patch grid. A patch is covered once it
// collects `min_hits` points. Throws ArgumentError when `patch` does not
// divide the image dims.
PatchMask MakePatchMask(std::span<const VisiblePoint> visible, const CameraView& view,
                        int patch = kDefaultPatchSize, int min_hits = 1);

}  // namespace objseq

#endif  // OBJSEQ_PROJECTION_H_
