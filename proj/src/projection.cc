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

#include "objseq/projection.h"

#include <algorithm>
#include <cmath>

#include "objseq/error.h"

namespace objseq {

std::optional<PixelProjection> ProjectPoint(const Eigen::Vector3d& world, const CameraView& view) {
  const Eigen::Vector3d cam =
      view.world_to_camera.topLeftCorner<3, 3>() * world + view.world_to_camera.topRightCorner<3, 1>();
  if (!(cam.z() > 0.0)) return std::nullopt;
  const Intrinsics& k = view.intrinsics;
  const double u = k.fx * cam.x() / cam.z() + k.cx;
  const double v = k.fy * cam.y() / cam.z() + k.cy;
  if (!(u >= 0.0 && u < view.width && v >= 0.0 && v < view.height)) return std::nullopt;
  return PixelProjection{u, v, cam.z()};
}

void OcclusionPolicy::Validate() const {
  if (!(epsilon > 0.0)) throw ArgumentError("occlusion epsilon must be positive");
}

std::vector<VisiblePoint> VisiblePoints(const Scene& scene, int index, const CameraView& view,
                                        const OcclusionPolicy& policy) {
  policy.Validate();
  if (index < 0 || static_cast<std::size_t>(index) >= scene.proposals.size()) {
    throw ArgumentError("proposal index " + std::to_string(index) + " out of range");
  }
  if (policy.require_depth && !view.depth) {
    throw ArgumentError("view " + view.view_id + " has no depth map but depth is required");
  }
  std::vector<VisiblePoint> out;
  for (std::uint32_t pi : scene.proposals[static_cast<std::size_t>(index)].point_indices) {
    const auto proj = ProjectPoint(scene.points[pi], view);
    if (!proj) continue;
    if (view.depth) {
      // Guard against u == width after floating rounding at the right edge.
      const int x = std::min(static_cast<int>(std::floor(proj->u)), view.width - 1);
      const int y = std::min(static_cast<int>(std::floor(proj->v)), view.height - 1);
      const float d = view.DepthAt(x, y);
      if (d == 0.0f) continue;
      if (std::abs(proj->z - static_cast<double>(d)) > policy.epsilon) continue;
    }
    out.push_back({pi, proj->u, proj->v});
  }
  return out;
}

long PatchMask::HitsOnCovered() const {
  long total = 0;
  for (int c : covered) total += pixel_hits[static_cast<std::size_t>(c)];
  return total;
}

PatchMask MakePatchMask(std::span<const VisiblePoint> visible, const CameraView& view, int patch,
                        int min_hits) {
  if (patch <= 0 || view.width % patch != 0 || view.height % patch != 0) {
    throw ArgumentError("patch size " + std::to_string(patch) + " does not divide " +
                        std::to_string(view.width) + "x" + std::to_string(view.height));
  }
  if (min_hits < 1) throw ArgumentError("min_hits must be >= 1");
  PatchMask mask;
  mask.view_id = view.view_id;
  mask.grid_w = view.width / patch;
  mask.grid_h = view.height / patch;
  mask.pixel_hits.assign(static_cast<std::size_t>(mask.grid_w) * mask.grid_h, 0);
  for (const VisiblePoint& p : visible) {
    const int px = std::clamp(static_cast<int>(std::floor(p.u)), 0, view.width - 1);
    const int py = std::clamp(static_cast<int>(std::floor(p.v)), 0, view.height - 1);
    ++mask.pixel_hits[static_cast<std::size_t>((py / patch) * mask.grid_w + px / patch)];
  }
  for (std::size_t i = 0; i < mask.pixel_hits.size(); ++i) {
    if (mask.pixel_hits[i] >= min_hits) {
      mask.covered.push_back(static_cast<int>(i));
    } else {
      mask.pixel_hits[i] = 0;
    }
  }
  return mask;
}

}  // namespace objseq
