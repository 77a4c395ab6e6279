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

// Scene bundle directory layout:
//
//   scene.json                 scene_id, proposals[{index, point_indices}], views[view_id]
//   points.bin                 CSPP table, dim 3, meters
//   colors.bin                 optional CSPP table, dim 3, RGB in [0,1]
//   views/<id>.json            view_id, intrinsics{fx,fy,cx,cy}, extrinsics[16], width, height
//   views/<id>.depth.bin       optional CSPP table, rows=height, dim=width
//   views/<id>.patch.bin       optional CSPP table, one row per patch

#ifndef OBJSEQ_SCENE_IO_H_
#define OBJSEQ_SCENE_IO_H_

#include <filesystem>

#include "objseq/scene.h"

namespace objseq {

// Reads and validates a bundle. Throws IoError or ValidationError.
Scene LoadScene(const std::filesystem::path& bundle_dir, int patch_size = kDefaultPatchSize);

// Writes `scene` as a bundle, creating the directory if needed. Coordinates
// are stored as float32, so only float-representable scenes round-trip exactly.
void WriteScene(const std::filesystem::path& bundle_dir, const Scene& scene);

}  // namespace objseq

#endif  // OBJSEQ_SCENE_IO_H_
