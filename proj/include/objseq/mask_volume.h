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

// Mask volume container (JSON):
//
//   {"height": H, "width": W, "frames": [[r0, r1, r2, ...], ...]}
//
// Each frame is a run-length encoding of the row-major H*W binary mask.
// Runs alternate background/foreground starting with background (a leading
// 0 run is allowed) and must sum to H*W.

#ifndef OBJSEQ_MASK_VOLUME_H_
#define OBJSEQ_MASK_VOLUME_H_

#include <filesystem>

#include "json.hpp"
#include "objseq/metrics.h"

namespace objseq {

std::vector<long> EncodeRuns(const std::vector<std::uint8_t>& frame);
std::vector<std::uint8_t> DecodeRuns(const std::vector<long>& runs, std::size_t area);

nlohmann::json MaskVolumeToJson(const MaskVolume& volume);
MaskVolume MaskVolumeFromJson(const nlohmann::json& j, const std::string& where);

MaskVolume ReadMaskVolume(const std::filesystem::path& path);
void WriteMaskVolume(const std::filesystem::path& path, const MaskVolume& volume);

}  // namespace objseq

#endif  // OBJSEQ_MASK_VOLUME_H_
