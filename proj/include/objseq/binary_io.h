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

// Binary matrix container shared by points, depth maps, patch features and
// projector weights:
//
//   bytes 0..3   magic "CSPP"
//   u32          version (1)
//   u32          rows
//   u32          dim
//   float32[]    rows * dim values, row-major
//
// All integers and floats are little-endian.

#ifndef OBJSEQ_BINARY_IO_H_
#define OBJSEQ_BINARY_IO_H_

#include <filesystem>

#include "objseq/scene.h"

namespace objseq {

inline constexpr char kTableMagic[4] = {'C', 'S', 'P', 'P'};
inline constexpr std::uint32_t kTableVersion = 1;

FeatureTable ReadFeatureTable(const std::filesystem::path& path);
void WriteFeatureTable(const std::filesystem::path& path, const FeatureTable& table);

}  // namespace objseq

#endif  // OBJSEQ_BINARY_IO_H_
