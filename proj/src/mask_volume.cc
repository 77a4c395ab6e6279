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

#include "objseq/mask_volume.h"

#include "objseq/error.h"
#include "objseq/json_io.h"

namespace objseq {
using nlohmann::json;

std::vector<long> EncodeRuns(const std::vector<std::uint8_t>& frame) {
  std::vector<long> runs;
  bool current = false;
  long len = 0;
  for (std::uint8_t px : frame) {
    const bool on = px != 0;
    if (on != current) {
      runs.push_back(len);
      current = on;
      len = 0;
    }
    ++len;
  }
  runs.push_back(len);
  return runs;
}

std::vector<std::uint8_t> DecodeRuns(const std::vector<long>& runs, std::size_t area) {
  std::vector<std::uint8_t> frame;
  frame.reserve(area);
  std::uint8_t value = 0;
  for (long r : runs) {
    if (r < 0) throw ArgumentError("negative run length");
    if (frame.size() + static_cast<std::size_t>(r) > area) throw ArgumentError("runs exceed frame area");
    frame.insert(frame.end(), static_cast<std::size_t>(r), value);
    value = value ? 0 : 1;
  }
  if (frame.size() != area) throw ArgumentError("runs cover " + std::to_string(frame.size()) + " of " +
                                                std::to_string(area) + " pixels");
  return frame;
}

json MaskVolumeToJson(const MaskVolume& volume) {
  json frames = json::array();
  for (const auto& f : volume.frames) frames.push_back(EncodeRuns(f));
  return {{"height", volume.height}, {"width", volume.width}, {"frames", frames}};
}

MaskVolume MaskVolumeFromJson(const json& j, const std::string& where) {
  MaskVolume v;
  try {
    v.height = j.at("height").get<int>();
    v.width = j.at("width").get<int>();
    if (v.height <= 0 || v.width <= 0) throw ArgumentError("non-positive dims");
    const std::size_t area = static_cast<std::size_t>(v.height) * static_cast<std::size_t>(v.width);
    for (const json& f : j.at("frames")) v.frames.push_back(DecodeRuns(f.get<std::vector<long>>(), area));
    v.Validate();
  } catch (const json::exception& e) {
    throw ValidationError(where, e.what());
  } catch (const ArgumentError& e) {
    throw ValidationError(where, e.what());
  }
  return v;
}

MaskVolume ReadMaskVolume(const std::filesystem::path& path) {
  return MaskVolumeFromJson(ReadJsonFile(path), path.filename().string());
}

void WriteMaskVolume(const std::filesystem::path& path, const MaskVolume& volume) {
  WriteTextFile(path, MaskVolumeToJson(volume).dump() + "\n");
}

}  // namespace objseq
