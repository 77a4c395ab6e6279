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

#include "objseq/scene_io.h"

#include <fstream>
#include "json.hpp"

#include "objseq/binary_io.h"
#include "objseq/error.h"
#include "objseq/json_io.h"

namespace objseq {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<Eigen::Vector3d> TableToPoints(const FeatureTable& t, const std::string& where) {
  if (t.dim() != 3) throw ValidationError(where + ":dim", "expected dim 3, found " + std::to_string(t.dim()));
  std::vector<Eigen::Vector3d> out(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    out[i] = Eigen::Vector3d(t.at(i, 0), t.at(i, 1), t.at(i, 2));
  }
  return out;
}

FeatureTable PointsToTable(const std::vector<Eigen::Vector3d>& pts) {
  FeatureTable t(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < 3; ++c) t.at(i, static_cast<std::size_t>(c)) = static_cast<float>(pts[i][c]);
  }
  return t;
}

template <typename T>
T Field(const json& j, const char* key, const std::string& file) {
  if (!j.contains(key)) throw ValidationError(file + ":" + key, "missing field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(file + ":" + key, e.what());
  }
}

CameraView LoadView(const fs::path& views_dir, const std::string& view_id) {
  const std::string file = "views/" + view_id + ".json";
  const json j = ReadJsonFile(views_dir / (view_id + ".json"));
  CameraView v;
  v.view_id = view_id;
  if (j.contains("view_id") && j.at("view_id") != view_id) {
    throw ValidationError(file + ":view_id", "does not match manifest entry " + view_id);
  }
  if (!j.contains("intrinsics")) throw ValidationError(file + ":intrinsics", "missing field");
  const json& k = j.at("intrinsics");
  v.intrinsics.fx = Field<double>(k, "fx", file + ":intrinsics");
  v.intrinsics.fy = Field<double>(k, "fy", file + ":intrinsics");
  v.intrinsics.cx = Field<double>(k, "cx", file + ":intrinsics");
  v.intrinsics.cy = Field<double>(k, "cy", file + ":intrinsics");
  const auto ext = Field<std::vector<double>>(j, "extrinsics", file);
  if (ext.size() != 16) throw ValidationError(file + ":extrinsics", "expected 16 values");
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) v.world_to_camera(r, c) = ext[static_cast<std::size_t>(4 * r + c)];
  }
  v.width = Field<int>(j, "width", file);
  v.height = Field<int>(j, "height", file);
  const fs::path depth = views_dir / (view_id + ".depth.bin");
  if (fs::exists(depth)) v.depth = ReadFeatureTable(depth);
  const fs::path patch = views_dir / (view_id + ".patch.bin");
  if (fs::exists(patch)) v.patch_features = ReadFeatureTable(patch);
  return v;
}

}  // namespace

Scene LoadScene(const fs::path& bundle_dir, int patch_size) {
  if (!fs::is_directory(bundle_dir)) throw IoError("not a bundle directory: " + bundle_dir.string());
  const json j = ReadJsonFile(bundle_dir / "scene.json");
  Scene scene;
  scene.scene_id = Field<std::string>(j, "scene_id", "scene.json");
  scene.points = TableToPoints(ReadFeatureTable(bundle_dir / "points.bin"), "points.bin");
  if (fs::exists(bundle_dir / "colors.bin")) {
    scene.colors = TableToPoints(ReadFeatureTable(bundle_dir / "colors.bin"), "colors.bin");
  }
  const json proposals = Field<json>(j, "proposals", "scene.json");
  if (!proposals.is_array()) throw ValidationError("scene.json:proposals", "expected an array");
  for (std::size_t k = 0; k < proposals.size(); ++k) {
    const std::string where = "scene.json:proposals[" + std::to_string(k) + "]";
    ObjectProposal p;
    p.index = Field<int>(proposals[k], "index", where);
    p.point_indices = Field<std::vector<std::uint32_t>>(proposals[k], "point_indices", where);
    scene.proposals.push_back(std::move(p));
  }
  const auto view_ids = j.contains("views") ? Field<std::vector<std::string>>(j, "views", "scene.json")
                                            : std::vector<std::string>{};
  for (const std::string& id : view_ids) scene.views.push_back(LoadView(bundle_dir / "views", id));
  ValidateScene(scene, patch_size);
  return scene;
}

void WriteScene(const fs::path& bundle_dir, const Scene& scene) {
  fs::create_directories(bundle_dir / "views");
  json j;
  j["scene_id"] = scene.scene_id;
  json proposals = json::array();
  for (const ObjectProposal& p : scene.proposals) {
    proposals.push_back({{"index", p.index}, {"point_indices", p.point_indices}});
  }
  j["proposals"] = std::move(proposals);
  json views = json::array();
  for (const CameraView& v : scene.views) views.push_back(v.view_id);
  j["views"] = std::move(views);
  WriteJsonFile(bundle_dir / "scene.json", j);

  WriteFeatureTable(bundle_dir / "points.bin", PointsToTable(scene.points));
  if (scene.colors) WriteFeatureTable(bundle_dir / "colors.bin", PointsToTable(*scene.colors));

  for (const CameraView& v : scene.views) {
    json vj;
    vj["view_id"] = v.view_id;
    vj["intrinsics"] = {{"fx", v.intrinsics.fx}, {"fy", v.intrinsics.fy},
                        {"cx", v.intrinsics.cx}, {"cy", v.intrinsics.cy}};
    std::vector<double> ext(16);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) ext[static_cast<std::size_t>(4 * r + c)] = v.world_to_camera(r, c);
    }
    vj["extrinsics"] = ext;
    vj["width"] = v.width;
    vj["height"] = v.height;
    const fs::path base = bundle_dir / "views";
    WriteJsonFile(base / (v.view_id + ".json"), vj);
    if (v.depth) WriteFeatureTable(base / (v.view_id + ".depth.bin"), *v.depth);
    if (v.patch_features) WriteFeatureTable(base / (v.view_id + ".patch.bin"), *v.patch_features);
  }
}

}  // namespace objseq
