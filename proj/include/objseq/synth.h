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

// Deterministic synthetic scenes with ground truth, plus brute-force oracles
// for the projection and aggregation pipeline. Nothing here calls the
// projection or aggregation code; agreement between the two is the test.

#ifndef OBJSEQ_SYNTH_H_
#define OBJSEQ_SYNTH_H_

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "objseq/aggregation.h"
#include "objseq/scene.h"

namespace objseq::synth {

struct SynthSpec {
  std::uint64_t seed = 0;
  int min_objects = 3;
  int max_objects = 10;
  int min_points = 60;
  int max_points = 200;
  std::array<double, 3> room_extent = {6.0, 5.0, 3.0};  // meters
  int num_views = 5;
  int width = 64;
  int height = 48;
  int feature_dim = 8;
  double occluder_probability = 0.3;
  int occluder_points = 400;
  double epsilon = 0.05;  // visibility tolerance recorded in the sidecar

  // Throws ArgumentError on an empty range or an infeasible combination.
  void Validate() const;
  nlohmann::json ToJson() const;
  static SynthSpec FromJson(const nlohmann::json& j);
};

struct SynthScene {
  Scene scene;
  nlohmann::json sidecar;
  // visible[object][view_id]: points passing the z-buffer test, ascending.
  std::vector<std::map<std::string, std::vector<std::uint32_t>>> visible;
};

SynthScene GenScene(const SynthSpec& spec);

// Writes the bundle and sidecar.json into `dir`.
void WriteSynthScene(const std::filesystem::path& dir, const SynthScene& s);

// Per pixel, the smallest camera-space depth of any scene point landing on
// it; 0 where none lands. rows = height, dim = width.
FeatureTable RenderDepth(const Scene& scene, const CameraView& view);

// Deterministic feature for (view, patch): values in [-1, 1).
std::vector<float> PatchFeature(const std::string& view_id, std::size_t patch, int dim);

// Points of proposal `index` whose depth is within `epsilon` of the
// z-buffer over all scene points, by direct enumeration.
std::vector<std::uint32_t> ZBufferVisible(const Scene& scene, int index, const CameraView& view, double epsilon);

// Fused 2D feature of proposal `index` recomputed by per-point, per-pixel,
// per-patch enumeration.
Eigen::VectorXd Oracle2dFeature(const Scene& scene, int index, const AggregationConfig& config);

}  // namespace objseq::synth

#endif  // OBJSEQ_SYNTH_H_
